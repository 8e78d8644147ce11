//! Derivative-free local refinement used after coarse sampling.

/// Coordinate pattern ("compass") search settings.
#[derive(Debug, Clone, Copy)]
pub struct Compass {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
}

impl Default for Compass {
    fn default() -> Self {
        Self {
            initial_step: 0.01,
            min_step: 1e-10,
            max_evals: 4000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompassResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl Compass {
    /// Minimizes `f` starting at `x0`, keeping `lower[i] ≤ x[i] ≤ upper[i]`.
    /// `scales[i]` multiplies the step in coordinate `i`. Non-finite values
    /// count as `+∞`.
    pub fn minimize<F>(&self, f: F, x0: &[f64], lower: &[f64], upper: &[f64], scales: &[f64]) -> CompassResult
    where
        F: Fn(&[f64]) -> f64,
    {
        let eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut x = x0.to_vec();
        let mut best = eval(&x);
        let mut evals = 1;
        let mut step = self.initial_step;
        while step >= self.min_step && evals < self.max_evals {
            let mut improved = false;
            for i in 0..x.len() {
                for dir in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] = (y[i] + dir * step * scales[i]).clamp(lower[i], upper[i]);
                    if y[i] == x[i] {
                        continue;
                    }
                    let v = eval(&y);
                    evals += 1;
                    if v < best {
                        best = v;
                        x = y;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        CompassResult { x, value: best, evals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum_inside_box() {
        let r = Compass::default().minimize(
            |x| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.1).powi(2),
            &[0.0, 0.0],
            &[-1.0, -1.0],
            &[1.0, 1.0],
            &[1.0, 1.0],
        );
        assert!((r.x[0] - 0.3).abs() < 1e-8 && (r.x[1] + 0.1).abs() < 1e-8);
    }

    #[test]
    fn respects_bounds() {
        let r = Compass::default().minimize(|x| -x[0], &[0.5], &[0.0], &[1.0], &[1.0]);
        assert_eq!(r.x[0], 1.0);
    }
}
