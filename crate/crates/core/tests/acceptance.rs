//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nullsatz::bergman::{
    density_certificate, monomial_norm, ratio_sup, DensityOptions, DomainSpec, DEFAULT_R_GRID,
};
use nullsatz::classify::{classify, ClassifyConfig, DensitySettings, Overall};
use nullsatz::decompose::{decompose_ideal, DecomposeConfig};
use nullsatz::hopf::{find_rotation, HopfConfig};
use nullsatz::polyalg::{BiPoly, GaussRational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ball() -> DomainSpec {
    DomainSpec::ball()
}

fn diamond() -> DomainSpec {
    DomainSpec::new(1.0, 1.0).unwrap()
}

/// `z_var − c` with `c = (re + i·im)/den`.
fn linear(var: usize, re: i64, im: i64, den: i64) -> BiPoly {
    let z = if var == 1 { BiPoly::z1() } else { BiPoly::z2() };
    z.sub(&BiPoly::constant(GaussRational::from_parts((re, den), (im, den))))
}

fn ints(terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_int_terms(terms)
}

// Radical inverse in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut x = 0.0;
    while i > 0 {
        f /= b as f64;
        x += f * (i % b) as f64;
        i /= b;
    }
    x
}

/// Cartesian Halton quadrature of `|z1|^{2a} |z2|^{2b}` over `Ω_{p,q}`,
/// all `a + b ≤ max_deg` at once.
fn halton_moments(p: f64, q: f64, n: u64, max_deg: u32) -> Vec<(u32, u32, f64)> {
    let pairs: Vec<(u32, u32)> = (0..=max_deg)
        .flat_map(|a| (0..=max_deg - a).map(move |b| (a, b)))
        .collect();
    let mut sums = vec![0.0; pairs.len()];
    for i in 1..=n {
        let x: Vec<f64> = [2, 3, 5, 7]
            .iter()
            .map(|&b| 2.0 * radical_inverse(i, b) - 1.0)
            .collect();
        let m1 = x[0] * x[0] + x[1] * x[1];
        let m2 = x[2] * x[2] + x[3] * x[3];
        if m1.powf(p / 2.0) + m2.powf(q / 2.0) >= 1.0 {
            continue;
        }
        for (s, &(a, b)) in sums.iter_mut().zip(&pairs) {
            *s += m1.powi(a as i32) * m2.powi(b as i32);
        }
    }
    pairs
        .iter()
        .zip(sums)
        .map(|(&(a, b), s)| (a, b, 16.0 * s / n as f64))
        .collect()
}

fn ac1() -> Outcome {
    let mut worst: f64 = 0.0;
    for (p, q) in [(2.0, 2.0), (1.0, 1.0), (2.0, 1.0), (0.5, 3.0)] {
        let dom = DomainSpec::new(p, q).unwrap();
        for (a, b, oracle) in halton_moments(p, q, 1_000_000, 4) {
            let closed = monomial_norm(&dom, a, b);
            let rel = (closed - oracle).abs() / oracle;
            ensure(rel < 0.01, || {
                format!("Ω_{{{p},{q}}} ν_{a}{b}: closed {closed:.6e}, quadrature {oracle:.6e}")
            })?;
            worst = worst.max(rel);
        }
    }
    let nu00 = monomial_norm(&ball(), 0, 0);
    ensure((nu00 - PI * PI / 2.0).abs() < 0.01 * PI * PI / 2.0, || format!("ν00 = {nu00}"))?;
    Ok(format!("60 norms, worst relative error {:.3}%", 100.0 * worst))
}

/// Product of 1..=4 factors `z_i − c` with `|c| ∈ [1.05, 3]`.
fn random_zero_free(rng: &mut ChaCha8Rng) -> BiPoly {
    let den = 1000;
    let k = rng.random_range(1..=4);
    (0..k).fold(BiPoly::one(), |acc, _| {
        let rho: f64 = rng.random_range(1.05..3.0);
        let th: f64 = rng.random_range(0.0..2.0 * PI);
        let re = (rho * th.cos() * den as f64).round() as i64;
        let im = (rho * th.sin() * den as f64).round() as i64;
        acc.mul(&linear(rng.random_range(1..=2), re, im, den))
    })
}

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_margin = f64::INFINITY;
    let mut count = 0;
    for dom in [ball(), diamond()] {
        for k in 0..50 {
            let p = random_zero_free(&mut rng);
            let rep = ratio_sup(&p, &dom, &DEFAULT_R_GRID, 10_000, k).map_err(|e| e.to_string())?;
            ensure(rep.violations == 0 && rep.sup <= rep.bound + 1e-9, || {
                format!("{dom}: sup {} exceeds 2^{} for {p}", rep.sup, rep.d)
            })?;
            worst_margin = worst_margin.min(rep.bound - rep.sup);
            count += 1;
        }
    }
    let witness = ratio_sup(&linear(1, 1, 0, 1), &ball(), &[0.5005], 10_000, 0).map_err(|e| e.to_string())?;
    ensure((witness.sup - 4.0 / 3.0).abs() <= 1e-3, || {
        format!("witness z1 − 1: sup {}", witness.sup)
    })?;
    Ok(format!(
        "{count} products, smallest margin {worst_margin:.4}; z1 − 1 sup {:.6}",
        witness.sup
    ))
}

/// `‖1 − f_r‖` for `p = z1 − 2` on the ball from the series
/// `(1 − r)/2 · z1 Σ (r z1 / 2)^k` and `ν_{a0} = π² a! / (a + 2)!`.
fn dilation_oracle(r: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..400 {
        let a = (k + 1) as f64;
        let nu = PI * PI / ((a + 1.0) * (a + 2.0));
        sum += (r / 2.0).powi(2 * k) * nu;
    }
    (1.0 - r) / 2.0 * sum.sqrt()
}

fn ac3() -> Outcome {
    let p = linear(1, 2, 0, 1);
    let opts = DensityOptions {
        n_max: 20,
        r_grid: &DEFAULT_R_GRID,
        samples: 100_000,
        seed: 0,
        zero: None,
    };
    let cert = density_certificate(&p, &ball(), &opts).map_err(|e| e.to_string())?;
    let d = &cert.profile.distances;
    let d0 = d[0].1;
    ensure((d0 - (PI * PI / 26.0).sqrt()).abs() <= 1e-6, || format!("d_0 = {d0}"))?;
    ensure(d.len() == 21, || format!("{} profile entries", d.len()))?;
    for w in d.windows(2) {
        ensure(w[1].1 < w[0].1, || format!("d_{} = {} ≥ d_{} = {}", w[1].0, w[1].1, w[0].0, w[0].1))?;
    }
    let last = cert.dilation_profile.iter().find(|x| x.r == 0.99).ok_or("no r = 0.99")?;
    let oracle = dilation_oracle(0.99);
    ensure(last.value <= 0.0223, || format!("‖1 − f_0.99‖ = {}", last.value))?;
    ensure((last.value - oracle).abs() <= 0.01 * oracle, || {
        format!("‖1 − f_0.99‖ = {} vs series {oracle}", last.value)
    })?;
    Ok(format!(
        "d_0 = {d0:.9}, d_20 = {:.3e}, ‖1 − f_0.99‖ = {:.5} (series {oracle:.5})",
        d[20].1, last.value
    ))
}

fn ac4() -> Outcome {
    let opts = DensityOptions {
        n_max: 20,
        r_grid: &DEFAULT_R_GRID,
        samples: 10_000,
        seed: 0,
        zero: Some((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))),
    };
    let cert = density_certificate(&BiPoly::z1(), &ball(), &opts).map_err(|e| e.to_string())?;
    let target = PI / 2f64.sqrt();
    for &(n, d) in &cert.profile.distances {
        ensure((d - target).abs() <= 1e-9, || format!("d_{n} = {d}"))?;
    }
    let kb = cert.kernel_lower_bound.as_ref().ok_or("no kernel bound")?;
    ensure((kb.value - target).abs() <= 1e-9 && kb.holds, || {
        format!("K(0,0)^(-1/2) = {}", kb.value)
    })?;
    Ok(format!(
        "{} distances equal π/√2 = {target:.12}, kernel bound {:.12}",
        cert.profile.distances.len(),
        kb.value
    ))
}

fn ac5() -> Outcome {
    let corpus: Vec<(&str, BiPoly, usize)> = vec![
        ("z2² − z1", ints(&[(0, 2, 1), (1, 0, -1)]), 1),
        ("z2² − z1²", ints(&[(0, 2, 1), (2, 0, -1)]), 2),
        (
            "(z2² − z1)(z2 + 2)",
            ints(&[(0, 2, 1), (1, 0, -1)]).mul(&ints(&[(0, 1, 1), (0, 0, 2)])),
            2,
        ),
        (
            "(z2 − z1)(z2 + z1)(z2 − 2z1)",
            ints(&[(0, 1, 1), (1, 0, -1)])
                .mul(&ints(&[(0, 1, 1), (1, 0, 1)]))
                .mul(&ints(&[(0, 1, 1), (1, 0, -2)])),
            3,
        ),
        ("z2³ − z1²", ints(&[(0, 3, 1), (2, 0, -1)]), 1),
    ];
    let base = DecomposeConfig::default();
    let mut halved = base;
    halved.track.max_step /= 2.0;
    let mut reseeded = base;
    reseeded.seed = 977;
    for (name, f, expected) in &corpus {
        for (label, cfg) in [("default", &base), ("half step", &halved), ("seed 977", &reseeded)] {
            let d = decompose_ideal(std::slice::from_ref(f), cfg).map_err(|e| format!("{name} ({label}): {e}"))?;
            ensure(d.curves.len() == *expected && d.points.is_empty(), || {
                format!("{name} ({label}): {} components, expected {expected}", d.curves.len())
            })?;
        }
    }
    Ok("5 curves × 3 configurations, counts 1, 2, 2, 3, 1".into())
}

fn ac6() -> Outcome {
    let half = linear(1, 1, 0, 2);
    let two = linear(1, 2, 0, 1);
    let corpus: Vec<(&str, Vec<BiPoly>, Overall)> = vec![
        ("(z1 − 1/2)", vec![half.clone()], Overall::Closed),
        ("(z1 − 2)", vec![two.clone()], Overall::Dense),
        ("((z1 − 2)(z1 − 1/2))", vec![two.mul(&half)], Overall::Neither),
        ("(z1, z2)", vec![BiPoly::z1(), BiPoly::z2()], Overall::Closed),
        ("(z1 − 2, z2)", vec![two.clone(), BiPoly::z2()], Overall::Dense),
        (
            "((z2² − z1)(z2 − 2))",
            vec![ints(&[(0, 2, 1), (1, 0, -1)]).mul(&linear(2, 2, 0, 1))],
            Overall::Neither,
        ),
    ];
    let cfg = ClassifyConfig {
        density: Some(DensitySettings {
            samples: 20_000,
            ..DensitySettings::default()
        }),
        ..ClassifyConfig::default()
    };
    let mut n = 0;
    for dom in [ball(), diamond()] {
        for (name, gens, expected) in &corpus {
            let v = classify(gens, &dom, &cfg).map_err(|e| format!("{name} on {dom}: {e}"))?;
            ensure(v.overall == *expected, || {
                format!("{name} on {dom}: {:?}, expected {expected:?}", v.overall)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n}/{n} verdicts match, none inconclusive"))
}

fn ac7() -> Outcome {
    let cases: Vec<(&str, BiPoly)> = vec![
        ("z1", BiPoly::z1()),
        ("z2", BiPoly::z2()),
        ("z1 z2", ints(&[(1, 1, 1)])),
        ("z1² + z2² − 4", ints(&[(2, 0, 1), (0, 2, 1), (0, 0, -4)])),
    ];
    let mut summary = Vec::new();
    for (name, f) in &cases {
        let rot = find_rotation(f, &HopfConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        // Independent unitarity and circle checks from a and b alone.
        let (a, b) = (rot.a, rot.b);
        let m = [[b.conj(), a], [-a.conj(), b]];
        let mut defect: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let e: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((e - id).norm());
            }
        }
        let fine = (0..100_000)
            .map(|k| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 100_000.0);
                f.eval_complex(a * w, b * w).norm()
            })
            .fold(f64::INFINITY, f64::min);
        ensure(defect < 1e-12 && rot.unitarity_defect < 1e-12, || {
            format!("{name}: unitarity defect {defect:e}")
        })?;
        ensure(rot.min_circle_modulus > 1e-6 && fine > 1e-6, || {
            format!("{name}: min modulus {} (resampled {fine})", rot.min_circle_modulus)
        })?;
        ensure((fine - rot.min_circle_modulus).abs() < 1e-6, || {
            format!("{name}: reported {} vs resampled {fine}", rot.min_circle_modulus)
        })?;
        if *name == "z1 z2" {
            ensure((rot.min_circle_modulus - 0.5).abs() <= 1e-6, || {
                format!("z1 z2: min modulus {}", rot.min_circle_modulus)
            })?;
        }
        summary.push(format!("{name}: {:.6}", rot.min_circle_modulus));
    }
    Ok(summary.join(", "))
}

fn ac8() -> Outcome {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/");
    let runs: [&[&str]; 3] = [
        &["classify", "--domain", "1,1", "--ideal", "princ_two.json", "--samples", "20000"],
        &["ratio", "--domain", "ball", "--poly", "ratio_product.json", "--samples", "20000"],
        &["hopf", "--poly", "z1z2.json", "--samples", "5000"],
    ];
    for args in runs {
        let run = || {
            let full: Vec<String> = args
                .iter()
                .map(|a| if a.ends_with(".json") { format!("{data}{a}") } else { a.to_string() })
                .collect();
            Command::new(env!("CARGO_BIN_EXE_nullsatz"))
                .args(&full)
                .args(["--seed", "5"])
                .env_remove("NULLSATZ_SEED")
                .output()
                .map_err(|e| e.to_string())
        };
        let (x, y) = (run()?, run()?);
        ensure(!x.stdout.is_empty() && x.stdout == y.stdout && x.status.code() == y.status.code(), || {
            format!("`{}` differs between runs", args[0])
        })?;
    }
    Ok("classify, ratio and hopf reports byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 8] = [
        ("AC1", "monomial norms match quadrature", ac1),
        ("AC2", "dilation ratio bound", ac2),
        ("AC3", "density profile of z1 − 2", ac3),
        ("AC4", "non-density lower bound for z1", ac4),
        ("AC5", "monodromy component counts", ac5),
        ("AC6", "classifier corpus", ac6),
        ("AC7", "fiber-circle rotations", ac7),
        ("AC8", "deterministic reports", ac8),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
