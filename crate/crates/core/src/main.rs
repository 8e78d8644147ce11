use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use nullsatz::bergman::{density_certificate, ratio_sup, DensityOptions, DomainSpec, MonomialNormTable};
use nullsatz::classify::{classify, Overall};
use nullsatz::config::RunConfig;
use nullsatz::decompose::decompose_ideal;
use nullsatz::hopf::{ball_ratio_sup_numeric, find_rotation, h_r_profile};
use nullsatz::polyalg::{parse_ideal, parse_poly, BiPoly};
use nullsatz::report::{to_json, Report};
use nullsatz::Error;

/// Exit codes.
mod code {
    pub const CLOSED: u8 = 0;
    pub const DENSE: u8 = 1;
    pub const NEITHER: u8 = 2;
    pub const INCONCLUSIVE: u8 = 3;
    pub const BOUND_FAILED: u8 = 1;
    pub const COMPUTATION: u8 = 10;
    pub const USAGE: u8 = 64;
    pub const NO_INPUT: u8 = 66;
    pub const INTERNAL: u8 = 70;
}

/// Closure classification of polynomial ideals in Bergman spaces of
/// `Ω_{p,q} = {|z1|^p + |z2|^q < 1}`.
#[derive(Parser, Debug)]
#[command(name = "nullsatz", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration file (JSON); flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Random seed; overrides NULLSATZ_SEED and the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also print a human-readable summary on stderr.
    #[arg(long, global = true)]
    pretty: bool,

    /// Domain exponents `p,q`, or `ball` for `2,2`.
    #[arg(long, global = true, value_parser = parse_domain)]
    domain: Option<DomainSpec>,

    /// Quasi-random sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Comma-separated dilation parameters in (1/2, 1).
    #[arg(long, global = true, value_delimiter = ',')]
    r_grid: Option<Vec<f64>>,

    /// Largest total degree of the multiplier in projection distances.
    #[arg(long, global = true)]
    n_max: Option<u32>,

    /// Boundary band half-width for intersection tests.
    #[arg(long, global = true)]
    delta: Option<f64>,

    /// Grid pitch of the curve intersection search.
    #[arg(long, global = true)]
    grid_pitch: Option<f64>,

    #[arg(long, global = true)]
    tol_res: Option<f64>,

    #[arg(long, global = true)]
    tol_point: Option<f64>,

    #[arg(long, global = true)]
    tol_circle: Option<f64>,

    /// Circle samples per fiber in `hopf`.
    #[arg(long, global = true)]
    alpha_grid: Option<usize>,

    /// Base points on the sphere tried by `hopf`.
    #[arg(long, global = true)]
    candidates: Option<usize>,
}

#[derive(Args, Debug)]
struct IdealInput {
    /// Ideal file: `{"generators": [...]}`, a list, or one polynomial.
    #[arg(long, value_name = "FILE", conflicts_with = "poly", required_unless_present = "poly")]
    ideal: Option<PathBuf>,

    /// Polynomial file (principal ideal).
    #[arg(long, value_name = "FILE")]
    poly: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed / dense / neither verdict. Exit 0 CLOSED, 1 DENSE, 2 NEITHER,
    /// 3 INCONCLUSIVE.
    Classify {
        #[command(flatten)]
        input: IdealInput,
        /// Skip the density certificate for dense principal ideals.
        #[arg(long)]
        no_certificate: bool,
    },
    /// Projection-distance and dilation profiles of a polynomial.
    /// Exit 0 DENSE, 1 NOT_DENSE, 3 INCONCLUSIVE.
    Density {
        #[arg(long, value_name = "FILE")]
        poly: PathBuf,
        /// A known zero inside the domain, `re1,im1,re2,im2`.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        zero: Option<Vec<f64>>,
    },
    /// Sampled sup of |p(z)/p(rz)| against 2^{d(p)}. Exit 1 when exceeded.
    Ratio {
        #[arg(long, value_name = "FILE")]
        poly: PathBuf,
    },
    /// Irreducible components of the zero set.
    Decompose {
        #[command(flatten)]
        input: IdealInput,
    },
    /// Fiber-circle rotation and ball dilation ratio.
    Hopf {
        #[arg(long, value_name = "FILE")]
        poly: PathBuf,
    },
    /// Table of squared monomial norms.
    Norms {
        #[arg(long)]
        max_degree: u32,
    },
}

fn parse_domain(s: &str) -> Result<DomainSpec, String> {
    if s.trim().eq_ignore_ascii_case("ball") {
        return Ok(DomainSpec::ball());
    }
    let parts: Vec<&str> = s.split(',').collect();
    let [p, q] = parts.as_slice() else {
        return Err(format!("expected `p,q` or `ball`, got {s:?}"));
    };
    let p: f64 = p.trim().parse().map_err(|_| format!("bad exponent {p:?}"))?;
    let q: f64 = q.trim().parse().map_err(|_| format!("bad exponent {q:?}"))?;
    DomainSpec::new(p, q).map_err(|e| e.to_string())
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidDomain(_) | Error::InvalidConfig(_) | Error::AllGeneratorsZero => {
                code::USAGE
            }
            _ => code::COMPUTATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: code::NO_INPUT,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn with_path<T>(path: &Path, r: nullsatz::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_poly(path: &Path) -> Result<BiPoly, Failure> {
    with_path(path, parse_poly(&read(path)?))
}

fn load_ideal(input: &IdealInput) -> Result<Vec<BiPoly>, Failure> {
    match (&input.ideal, &input.poly) {
        (Some(path), _) => with_path(path, parse_ideal(&read(path)?)),
        (None, Some(path)) => Ok(vec![load_poly(path)?]),
        (None, None) => Err(Failure {
            code: code::USAGE,
            message: "either --ideal or --poly is required".into(),
        }),
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => serde_json::from_str(&read(path)?).map_err(|e| Failure {
            code: code::USAGE,
            message: format!("{}: {e}", path.display()),
        })?,
        None => RunConfig::default(),
    };
    cfg.apply_env()?;
    macro_rules! set {
        ($($field:ident <- $flag:expr),* $(,)?) => {
            $(if let Some(v) = $flag.clone() { cfg.$field = v; })*
        };
    }
    set!(
        seed <- cli.seed,
        domain <- cli.domain,
        samples <- cli.samples,
        r_grid <- cli.r_grid,
        n_max <- cli.n_max,
        delta <- cli.delta,
        grid_pitch <- cli.grid_pitch,
        tol_res <- cli.tol_res,
        tol_point <- cli.tol_point,
        tol_circle <- cli.tol_circle,
        alpha_grid <- cli.alpha_grid,
        hopf_candidates <- cli.candidates,
    );
    cfg.validate()?;
    Ok(cfg)
}

fn emit<I: Serialize, R: Serialize>(command: &str, cfg: &RunConfig, input: I, result: R) -> Result<(), Failure> {
    let report = Report {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        input,
        result,
    };
    let text = to_json(&report).map_err(|e| Failure {
        code: code::INTERNAL,
        message: format!("serialization failed: {e}"),
    })?;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure {
            code: code::INTERNAL,
            message: format!("cannot write report: {e}"),
        })
}

fn summary(lines: &[(&str, String)]) {
    let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in lines {
        eprintln!("{k:<width$}  {v}");
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = build_config(cli)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure {
                code: code::USAGE,
                message: format!("--threads: {e}"),
            })?;
    }
    match &cli.command {
        Command::Classify { input, no_certificate } => {
            let gens = load_ideal(input)?;
            let verdict = classify(&gens, &cfg.domain, &cfg.classify_config(!no_certificate))?;
            if cli.pretty {
                let mut lines = vec![
                    ("domain", cfg.domain.to_string()),
                    ("verdict", format!("{:?}", verdict.overall).to_uppercase()),
                    ("reason", verdict.justification.clone()),
                ];
                for c in &verdict.components {
                    lines.push(("component", format!("{:?}: min φ = {:.6e}, {:?}", c.component, c.min_phi, c.verdict)));
                }
                if let Some(w) = &verdict.witness {
                    lines.push(("witness", format!("({}, {})", fmt_c(w.z1), fmt_c(w.z2))));
                }
                summary(&lines);
            }
            let exit = match verdict.overall {
                Overall::Closed => code::CLOSED,
                Overall::Dense => code::DENSE,
                Overall::Neither => code::NEITHER,
                Overall::Inconclusive => code::INCONCLUSIVE,
            };
            emit("classify", &cfg, &gens, &verdict)?;
            Ok(exit)
        }
        Command::Density { poly, zero } => {
            let p = load_poly(poly)?;
            let zero = zero
                .as_ref()
                .map(|v| (Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])));
            let opts = DensityOptions {
                n_max: cfg.n_max,
                r_grid: &cfg.r_grid,
                samples: cfg.samples,
                seed: cfg.seed,
                zero,
            };
            let cert = density_certificate(&p, &cfg.domain, &opts)?;
            if cli.pretty {
                let mut lines = vec![("status", format!("{:?}", cert.status))];
                for &(n, d) in &cert.profile.distances {
                    lines.push(("d_N", format!("N = {n:>3}: {d:.10e}")));
                }
                for d in &cert.dilation_profile {
                    lines.push(("‖1 − f_r‖", format!("r = {:.3}: {:.6e}", d.r, d.value)));
                }
                summary(&lines);
            }
            emit("density", &cfg, &p, &cert)?;
            Ok(match cert.status {
                nullsatz::bergman::DensityStatus::Dense => 0,
                nullsatz::bergman::DensityStatus::NotDense => 1,
                nullsatz::bergman::DensityStatus::Inconclusive => 3,
            })
        }
        Command::Ratio { poly } => {
            let p = load_poly(poly)?;
            let rep = ratio_sup(&p, &cfg.domain, &cfg.r_grid, cfg.samples, cfg.seed)?;
            if cli.pretty {
                summary(&[
                    ("sup", format!("{:.10}", rep.sup)),
                    ("bound 2^d", format!("{} (d = {})", rep.bound, rep.d)),
                    ("pass", rep.pass.to_string()),
                ]);
            }
            emit("ratio", &cfg, &p, &rep)?;
            Ok(if rep.pass { 0 } else { code::BOUND_FAILED })
        }
        Command::Decompose { input } => {
            let gens = load_ideal(input)?;
            let d = decompose_ideal(&gens, &cfg.decompose_config())?;
            if cli.pretty {
                let mut lines = vec![("gcd", d.gcd.to_string())];
                for c in &d.curves {
                    lines.push(("curve", format!("factor {}, z2-degree {}", c.factor, c.degree_z2)));
                }
                for p in &d.points {
                    lines.push(("point", format!("({}, {})", fmt_c(p.z1), fmt_c(p.z2))));
                }
                summary(&lines);
            }
            emit("decompose", &cfg, &gens, &d)?;
            Ok(0)
        }
        Command::Hopf { poly } => {
            let f = load_poly(poly)?;
            let rot = find_rotation(&f, &cfg.hopf_config())?;
            let rotated = rot.apply(&f.to_numeric());
            let ratio = ball_ratio_sup_numeric(&rotated, &cfg.r_grid, cfg.samples, cfg.seed)?;
            let h_r = h_r_profile(&rotated, &cfg.r_grid, cfg.samples, cfg.seed)?;
            if cli.pretty {
                summary(&[
                    ("a", fmt_c(rot.a)),
                    ("b", fmt_c(rot.b)),
                    ("min |f| on circle", format!("{:.10}", rot.min_circle_modulus)),
                    ("ratio sup (f∘ρ)", format!("{:.10}", ratio.sup)),
                ]);
            }
            #[derive(Serialize)]
            struct HopfResult<'a> {
                rotation: &'a nullsatz::hopf::HopfRotation,
                ball_ratio: &'a nullsatz::hopf::BallRatioReport,
                h_r: &'a [nullsatz::bergman::DilationNorm],
            }
            emit(
                "hopf",
                &cfg,
                &f,
                HopfResult {
                    rotation: &rot,
                    ball_ratio: &ratio,
                    h_r: &h_r,
                },
            )?;
            Ok(0)
        }
        Command::Norms { max_degree } => {
            let table = MonomialNormTable::new(cfg.domain, *max_degree);
            #[derive(Serialize)]
            struct Entry {
                a: u32,
                b: u32,
                norm_sq: f64,
            }
            let entries: Vec<Entry> = table.entries().map(|(a, b, norm_sq)| Entry { a, b, norm_sq }).collect();
            if cli.pretty {
                let lines: Vec<(&str, String)> = entries
                    .iter()
                    .map(|e| ("ν", format!("({}, {}): {:.12e}", e.a, e.b, e.norm_sq)))
                    .collect();
                summary(&lines);
            }
            #[derive(Serialize)]
            struct NormsInput {
                max_degree: u32,
            }
            emit("norms", &cfg, NormsInput { max_degree: *max_degree }, &entries)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { code::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(f)) => {
            eprintln!("nullsatz: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => {
            eprintln!("nullsatz: internal error");
            ExitCode::from(code::INTERNAL)
        }
    }
}
