use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tenspec_core::cubic::{classify_cubic, singular_points_cubic};
use tenspec_core::fiber::{fiber_of_charpoly, jacobian_rank, random_base_point};
use tenspec_core::homotopy::TrackOptions;
use tenspec_core::hurwitz::{cubic_multiplicities, hurwitz_sample};
use tenspec_core::io::{self, TensorInput};
use tenspec_core::spectra::{eigenscheme, EigenOptions};
use tenspec_core::symmetry::sym_orbit;
use tenspec_core::verify::{self, VerifyConfig, CRITERIA, SUITES};
use tenspec_core::zeros::ZeroSet;
use tenspec_core::{char_poly, random, Error, PSTensor, Scalar};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(name = "tenspec", version, about = "Tensor eigenvalues, characteristic polynomials and discriminants")]
struct Cli {
    /// Seed for every random choice; TENSPEC_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TensorArgs {
    /// Tensor file: {"n", "d", "kind": "sym" | "ps" | "dense", "coeffs"}.
    #[arg(long)]
    tensor: PathBuf,
    /// Reference tensor t (default: the unit tensor).
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial of T relative to t.
    Charpoly(TensorArgs),
    /// Eigenvalues with multiplicities and eigenvectors.
    Eigen(TensorArgs),
    /// Orbit of a symmetric tensor under scaling by roots of unity and permutations.
    Orbit {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Orders of contact of random lines through singular points of the discriminant.
    Hurwitz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Lines in total for binary forms, per orbit for plane cubics.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Plane cubics.
    Cubic {
        #[command(subcommand)]
        command: CubicCommand,
    },
    /// All symmetric binary forms with a given characteristic polynomial.
    Fiber {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Characteristic polynomial file: {"n", "d", "coeffs": [c_1, ..., c_D]}.
        #[arg(long, conflicts_with = "tensor", required_unless_present = "tensor")]
        charpoly: Option<PathBuf>,
        /// Use the characteristic polynomial of this tensor.
        #[arg(long)]
        tensor: Option<PathBuf>,
    },
    /// Rank of the Jacobian of the characteristic polynomial map.
    Rank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Restrict to symmetric tensors.
        #[arg(long)]
        symmetric: bool,
    },
    /// Run acceptance criteria.
    Verify {
        /// One of all, binary, exact, cubic, fiber.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Run only these criteria (repeatable); overrides --suite.
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
        /// Start systems per fiber.
        #[arg(long, default_value_t = 3)]
        fiber_draws: usize,
    },
}

#[derive(Subcommand)]
enum CubicCommand {
    /// Orbit of a plane cubic under GL3.
    Classify {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Generic-line order at each orbit representative.
    Multiplicities {
        #[arg(long, default_value_t = 50)]
        lines: usize,
    },
}

enum Failure {
    Usage(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_tensor(path: &Path) -> Result<TensorInput, Failure> {
    io::parse_tensor(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn reference_for(args: &TensorArgs, t: &TensorInput) -> Result<PSTensor, Failure> {
    match &args.reference {
        Some(p) => Ok(read_tensor(p)?.to_ps()),
        None => Ok(PSTensor::unit(t.n(), t.d())),
    }
}

fn symmetric(t: TensorInput, what: &str) -> Result<tenspec_core::SymForm, Failure> {
    match t {
        TensorInput::Sym(f) => Ok(f),
        _ => Err(Failure::Usage(format!("invalid field `kind`: {what} needs a symmetric tensor (\"sym\")"))),
    }
}

fn seed(cli: Option<u64>) -> Result<u64, Failure> {
    match std::env::var("TENSPEC_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("TENSPEC_SEED is not an unsigned integer: {s:?}"))),
        Err(_) => Ok(cli.unwrap_or(DEFAULT_SEED)),
    }
}

fn run(command: Command, seed: u64) -> Result<(String, Value), Failure> {
    let out = match command {
        Command::Charpoly(args) => {
            let t = read_tensor(&args.tensor)?;
            let r = reference_for(&args, &t)?;
            ("charpoly", io::charpoly_to_value(&char_poly(&t.to_ps(), &r)?))
        }
        Command::Eigen(args) => {
            let t = read_tensor(&args.tensor)?;
            let r = reference_for(&args, &t)?;
            let rep = eigenscheme(&t.to_ps(), &r, &EigenOptions::default())?;
            ("eigen", io::eigenscheme_to_value(&rep))
        }
        Command::Orbit { tensor } => {
            let f = symmetric(read_tensor(&tensor)?, "orbit")?;
            ("orbit", json!(sym_orbit(&f)?))
        }
        Command::Hurwitz { n, d, trials } => {
            let trials = trials.unwrap_or(if n == 1 { 1000 } else { 200 });
            let r = hurwitz_sample(n, d, trials, seed)?;
            let mut v = json!(r);
            v["empty"] = json!(r.empty());
            ("hurwitz", v)
        }
        Command::Cubic { command: CubicCommand::Classify { tensor } } => {
            let f = symmetric(read_tensor(&tensor)?, "cubic classify")?;
            let class = classify_cubic(&f)?;
            let singular = match singular_points_cubic(&f)? {
                ZeroSet::Points(p) => json!(p.iter().map(io::point_to_value).collect::<Vec<_>>()),
                ZeroSet::Curve => json!("curve"),
            };
            ("cubic classify", json!({ "class": class, "label": class.label(), "singular_points": singular }))
        }
        Command::Cubic { command: CubicCommand::Multiplicities { lines } } => ("cubic multiplicities", json!(cubic_multiplicities(lines, seed)?)),
        Command::Fiber { n, d, charpoly, tensor } => {
            let phi = match (charpoly, tensor) {
                (Some(p), _) => {
                    let (pn, pd, phi) = io::parse_charpoly(&read(&p)?).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    if (pn, pd) != (n, d) {
                        return Err(Failure::Usage(format!("invalid field `n`: file is for ({pn}, {pd}), command line asks for ({n}, {d})")));
                    }
                    phi
                }
                (None, Some(t)) => {
                    let t = read_tensor(&t)?;
                    if (t.n(), t.d()) != (n, d) {
                        return Err(Failure::Usage(format!("invalid field `n`: tensor is ({}, {}), command line asks for ({n}, {d})", t.n(), t.d())));
                    }
                    char_poly(&t.to_ps(), &PSTensor::unit(n, d))?
                }
                (None, None) => return Err(Failure::Usage("fiber needs --charpoly or --tensor".into())),
            };
            let opts = TrackOptions { seed, ..TrackOptions::default() };
            let r = fiber_of_charpoly(&phi.map(Scalar::to_complex), &PSTensor::unit(n, d), true, &opts)?;
            ("fiber", json!(r))
        }
        Command::Rank { n, d, symmetric } => {
            let mut rng = random::rng(seed);
            let base = random_base_point(&mut rng, n, d, symmetric);
            let r = jacobian_rank(&base, &PSTensor::unit(n, d), symmetric)?;
            let mut v = json!(r);
            v["base_point"] = json!(base.iter().map(tenspec_core::scalar::format_rational).collect::<Vec<_>>());
            ("rank", v)
        }
        Command::Verify { suite, criteria, fiber_draws } => {
            let ids = if criteria.is_empty() {
                verify::suite(&suite).ok_or_else(|| {
                    let names: Vec<&str> = SUITES.iter().map(|(s, _)| *s).collect();
                    Failure::Usage(format!("unknown suite {suite:?}; expected one of {}", names.join(", ")))
                })?
            } else {
                if let Some(bad) = criteria.iter().find(|&&c| verify::criterion_name(c).is_none()) {
                    return Err(Failure::Usage(format!("unknown criterion {bad}; expected 1..={}", CRITERIA.len())));
                }
                criteria
            };
            let results = verify::run(&ids, &VerifyConfig { seed, fiber_draws });
            for r in &results {
                eprintln!("criterion {:>2} {} {}: {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            let passed = results.iter().all(|r| r.passed);
            let v = json!({ "passed": passed, "criteria": results });
            if !passed {
                return Err(Failure::Verification(io::envelope("verify", Some(seed), &v)?));
            }
            ("verify", v)
        }
    };
    let (name, v) = out;
    Ok((name.to_string(), io::envelope(name, Some(seed), &v)?))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).expect("json values serialize") + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.out.clone();
    let result = seed(cli.seed).and_then(|s| run(cli.command, s));
    match result {
        Ok((_, v)) => match emit(&v, out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(v)) => {
            if let Err(e) = emit(&v, out.as_deref()) {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
