use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use splitalg::apps::{algebra_isomorphism, coordinate_bits, find_zero_divisor, solve_norm_equation, NormSolution};
use splitalg::exact::{format_rational, parse_rational};
use splitalg::instance::FieldSpec;
use splitalg::{gen_instance, split, verify, Error, InstanceFile, NumberField, SplitConfig, WitnessFile};

/// Explicit isomorphisms of matrix algebras given by structure constants.
#[derive(Parser)]
#[command(name = "splitalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shared {
    /// Seed for the randomized choices (splitting element, generator).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Working precision of the numerical representations.
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
    /// LLL parameter.
    #[arg(long, default_value_t = 0.99)]
    delta: f64,
    /// Largest max-norm shell enumerated before the ball search.
    #[arg(long, default_value_t = 8)]
    shell_cap: u64,
    /// Force results identical to a sequential run.
    #[arg(long)]
    deterministic: bool,
    /// Wall-clock budget for the search.
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Also check exactly that elements shorter than 1 at every place are nilpotent.
    #[arg(long)]
    nilpotent_check: bool,
}

impl Shared {
    fn config(&self) -> Result<SplitConfig, Error> {
        let mut cfg = SplitConfig::default().with_delta(self.delta)?;
        cfg.seed = self.seed;
        cfg.precision_bits = self.precision_bits;
        cfg.shell_cap = self.shell_cap;
        cfg.deterministic = self.deterministic;
        cfg.nilpotent_check = self.nilpotent_check;
        cfg.budget = match self.budget_seconds {
            Some(s) if !(s > 0.0 && s.is_finite()) => return Err(Error::Parse("budget must be positive".into())),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        if self.precision_bits < 64 {
            return Err(Error::Parse("precision must be at least 64 bits".into()));
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random presentation of M_n(K).
    Gen {
        #[arg(long)]
        n: usize,
        /// Base field Q(sqrt D); the rationals when omitted.
        #[arg(long, conflicts_with = "field_json")]
        quadratic: Option<i64>,
        /// JSON field descriptor (same shape as the "field" entry of an instance).
        #[arg(long)]
        field_json: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        entry_bound: i64,
        /// Keep the generating data in the file.
        #[arg(long)]
        hidden: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute an isomorphism A -> M_n(K) and write a witness file.
    Split {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Compute an isomorphism between two algebras of the same dimension.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Find a zero divisor with small coordinates.
    Zerodiv {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Solve x0^2 - D x1^2 = a over the rationals.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        shared: Shared,
    },
    /// Check a witness against an instance exactly.
    Verify { instance: PathBuf, witness: PathBuf },
}

/// Process outcome: exit code plus a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn from_error(e: Error, nonsplit_code: u8) -> Self {
        let code = match &e {
            Error::NonSplit(_) => nonsplit_code,
            e if e.is_inconclusive() => 2,
            Error::Verification(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }

    fn input(message: String) -> Self {
        Failure { code: 3, message }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_out(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_instance(path: &Path) -> Result<InstanceFile, Failure> {
    InstanceFile::from_json(&read(path)?).map_err(|e| Failure::from_error(e, 3))
}

fn elem_json(x: &splitalg::AlgebraElement) -> serde_json::Value {
    json!(x.coords.iter().map(|c| c.coords.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { n, quadratic, field_json, seed, entry_bound, hidden, output } => {
            let field = match (quadratic, field_json) {
                (Some(d), _) => NumberField::quadratic(d),
                (None, Some(p)) => serde_json::from_str::<FieldSpec>(&read(&p)?)
                    .map_err(|e| Error::Parse(e.to_string()))
                    .and_then(|s| s.to_field()),
                (None, None) => Ok(NumberField::rationals()),
            }
            .map_err(|e| Failure::from_error(e, 3))?;
            let mut inst = gen_instance(n, &field, seed, entry_bound).map_err(|e| Failure::from_error(e, 3))?;
            if !hidden {
                inst.hidden_witness = None;
            }
            write_out(&output, &inst.to_json())
        }
        Command::Split { instance, output, shared } => {
            let cfg = shared.config().map_err(|e| Failure::from_error(e, 3))?;
            let alg = load_instance(&instance)?.to_algebra().map_err(|e| Failure::from_error(e, 3))?;
            let report = split(&alg, &cfg).map_err(|e| Failure::from_error(e, 2))?;
            eprintln!("split: n = {}, {} level(s), {:.3} s", report.isomorphism.n, report.levels.len(), report.elapsed.as_secs_f64());
            write_out(&output, &WitnessFile::from_report(&report).to_json())
        }
        Command::Iso { a, b, output, shared } => {
            let cfg = shared.config().map_err(|e| Failure::from_error(e, 3))?;
            let alg_a = load_instance(&a)?.to_algebra().map_err(|e| Failure::from_error(e, 3))?;
            let alg_b = load_instance(&b)?.to_algebra().map_err(|e| Failure::from_error(e, 3))?;
            let iso = algebra_isomorphism(&alg_a, &alg_b, &cfg).map_err(|e| Failure::from_error(e, 1))?;
            let v = json!({
                "format": "splitalg-isomorphism/1",
                "images": iso.images.iter().map(elem_json).collect::<Vec<_>>(),
                "statistics": {
                    "left_steps": iso.left_steps,
                    "right_steps": iso.right_steps,
                    "omega_extended": iso.omega_extended,
                    "invariant_checks": iso.invariant_checks,
                    "tensor_discriminants": iso.split.discriminants.iter().map(ToString::to_string).collect::<Vec<_>>(),
                },
            });
            write_out(&output, &pretty(&v))
        }
        Command::Zerodiv { instance, output, shared } => {
            let cfg = shared.config().map_err(|e| Failure::from_error(e, 3))?;
            let alg = load_instance(&instance)?.to_algebra().map_err(|e| Failure::from_error(e, 3))?;
            let z = find_zero_divisor(&alg, &cfg).map_err(|e| Failure::from_error(e, 2))?;
            let v = json!({
                "format": "splitalg-zero-divisor/1",
                "element": elem_json(&z.element),
                "rank": z.rank,
                "coordinate_bits": coordinate_bits(&z.element),
            });
            write_out(&output, &pretty(&v))
        }
        Command::Norm { d, a, shared } => {
            let cfg = shared.config().map_err(|e| Failure::from_error(e, 3))?;
            let target = parse_rational(&a).map_err(|e| Failure::from_error(e, 3))?;
            match solve_norm_equation(d, &target, &cfg).map_err(|e| Failure::from_error(e, 1))? {
                NormSolution::Solution { x0, x1 } => {
                    let v = json!({"d": d, "a": format_rational(&target), "solvable": true, "x": [format_rational(&x0), format_rational(&x1)]});
                    write_out(&None, &pretty(&v))
                }
                NormSolution::Unsolvable => {
                    write_out(&None, &pretty(&json!({"d": d, "a": format_rational(&target), "solvable": false})))?;
                    Err(Failure { code: 1, message: format!("{} is not a norm from Q(sqrt {d})", format_rational(&target)) })
                }
            }
        }
        Command::Verify { instance, witness } => {
            let inst = load_instance(&instance)?;
            let wit = WitnessFile::from_json(&read(&witness)?).map_err(|e| Failure::from_error(e, 3))?;
            match verify(&inst, &wit) {
                Ok(()) => {
                    println!("ok");
                    Ok(())
                }
                Err(Error::Verification(m)) => Err(Failure { code: 1, message: format!("verification failed: {m}") }),
                Err(e) => Err(Failure::from_error(e, 3)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("splitalg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
