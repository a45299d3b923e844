//! `mstab`: run Majorana stabilizer circuits and query the resulting states.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 internal
//! invariant violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mstab::circuit::Circuit;
use mstab::dump;
use mstab::exact::{format_complex, ExactAmplitude};
use mstab::majorana::parse_op_expr;
use mstab::scaling::{self, BenchConfig, BenchOp};
use mstab::state::{StabilizerState, StateError};
use mstab::verify::{self, Failure, Fault, VerifyConfig};
use mstab::BitVec;

const ORACLE_ENV: &str = "MSTAB_MAX_ORACLE_N";
const DEFAULT_MAX_ORACLE_N: usize = 10;

#[derive(Parser)]
#[command(name = "mstab", version, about = "Phase-sensitive Majorana stabilizer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a circuit file to the vacuum and write the state dump.
    Run {
        circuit: PathBuf,
        /// Dump destination; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amplitude ⟨x|ψ⟩ of a dumped state.
    Amp {
        state: PathBuf,
        /// Basis label, site 0 first.
        bitstring: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Inner product ⟨a|b⟩ of two dumped states.
    Overlap {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Expectation value ⟨ψ|Γ|ψ⟩ for an operator expression such as `i^1 p0 c1`.
    Expect {
        state: PathBuf,
        op: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare random circuits against the dense statevector oracle.
    Verify {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 60)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Corrupt the simulator on purpose to exercise failure reporting.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Time gates and queries at several sizes and fit log-log slopes.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256, 512, 1024])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 7)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Minimum duration of one timed batch, in milliseconds.
        #[arg(long, default_value_t = 20)]
        batch_ms: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

enum Failed {
    Verify,
    Input(String),
    Internal(String),
}

impl Failed {
    fn code(&self) -> u8 {
        match self {
            Failed::Verify => 1,
            Failed::Input(_) => 2,
            Failed::Internal(_) => 3,
        }
    }
}

impl From<StateError> for Failed {
    fn from(e: StateError) -> Self {
        if e.is_internal() {
            Failed::Internal(e.to_string())
        } else {
            Failed::Input(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failed> {
    fs::read_to_string(path).map_err(|e| Failed::Input(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<StabilizerState, Failed> {
    dump::from_json(&read(path)?).map_err(|e| Failed::Input(format!("{}: {e}", path.display())))
}

fn print_value(v: ExactAmplitude, format: Format) {
    let decimal = format_complex(v.to_complex());
    match format {
        Format::Human => println!("{decimal}  ({v})"),
        Format::Json => {
            let exact = match v {
                ExactAmplitude::Zero => json!(null),
                ExactAmplitude::Value { eighths, half_powers } => json!({ "eighths": eighths, "half_powers": half_powers }),
            };
            let c = v.to_complex();
            println!("{}", json!({ "re": c.re, "im": c.im, "decimal": decimal, "exact": exact }));
        }
    }
}

fn max_oracle_n() -> Result<usize, Failed> {
    match std::env::var(ORACLE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failed::Input(format!("{ORACLE_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ORACLE_N),
    }
}

fn cmd_run(circuit: &Path, out: Option<&Path>) -> Result<(), Failed> {
    let text = read(circuit)?;
    let c = Circuit::parse(&text).map_err(|e| Failed::Input(format!("{}:{}:{}: {}", circuit.display(), e.line, e.column, e.kind)))?;
    let st = c.run()?;
    let text = dump::to_json(&st);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failed::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_amp(state: &Path, bitstring: &str, format: Format) -> Result<(), Failed> {
    let st = load_state(state)?;
    let x: BitVec = bitstring
        .parse()
        .map_err(|e| Failed::Input(format!("bitstring {bitstring:?}: {e}")))?;
    if x.len() != st.n() {
        return Err(Failed::Input(format!("bitstring has {} sites, state has {}", x.len(), st.n())));
    }
    print_value(st.amplitude(&x)?, format);
    Ok(())
}

fn cmd_overlap(a: &Path, b: &Path, format: Format) -> Result<(), Failed> {
    let (sa, sb) = (load_state(a)?, load_state(b)?);
    if sa.n() != sb.n() {
        return Err(Failed::Input(format!("states have {} and {} sites", sa.n(), sb.n())));
    }
    print_value(sa.inner_product(&sb)?, format);
    Ok(())
}

fn cmd_expect(state: &Path, op: &str, format: Format) -> Result<(), Failed> {
    let st = load_state(state)?;
    let g = parse_op_expr(op, st.n()).map_err(|e| match e.column() {
        Some(c) => Failed::Input(format!("operator, column {}: {e}", c + 1)),
        None => Failed::Input(format!("operator: {e}")),
    })?;
    print_value(st.expectation(&g)?, format);
    Ok(())
}

fn cmd_verify(cfg: VerifyConfig, format: Format) -> Result<(), Failed> {
    let limit = max_oracle_n()?;
    if cfg.n > limit {
        return Err(Failed::Input(format!(
            "n = {} exceeds the oracle limit of {limit} sites (set {ORACLE_ENV} to raise it)",
            cfg.n
        )));
    }
    let report = verify::run(&cfg).map_err(|e| Failed::Input(e.to_string()))?;
    let mut internal = false;
    for t in report.failures() {
        let failure = t.failure.as_ref().expect("filtered");
        internal |= failure.is_internal();
        let what = match failure {
            Failure::Amplitudes { gate, deviation } => format!("amplitudes diverge at gate {gate} (deviation {deviation:.3e})"),
            Failure::Expectation { deviation } => format!("expectation deviation {deviation:.3e}"),
            Failure::Overlap { deviation } => format!("overlap with next trial deviates by {deviation:.3e}"),
            Failure::Error { gate, error } => format!("gate {gate} failed: {error}"),
            Failure::Invariant { gate } => format!("state invariant broken after gate {gate}"),
        };
        match format {
            Format::Human => println!("FAIL trial {} seed {}: {what}", t.index, t.seed),
            Format::Json => println!(
                "{}",
                json!({ "trial": t.index, "seed": t.seed, "failure": what,
                        "gate": match failure {
                            Failure::Amplitudes { gate, .. } | Failure::Error { gate, .. } | Failure::Invariant { gate } => Some(*gate),
                            _ => None,
                        } })
            ),
        }
    }
    let failed = report.failures().count();
    match format {
        Format::Human => {
            println!(
                "{} trials, n = {}, depth = {}, seed = {}: {} failed, max deviation {:.3e}",
                report.trials.len(),
                cfg.n,
                cfg.depth,
                cfg.seed,
                failed,
                report.max_deviation()
            );
        }
        Format::Json => println!(
            "{}",
            json!({ "trials": report.trials.len(), "n": cfg.n, "depth": cfg.depth, "seed": cfg.seed,
                    "failed": failed, "max_deviation": report.max_deviation(), "tol": cfg.tol })
        ),
    }
    if internal {
        Err(Failed::Internal("simulator invariant violated during verification".into()))
    } else if failed > 0 {
        Err(Failed::Verify)
    } else {
        Ok(())
    }
}

fn cmd_bench(cfg: BenchConfig, format: Format) -> Result<(), Failed> {
    if cfg.ns.iter().any(|&n| n < 2) {
        return Err(Failed::Input("every n must be at least 2".into()));
    }
    let rows = scaling::bench(&cfg);
    for r in &rows {
        match format {
            Format::Human => println!("{:>6} n={:<6} {:>14.3} us  (batch {})", r.op.name(), r.n, r.median_secs * 1e6, r.batch),
            Format::Json => println!(
                "{}",
                json!({ "op": r.op.name(), "n": r.n, "median_secs": r.median_secs, "batch": r.batch })
            ),
        }
    }
    for op in BenchOp::ALL {
        if let Some(slope) = scaling::loglog_slope(&rows, op) {
            match format {
                Format::Human => println!("slope {:>6} {slope:.3}", op.name()),
                Format::Json => println!("{}", json!({ "op": op.name(), "slope": slope })),
            }
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failed> {
    match cli.command {
        Command::Run { circuit, out } => cmd_run(&circuit, out.as_deref()),
        Command::Amp { state, bitstring, format } => cmd_amp(&state, &bitstring, format),
        Command::Overlap { a, b, format } => cmd_overlap(&a, &b, format),
        Command::Expect { state, op, format } => cmd_expect(&state, &op, format),
        Command::Verify {
            n,
            depth,
            trials,
            seed,
            tol,
            format,
            inject_fault,
        } => {
            let mut cfg = VerifyConfig::new(n, depth, trials, seed);
            cfg.tol = tol;
            cfg.fault = inject_fault.then_some(Fault::BraidPhase);
            cmd_verify(cfg, format)
        }
        Command::Bench {
            n,
            reps,
            seed,
            batch_ms,
            format,
        } => cmd_bench(
            BenchConfig {
                ns: n,
                reps,
                seed,
                min_batch: Duration::from_millis(batch_ms),
                ..BenchConfig::default()
            },
            format,
        ),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failed::Verify => {}
                Failed::Input(msg) => eprintln!("error: {msg}"),
                Failed::Internal(msg) => eprintln!("internal error: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
