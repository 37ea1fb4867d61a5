//! `qcap`: capacities of two-qubit amplitude damping channels, twirl tables
//! and capacity bound curves.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parameter or regime
//! error, 3 internal numerical failure. Identical flags produce bit-identical
//! outputs; `QCAP_THREADS` caps the worker pool without affecting results.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcap_core::{
    format_significant, run_verification, sweep_curve, BoundCurve, CapacityResult,
    ChannelDescription, ChannelParamsXYZ, Error, OptimizerConfig, PauliChannel, SweepKind,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qcap",
    about = "Quantum capacities and upper bounds for two-qubit damping and Pauli channels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact capacity of the damping channel at (x, y, z) via the concave
    /// program over diagonal inputs.
    Capacity {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        z: f64,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Sampled bound or capacity curve, written as CSV (or JSON).
    Curve {
        kind: CurveKind,
        /// Number of grid points.
        #[arg(long, default_value_t = 2001)]
        steps: usize,
        /// Lower end of the depolarizing window [0, 3/8].
        #[arg(long, default_value_t = 0.0)]
        pmin: f64,
        /// Upper end of the depolarizing window [0, 3/8].
        #[arg(long, default_value_t = 0.375)]
        pmax: f64,
        /// Lower damping strength for the `ad` curve.
        #[arg(long, default_value_t = 0.0)]
        gmin: f64,
        /// Upper damping strength for the `ad` curve.
        #[arg(long, default_value_t = 0.5)]
        gmax: f64,
        /// Lower x for the symmetric slice.
        #[arg(long, default_value_t = 0.0)]
        xmin: f64,
        /// Upper x for the symmetric slice (must stay below 1/2).
        #[arg(long, default_value_t = 0.49)]
        xmax: f64,
        /// Fixed y for the symmetric slice.
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        /// Fixed z for the symmetric slice.
        #[arg(long, default_value_t = 0.0)]
        z: f64,
        /// Output file; stdout when omitted. Written to a temporary sibling
        /// and renamed, so no partial file survives a failure.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Pauli-twirl a channel and print its probability table.
    Twirl {
        #[arg(long, conflicts_with = "channel")]
        x: Option<f64>,
        #[arg(long, requires = "x")]
        y: Option<f64>,
        #[arg(long, requires = "x")]
        z: Option<f64>,
        /// JSON channel description file (alternative to --x/--y/--z).
        #[arg(long)]
        channel: Option<PathBuf>,
        /// Follow the Pauli twirl with the localized Clifford twirl.
        #[arg(long)]
        local: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Run the seeded verification suite; exits 0 only if every check passes.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct OptimizerArgs {
    /// Certified optimality gap at which a start stops.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Seeded interior starts (the first is always uniform).
    #[arg(long, default_value_t = 16)]
    starts: usize,
    /// Iteration cap per start.
    #[arg(long, default_value_t = 50_000)]
    max_iter: usize,
    /// Seed for the optimizer starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn to_config(&self) -> OptimizerConfig {
        OptimizerConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            starts: self.starts,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKind {
    /// Upper bound on the capacity of the four-dimensional depolarizing
    /// channel.
    Dep4,
    /// Capacity of the two-qubit damping channel (γ, γ(1−γ), γ²).
    Ad,
    /// Twirl bound along x at fixed (y, z).
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum OutputFormat {
    Csv,
    Json,
    Table,
}

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("QCAP_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Capacity { x, y, z, optimizer } => {
            let params = ChannelParamsXYZ::new(x, y, z);
            let result = qcap_core::capacity_diagonal_program(&params, &optimizer.to_config())?;
            println!("{}", capacity_json(&result));
            Ok(ExitCode::SUCCESS)
        }
        Command::Curve {
            kind,
            steps,
            pmin,
            pmax,
            gmin,
            gmax,
            xmin,
            xmax,
            y,
            z,
            out,
            format,
            optimizer,
        } => {
            let sweep = match kind {
                CurveKind::Dep4 => SweepKind::Dep4 { pmin, pmax },
                CurveKind::Ad => SweepKind::AmplitudeDamping {
                    gmin,
                    gmax,
                    optimizer: optimizer.to_config(),
                },
                CurveKind::Symmetric => SweepKind::SymmetricSlice { xmin, xmax, y, z },
            };
            let curve = sweep_curve(&sweep, steps)?;
            let rendered = match format {
                OutputFormat::Csv => curve.to_csv(),
                OutputFormat::Json => {
                    let mut s = curve.to_json();
                    s.push('\n');
                    s
                }
                OutputFormat::Table => curve_table(&curve),
            };
            match out {
                Some(path) => write_atomic(&path, &rendered).map_err(|e| {
                    Error::Parameter(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Twirl {
            x,
            y,
            z,
            channel,
            local,
            format,
        } => {
            let ch = match (x, channel) {
                (Some(x), None) => {
                    let y = y.ok_or_else(|| Error::Parameter("--y is required with --x".into()))?;
                    let z = z.ok_or_else(|| Error::Parameter("--z is required with --x".into()))?;
                    qcap_core::make_phi_xyz(&ChannelParamsXYZ::new(x, y, z))?
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        Error::Parameter(format!("cannot read {}: {e}", path.display()))
                    })?;
                    ChannelDescription::from_json(&text)?.to_channel()?
                }
                _ => {
                    return Err(Error::Parameter(
                        "provide either --x/--y/--z or --channel".into(),
                    ))
                }
            };
            let mut twirled = qcap_core::pauli_twirl(&ch)?;
            if local {
                twirled = qcap_core::local_clifford_twirl(&twirled)?;
            }
            match format {
                OutputFormat::Table => print!("{}", twirl_table(&twirled)),
                OutputFormat::Csv => print!("{}", twirl_csv(&twirled)),
                OutputFormat::Json => println!("{}", twirl_json(&twirled)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed } => {
            let corrupt = std::env::var("QCAP_VERIFY_CORRUPT").ok();
            let reports = run_verification(seed, corrupt.as_deref());
            let mut first_failure: Option<&str> = None;
            for r in &reports {
                if r.passed {
                    println!("PASS {} - {}", r.name, r.detail);
                } else {
                    println!("FAIL {} - {}", r.name, r.detail);
                    first_failure.get_or_insert(r.name);
                }
            }
            match first_failure {
                None => Ok(ExitCode::SUCCESS),
                Some(name) => {
                    eprintln!("error: verification failed at check '{name}'");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn capacity_json(result: &CapacityResult) -> String {
    let probs: Vec<String> = result
        .argmax
        .probs()
        .iter()
        .map(|&p| format_significant(p, 12))
        .collect();
    format!(
        "{{\"capacity\":{},\"argmax\":[{}],\"converged\":{}}}",
        format_significant(result.value, 12),
        probs.join(","),
        result.converged
    )
}

fn curve_table(curve: &BoundCurve) -> String {
    let mut out = format!("{:<16} {:<16}\n", curve.param_name(), curve.value_name());
    for &(p, v) in curve.samples() {
        out.push_str(&format!(
            "{:<16} {:<16}\n",
            format_significant(p, 12),
            format_significant(v, 12)
        ));
    }
    out
}

fn twirl_table(pc: &PauliChannel) -> String {
    let mut out = format!("{:<8} {:<18} {}\n", "pauli", "probability", "weight");
    for (p, &q) in pc.probs() {
        out.push_str(&format!(
            "{:<8} {:<18} {}\n",
            p.label(),
            format_significant(q, 12),
            p.weight()
        ));
    }
    out
}

fn twirl_csv(pc: &PauliChannel) -> String {
    let mut out = String::from("pauli,probability,weight\n");
    for (p, &q) in pc.probs() {
        out.push_str(&format!(
            "{},{},{}\n",
            p.label(),
            format_significant(q, 12),
            p.weight()
        ));
    }
    out
}

fn twirl_json(pc: &PauliChannel) -> String {
    let entries: Vec<String> = pc
        .probs()
        .iter()
        .map(|(p, &q)| format!("\"{}\":{}", p.label(), format_significant(q, 12)))
        .collect();
    format!(
        "{{\"qubits\":{},\"probs\":{{{}}}}}",
        pc.qubits(),
        entries.join(",")
    )
}

/// Writes through a temporary sibling and renames, so a failed run never
/// leaves a partial output file behind.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    let write_result = std::fs::write(&tmp, contents);
    match write_result {
        Ok(()) => match std::fs::rename(&tmp, path) {
            Ok(()) => Ok(()),
            Err(e) => {
                let _ = std::fs::remove_file(&tmp);
                Err(e)
            }
        },
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}
