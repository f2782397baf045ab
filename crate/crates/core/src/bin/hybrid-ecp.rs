use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hybrid_ecp::analysis::{sweep_yields, uniform_grid, verify};
use hybrid_ecp::{run_monte_carlo, run_protocol, OverlapMode, ProtocolId, ProtocolParams, SimConfig, C64};

#[derive(Parser)]
#[command(name = "hybrid-ecp", version, about = "Entanglement concentration for hybrid photon/coherent-state entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol by exact enumeration or Monte Carlo.
    Run(RunArgs),
    /// Tabulate the yield curves as CSV.
    Sweep(SweepArgs),
    /// Compare the enumerated success probability with its closed form.
    Verify(ProtocolArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum RunMode {
    Exact,
    Mc,
}

#[derive(Copy, Clone, ValueEnum)]
enum Overlap {
    Ideal,
    Exact,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long, value_parser = parse_protocol)]
    protocol: ProtocolId,
    #[arg(long)]
    a: f64,
    /// Signal amplitude as `re,im` or `re`.
    #[arg(long, value_parser = parse_complex, default_value = "2,0")]
    beta: C64,
    /// Probe amplitude for the QND protocol.
    #[arg(long, value_parser = parse_complex, default_value = "5,0")]
    alpha: C64,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    theta: f64,
    /// QND rounds.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Photon parties (multiparty protocols).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Coherent parties (multiparty protocols).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, value_enum, default_value = "ideal")]
    overlap: Overlap,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[arg(long, value_enum)]
    mode: RunMode,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Write the full result as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 0.01)]
    grid_start: f64,
    #[arg(long, default_value_t = 0.99)]
    grid_end: f64,
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_protocol(s: &str) -> Result<ProtocolId, String> {
    s.parse().map_err(|e: hybrid_ecp::Error| e.to_string())
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got `{s}`")),
    }
}

impl ProtocolArgs {
    fn build(&self) -> hybrid_ecp::Result<(ProtocolParams, SimConfig)> {
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(hybrid_ecp::Error::InvalidParameter(format!("--a {} outside (0, 1)", self.a)));
        }
        let params = ProtocolParams::new(self.a)
            .with_beta(self.beta)
            .with_probe(self.alpha, self.theta)
            .with_parties(self.n as usize, self.m as usize)
            .with_rounds(self.k as usize);
        params.validate()?;
        let mode = match self.overlap {
            Overlap::Ideal => OverlapMode::IdealOrthogonal,
            Overlap::Exact => OverlapMode::ExactOverlap,
        };
        Ok((params, SimConfig::default().with_overlap_mode(mode).with_seed(self.seed)))
    }
}

enum Failure {
    Usage(String),
    Verification(String),
    Io(String),
}

fn run(cmd: Command) -> Result<(), Failure> {
    let usage = |e: hybrid_ecp::Error| Failure::Usage(e.to_string());
    match cmd {
        Command::Run(args) => {
            let (params, cfg) = args.protocol.build().map_err(usage)?;
            let id = args.protocol.protocol;
            let report = match args.mode {
                RunMode::Exact => {
                    let r = run_protocol(id, &params, cfg).map_err(usage)?;
                    println!("protocol {id}: success probability {:.12}", r.success_probability);
                    println!("mean output fidelity {:.12}", r.mean_output_fidelity);
                    println!("terminal branches {}", r.terminal().count());
                    for (k, p) in r.rounds.iter().enumerate() {
                        println!("round {}: {:.12}", k + 1, p);
                    }
                    r.to_json()
                }
                RunMode::Mc => {
                    let s = run_monte_carlo(id, &params, cfg, args.trials).map_err(usage)?;
                    println!("protocol {id}: {} / {} trials succeeded, frequency {:.6}", s.successes, s.trials, s.success_frequency);
                    println!("mean fidelity of successes {:.12}", s.mean_fidelity);
                    for (path, count) in &s.outcome_counts {
                        println!("  {path}: {count}");
                    }
                    json!({ "params": params, "summary": s })
                }
            };
            if let Some(path) = args.json {
                let text = serde_json::to_string_pretty(&report).expect("reports serialize");
                fs::write(&path, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let grid = uniform_grid(args.grid_start, args.grid_end, args.grid_step).map_err(usage)?;
            let curve = sweep_yields(&grid, args.k as usize).map_err(usage)?;
            fs::write(&args.out, curve.to_csv()).map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))?;
            println!("{} rows written to {}; max |Y_qnd - Y_vbs| = {:.3e}", curve.rows.len(), args.out.display(), curve.max_qnd_vbs_gap());
            Ok(())
        }
        Command::Verify(args) => {
            let (params, cfg) = args.build().map_err(usage)?;
            let r = verify(args.protocol, &params, cfg).map_err(usage)?;
            println!("protocol {}: simulated {:.15} expected {:.15} error {:.3e}", r.protocol, r.simulated, r.expected, r.abs_error);
            for (k, e) in r.round_errors.iter().enumerate() {
                println!("round {}: error {:.3e}", k + 1, e);
            }
            if r.passed {
                println!("PASS (tolerance {:e})", r.tolerance);
                Ok(())
            } else {
                Err(Failure::Verification(format!("error exceeds {:e}", r.tolerance)))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
