use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use nca_trace::{generate, parse_trace, run, EngineKind, Profile, DEFAULT_MAX_N};

#[derive(Parser)]
#[command(name = "nca", version, about = "Replay and generate nearest common ancestor traces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stats {
    Csv,
    None,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a trace on one or more engines.
    Run {
        #[arg(long = "engine", required = true, num_args = 1..)]
        engines: Vec<EngineKind>,
        #[arg(long)]
        trace: PathBuf,
        /// Compare answers against the oracle or the trace's expected answers.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "none")]
        stats: Stats,
        #[arg(long, env = "NCA_MAX_N", default_value_t = DEFAULT_MAX_N,
              value_parser = clap::value_parser!(u32).range(2..=(1 << 30)))]
        max_n: u32,
    },
    /// Write a generated trace.
    Gen {
        #[arg(long, value_enum)]
        profile: Profile,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match exec(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn exec(cmd: Cmd) -> anyhow::Result<ExitCode> {
    match cmd {
        Cmd::Run { engines, trace, check, stats, max_n } => {
            let text = fs::read_to_string(&trace).with_context(|| format!("reading {}", trace.display()))?;
            let t = parse_trace(&text).with_context(|| format!("parsing {}", trace.display()))?;
            let report = run(&t, &engines, check, max_n)?;
            if let Stats::Csv = stats {
                print!("{}", report.csv());
            }
            if let Some(m) = &report.mismatch {
                eprintln!("mismatch at op {} on {}: got {}, want {}", m.op, m.engine, m.got, m.want);
                if let Some(repro) = &report.reproduction {
                    eprintln!("shortest failing prefix ({} ops):\n{repro}", repro.ops.len());
                }
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { profile, n, m, seed, output } => {
            let t = generate(seed, profile, n, m);
            fs::write(&output, t.to_string()).with_context(|| format!("writing {}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
