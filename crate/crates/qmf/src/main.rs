use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use qmf::merge::{merge, table};
use qmf::{export, tasks, Report, RunConfig};
use qmf_core::families::Family;

#[derive(Parser)]
#[command(name = "qmf", version, about = "Re-derive and check computations on quartic double fivefolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 313)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, env = "QMF_THREADS", default_value_t = 1)]
    threads: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 14400)]
    timeout_s: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic identity checks.
    Verify {
        #[arg(value_parser = ["sy", "moment-even", "moment-odd", "blocks", "properties"])]
        what: String,
        #[command(flatten)]
        common: Common,
    },
    /// Rank of the pullback span of the partials of the Igusa quartic.
    Dominance {
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Graded Ext between a family's cokernel module and itself.
    Ext {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=3))]
        i: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Weight-multiplicity decompositions.
    Plethysm {
        #[arg(long)]
        case: String,
        #[command(flatten)]
        common: Common,
    },
    /// All checks on fixed seeds.
    Suite {
        /// Also run the expensive higher-Ext checks.
        #[arg(long)]
        extended: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Combine report files into one table.
    Merge {
        paths: Vec<PathBuf>,
        /// Print the merged rows as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write polynomials and matrices as text files.
    Export {
        #[arg(value_parser = export::KINDS)]
        kind: String,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 313)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn config(task: &str, c: &Common) -> RunConfig {
    let mut r = RunConfig::new(task, c.prime, c.seed);
    r.threads = c.threads.max(1);
    r.timeout_s = c.timeout_s;
    r.out = c.out.as_ref().map(|p| p.display().to_string());
    r
}

/// Runs the task on a worker thread and gives up after `timeout_s`.
fn run_with_timeout(config: RunConfig) -> anyhow::Result<Report> {
    let (tx, rx) = mpsc::channel();
    let job = config.clone();
    let start = Instant::now();
    std::thread::spawn(move || {
        let _ = tx.send(tasks::run(&job));
    });
    match rx.recv_timeout(Duration::from_secs(config.timeout_s)) {
        Ok(r) => Ok(r?),
        Err(mpsc::RecvTimeoutError::Timeout) => Ok(Report::timed_out(config, start.elapsed().as_millis() as u64)),
        Err(mpsc::RecvTimeoutError::Disconnected) => bail!("worker thread panicked"),
    }
}

fn emit(report: &Report, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    for c in &report.checks {
        eprintln!("{:<9} {}", c.status.name(), c.name);
    }
    eprintln!("{}: {} ({} ms)", report.task, report.status.name(), report.elapsed_ms);
    Ok(())
}

fn exit(failed: bool) -> ExitCode {
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let (cfg, common) = match cli.command {
        Command::Verify { what, common } => (config(&format!("verify-{what}"), &common), common),
        Command::Dominance { trials, common } => {
            let mut c = config("dominance", &common);
            c.trials = Some(trials);
            (c, common)
        }
        Command::Ext { family, i, common } => {
            if Family::parse(&family).is_none() {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                eprintln!("error: unknown family {family:?} (expected one of {})", names.join(", "));
                return Ok(ExitCode::from(2));
            }
            let mut c = config("ext", &common);
            c.family = Some(family);
            c.i = Some(i as usize);
            (c, common)
        }
        Command::Plethysm { case, common } => {
            let mut c = config("plethysm", &common);
            c.case = Some(case);
            (c, common)
        }
        Command::Suite { extended, common } => {
            let mut c = config("suite", &common);
            c.extended = extended;
            (c, common)
        }
        Command::Merge { paths, json } => {
            let m = merge(&paths)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&m)?);
            } else {
                print!("{}", table(&m));
            }
            return Ok(exit(!m.ok()));
        }
        Command::Export { kind, dir, family, prime, seed } => {
            let field = qmf_core::make_field(prime)?;
            let family = match family {
                Some(name) => Some(Family::parse(&name).with_context(|| format!("unknown family {name}"))?),
                None => None,
            };
            export::export(&kind, field, &dir, family, seed)?;
            eprintln!("wrote {kind} to {}", dir.display());
            return Ok(ExitCode::SUCCESS);
        }
    };
    let report = run_with_timeout(cfg)?;
    emit(&report, common.out.as_ref())?;
    Ok(exit(report.status.is_failure()))
}
