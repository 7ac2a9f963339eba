use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pure_homotopy::experiments::{run_contract, run_rotation, run_verify_command, status_of, ExitStatus, RunConfig};
use pure_homotopy::Result;

#[derive(Parser)]
#[command(version, about = "Explicit unitary homotopies between pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    kmax: Option<u64>,
    #[arg(long, global = true)]
    resolve_spheres: bool,
    #[arg(long, global = true)]
    emit_unitaries: bool,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every invariant suite and write verify.json.
    Verify,
    /// Run the iteration demo and an S-ball contraction; write trace.json, observables.csv, margins.csv.
    Contract,
    /// Tabulate the homotopy groups of the pure state space of a rotation algebra.
    Rotation {
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        irrational: bool,
    },
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = &cli.out_dir {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = cli.delta {
        cfg.delta = v;
    }
    if let Some(v) = cli.depth {
        cfg.depth = v;
    }
    if let Some(v) = cli.kmax {
        cfg.kmax = v;
    }
    cfg.resolve_spheres |= cli.resolve_spheres;
    cfg.emit_unitaries |= cli.emit_unitaries;
    for kv in &cli.set {
        cfg.apply_text(kv)?;
    }
    if let Command::Rotation { p, q, irrational } = &cli.command {
        if let Some(p) = p {
            cfg.p = *p;
        }
        if let Some(q) = q {
            cfg.q = *q;
        }
        cfg.irrational |= irrational;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = config(&cli).and_then(|cfg| match cli.command {
        Command::Verify => run_verify_command(&cfg),
        Command::Contract => run_contract(&cfg),
        Command::Rotation { .. } => run_rotation(&cfg),
    });
    let status = match outcome {
        Ok(out) => {
            print!("{}", out.summary);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            out.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            status_of(&e)
        }
    };
    if status != ExitStatus::Pass {
        eprintln!("exit status {}", status.code());
    }
    ExitCode::from(status.code() as u8)
}
