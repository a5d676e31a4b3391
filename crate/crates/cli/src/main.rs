use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use demon_cli::acceptance::{run_suite, Tolerances};
use demon_cli::config::check_seed;
use demon_cli::{CliError, ExperimentConfig, Format, Registry, Result};

#[derive(Parser)]
#[command(name = "demon", version, about = "Run thermodynamics-of-information experiments from TOML configs")]
struct Cli {
    /// Worker threads for trajectory ensembles and grid points.
    #[arg(long, global = true, env = "DEMON_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run(RunArgs),
    /// Run an experiment over the Cartesian product of its `[grid]` table.
    Sweep(RunArgs),
    /// Execute the acceptance suite.
    Verify(VerifyArgs),
    /// List registered experiments.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Run only the named criteria.
    #[arg(long)]
    only: Vec<String>,
    /// Make one criterion's tolerance unattainable (fault injection).
    #[arg(long, hide = true)]
    corrupt: Option<String>,
}

fn load(args: &RunArgs, registry: &Registry) -> Result<ExperimentConfig> {
    let src = std::fs::read_to_string(&args.config).map_err(|e| CliError::Io { path: args.config.display().to_string(), message: e.to_string() })?;
    let mut cfg = ExperimentConfig::from_toml(&src, registry)?;
    if let Some(seed) = args.seed {
        check_seed(seed)?;
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = args.format {
        cfg.output.format = f;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let registry = Registry::builtin();
    match cli.command {
        Command::Run(args) => {
            let out = demon_cli::run(&load(&args, &registry)?, &registry)?;
            out.emit()?;
            if out.config.output.path.is_some() {
                println!("{}", serde_json::to_string(&out.manifest).expect("manifests serialise"));
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let out = demon_cli::sweep(&load(&args, &registry)?, &registry)?;
            out.emit()?;
            if out.config.output.path.is_some() {
                println!("{}", serde_json::to_string(&out.manifest).expect("manifests serialise"));
            }
            Ok(())
        }
        Command::Verify(args) => {
            let mut tol = Tolerances::default();
            if let Some(name) = &args.corrupt {
                if !tol.corrupt(name) {
                    return Err(CliError::Usage(format!("no criterion named `{name}`")));
                }
            }
            let results = run_suite(&tol, &args.only);
            if results.is_empty() {
                return Err(CliError::Usage(format!("no criterion matches {:?}", args.only)));
            }
            for r in &results {
                println!("{}", r.line());
            }
            let failed: Vec<String> = results.iter().filter(|r| !r.ok()).map(|r| r.name.to_string()).collect();
            println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verify { failed })
            }
        }
        Command::List => {
            for e in registry.iter() {
                println!("{:<10} {}", e.name(), e.description());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
