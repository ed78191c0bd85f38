use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weakform::harness::{dump_repro, emit, load_config, run_experiment, Format, Kind};
use weakform::{Error, Exec};

#[derive(Parser)]
#[command(
    name = "weakform",
    version,
    about = "Desk-scale experiments on abstraction layers and task learning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every task of each environment, with utility and policy counts.
    Enumerate(Common),
    /// Learn from sampled example sets and test generalisation.
    Learn(Common),
    /// Exhaustive sample efficiency between proxy pairs.
    CompareProxies(Common),
    /// Utility of a task under candidate vocabularies.
    Utility(Common),
    /// Check the max-utility, max-weakness recipe against exhaustive probabilities.
    VerifyBound(Common),
    /// Draw tasks uniformly from the task space.
    SampleGen(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Run with this single seed instead of the configured ones.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path (`-` for standard output).
    #[arg(long)]
    out: Option<String>,
    /// Report format: csv or json.
    #[arg(long)]
    format: Option<Format>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Command {
    fn split(self) -> (Kind, Common) {
        match self {
            Command::Enumerate(c) => (Kind::Enumerate, c),
            Command::Learn(c) => (Kind::Learn, c),
            Command::CompareProxies(c) => (Kind::CompareProxies, c),
            Command::Utility(c) => (Kind::Utility, c),
            Command::VerifyBound(c) => (Kind::VerifyBound, c),
            Command::SampleGen(c) => (Kind::SampleGen, c),
        }
    }
}

fn exec_for(jobs: Option<usize>) -> Result<Exec, Error> {
    match jobs {
        Some(0) => Err(Error::Config("--jobs must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Exec::Sequential),
        None => Ok(Exec::default()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let (kind, args) = Cli::parse().command.split();
    let mut config = match load_config(&args.config, Some(kind)) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Some(seed) = args.seed {
        config.seeds = vec![seed];
    }
    if let Some(out) = args.out {
        config.output.path = out;
    }
    if let Some(format) = args.format {
        config.output.format = format;
    }
    let exec = match exec_for(args.jobs) {
        Ok(e) => e,
        Err(e) => return fail(&e),
    };
    let result = run_experiment(&config, exec)
        .and_then(|out| emit(&config, &out, &config.output.path, config.output.format));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Invariant(_)) => {
            let root = match config.output.path.as_str() {
                "-" => PathBuf::from("."),
                p => Path::new(p)
                    .parent()
                    .filter(|d| !d.as_os_str().is_empty())
                    .map_or_else(|| PathBuf::from("."), Path::to_path_buf),
            };
            match dump_repro(&config, &e, &root) {
                Ok(dir) => eprintln!("repro bundle written to {}", dir.display()),
                Err(d) => eprintln!("could not write repro bundle: {d}"),
            }
            fail(&e)
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("weakform: {e}");
    ExitCode::from(e.exit_code() as u8)
}
