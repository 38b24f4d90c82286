//! `topobreak` batch command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use topobreak::changepoint::Statistic;
use topobreak::harness::{self, CritvalsArgs, ExperimentConfig};
use topobreak::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "topobreak", version, about = "Change-point tests on persistence features of point-cloud series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the replication count of the command.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Output directory; defaults to the config's `output_dir`, else `out/<run_id>`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sublevel curve of the stability proxy and the fitted exponent.
    Stability,
    /// Simulated quantile tables of the null limit laws.
    Critvals {
        #[arg(long, value_delimiter = ',')]
        statistic: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        ell: Vec<usize>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Change-point test over replicated series.
    Test,
    /// Coupling profile and weighted partial sums.
    Approx {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Dump generated series (and diagrams when configured).
    Simulate,
}

const DEFAULT_GRID: usize = 4096;
const DEFAULT_CRITVAL_REPS: usize = 20_000;

fn load(global: &Global) -> Result<ExperimentConfig> {
    let path = global
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("this command needs --config <path>".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_dir(global: &Global, cfg_out: Option<&PathBuf>, run_id: &str) -> PathBuf {
    global
        .out
        .clone()
        .or_else(|| cfg_out.cloned())
        .unwrap_or_else(|| PathBuf::from("out").join(run_id))
}

fn execute(cli: Cli) -> Result<harness::RunManifest> {
    let g = &cli.global;
    match cli.command {
        Command::Stability => {
            let mut cfg = load(g)?;
            if let (Some(n), Some(st)) = (g.reps, cfg.stability.as_mut()) {
                st.n_samples = n;
            }
            harness::cmd_stability(&cfg, &out_dir(g, cfg.output_dir.as_ref(), &cfg.run_id))
        }
        Command::Critvals { statistic, ell, grid } => {
            let mut args = match &g.config {
                Some(_) => CritvalsArgs::from_config(&load(g)?)?,
                None => CritvalsArgs {
                    run_id: "critvals".into(),
                    statistics: vec![Statistic::Lambda, Statistic::Omega],
                    ell: vec![1],
                    grid: DEFAULT_GRID,
                    n_rep: DEFAULT_CRITVAL_REPS,
                    seed: g.seed.unwrap_or(0),
                },
            };
            if !statistic.is_empty() {
                args.statistics = statistic.iter().map(|s| s.parse()).collect::<Result<_>>()?;
            }
            if !ell.is_empty() {
                args.ell = ell;
            }
            if let Some(grid) = grid {
                args.grid = grid;
            }
            if let Some(n) = g.reps {
                args.n_rep = n;
            }
            let out = out_dir(g, None, &args.run_id);
            harness::cmd_critvals(&args, &out)
        }
        Command::Test => {
            let mut cfg = load(g)?;
            if let Some(n) = g.reps {
                cfg.replications = n;
            }
            cfg.validate()?;
            harness::cmd_test(&cfg, &out_dir(g, cfg.output_dir.as_ref(), &cfg.run_id))
        }
        Command::Approx { p, m_max } => {
            let mut cfg = load(g)?;
            if let Some(a) = cfg.approx.as_mut() {
                if let Some(p) = p {
                    a.p = p;
                }
                if let Some(m) = m_max {
                    a.m_max = m;
                }
                if let Some(n) = g.reps {
                    a.n_mc = n;
                }
            }
            harness::cmd_approx(&cfg, &out_dir(g, cfg.output_dir.as_ref(), &cfg.run_id))
        }
        Command::Simulate => {
            let mut cfg = load(g)?;
            if let Some(n) = g.reps {
                cfg.replications = n;
            }
            cfg.validate()?;
            harness::cmd_simulate(&cfg, &out_dir(g, cfg.output_dir.as_ref(), &cfg.run_id))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli) {
        Ok(manifest) => {
            for a in &manifest.artifacts {
                println!("{a}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
