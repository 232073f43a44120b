use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use microswarm::io::{cmd_abm, cmd_compare, cmd_run, cmd_sweep, config_to_toml, load_config};
use microswarm::{paper_preset, three_state_preset, Result, ScenarioConfig};

#[derive(Parser, Debug)]
#[command(name = "microswarm", version, about = "Chemotactic micro-robot swarm simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML configuration overlaid on the default preset
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Override the final time
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,

    /// Override the number of grid cells
    #[arg(long)]
    cells: Option<usize>,

    /// Replace existing output files
    #[arg(long)]
    force: bool,
}

impl Common {
    fn config(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => paper_preset(),
        };
        if let Some(t) = self.t_end {
            cfg = cfg.with_t_end(t);
        }
        if let Some(n) = self.cells {
            cfg = cfg.with_cells(n);
        }
        for w in cfg.validate()? {
            eprintln!("warning: {w}");
        }
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write snapshots.csv and metrics.csv
    Run(Common),
    /// Aggregation time as a function of drift speed (sweep.csv)
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Drift speeds, ascending
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.025, 0.05, 0.1, 0.2, 0.4])]
        vd: Vec<f64>,
        /// Target vicinity fractions
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.3, 0.5])]
        n0: Vec<f64>,
    },
    /// Free diffusion vs. gradient following with and without signalling
    Compare(Common),
    /// Agent-based run compared against the PDE
    Abm {
        #[command(flatten)]
        common: Common,
        /// Number of agents
        #[arg(long, default_value_t = 100_000)]
        agents: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print a preset configuration as TOML
    Preset {
        /// The three-state search / communicate / disperse controller
        #[arg(long)]
        three_state: bool,
    },
}

fn report(paths: Vec<PathBuf>) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(c) => report(cmd_run(&c.config()?, &c.out, c.force)?),
        Command::Sweep { common, vd, n0 } => report(cmd_sweep(&common.config()?, &vd, &n0, &common.out, common.force)?),
        Command::Compare(c) => report(cmd_compare(&c.config()?, &c.out, c.force)?),
        Command::Abm { common, agents, seed } => {
            report(cmd_abm(&common.config()?, agents, seed, &common.out, common.force)?)
        }
        Command::Preset { three_state } => {
            let cfg = if three_state { three_state_preset() } else { paper_preset() };
            print!("{}", config_to_toml(&cfg));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error kind=usage message={first:?}");
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error kind={} message={msg:?}", e.kind());
            ExitCode::FAILURE
        }
    }
}
