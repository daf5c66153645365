//! `sdof-lab`: exact SDoF values, grid checks, rate sweeps and binning
//! equivocation tables.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{BinningArgs, Overrides, Status};
use sdof_core::AntennaConfig;

#[derive(Parser, Debug)]
#[command(name = "sdof-lab", version, about = "Secure degrees of freedom of the two-user MIMO wiretap MAC")]
struct Cli {
    /// Base random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo trials (`simulate`).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Fraction of power spent on jamming (`simulate`).
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Output file; CSV goes to stdout when omitted (except `simulate`,
    /// which falls back to the config's `output_path`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat jamming as known to the eavesdroppers (`simulate`).
    #[arg(long, global = true)]
    no_jamming: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the exact sum SDoF, case and converse terms.
    Sdof { m1: usize, m2: usize, n: usize, ne: usize },
    /// Check achievability against the converse on every canonical config.
    GridVerify { max: usize },
    /// Monte-Carlo secrecy-rate sweep from a JSON experiment file.
    Simulate { config: PathBuf },
    /// Exact equivocation of random-binning codes over an erasure channel.
    Binning {
        #[arg(long = "n", value_delimiter = ',', default_value = "4,8,12")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.75)]
        rate_total: f64,
        #[arg(long, default_value_t = 0.25)]
        rate_secret: f64,
        /// Number of code seeds, counted up from `--seed`.
        #[arg(long, default_value_t = 10)]
        seeds: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let ov = Overrides {
        seed: cli.seed,
        trials: cli.trials,
        alpha: cli.alpha,
        out: cli.out,
        no_jamming: cli.no_jamming,
    };
    match cli.cmd {
        Cmd::Sdof { m1, m2, n, ne } => {
            let (report, status) = commands::sdof(AntennaConfig::new(m1, m2, n, ne))?;
            print!("{report}");
            Ok(status)
        }
        Cmd::GridVerify { max } => commands::grid_verify(max, &ov),
        Cmd::Simulate { config } => commands::simulate(&config, &ov),
        Cmd::Binning { n_list, delta, rate_total, rate_secret, seeds } => {
            commands::binning(&BinningArgs { n_list, delta, rate_total, rate_secret, seeds }, &ov)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
