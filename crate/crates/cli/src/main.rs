use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use fmsel_cli::commands::{cmd_eval, cmd_gen, cmd_sweep, EvalArgs, GenArgs, SweepArgs};
use fmsel_cli::config::merge_config_args;
use fmsel_cli::CliError;

/// Feature selection for imbalanced data by F-measure optimization.
#[derive(Parser, Debug)]
#[command(name = "fmsel", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic imbalanced dataset plus a split manifest
    Gen(GenArgs),
    /// Sweep the cost range per lambda, select the best model, rank features
    Sweep(SweepArgs),
    /// Evaluate selected subsets downstream against the equal-cost baseline
    Eval(EvalArgs),
}

fn run(args: Vec<OsString>) -> fmsel_cli::Result<()> {
    let args = merge_config_args(args)?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err)
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) =>
        {
            print!("{err}");
            return Ok(());
        }
        Err(err) => return Err(CliError::Usage(err.to_string())),
    };
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Eval(args) => cmd_eval(&args),
    }
}

fn main() {
    match run(std::env::args_os().collect()) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("fmsel: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
