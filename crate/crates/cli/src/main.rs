//! `gqaoa`: CSV front end for the grover-qaoa library.

mod commands;
mod config;
mod error;
mod figures;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::MaxcutMode;
use crate::config::Settings;
use crate::error::CliError;
use crate::figures::Figure;
use crate::output::Table;

#[derive(Parser, Debug)]
#[command(name = "gqaoa", version, about = "Grover-mixer QAOA analytics, written as CSV")]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grover probability P(ρ, r) over a grid of marked fractions.
    Pr,
    /// Optimal (or fixed `--t`) threshold report per layer count.
    Threshold,
    /// Threshold curve E_r(t) over a grid of thresholds.
    Curve,
    /// GM-Th optimum, bounds and CRS baseline per layer count.
    Sweep,
    /// Largest standard score of a threshold phase, C^Th(r).
    Cthr,
    /// The root x₁ of 2x = tan x and κ = 2sin²(x₁)/x₁.
    Kappa,
    /// Optimized GM-QAOA angles on the (discretized) law.
    Gmqaoa,
    /// Maximum-amplification bound report.
    Bound,
    /// Max-Cut on K_{n,n} or a small graph.
    Maxcut {
        #[arg(value_enum)]
        mode: MaxcutMode,
    },
    /// Expected minimum of classical random sampling.
    Crs,
    /// Series behind one figure.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let s = cli.settings.merge_config_file()?;
    let table: Table = match cli.command {
        Command::Pr => commands::pr(&s)?,
        Command::Threshold => commands::threshold(&s)?,
        Command::Curve => commands::curve(&s)?,
        Command::Sweep => commands::sweep(&s)?,
        Command::Cthr => commands::cthr(&s)?,
        Command::Kappa => commands::kappa_table(),
        Command::Gmqaoa => commands::gmqaoa(&s)?,
        Command::Bound => commands::bound(&s)?,
        Command::Maxcut { mode } => commands::maxcut(&s, mode)?,
        Command::Crs => commands::crs(&s)?,
        Command::Reproduce { figure } => figures::reproduce(&s, figure)?,
    };
    table.emit(s.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error: config: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
