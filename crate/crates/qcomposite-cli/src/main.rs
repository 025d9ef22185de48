mod cli;
mod commands;
mod config;
mod errors;
mod output;

use clap::Parser;

use cli::{Cli, Command, ConnectivityCommand, OptimalQCommand, ReplicationCommand, SimulateCommand};
use errors::CliError;

fn main() {
    let parsed = Cli::parse();
    if let Err(err) = run(&parsed) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(parsed: &Cli) -> Result<(), CliError> {
    match &parsed.command {
        Command::Resilience(args) => commands::resilience::run(args),
        Command::OptimalQ(OptimalQCommand::Capture(args)) => commands::optimal_q::run_capture(args),
        Command::OptimalQ(OptimalQCommand::Budget(args)) => commands::optimal_q::run_budget(args),
        Command::Connectivity(ConnectivityCommand::Critical(args)) => {
            commands::connectivity::run_critical(args)
        }
        Command::Connectivity(ConnectivityCommand::Simulate(args)) => {
            commands::connectivity::run_simulate(args)
        }
        Command::Simulate(SimulateCommand::Compromise(args)) => {
            commands::simulate::run_compromise(args)
        }
        Command::Simulate(SimulateCommand::Replication(args)) => {
            commands::simulate::run_replication(args)
        }
        Command::Replication(ReplicationCommand::Plan(args)) => {
            commands::replication_plan::run(args)
        }
        Command::Experiment(args) => commands::experiment::run(args),
    }
}
