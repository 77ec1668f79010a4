mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ffmc_core::verify::VerifyConfig;
use ffmc_core::Error;

use args::{Cli, Command};
use commands::{Outcome, VerifyArgs};

const EXIT_FAILED: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_DOMAIN,
    }
}

fn run(cli: &Cli) -> ffmc_core::Result<Outcome> {
    let cfg = VerifyConfig {
        budget: cli.budget,
        jobs: cli.jobs.map(|j| j as usize),
    };
    match &cli.command {
        Command::Census { formula, params, degrees, t } => {
            commands::census(*formula, params, degrees, *t, cli.pretty)
        }
        Command::Analyze { verb, path, f } => commands::analyze(*verb, path, f, cli.budget, cli.pretty),
        Command::Verify {
            experiment,
            all_desk,
            params,
            max_degree,
            sampling,
            instances,
            per_pair,
            format,
        } => commands::verify(
            &VerifyArgs {
                experiment: *experiment,
                all_desk: *all_desk,
                params,
                max_degree: *max_degree,
                sampling,
                instances: *instances,
                per_pair: *per_pair,
                format: *format,
            },
            &cfg,
            cli.pretty,
        ),
        Command::Sample { params, sampling } => commands::sample(params, sampling, &cfg, cli.pretty),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let text = if out.text.ends_with('\n') { out.text } else { out.text + "\n" };
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_FAILED);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
