mod cli;
mod commands;
mod error;
mod files;
mod settings;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use commands::Context;
use error::{CliError, CliResult};
use settings::Settings;

fn run(cli: &Cli) -> CliResult<String> {
    let settings = Settings::load(cli.config.as_deref())?;
    let ctx = Context::new(settings, cli.seed);
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a, &ctx),
        Command::Localize(a) => commands::localize(a, &ctx),
        Command::Estimate(a) => commands::estimate(a, &ctx),
        Command::Evaluate(a) => commands::evaluate_cmd(a, &ctx),
        Command::Pipeline(a) => commands::pipeline(a, &ctx),
    }
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::usage(e.render().to_string().trim_end())),
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(error::EXIT_IO as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
