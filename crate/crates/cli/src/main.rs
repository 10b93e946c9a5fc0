mod args;
mod commands;
mod config;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format, OutputArgs};
use commands::CommandOutput;
use config::FileConfig;
use error::{CliError, EXIT_OK, EXIT_USAGE};

fn execute(command: &Command) -> Result<(CommandOutput, &OutputArgs, FileConfig), CliError> {
    let output = match command {
        Command::Certify(a) => &a.output,
        Command::Run(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Circuit(a) => &a.output,
        Command::Zeno(a) => &a.output,
    };
    let cfg = FileConfig::load(output.config.as_deref())?;
    let result = match command {
        Command::Certify(a) => commands::certify(a, &cfg)?,
        Command::Run(a) => commands::run(a, &cfg)?,
        Command::Sweep(a) => commands::sweep(a, &cfg)?,
        Command::Circuit(a) => commands::circuit(a, &cfg)?,
        Command::Zeno(a) => commands::zeno(a, &cfg)?,
    };
    Ok((result, output, cfg))
}

fn emit(result: &CommandOutput, output: &OutputArgs, cfg: &FileConfig) -> Result<(), CliError> {
    let format = cfg.get_enum(output.format, "format")?.unwrap_or(Format::Csv);
    let text = result.report.render(format);
    match cfg.get(output.out.clone(), "out")? {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return ExitCode::from(code as u8);
        }
    };
    let code = match execute(&cli.command).and_then(|(result, output, cfg)| {
        emit(&result, output, &cfg)?;
        Ok(result.exit_code)
    }) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qetlab: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
