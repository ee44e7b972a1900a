use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qzc::config::{Cli, RunConfig};
use qzc::{run, StdSink};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| run(&config, &mut StdSink));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qzc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
