use clap::error::ErrorKind;
use clap::Parser;
use waring_cli::{execute, Cli, CliError, RunConfig};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let error = CliError::Usage(e.kind().to_string());
            println!(
                "{}",
                serde_json::to_string_pretty(&error.report()).expect("error reports serialize")
            );
            let _ = e.print();
            std::process::exit(error.exit_code());
        }
    };
    std::process::exit(execute(&RunConfig::from_cli(cli)));
}
