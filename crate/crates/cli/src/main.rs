use std::process::ExitCode;

use brauer_cli::request::Format;
use brauer_cli::{execute, parse_request, CliError};

fn main() -> ExitCode {
    let request = match parse_request(std::env::args_os()) {
        Ok(r) => r,
        Err(CliError::Flags(e)) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(CliError::Flags(e)) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = execute(&request);
    match request.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}
