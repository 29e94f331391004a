use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use extremal::cli::EXIT_USAGE;
use extremal::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.global.out.clone();
    match run(cli) {
        Ok(output) => {
            let written = match &out_path {
                Some(path) => std::fs::write(path, &output.body),
                None => std::io::stdout().write_all(output.body.as_bytes()),
            };
            if let Err(e) = written.or_else(|e| if e.kind() == std::io::ErrorKind::BrokenPipe { Ok(()) } else { Err(e) }) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
            ExitCode::from(output.code as u8)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code as u8)
        }
    }
}
