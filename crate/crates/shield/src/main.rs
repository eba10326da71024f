use clap::error::ErrorKind;
use clap::Parser;

use graphshield::cli::{self, Cli};

fn main() {
    let code = match Cli::try_parse() {
        Ok(parsed) => match cli::run(parsed) {
            Ok(()) => 0,
            Err(err) => {
                eprintln!("error: {err}");
                err.exit_code()
            }
        },
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                0
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}
