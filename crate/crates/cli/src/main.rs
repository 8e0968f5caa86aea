use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use doldkit_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli, &mut io::stdin().lock()) {
        Ok((rendered, notices, code)) => {
            for n in notices {
                eprintln!("note: {n}");
            }
            print!("{rendered}");
            let _ = io::stdout().flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
