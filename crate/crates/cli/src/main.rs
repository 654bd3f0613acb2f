use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use tpn_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    let _ = lock.flush();
    ExitCode::from(code)
}
