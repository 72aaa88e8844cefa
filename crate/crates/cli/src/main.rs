use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use kext_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("kext: {e}");
            EXIT_USAGE
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
