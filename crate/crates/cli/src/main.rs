use std::io::Write;

use clap::Parser;
use satmod_cli::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {f}");
            f.code
        }
    };
    let _ = out.flush();
    std::process::exit(code);
}
