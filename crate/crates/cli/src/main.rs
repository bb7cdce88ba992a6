//! `vertexlab` command-line front end.

mod commands;

use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout().lock();
    let code = commands::run(&args, &mut std::io::stdin().lock(), &mut stdout);
    ExitCode::from(code)
}
