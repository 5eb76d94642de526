mod args;
mod cmd;
mod input;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};
use output::CliError;

fn main() {
    let code = run(std::env::args_os());
    std::io::stdout().flush().ok();
    std::process::exit(code);
}

fn run(argv: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            e.print().ok();
            return code;
        }
    };
    if !(cli.global.tol > 0.0 && cli.global.tol.is_finite()) {
        return fail(&CliError::Usage("--tol must be positive".into()));
    }
    if cli.global.jobs == 0 {
        return fail(&CliError::Usage("--jobs must be at least 1".into()));
    }
    let (name, outcome) = cmd::dispatch(&cli);
    match outcome {
        Ok(out) => {
            let text = match cli.global.format {
                Format::Human => out.render_human(),
                Format::Machine => out.render_machine(name),
            };
            print!("{text}");
            out.status.exit_code()
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}
