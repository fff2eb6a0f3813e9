use std::process::ExitCode;

use clap::Parser;
use phasediscrim_cli::commands::{run_cli, Cli};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => ExitCode::from(run_cli(cli)),
        Err(e) => {
            let _ = e.print();
            // usage errors share exit code 1 with other bad input
            ExitCode::from(u8::from(e.use_stderr()))
        }
    }
}
