use std::io::Write;
use std::process::ExitCode;

use vinberg::cli;

fn main() -> ExitCode {
    let max_weight = std::env::var(cli::MAX_WEIGHT_VAR).ok();
    let outcome = cli::dispatch(std::env::args_os(), max_weight.as_deref());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
