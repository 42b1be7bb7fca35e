use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = apnlab_cli::run(&argv);
    // A closed stdout (e.g. piped into `head`) is not an error of the command.
    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.render());
    ExitCode::from(outcome.exit_code())
}
