use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(convcode::cli::run(std::env::args()) as u8)
}
