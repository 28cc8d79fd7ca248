use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(elecwalk::cli::run(std::env::args()) as u8)
}
