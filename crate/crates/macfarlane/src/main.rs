use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(macfarlane::cli::run(std::env::args_os()))
}
