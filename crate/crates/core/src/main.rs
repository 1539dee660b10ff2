use std::process::ExitCode;

fn main() -> ExitCode {
    knaster_core::cli::run(std::env::args_os())
}
