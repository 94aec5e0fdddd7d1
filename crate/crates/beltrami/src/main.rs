use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(beltrami::run(std::env::args_os().collect()))
}
