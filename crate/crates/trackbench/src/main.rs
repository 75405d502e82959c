use std::process::ExitCode;

fn main() -> ExitCode {
    trackbench::cli::run()
}
