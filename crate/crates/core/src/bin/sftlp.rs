use std::process::ExitCode;

fn main() -> ExitCode {
    sftlp::cli::run()
}
