use std::process::ExitCode;

fn main() -> ExitCode {
    syndec::cli::run()
}
