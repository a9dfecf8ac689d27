use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(enneper::cli::run_from_env())
}
