use std::process::ExitCode;

fn main() -> ExitCode {
    intercomm::cli::main()
}
