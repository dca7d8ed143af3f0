use std::process::ExitCode;

fn main() -> ExitCode {
    edgepart::cli::main()
}
