use std::process::ExitCode;

fn main() -> ExitCode {
    shellgame::harness::cli::main()
}
