use std::process::ExitCode;

fn main() -> ExitCode {
    mistrust_cli::main_with(std::env::args_os())
}
