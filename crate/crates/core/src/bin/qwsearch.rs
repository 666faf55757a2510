use std::process::ExitCode;

fn main() -> ExitCode {
    qwsearch::cli::main_with_args(std::env::args_os())
}
