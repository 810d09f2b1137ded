use std::process::ExitCode;

fn main() -> ExitCode {
    tvp_bilevel::cli::main_from_env()
}
