use std::process::ExitCode;

fn main() -> ExitCode {
    moipnd::cli::main_entry()
}
