use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let code = ccc_cli::commands::run_args(std::env::args_os().skip(1), &mut stdout);
    ExitCode::from(code as u8)
}
