use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = crown_cli::run(std::env::args_os());
    print!("{}", result.stdout);
    eprint!("{}", result.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(result.exit_code as u8)
}
