use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = cantor::cli::run(std::env::args_os());
    let written = if out.code == 0 {
        std::io::stdout().write_all(out.text.as_bytes())
    } else {
        std::io::stderr().write_all(out.text.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(out.code as u8)
}
