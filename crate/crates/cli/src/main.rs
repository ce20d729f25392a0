use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code =
        geogate_cli::app::run_with(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code)
}
