use std::io::{self, Write};
use std::process::ExitCode;

use multiport::cli::{parse_args, run, Report};

fn main() -> ExitCode {
    let cmd = match parse_args(std::env::args_os().skip(1)) {
        Ok(cmd) => cmd,
        Err(e) => {
            if e.exit_code == 0 {
                print!("{}", e.message);
            } else {
                eprint!("{}", e.message);
            }
            return ExitCode::from(e.exit_code as u8);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = run(&cmd, Report::from_env(), &mut out, &mut io::stderr());
    let _ = out.flush();
    ExitCode::from(code as u8)
}
