use std::io::Write;
use std::process::ExitCode;

use quartic_a3::cli::{self, RunConfig, EXIT_USAGE};

fn main() -> ExitCode {
    let cfg = match <RunConfig as clap::Parser>::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let out = cli::run(&cfg);
    let written = match (&cfg.output, out.status) {
        (Some(path), s) if s != EXIT_USAGE => std::fs::write(path, &out.rendered),
        _ if out.status == EXIT_USAGE => {
            let _ = std::io::stderr().write_all(out.rendered.as_bytes());
            Ok(())
        }
        _ => std::io::stdout().write_all(out.rendered.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(out.status as u8)
}
