use std::io::Write;
use std::process::ExitCode;

use xxz_cli::CliError;

fn main() -> ExitCode {
    match xxz_cli::run(std::env::args_os().collect()) {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            let written = match &outcome.out {
                Some(path) => std::fs::write(path, &outcome.text)
                    .map_err(|e| CliError::Io { path: path.display().to_string(), source: e }),
                None => std::io::stdout()
                    .write_all(outcome.text.as_bytes())
                    .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e }),
            };
            if let Err(e) = written {
                eprintln!("xxz: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e @ CliError::Clap(_)) => {
            if let CliError::Clap(inner) = &e {
                let _ = inner.print();
            }
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("xxz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
