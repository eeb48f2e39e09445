//! `mellin-pw` command-line front end.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::Output;

fn emit(cli: &Cli, out: &Output) -> Result<(), mellin_pw::Error> {
    let bytes = match cli.format {
        Format::Json => {
            let doc = mellin_pw::io::document(out.kind, &out.data)?;
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Table => out.table.clone().into_bytes(),
        Format::Csv => match &out.csv {
            Some(c) => c.clone(),
            None => {
                return Err(mellin_pw::Error::InvalidParameter(format!(
                    "`{}` has no CSV form; use --format json or table",
                    out.kind
                )))
            }
        },
    };
    match &cli.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

fn code(e: &mellin_pw::Error) -> ExitCode {
    if e.is_numerical() {
        ExitCode::from(3)
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return code(&e);
        }
    };
    if let Err(e) = emit(&cli, &out) {
        eprintln!("error: {e}");
        return code(&e);
    }
    if out.failed {
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
