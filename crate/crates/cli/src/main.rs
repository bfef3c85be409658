mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("FQZEROS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let format = cli.format.unwrap_or(match cli.command {
        Command::Table(_) => Format::Csv,
        _ => Format::Text,
    });
    let result = match &cli.command {
        Command::Bound(a) => commands::bound(a, format),
        Command::Construct(a) => commands::construct(a, format),
        Command::Count(a) => commands::count(a, format),
        Command::Classify(a) => commands::classify(a, format),
        Command::Search(a) => commands::search(a, format),
        Command::Verify(a) => commands::verify(a, format),
        Command::Table(a) => commands::table(a, format),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
