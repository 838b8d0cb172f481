mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::Outcome;
use tracefn_core::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_ASSERTION: u8 = 3;
const EXIT_CAPACITY: u8 = 4;
const EXIT_OTHER: u8 = 1;

fn run(cli: &Cli) -> tracefn_core::Result<Outcome> {
    let seed = cli.global.seed;
    match &cli.command {
        Command::Identities { q } => commands::identities(*q, seed),
        Command::Bounds { q, family } => commands::bounds(*q, family, seed),
        Command::Satotate { family, q } => commands::satotate(*family, q, seed),
        Command::Vdc { p, q, n_grid } => commands::vdc(*p, *q, n_grid, seed),
        Command::Burgess {
            q,
            l,
            big_b,
            character,
            from_zero,
        } => commands::burgess(*q, *l, *big_b, *character, *from_zero, seed),
        Command::Abshift { family, q, m, n, l } => commands::abshift(family, *q, *m, *n, *l, seed),
        Command::Dap { k, x, q, a } => commands::dap(*k, *x, *q, *a, seed),
        Command::Primesum { family, q, x } => commands::primesum(family, *q, *x, seed),
        Command::Calibrate {
            suite,
            q_grid,
            manifest,
        } => commands::calibrate(suite, q_grid, manifest, seed),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::InvalidArgument(_) | Error::InvalidModulus { .. } | Error::ModulusMismatch { .. } => EXIT_USAGE,
        Error::BoundViolation { .. } => EXIT_ASSERTION,
        _ => EXIT_OTHER,
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> tracefn_core::Result<()> {
    match &cli.global.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            output::write(outcome, cli.global.out, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            output::write(outcome, cli.global.out, stdout.lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_OTHER);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&cli, &outcome) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_OTHER);
    }
    if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &outcome.failures {
            eprintln!("assertion failed: {f}");
        }
        ExitCode::from(EXIT_ASSERTION)
    }
}
