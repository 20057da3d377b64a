use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mtd_bench::ordering::write_ordering_csv;
use mtd_bench::sweep::write_sweep_csv;
use mtd_bench::{first_guess_sweep, ordering_report, run_matrix, verify_suite, BenchError, ExperimentSpec, Mode, Options};

#[derive(Parser)]
#[command(name = "mtd-bench", version, about = "Node-count experiments and oracle verification for MTD search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the algorithm × position × depth matrix and write CSV.
    Run(Options),
    /// Check every cell against the brute-force oracle.
    Verify(Options),
    /// Tree size of MTD-f against its first-guess offset.
    Sweep(Options),
    /// First-move cutoff rates per ply.
    Ordering(Options),
}

/// `out.csv` becomes `out.rel.csv`.
fn relative_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.rel.csv"))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(command: Command) -> Result<(), BenchError> {
    let (options, mode) = match command {
        Command::Run(o) => (o, Mode::Run),
        Command::Verify(o) => (o, Mode::Verify),
        Command::Sweep(o) => (o, Mode::Sweep),
        Command::Ordering(o) => (o, Mode::Ordering),
    };
    let spec = ExperimentSpec::from_options(&options.resolve()?, mode)?;
    let csv = spec.csv.as_deref();
    match mode {
        Mode::Run => {
            let result = run_matrix(&spec)?;
            result.write_csv(output(csv)?)?;
            if let Some(p) = csv {
                result.write_relative_csv(File::create(relative_path(p))?)?;
            }
            if spec.verify {
                eprintln!("verified {} cells", result.verified_cells);
            }
        }
        Mode::Verify => {
            let result = verify_suite(&spec)?;
            if csv.is_some() {
                result.write_csv(output(csv)?)?;
            }
            println!("verified {} cells: all agree with the oracle", result.verified_cells);
        }
        Mode::Sweep => write_sweep_csv(&first_guess_sweep(&spec)?, output(csv)?)?,
        Mode::Ordering => write_ordering_csv(&ordering_report(&spec)?, output(csv)?)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
