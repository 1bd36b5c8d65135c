mod report;
mod tables;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{Report, RunConfig};

const DEFAULT_GRID: usize = 128;

#[derive(Parser)]
#[command(name = "amspace", version, about = "Curvature tables and verification suites for spaces of associated metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a table of computed constants next to their reference values.
    Tables {
        #[arg(value_enum)]
        table: TableId,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
        /// Write the table's sample field as CSV to this path.
        #[arg(long)]
        dump: Option<String>,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        group: verify::Group,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableId {
    SphereCurvature,
    TorusCurvature,
    Quotient,
    PointStructures,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

enum Failure {
    Usage(String),
    Run(String),
}

fn check_grid(n: usize) -> Result<(), Failure> {
    if n >= 32 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--grid must be a power of two >= 32, got {n}")))
    }
}

fn emit(report: &Report, out: Output) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    let res = match out {
        Output::Json => report.write_json(&mut w),
        Output::Csv => report.write_csv(&mut w),
    };
    res.and_then(|_| w.flush()).map_err(|e| Failure::Run(format!("writing output: {e}")))?;
    if out == Output::Csv {
        let s = report.summary;
        eprintln!("pass {} fail {} flagged {}", s.pass, s.fail, s.flagged);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Tables { table, grid, out, dump } => {
            if table != TableId::PointStructures {
                check_grid(grid)?;
            }
            let built = match table {
                TableId::SphereCurvature => tables::sphere_curvature(grid),
                TableId::TorusCurvature => tables::torus_curvature(grid),
                TableId::Quotient => tables::quotient(grid),
                TableId::PointStructures => tables::point_structures(),
            }
            .map_err(Failure::Run)?;
            if let Some(path) = &dump {
                let field = built.dump.as_ref().ok_or_else(|| Failure::Usage("this table has no field to dump".into()))?;
                let file = File::create(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
                let mut w = BufWriter::new(file);
                amspace::fields::write_dump(field, &mut w).and_then(|_| w.flush()).map_err(|e| Failure::Run(format!("{path}: {e}")))?;
            }
            let chart = match table {
                TableId::SphereCurvature => Some("sphere".to_string()),
                TableId::TorusCurvature | TableId::Quotient => Some("torus".to_string()),
                TableId::PointStructures => None,
            };
            let config = RunConfig {
                command: "tables".into(),
                suite: value_name(&table),
                chart,
                grid: [grid, grid],
                output: value_name(&out),
                seed: 0,
                dump,
            };
            let report = Report::new(config, built.rows);
            emit(&report, out)?;
            Ok(report.ok())
        }
        Command::Verify { group, seed, grid, out } => {
            check_grid(grid)?;
            let rows = verify::run(group, grid, seed).map_err(Failure::Run)?;
            let config = RunConfig {
                command: "verify".into(),
                suite: value_name(&group),
                chart: None,
                grid: [grid, grid],
                output: value_name(&out),
                seed,
                dump: None,
            };
            let report = Report::new(config, rows);
            emit(&report, out)?;
            Ok(report.ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
