use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use unifft::bench::{emit_report, load_records, Report};
use unifft::cli::{failure, invalid, parse_format_list};

/// Recomputes speedup tables from benchmark JSON reports.
#[derive(Parser, Debug)]
#[command(name = "unifft-bench-analysis", version)]
struct Args {
    /// Directory holding report JSON files
    #[arg(long = "in")]
    input: PathBuf,
    /// Output directory (created if missing)
    #[arg(long, default_value = "bench-analysis")]
    out: PathBuf,
    /// Comma-separated subset of json,csv,svg
    #[arg(long, default_value = "json,csv,svg")]
    formats: String,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let formats = match parse_format_list(&args.formats) {
        Ok(f) => f,
        Err(e) => return invalid(e),
    };
    if !args.input.is_dir() {
        return invalid(format!("{} is not a directory", args.input.display()));
    }
    let result = load_records(&args.input)
        .and_then(Report::from_records)
        .and_then(|r| {
            for t in &r.tables {
                eprintln!(
                    "{:?} {} {}: fastest at n_p={} is {}",
                    t.dims, t.direction, t.variant, t.n_p_min, t.fastest_backend_at_min
                );
            }
            emit_report(&r, &args.out, &formats)
        });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => failure(&e),
    }
}
