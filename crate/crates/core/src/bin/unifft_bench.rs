use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use unifft::bench::{
    emit_report, run_bench, BenchRecord, Report, RunKind, TransformDirection, Variant,
};
use unifft::cli::{failure, invalid, parse_dims, parse_format_list, parse_lengths};
use unifft::decomp::{are_parameters_bad, run_spmd, DecompKind, DistPlan};
use unifft::{available_backends, FftPlan, GridSpec, Result};

/// Times forward and inverse transforms for every backend and rank count
/// and writes speedup reports.
#[derive(Parser, Debug)]
#[command(name = "unifft-bench", version)]
struct Args {
    /// Global grid shape, e.g. 128x128x128
    #[arg(long)]
    dims: String,
    /// Domain lengths, e.g. 6.28,6.28,6.28 (default 2π per axis)
    #[arg(long)]
    lengths: Option<String>,
    /// Backend to benchmark; repeatable (default: all available)
    #[arg(long = "backend")]
    backends: Vec<String>,
    /// seq, slab or pencil
    #[arg(long, default_value = "seq")]
    kind: RunKind,
    /// Number of processes; repeatable (default: 1)
    #[arg(long = "np")]
    nps: Vec<usize>,
    /// Transform calls per measurement
    #[arg(long, default_value_t = 20)]
    iterations: usize,
    /// Measurements per configuration
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Seed of the random input field
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing)
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    /// Comma-separated subset of json,csv,svg
    #[arg(long, default_value = "json,csv,svg")]
    formats: String,
}

fn bench_all<F>(mut run: F) -> Result<Vec<BenchRecord>>
where
    F: FnMut(TransformDirection, Variant) -> Result<BenchRecord>,
{
    let mut out = Vec::new();
    for direction in TransformDirection::ALL {
        for variant in Variant::ALL {
            out.push(run(direction, variant)?);
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let args = Args::parse();

    let dims = match parse_dims(&args.dims) {
        Ok(d) => d,
        Err(e) => return invalid(e),
    };
    let lengths = match &args.lengths {
        Some(s) => match parse_lengths(s) {
            Ok(l) => l,
            Err(e) => return invalid(e),
        },
        None => vec![std::f64::consts::TAU; dims.len()],
    };
    let grid = match GridSpec::new(&dims, &lengths) {
        Ok(g) => g,
        Err(e) => return invalid(e),
    };
    let formats = match parse_format_list(&args.formats) {
        Ok(f) => f,
        Err(e) => return invalid(e),
    };
    let backends: Vec<String> = if args.backends.is_empty() {
        available_backends().iter().map(|s| s.to_string()).collect()
    } else {
        args.backends.clone()
    };
    if let Some(b) = backends
        .iter()
        .find(|b| !available_backends().contains(&b.as_str()))
    {
        return invalid(format!("backend `{b}` is not available"));
    }
    let nps = if args.nps.is_empty() {
        vec![1]
    } else {
        args.nps.clone()
    };
    if args.iterations == 0 || args.repeats == 0 {
        return invalid("--iterations and --repeats must be at least 1");
    }
    let decomp = match args.kind {
        RunKind::Seq => {
            if nps.iter().any(|&n| n != 1) {
                return invalid("--kind seq only runs with --np 1");
            }
            None
        }
        RunKind::Slab => Some(DecompKind::Slab),
        RunKind::Pencil => Some(DecompKind::Pencil),
    };
    if let Some(kind) = decomp {
        if let Some(&n) = nps.iter().find(|&&n| are_parameters_bad(kind, &dims, n)) {
            return invalid(format!(
                "cannot decompose {dims:?} over {n} processes ({kind})"
            ));
        }
    }

    let mut records = Vec::new();
    for backend in &backends {
        for &np in &nps {
            let result = match decomp {
                None => FftPlan::create(backend, &grid).and_then(|plan| {
                    bench_all(|d, v| {
                        run_bench(&plan, d, v, args.iterations, args.repeats, args.seed)
                    })
                }),
                Some(kind) => run_spmd(np, |ctx| {
                    let plan = DistPlan::create(backend, &grid, kind, ctx)?;
                    bench_all(|d, v| {
                        run_bench(&plan, d, v, args.iterations, args.repeats, args.seed)
                    })
                })
                .map(|mut per_rank| per_rank.swap_remove(0)),
            };
            match result {
                Ok(r) => {
                    for rec in &r {
                        eprintln!(
                            "{:>12} {:>5} np={:<3} {:<9} median {:.3e} s",
                            rec.series(),
                            rec.direction,
                            rec.size,
                            rec.variant,
                            unifft::bench::median_time(rec)
                        );
                    }
                    records.extend(r);
                }
                Err(e) => return failure(&e),
            }
        }
    }

    let written = Report::from_records(records).and_then(|r| emit_report(&r, &args.out, &formats));
    match written {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => failure(&e),
    }
}
