//! Benchmark harness: timing of the three call variants, median
//! aggregation, strong-scaling speedups and report files.

mod record;
mod report;
mod run;
mod speedup;

pub use record::{median, median_time, BenchRecord, RunKind, TransformDirection, Variant};
pub use report::{
    emit_report, load_records, parse_formats, to_csv, to_svg, Report, ReportFormat, CSV_FILE,
    JSON_FILE, SCHEMA,
};
pub use run::{run_bench, Benchable};
pub use speedup::{compute_speedup, compute_speedup_tables, SpeedupTable};
