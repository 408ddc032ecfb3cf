//! Argument parsing shared by the command-line tools.

use std::collections::BTreeSet;
use std::process::ExitCode;

use crate::bench::{parse_formats, ReportFormat};
use crate::error::Error;

/// Exit status for invalid parameters.
pub const EXIT_INVALID: u8 = 2;
/// Exit status for failures while running.
pub const EXIT_FAILURE: u8 = 1;

/// Parses `N0xN1[xN2]`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(['x', 'X'])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad dimension `{p}`: {e}"))
        })
        .collect()
}

/// Parses `L0,L1[,L2]`.
pub fn parse_lengths(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad length `{p}`: {e}"))
        })
        .collect()
}

pub fn parse_format_list(s: &str) -> Result<BTreeSet<ReportFormat>, String> {
    let f = parse_formats(s)?;
    if f.is_empty() {
        return Err("no output format given".into());
    }
    Ok(f)
}

pub fn invalid(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID)
}

pub fn failure(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    let mut source = std::error::Error::source(err);
    while let Some(s) = source {
        eprintln!("  caused by: {s}");
        source = s.source();
    }
    ExitCode::from(EXIT_FAILURE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_lengths() {
        assert_eq!(parse_dims("16x16x16").unwrap(), vec![16, 16, 16]);
        assert_eq!(parse_dims("8x4").unwrap(), vec![8, 4]);
        assert!(parse_dims("8x").is_err());
        assert_eq!(parse_lengths("1,2.5").unwrap(), vec![1.0, 2.5]);
        assert!(parse_lengths("1,a").is_err());
        assert!(parse_format_list("").is_err());
    }
}
