use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::record::{median, BenchRecord, TransformDirection, Variant};
use crate::error::{Error, Result};

/// Strong-scaling speedups of every series for one `(dims, direction,
/// variant)` group:
///
/// `S_α(n_p) = n_p,min · T_fastest(n_p,min) / T_α(n_p)`
///
/// where `T` is the median time of `N` iterations and "fastest" is the
/// series with the smallest median at the smallest rank count. Ties go to
/// the lexicographically smallest series label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedupTable {
    pub dims: Vec<usize>,
    pub direction: TransformDirection,
    pub variant: Variant,
    pub n_p_min: usize,
    pub fastest_backend_at_min: String,
    /// series → n_p → median seconds for N iterations
    pub median_seconds: BTreeMap<String, BTreeMap<usize, f64>>,
    /// series → n_p → speedup
    pub speedup: BTreeMap<String, BTreeMap<usize, f64>>,
}

pub fn compute_speedup(records: &[BenchRecord]) -> Result<SpeedupTable> {
    let first = records
        .first()
        .ok_or_else(|| Error::EmptyInput("no benchmark records".into()))?;
    let mut samples: BTreeMap<String, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in records {
        r.validate()?;
        if r.dims != first.dims || r.direction != first.direction || r.variant != first.variant {
            return Err(Error::InvalidRecord(format!(
                "mixed groups: {:?}/{}/{} vs {:?}/{}/{}",
                first.dims, first.direction, first.variant, r.dims, r.direction, r.variant
            )));
        }
        samples
            .entry(r.series())
            .or_default()
            .entry(r.size)
            .or_default()
            .extend_from_slice(&r.elapsed_seconds);
    }
    let median_seconds: BTreeMap<String, BTreeMap<usize, f64>> = samples
        .into_iter()
        .map(|(s, by_np)| (s, by_np.into_iter().map(|(n, t)| (n, median(&t))).collect()))
        .collect();

    let n_p_min = median_seconds
        .values()
        .flat_map(|m| m.keys().copied())
        .min()
        .expect("at least one record");
    let mut fastest: Option<(&str, f64)> = None;
    for (series, by_np) in &median_seconds {
        if let Some(&t) = by_np.get(&n_p_min) {
            // BTreeMap order makes the first of equal times the lexicographic winner
            if fastest.is_none_or(|(_, best)| t < best) {
                fastest = Some((series, t));
            }
        }
    }
    let (fastest_series, t_ref) = fastest.expect("n_p_min comes from some series");

    // n_p,min · (T_ref / T) keeps S exact for the reference itself
    let scale = n_p_min as f64;
    let speedup = median_seconds
        .iter()
        .map(|(s, by_np)| {
            let row = by_np
                .iter()
                .map(|(&n, &t)| (n, scale * (t_ref / t)))
                .collect();
            (s.clone(), row)
        })
        .collect();

    Ok(SpeedupTable {
        dims: first.dims.clone(),
        direction: first.direction,
        variant: first.variant,
        n_p_min,
        fastest_backend_at_min: fastest_series.to_string(),
        median_seconds,
        speedup,
    })
}

/// One table per `(dims, direction, variant)` group, in sorted group order.
pub fn compute_speedup_tables(records: &[BenchRecord]) -> Result<Vec<SpeedupTable>> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no benchmark records".into()));
    }
    let mut groups: BTreeMap<(Vec<usize>, TransformDirection, Variant), Vec<BenchRecord>> =
        BTreeMap::new();
    for r in records {
        groups
            .entry((r.dims.clone(), r.direction, r.variant))
            .or_default()
            .push(r.clone());
    }
    groups.values().map(|g| compute_speedup(g)).collect()
}
