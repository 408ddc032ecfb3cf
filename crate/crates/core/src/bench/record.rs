use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Call variant being timed.
///
/// `core_into` calls the raw-buffer transform, `api_into` the validated
/// field API writing into a caller-owned output, `api_alloc` the field API
/// returning a fresh output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    CoreInto,
    ApiInto,
    ApiAlloc,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::CoreInto, Variant::ApiInto, Variant::ApiAlloc];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::CoreInto => "core_into",
            Variant::ApiInto => "api_into",
            Variant::ApiAlloc => "api_alloc",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformDirection {
    Fft,
    Ifft,
}

impl TransformDirection {
    pub const ALL: [TransformDirection; 2] = [TransformDirection::Fft, TransformDirection::Ifft];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformDirection::Fft => "fft",
            TransformDirection::Ifft => "ifft",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    Seq,
    Slab,
    Pencil,
}

impl RunKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RunKind::Seq => "seq",
            RunKind::Slab => "slab",
            RunKind::Pencil => "pencil",
        }
    }
}

impl FromStr for RunKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "seq" => Ok(RunKind::Seq),
            "slab" => Ok(RunKind::Slab),
            "pencil" => Ok(RunKind::Pencil),
            other => Err(format!(
                "unknown kind `{other}` (expected seq, slab or pencil)"
            )),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for TransformDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for RunKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One benchmark configuration: `elapsed_seconds[r]` is the wall-clock time
/// of `iterations` consecutive calls in repeat `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub backend_id: String,
    pub variant: Variant,
    pub direction: TransformDirection,
    pub dims: Vec<usize>,
    pub kind: RunKind,
    pub size: usize,
    pub iterations: usize,
    pub elapsed_seconds: Vec<f64>,
}

impl BenchRecord {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidRecord("iterations must be at least 1".into()));
        }
        if self.size == 0 {
            return Err(Error::InvalidRecord("rank count must be at least 1".into()));
        }
        if self.elapsed_seconds.is_empty() {
            return Err(Error::InvalidRecord("no measurements".into()));
        }
        if let Some(t) = self
            .elapsed_seconds
            .iter()
            .find(|t| !(t.is_finite() && **t > 0.0))
        {
            return Err(Error::InvalidRecord(format!("non-positive time {t}")));
        }
        Ok(())
    }

    /// Label of the implementation this record belongs to, e.g. `fast/slab`.
    pub fn series(&self) -> String {
        format!("{}/{}", self.backend_id, self.kind)
    }
}

/// Median of `values`; the mean of the two central values for even counts.
/// NaN for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

pub fn median_time(record: &BenchRecord) -> f64 {
    median(&record.elapsed_seconds)
}
