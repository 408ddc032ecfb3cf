//! Sequential real-to-complex transforms and the backend registry.
//!
//! Convention: forward `û_k = (1/N) Σ_x u(x) exp(-i k·x)`, inverse is the
//! unnormalized synthesis `u(x) = Σ_k û_k exp(+i k·x)` over the Hermitian
//! completion of the stored half spectrum. With this scaling the zero mode
//! equals the mean of the field.

mod line;
pub(crate) mod nd;
mod oracle;
mod plan;
mod stats;

use std::sync::Arc;

use parking_lot::Mutex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub use line::{DirectDft, Direction, LineTransform, RustFftLine};
pub use oracle::naive_dft_r2c;
pub use plan::{FftPlan, NORMALIZATION};
pub use stats::{compute_energy_k, compute_energy_x, compute_mean, init_random};

/// A source of one-dimensional transforms.
pub trait Backend: Send + Sync {
    fn id(&self) -> &'static str;

    fn line(&self, n: usize) -> Arc<dyn LineTransform>;
}

/// Row-column transforms built from direct 1D DFTs. Deterministic and
/// allocation-free after planning, but O(n) per output coefficient.
pub struct NaiveBackend;

impl Backend for NaiveBackend {
    fn id(&self) -> &'static str {
        "naive"
    }

    fn line(&self, n: usize) -> Arc<dyn LineTransform> {
        Arc::new(DirectDft::new(n))
    }
}

/// Row-column transforms over `rustfft` (mixed radix, Bluestein for large
/// primes).
pub struct FastBackend {
    planner: Mutex<FftPlanner<f64>>,
}

impl Default for FastBackend {
    fn default() -> Self {
        Self {
            planner: Mutex::new(FftPlanner::new()),
        }
    }
}

impl Backend for FastBackend {
    fn id(&self) -> &'static str {
        "fast"
    }

    fn line(&self, n: usize) -> Arc<dyn LineTransform> {
        Arc::new(RustFftLine::new(&mut self.planner.lock(), n))
    }
}

/// Registered backends in default-preference order.
pub const BACKENDS: &[&str] = &["fast", "naive"];

pub fn available_backends() -> Vec<&'static str> {
    BACKENDS.to_vec()
}

/// First entry of the preference order.
pub fn default_backend() -> &'static str {
    BACKENDS[0]
}

pub fn backend(id: &str) -> Result<Box<dyn Backend>> {
    match id {
        "fast" => Ok(Box::new(FastBackend::default())),
        "naive" => Ok(Box::new(NaiveBackend)),
        "default" => backend(default_backend()),
        other => Err(Error::BackendUnavailable(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        assert_eq!(backend("naive").unwrap().id(), "naive");
        assert_eq!(backend("default").unwrap().id(), "fast");
        assert!(matches!(backend("cufft"), Err(Error::BackendUnavailable(id)) if id == "cufft"));
    }
}
