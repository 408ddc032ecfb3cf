//! Real-to-complex FFTs on 2D and 3D periodic grids behind a common plan
//! interface, with slab and pencil decompositions over an in-process
//! message-passing executor, pseudo-spectral operators, and a strong-scaling
//! benchmark harness.

pub mod bench;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod fft;
pub mod grid;
pub mod operators;

pub use error::{Error, Result};
pub use fft::{
    available_backends, compute_energy_k, compute_energy_x, compute_mean, default_backend,
    init_random, naive_dft_r2c, FftPlan,
};
pub use grid::{GridSpec, RealField, SpectralField};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
