use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{hermitian_weight, GridSpec, RealField, SpectralField};

/// Uniform values in `[-1, 1)` from a ChaCha8 stream seeded with `seed`.
pub fn init_random(grid: &GridSpec, seed: u64) -> RealField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..grid.num_points())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    RealField::new(grid.clone(), data).expect("length matches grid")
}

/// Sum of the stored values divided by the global point count.
///
/// For a whole field this is the arithmetic mean; for a local block it is
/// the block's contribution to the global mean.
pub fn compute_mean(field: &RealField) -> f64 {
    field.data().iter().sum::<f64>() / field.grid().num_points() as f64
}

/// `0.5 * mean(u²)`, with the same block semantics as [`compute_mean`].
pub fn compute_energy_x(field: &RealField) -> f64 {
    0.5 * field.data().iter().map(|u| u * u).sum::<f64>() / field.grid().num_points() as f64
}

/// `0.5 * Σ w_k |û_k|²` over stored modes, `w_k` being the Hermitian weight
/// of the mode's last-axis index.
pub fn compute_energy_k(field: &SpectralField) -> f64 {
    let n_last = *field.grid().dims().last().unwrap();
    let nl = *field.shape().last().unwrap();
    if nl == 0 {
        return 0.0;
    }
    let off = *field.offset().last().unwrap();
    let weights: Vec<f64> = (0..nl).map(|j| hermitian_weight(off + j, n_last)).collect();
    let sum: f64 = field
        .data()
        .chunks_exact(nl)
        .map(|row| {
            row.iter()
                .zip(&weights)
                .map(|(c, w)| w * c.norm_sqr())
                .sum::<f64>()
        })
        .sum();
    0.5 * sum
}
