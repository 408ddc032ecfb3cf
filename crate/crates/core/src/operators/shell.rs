use serde::{Deserialize, Serialize};

use super::OperatorGrid;
use crate::error::{Error, Result};
use crate::grid::{hermitian_weight, SpectralField};

/// Shell `[index·dk, (index+1)·dk)` and the energy of the modes inside it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellBin {
    pub k_center: f64,
    pub energy: f64,
}

pub(super) fn bin_energy(
    og: &OperatorGrid,
    u_fft: &SpectralField,
    dk: f64,
) -> Result<Vec<ShellBin>> {
    if !(dk.is_finite() && dk > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "shell width {dk} must be positive"
        )));
    }
    let grid = og.grid();
    let ndim = grid.ndim();
    // largest |k| on the global grid, so every rank uses the same bins
    let kmax = (0..ndim)
        .map(|a| {
            let m = grid.dims()[a] / 2;
            let k = std::f64::consts::TAU / grid.lengths()[a] * m as f64;
            k * k
        })
        .sum::<f64>()
        .sqrt();
    let nbins = (kmax / dk).floor() as usize + 1;
    let mut bins: Vec<ShellBin> = (0..nbins)
        .map(|b| ShellBin {
            k_center: (b as f64 + 0.5) * dk,
            energy: 0.0,
        })
        .collect();

    let n_last = grid.dims()[ndim - 1];
    let nl = og.shape_k()[ndim - 1];
    let off = og.offset_k()[ndim - 1];
    for (i, (u, &k2)) in u_fft.data().iter().zip(og.k_square()).enumerate() {
        let w = hermitian_weight(off + i % nl, n_last);
        let b = ((k2.sqrt() / dk).floor() as usize).min(nbins - 1);
        bins[b].energy += 0.5 * w * u.norm_sqr();
    }
    Ok(bins)
}
