use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{for_each_index, GridSpec, RealField, SpectralField};

/// Direct evaluation of the normalized forward transform at every stored
/// half-spectrum mode. O(N²); used as the reference for all backends.
pub fn naive_dft_r2c(grid: &GridSpec, input: &RealField) -> Result<SpectralField> {
    input.check_shape(&grid.shape_x())?;
    let dims = grid.dims();
    // exp(-2πi m / n) for every axis; phases are reduced mod n exactly
    let tables: Vec<Vec<Complex64>> = dims
        .iter()
        .map(|&n| {
            (0..n)
                .map(|m| Complex64::from_polar(1.0, -TAU * m as f64 / n as f64))
                .collect()
        })
        .collect();
    let shape_x = grid.shape_x();
    let shape_k = grid.shape_k();
    let norm = 1.0 / grid.num_points() as f64;
    let mut out = Vec::with_capacity(shape_k.iter().product());
    let mut points: Vec<(Vec<usize>, f64)> = Vec::with_capacity(grid.num_points());
    for_each_index(&shape_x, |x| points.push((x.to_vec(), 0.0)));
    for ((_, v), &u) in points.iter_mut().zip(input.data()) {
        *v = u;
    }
    for_each_index(&shape_k, |k| {
        let mut acc = Complex64::default();
        for (x, u) in &points {
            let mut w = Complex64::new(1.0, 0.0);
            for a in 0..dims.len() {
                w *= tables[a][(k[a] * x[a]) % dims[a]];
            }
            acc += w * u;
        }
        out.push(acc * norm);
    });
    SpectralField::new(grid.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_impulse() {
        let g = GridSpec::periodic(&[4, 4]).unwrap();
        let c = RealField::new(g.clone(), vec![2.5; 16]).unwrap();
        let k = naive_dft_r2c(&g, &c).unwrap();
        assert!((k.data()[0].re - 2.5).abs() < 1e-14);
        assert!(k.data()[1..].iter().all(|z| z.norm() < 1e-14));

        let mut d = vec![0.0; 16];
        d[0] = 1.0;
        let imp = RealField::new(g.clone(), d).unwrap();
        let k = naive_dft_r2c(&g, &imp).unwrap();
        assert!(k
            .data()
            .iter()
            .all(|z| (z - Complex64::new(1.0 / 16.0, 0.0)).norm() < 1e-15));
    }
}
