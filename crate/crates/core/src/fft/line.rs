//! One-dimensional complex transforms used as building blocks by every
//! multi-dimensional plan. Transforms are unnormalized; forward uses the
//! `exp(-i k x)` kernel.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub trait LineTransform: Send + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Scratch length required by [`LineTransform::process`].
    fn scratch_len(&self) -> usize;

    /// Transforms `buf` in place. `scratch` holds at least `scratch_len()`
    /// elements.
    fn process(&self, buf: &mut [Complex64], scratch: &mut [Complex64], direction: Direction);
}

/// Direct O(n²) DFT with a precomputed twiddle table.
pub struct DirectDft {
    twiddles: Vec<Complex64>,
}

impl DirectDft {
    pub fn new(n: usize) -> Self {
        let twiddles = (0..n)
            .map(|m| {
                let theta = -TAU * m as f64 / n as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        Self { twiddles }
    }
}

impl LineTransform for DirectDft {
    fn len(&self) -> usize {
        self.twiddles.len()
    }

    fn scratch_len(&self) -> usize {
        self.twiddles.len()
    }

    fn process(&self, buf: &mut [Complex64], scratch: &mut [Complex64], direction: Direction) {
        let n = self.twiddles.len();
        let out = &mut scratch[..n];
        for (k, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            let mut phase = 0usize;
            for x in buf.iter() {
                let w = self.twiddles[phase];
                let w = match direction {
                    Direction::Forward => w,
                    Direction::Inverse => w.conj(),
                };
                acc += x * w;
                phase += k;
                if phase >= n {
                    phase -= n;
                }
            }
            *o = acc;
        }
        buf[..n].copy_from_slice(out);
    }
}

/// Wraps a `rustfft` plan pair.
pub struct RustFftLine {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RustFftLine {
    pub fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

impl LineTransform for RustFftLine {
    fn len(&self) -> usize {
        self.forward.len()
    }

    fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    fn process(&self, buf: &mut [Complex64], scratch: &mut [Complex64], direction: Direction) {
        let fft = match direction {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        };
        let len = fft.get_inplace_scratch_len();
        fft.process_with_scratch(buf, &mut scratch[..len]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
            .collect()
    }

    #[test]
    fn direct_matches_rustfft() {
        let mut planner = FftPlanner::new();
        for n in [1, 2, 3, 5, 8, 12, 17] {
            let direct = DirectDft::new(n);
            let fast = RustFftLine::new(&mut planner, n);
            for dir in [Direction::Forward, Direction::Inverse] {
                let mut a = sample(n);
                let mut b = a.clone();
                let mut s1 = vec![Complex64::default(); direct.scratch_len()];
                let mut s2 = vec![Complex64::default(); fast.scratch_len()];
                direct.process(&mut a, &mut s1, dir);
                fast.process(&mut b, &mut s2, dir);
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).norm() < 1e-12, "n={n} {dir:?}");
                }
            }
        }
    }

    #[test]
    fn forward_sign() {
        // delta at x=1 -> exp(-2 pi i k / n)
        let n = 4;
        let mut buf = vec![Complex64::default(); n];
        buf[1] = Complex64::new(1.0, 0.0);
        let mut scratch = vec![Complex64::default(); n];
        DirectDft::new(n).process(&mut buf, &mut scratch, Direction::Forward);
        assert!((buf[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
