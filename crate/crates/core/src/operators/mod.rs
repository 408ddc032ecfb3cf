//! Pseudo-spectral operators on top of a sequential or distributed plan.
//!
//! Vector components are ordered `(x, y[, z])` where `x` is the last array
//! axis (the one stored as a half spectrum), `y` the one before it and `z`
//! axis 0 in 3D. Every operator works on the rank-local blocks of the plan.

mod shell;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::decomp::DistPlan;
use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::grid::{for_each_index, GridSpec, RealField, SpectralField};

pub use shell::ShellBin;

/// The plan an operator grid transforms with; one per grid, so the variant
/// size difference is irrelevant.
#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum OperatorPlan {
    Seq(FftPlan),
    Dist(DistPlan),
}

impl From<FftPlan> for OperatorPlan {
    fn from(p: FftPlan) -> Self {
        OperatorPlan::Seq(p)
    }
}

impl From<DistPlan> for OperatorPlan {
    fn from(p: DistPlan) -> Self {
        OperatorPlan::Dist(p)
    }
}

/// Wavenumber and coordinate arrays for one plan.
///
/// Immutable after construction.
#[derive(Debug)]
pub struct OperatorGrid {
    grid: GridSpec,
    plan: OperatorPlan,
    shape_x: Vec<usize>,
    offset_x: Vec<usize>,
    shape_k: Vec<usize>,
    offset_k: Vec<usize>,
    /// Per array axis, spectral-local shape.
    k: Vec<Vec<f64>>,
    k2: Vec<f64>,
    inv_k_square_nozero: Vec<f64>,
    /// Per array axis, physical-local shape.
    coords: Vec<Vec<f64>>,
}

/// Signed frequency index of global position `g` along an axis of length
/// `n`; the last axis only stores non-negative frequencies.
pub fn signed_frequency(g: usize, n: usize, halved: bool) -> i64 {
    if halved || g <= n / 2 {
        g as i64
    } else {
        g as i64 - n as i64
    }
}

impl OperatorGrid {
    pub fn new(plan: impl Into<OperatorPlan>) -> Self {
        let plan = plan.into();
        let (grid, shape_x, offset_x, shape_k, offset_k) = match &plan {
            OperatorPlan::Seq(p) => (
                p.grid().clone(),
                p.shape_x().to_vec(),
                vec![0; p.shape_x().len()],
                p.shape_k().to_vec(),
                vec![0; p.shape_k().len()],
            ),
            OperatorPlan::Dist(p) => {
                let d = p.decomposition();
                (
                    p.grid().clone(),
                    d.shape_x_loc.clone(),
                    d.offset_x_loc.clone(),
                    d.shape_k_loc.clone(),
                    d.offset_k_loc.clone(),
                )
            }
        };
        let ndim = grid.ndim();
        let dims = grid.dims().to_vec();
        let lengths = grid.lengths().to_vec();

        let nk: usize = shape_k.iter().product();
        let mut k: Vec<Vec<f64>> = vec![Vec::with_capacity(nk); ndim];
        let mut k2 = Vec::with_capacity(nk);
        let mut inv = Vec::with_capacity(nk);
        for_each_index(&shape_k, |i| {
            let mut sq = 0.0;
            for a in 0..ndim {
                let m = signed_frequency(offset_k[a] + i[a], dims[a], a == ndim - 1);
                let ka = TAU / lengths[a] * m as f64;
                k[a].push(ka);
                sq += ka * ka;
            }
            k2.push(sq);
            inv.push(if sq == 0.0 { 0.0 } else { 1.0 / sq });
        });

        let nx: usize = shape_x.iter().product();
        let mut coords: Vec<Vec<f64>> = vec![Vec::with_capacity(nx); ndim];
        for_each_index(&shape_x, |i| {
            for a in 0..ndim {
                coords[a].push((offset_x[a] + i[a]) as f64 * lengths[a] / dims[a] as f64);
            }
        });

        Self {
            grid,
            plan,
            shape_x,
            offset_x,
            shape_k,
            offset_k,
            k,
            k2,
            inv_k_square_nozero: inv,
            coords,
        }
    }

    /// Sequential operator on `backend`.
    pub fn sequential(backend_id: &str, grid: &GridSpec) -> Result<Self> {
        Ok(Self::new(FftPlan::create(backend_id, grid)?))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn plan(&self) -> &OperatorPlan {
        &self.plan
    }

    pub fn ndim(&self) -> usize {
        self.grid.ndim()
    }

    pub fn shape_x(&self) -> &[usize] {
        &self.shape_x
    }

    pub fn shape_k(&self) -> &[usize] {
        &self.shape_k
    }

    /// Wavenumbers along array axis `axis`.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.k[axis]
    }

    /// Wavenumbers of vector component `c` (0 = x).
    pub fn component_k(&self, c: usize) -> &[f64] {
        &self.k[self.ndim() - 1 - c]
    }

    pub fn kx(&self) -> &[f64] {
        self.component_k(0)
    }

    pub fn ky(&self) -> &[f64] {
        self.component_k(1)
    }

    pub fn kz(&self) -> Option<&[f64]> {
        (self.ndim() == 3).then(|| self.component_k(2))
    }

    pub fn k_square(&self) -> &[f64] {
        &self.k2
    }

    pub fn inv_k_square_nozero(&self) -> &[f64] {
        &self.inv_k_square_nozero
    }

    /// Cell-left coordinates of vector component `c`: `x_j = j L / n`.
    pub fn component_coords(&self, c: usize) -> &[f64] {
        &self.coords[self.ndim() - 1 - c]
    }

    pub fn xx(&self) -> &[f64] {
        self.component_coords(0)
    }

    pub fn yy(&self) -> &[f64] {
        self.component_coords(1)
    }

    pub fn zz(&self) -> Option<&[f64]> {
        (self.ndim() == 3).then(|| self.component_coords(2))
    }

    /// Smallest wavenumber spacing over all axes.
    pub fn min_dk(&self) -> f64 {
        self.grid
            .lengths()
            .iter()
            .map(|l| TAU / l)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn real_field_from(&self, f: impl Fn(&[f64]) -> f64) -> RealField {
        let ndim = self.ndim();
        let mut pt = vec![0.0; ndim];
        let data = (0..self.coords[0].len())
            .map(|j| {
                for (c, v) in pt.iter_mut().enumerate() {
                    *v = self.component_coords(c)[j];
                }
                f(&pt)
            })
            .collect();
        RealField::block(
            self.grid.clone(),
            self.shape_x.clone(),
            self.offset_x.clone(),
            data,
        )
        .expect("coordinate arrays match the local shape")
    }

    pub fn zeros_k(&self) -> SpectralField {
        SpectralField::zeros_block(
            self.grid.clone(),
            self.shape_k.clone(),
            self.offset_k.clone(),
        )
    }

    pub fn fft(&self, u: &RealField) -> Result<SpectralField> {
        match &self.plan {
            OperatorPlan::Seq(p) => p.fft_alloc(u),
            OperatorPlan::Dist(p) => p.dist_fft_alloc(u),
        }
    }

    pub fn ifft(&self, u_fft: &SpectralField) -> Result<RealField> {
        match &self.plan {
            OperatorPlan::Seq(p) => p.ifft_alloc(u_fft),
            OperatorPlan::Dist(p) => p.dist_ifft_alloc(u_fft),
        }
    }

    fn check_k(&self, f: &SpectralField) -> Result<()> {
        f.check_shape(&self.shape_k)
    }

    fn check_vector(&self, v: &[SpectralField]) -> Result<()> {
        if v.len() != self.ndim() {
            return Err(Error::shape(&[self.ndim()], &[v.len()]));
        }
        v.iter().try_for_each(|c| self.check_k(c))
    }

    fn with_data(&self, data: Vec<Complex64>) -> SpectralField {
        SpectralField::block(
            self.grid.clone(),
            self.shape_k.clone(),
            self.offset_k.clone(),
            data,
        )
        .expect("operator output matches the local spectral shape")
    }

    /// `(i kx û, i ky û[, i kz û])`.
    pub fn gradfft_from_fft(&self, u_fft: &SpectralField) -> Result<Vec<SpectralField>> {
        self.check_k(u_fft)?;
        Ok((0..self.ndim())
            .map(|c| {
                let data = self
                    .component_k(c)
                    .iter()
                    .zip(u_fft.data())
                    .map(|(&k, &u)| Complex64::new(0.0, k) * u)
                    .collect();
                self.with_data(data)
            })
            .collect())
    }

    /// `i Σ_c k_c v̂_c`.
    pub fn divfft_from_vecfft(&self, v_fft: &[SpectralField]) -> Result<SpectralField> {
        self.check_vector(v_fft)?;
        let n = self.k2.len();
        let mut data = vec![Complex64::default(); n];
        for (c, comp) in v_fft.iter().enumerate() {
            for ((d, &k), &v) in data.iter_mut().zip(self.component_k(c)).zip(comp.data()) {
                *d += k * v;
            }
        }
        for d in &mut data {
            *d *= Complex64::i();
        }
        Ok(self.with_data(data))
    }

    /// Divergence-free projection `v̂ - k (k·v̂)/|k|²`, returning new fields.
    /// The zero mode passes through unchanged.
    pub fn proj_outplace(&self, v_fft: &[SpectralField]) -> Result<Vec<SpectralField>> {
        let mut out = v_fft.to_vec();
        self.proj_inplace(&mut out)?;
        Ok(out)
    }

    /// In-place form of [`proj_outplace`](Self::proj_outplace).
    ///
    /// Walks the modes once with a single scalar temporary per mode; no
    /// buffers are allocated.
    pub fn proj_inplace(&self, v_fft: &mut [SpectralField]) -> Result<()> {
        self.check_vector(v_fft)?;
        match v_fft {
            [vx, vy] => {
                let (kx, ky) = (self.component_k(0), self.component_k(1));
                let (vx, vy) = (vx.data_mut(), vy.data_mut());
                for i in 0..self.k2.len() {
                    let tmp = (kx[i] * vx[i] + ky[i] * vy[i]) * self.inv_k_square_nozero[i];
                    vx[i] -= kx[i] * tmp;
                    vy[i] -= ky[i] * tmp;
                }
            }
            [vx, vy, vz] => {
                let (kx, ky, kz) = (
                    self.component_k(0),
                    self.component_k(1),
                    self.component_k(2),
                );
                let (vx, vy, vz) = (vx.data_mut(), vy.data_mut(), vz.data_mut());
                for i in 0..self.k2.len() {
                    let tmp = (kx[i] * vx[i] + ky[i] * vy[i] + kz[i] * vz[i])
                        * self.inv_k_square_nozero[i];
                    vx[i] -= kx[i] * tmp;
                    vy[i] -= ky[i] * tmp;
                    vz[i] -= kz[i] * tmp;
                }
            }
            _ => unreachable!("component count checked"),
        }
        Ok(())
    }

    /// Energy per wavenumber shell of width `dk` (defaults to
    /// [`min_dk`](Self::min_dk)). On a distributed plan this is collective and
    /// every rank gets the global spectrum.
    pub fn spectrum_shell(&self, u_fft: &SpectralField, dk: Option<f64>) -> Result<Vec<ShellBin>> {
        self.check_k(u_fft)?;
        let dk = dk.unwrap_or_else(|| self.min_dk());
        let local = shell::bin_energy(self, u_fft, dk)?;
        match &self.plan {
            OperatorPlan::Seq(_) => Ok(local),
            OperatorPlan::Dist(p) => {
                let energies: Vec<f64> = local.iter().map(|b| b.energy).collect();
                let all = p.context().all_gather(energies)?;
                let mut out = local;
                for (b, bin) in out.iter_mut().enumerate() {
                    bin.energy = all.iter().map(|e| e[b]).sum();
                }
                Ok(out)
            }
        }
    }

    pub(crate) fn offset_k(&self) -> &[usize] {
        &self.offset_k
    }
}
