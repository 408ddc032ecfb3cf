use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use parking_lot::Mutex;

use super::line::{Direction, LineTransform};
use super::nd::{self, Workspace};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, RealField, SpectralField};

pub const NORMALIZATION: &str = "forward-normalized";

/// Prepared transform for one backend and one grid.
///
/// The plan's configuration never changes after creation. It owns a scratch
/// workspace behind a lock, so transform calls do not allocate; concurrent
/// calls on one plan serialize on that lock.
pub struct FftPlan {
    backend_id: String,
    grid: GridSpec,
    shape_x: Vec<usize>,
    shape_k: Vec<usize>,
    lines: Vec<Arc<dyn LineTransform>>,
    work: Mutex<Workspace>,
}

impl fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FftPlan")
            .field("backend_id", &self.backend_id)
            .field("grid", &self.grid)
            .field("shape_x", &self.shape_x)
            .field("shape_k", &self.shape_k)
            .finish()
    }
}

impl Clone for FftPlan {
    fn clone(&self) -> Self {
        Self::from_lines(&self.backend_id, self.grid.clone(), self.lines.clone())
    }
}

impl FftPlan {
    pub fn create(backend_id: &str, grid: &GridSpec) -> Result<Self> {
        let backend = super::backend(backend_id)?;
        // GridSpec construction already enforces this; keep the plan honest
        // for deserialized grids.
        if grid.dims().iter().any(|&n| n < 2) {
            return Err(Error::InvalidGrid(format!("{:?}", grid.dims())));
        }
        let lines = grid.dims().iter().map(|&n| backend.line(n)).collect();
        Ok(Self::from_lines(backend.id(), grid.clone(), lines))
    }

    fn from_lines(backend_id: &str, grid: GridSpec, lines: Vec<Arc<dyn LineTransform>>) -> Self {
        let shape_x = grid.shape_x();
        let shape_k = grid.shape_k();
        let refs: Vec<&dyn LineTransform> = lines.iter().map(|l| l.as_ref()).collect();
        let work = Workspace::for_lines(&refs, shape_k.iter().product());
        Self {
            backend_id: backend_id.to_string(),
            grid,
            shape_x,
            shape_k,
            lines,
            work: Mutex::new(work),
        }
    }

    pub fn backend_id(&self) -> &str {
        &self.backend_id
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn shape_x(&self) -> &[usize] {
        &self.shape_x
    }

    pub fn shape_k(&self) -> &[usize] {
        &self.shape_k
    }

    pub fn normalization(&self) -> &'static str {
        NORMALIZATION
    }

    pub fn alloc_array_x(&self) -> RealField {
        RealField::zeros(self.grid.clone())
    }

    pub fn alloc_array_k(&self) -> SpectralField {
        SpectralField::zeros(self.grid.clone())
    }

    pub fn init_array_x_random(&self, seed: u64) -> RealField {
        super::init_random(&self.grid, seed)
    }

    /// Forward transform on raw row-major buffers.
    pub fn fft_raw(&self, input: &[f64], output: &mut [Complex64]) -> Result<()> {
        check_len(input.len(), self.grid.num_points())?;
        check_len(output.len(), self.shape_k.iter().product())?;
        let mut guard = self.work.lock();
        let Workspace { line, scratch, .. } = &mut *guard;
        let ndim = self.shape_x.len();
        nd::r2c_rows(self.lines[ndim - 1].as_ref(), input, output, line, scratch);
        for axis in (0..ndim - 1).rev() {
            nd::c2c_axis(
                self.lines[axis].as_ref(),
                output,
                &self.shape_k,
                axis,
                Direction::Forward,
                line,
                scratch,
            );
        }
        nd::scale(output, 1.0 / self.grid.num_points() as f64);
        Ok(())
    }

    /// Inverse transform on raw row-major buffers. `input` is left untouched.
    pub fn ifft_raw(&self, input: &[Complex64], output: &mut [f64]) -> Result<()> {
        check_len(input.len(), self.shape_k.iter().product())?;
        check_len(output.len(), self.grid.num_points())?;
        let mut guard = self.work.lock();
        let Workspace {
            line,
            scratch,
            spectral,
        } = &mut *guard;
        spectral.copy_from_slice(input);
        let ndim = self.shape_x.len();
        for axis in 0..ndim - 1 {
            nd::c2c_axis(
                self.lines[axis].as_ref(),
                spectral,
                &self.shape_k,
                axis,
                Direction::Inverse,
                line,
                scratch,
            );
        }
        nd::c2r_rows(
            self.lines[ndim - 1].as_ref(),
            spectral,
            output,
            line,
            scratch,
        );
        Ok(())
    }

    pub fn fft_into(&self, input: &RealField, output: &mut SpectralField) -> Result<()> {
        input.check_shape(&self.shape_x)?;
        output.check_shape(&self.shape_k)?;
        self.fft_raw(input.data(), output.data_mut())
    }

    pub fn fft_alloc(&self, input: &RealField) -> Result<SpectralField> {
        input.check_shape(&self.shape_x)?;
        let mut out = self.alloc_array_k();
        self.fft_raw(input.data(), out.data_mut())?;
        Ok(out)
    }

    pub fn ifft_into(&self, input: &SpectralField, output: &mut RealField) -> Result<()> {
        input.check_shape(&self.shape_k)?;
        output.check_shape(&self.shape_x)?;
        self.ifft_raw(input.data(), output.data_mut())
    }

    pub fn ifft_alloc(&self, input: &SpectralField) -> Result<RealField> {
        input.check_shape(&self.shape_k)?;
        let mut out = self.alloc_array_x();
        self.ifft_raw(input.data(), out.data_mut())?;
        Ok(out)
    }
}

fn check_len(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::shape(&[expected], &[got]));
    }
    Ok(())
}
