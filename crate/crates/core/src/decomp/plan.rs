use std::sync::Arc;

use num_complex::Complex64;
use parking_lot::Mutex;

use super::comm::RankContext;
use super::layout::{DecompKind, DecompositionInfo};
use super::transpose::transpose_exchange;
use crate::error::{Error, Result};
use crate::fft::nd::{self, Workspace};
use crate::fft::{Direction, LineTransform};
use crate::grid::{GridSpec, RealField, SpectralField};

/// Distributed real-to-complex transform for one rank.
///
/// Forward: r2c along the last axis, then for each stage a redistribution
/// followed by complex transforms along the axes that became local. The
/// inverse runs the same steps backwards. Arithmetic matches [`FftPlan`]
/// exactly, so a single-rank plan reproduces the sequential result bitwise.
///
/// [`FftPlan`]: crate::fft::FftPlan
pub struct DistPlan {
    backend_id: String,
    grid: GridSpec,
    decomposition: DecompositionInfo,
    context: RankContext,
    lines: Vec<Arc<dyn LineTransform>>,
    work: Mutex<Workspace>,
}

impl std::fmt::Debug for DistPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistPlan")
            .field("backend_id", &self.backend_id)
            .field("decomposition", &self.decomposition)
            .finish()
    }
}

impl DistPlan {
    pub fn create(
        backend_id: &str,
        grid: &GridSpec,
        kind: DecompKind,
        context: &RankContext,
    ) -> Result<Self> {
        let backend = crate::fft::backend(backend_id)?;
        let decomposition = super::make_decomposition(kind, grid, context)?;
        let lines: Vec<Arc<dyn LineTransform>> =
            grid.dims().iter().map(|&n| backend.line(n)).collect();
        let refs: Vec<&dyn LineTransform> = lines.iter().map(|l| l.as_ref()).collect();
        let work = Workspace::for_lines(&refs, 0);
        Ok(Self {
            backend_id: backend.id().to_string(),
            grid: grid.clone(),
            decomposition,
            context: context.clone(),
            lines,
            work: Mutex::new(work),
        })
    }

    pub fn backend_id(&self) -> &str {
        &self.backend_id
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn decomposition(&self) -> &DecompositionInfo {
        &self.decomposition
    }

    pub fn context(&self) -> &RankContext {
        &self.context
    }

    pub fn alloc_array_x(&self) -> RealField {
        let d = &self.decomposition;
        RealField::zeros_block(
            self.grid.clone(),
            d.shape_x_loc.clone(),
            d.offset_x_loc.clone(),
        )
    }

    pub fn alloc_array_k(&self) -> SpectralField {
        let d = &self.decomposition;
        SpectralField::zeros_block(
            self.grid.clone(),
            d.shape_k_loc.clone(),
            d.offset_k_loc.clone(),
        )
    }

    /// This rank's tile of `init_random(grid, seed)`.
    pub fn init_array_x_random(&self, seed: u64) -> RealField {
        let global = crate::fft::init_random(&self.grid, seed);
        let d = &self.decomposition;
        let whole = super::layout::Block {
            offset: vec![0; d.shape_x_seq.len()],
            shape: d.shape_x_seq.clone(),
        };
        let mine = d.physical_tiling().block(d.rank);
        let mut data = Vec::with_capacity(mine.len());
        let strides = crate::grid::strides(&whole.shape);
        crate::grid::for_each_index(&mine.shape, |i| {
            let flat: usize = (0..i.len())
                .map(|a| (i[a] + mine.offset[a]) * strides[a])
                .sum();
            data.push(global.data()[flat]);
        });
        RealField::block(
            self.grid.clone(),
            mine.shape.clone(),
            mine.offset.clone(),
            data,
        )
        .expect("tile lies inside the grid")
    }

    /// Collective forward transform on raw local buffers.
    pub fn fft_raw(&self, input: &[f64], output: &mut [Complex64]) -> Result<()> {
        let d = &self.decomposition;
        check_len(input.len(), d.shape_x_loc.iter().product())?;
        check_len(output.len(), d.shape_k_loc.iter().product())?;
        let stages = d.stages();
        let ndim = self.grid.ndim();
        let mut guard = self.work.lock();
        let Workspace { line, scratch, .. } = &mut *guard;

        let first = stages[0].tiling.block(d.rank);
        let mut buf = vec![Complex64::default(); first.len()];
        nd::r2c_rows(
            self.lines[ndim - 1].as_ref(),
            input,
            &mut buf,
            line,
            scratch,
        );
        for (i, stage) in stages.iter().enumerate() {
            if i > 0 {
                buf =
                    transpose_exchange(&self.context, &buf, &stages[i - 1].tiling, &stage.tiling)?;
            }
            let shape = &stage.tiling.block(d.rank).shape;
            for &axis in &stage.axes {
                let l = self.lines[axis].as_ref();
                nd::c2c_axis(l, &mut buf, shape, axis, Direction::Forward, line, scratch);
            }
        }
        output.copy_from_slice(&buf);
        nd::scale(output, 1.0 / self.grid.num_points() as f64);
        Ok(())
    }

    /// Collective inverse transform on raw local buffers.
    pub fn ifft_raw(&self, input: &[Complex64], output: &mut [f64]) -> Result<()> {
        let d = &self.decomposition;
        check_len(input.len(), d.shape_k_loc.iter().product())?;
        check_len(output.len(), d.shape_x_loc.iter().product())?;
        let stages = d.stages();
        let ndim = self.grid.ndim();
        let mut guard = self.work.lock();
        let Workspace { line, scratch, .. } = &mut *guard;

        let mut buf = input.to_vec();
        for (i, stage) in stages.iter().enumerate().rev() {
            let shape = &stage.tiling.block(d.rank).shape;
            for &axis in stage.axes.iter().rev() {
                let l = self.lines[axis].as_ref();
                nd::c2c_axis(l, &mut buf, shape, axis, Direction::Inverse, line, scratch);
            }
            if i > 0 {
                buf =
                    transpose_exchange(&self.context, &buf, &stage.tiling, &stages[i - 1].tiling)?;
            }
        }
        nd::c2r_rows(self.lines[ndim - 1].as_ref(), &buf, output, line, scratch);
        Ok(())
    }

    fn check_x(&self, f: &RealField) -> Result<()> {
        let d = &self.decomposition;
        f.check_shape(&d.shape_x_loc)?;
        if f.offset() != d.offset_x_loc.as_slice() {
            return Err(Error::LayoutMismatch(format!(
                "block at {:?}, rank {} owns {:?}",
                f.offset(),
                d.rank,
                d.offset_x_loc
            )));
        }
        Ok(())
    }

    fn check_k(&self, f: &SpectralField) -> Result<()> {
        let d = &self.decomposition;
        f.check_shape(&d.shape_k_loc)?;
        if f.offset() != d.offset_k_loc.as_slice() {
            return Err(Error::LayoutMismatch(format!(
                "block at {:?}, rank {} owns {:?}",
                f.offset(),
                d.rank,
                d.offset_k_loc
            )));
        }
        Ok(())
    }

    pub fn dist_fft(
        &self,
        local_input: &RealField,
        local_output: &mut SpectralField,
    ) -> Result<()> {
        self.check_x(local_input)?;
        self.check_k(local_output)?;
        self.fft_raw(local_input.data(), local_output.data_mut())
    }

    pub fn dist_fft_alloc(&self, local_input: &RealField) -> Result<SpectralField> {
        self.check_x(local_input)?;
        let mut out = self.alloc_array_k();
        self.fft_raw(local_input.data(), out.data_mut())?;
        Ok(out)
    }

    pub fn dist_ifft(
        &self,
        local_input: &SpectralField,
        local_output: &mut RealField,
    ) -> Result<()> {
        self.check_k(local_input)?;
        self.check_x(local_output)?;
        self.ifft_raw(local_input.data(), local_output.data_mut())
    }

    pub fn dist_ifft_alloc(&self, local_input: &SpectralField) -> Result<RealField> {
        self.check_k(local_input)?;
        let mut out = self.alloc_array_x();
        self.ifft_raw(local_input.data(), out.data_mut())?;
        Ok(out)
    }
}

fn check_len(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::shape(&[expected], &[got]));
    }
    Ok(())
}
