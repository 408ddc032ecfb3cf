//! Grid description and the real/spectral field containers.
//!
//! Fields are row-major. A spectral field stores the Hermitian half of the
//! spectrum: the last axis has `n_last / 2 + 1` entries, all others are full.
//! Both field kinds also describe local blocks of a decomposed array, in
//! which case `shape` is the block extent and `offset` its position in the
//! global array.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dims: Vec<usize>,
    lengths: Vec<f64>,
}

impl GridSpec {
    pub fn new(dims: &[usize], lengths: &[f64]) -> Result<Self> {
        if dims.len() != 2 && dims.len() != 3 {
            return Err(Error::InvalidGrid(format!(
                "expected 2 or 3 dimensions, got {}",
                dims.len()
            )));
        }
        if lengths.len() != dims.len() {
            return Err(Error::InvalidGrid(format!(
                "{} dims but {} lengths",
                dims.len(),
                lengths.len()
            )));
        }
        if let Some(n) = dims.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGrid(format!("dimension {n} is below 2")));
        }
        if let Some(l) = lengths.iter().find(|&&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::InvalidGrid(format!("length {l} is not positive")));
        }
        Ok(Self {
            dims: dims.to_vec(),
            lengths: lengths.to_vec(),
        })
    }

    /// Grid with every length set to 2π.
    pub fn periodic(dims: &[usize]) -> Result<Self> {
        Self::new(dims, &vec![std::f64::consts::TAU; dims.len()])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn num_points(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn shape_x(&self) -> Vec<usize> {
        self.dims.clone()
    }

    pub fn shape_k(&self) -> Vec<usize> {
        half_spectrum_shape(&self.dims)
    }
}

pub fn half_spectrum_shape(dims: &[usize]) -> Vec<usize> {
    let mut shape = dims.to_vec();
    if let Some(last) = shape.last_mut() {
        *last = *last / 2 + 1;
    }
    shape
}

/// Hermitian multiplicity of a stored mode given its global index along the
/// last axis.
#[inline]
pub fn hermitian_weight(last_index: usize, n_last: usize) -> f64 {
    if last_index == 0 || (n_last.is_multiple_of(2) && last_index == n_last / 2) {
        1.0
    } else {
        2.0
    }
}

macro_rules! field_type {
    ($(#[$meta:meta])* $name:ident, $elem:ty, $shape_fn:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            grid: GridSpec,
            shape: Vec<usize>,
            offset: Vec<usize>,
            data: Vec<$elem>,
        }

        impl $name {
            /// Field covering the whole grid.
            pub fn new(grid: GridSpec, data: Vec<$elem>) -> Result<Self> {
                let shape = grid.$shape_fn();
                let offset = vec![0; shape.len()];
                Self::block(grid, shape, offset, data)
            }

            pub fn zeros(grid: GridSpec) -> Self {
                let shape = grid.$shape_fn();
                Self::zeros_block(grid, shape.clone(), vec![0; shape.len()])
            }

            /// Local block of a decomposed field.
            pub fn block(
                grid: GridSpec,
                shape: Vec<usize>,
                offset: Vec<usize>,
                data: Vec<$elem>,
            ) -> Result<Self> {
                let global = grid.$shape_fn();
                if shape.len() != global.len() || offset.len() != global.len() {
                    return Err(Error::shape(&global, &shape));
                }
                for a in 0..global.len() {
                    if offset[a] + shape[a] > global[a] {
                        return Err(Error::shape(&global, &shape));
                    }
                }
                let count: usize = shape.iter().product();
                if data.len() != count {
                    return Err(Error::shape(&[count], &[data.len()]));
                }
                Ok(Self { grid, shape, offset, data })
            }

            pub fn zeros_block(grid: GridSpec, shape: Vec<usize>, offset: Vec<usize>) -> Self {
                let count = shape.iter().product();
                Self { grid, shape, offset, data: vec![<$elem>::default(); count] }
            }

            pub fn grid(&self) -> &GridSpec {
                &self.grid
            }

            pub fn shape(&self) -> &[usize] {
                &self.shape
            }

            pub fn offset(&self) -> &[usize] {
                &self.offset
            }

            pub fn data(&self) -> &[$elem] {
                &self.data
            }

            pub fn data_mut(&mut self) -> &mut [$elem] {
                &mut self.data
            }

            pub fn into_data(self) -> Vec<$elem> {
                self.data
            }

            pub fn is_global(&self) -> bool {
                self.shape == self.grid.$shape_fn()
            }

            pub(crate) fn check_shape(&self, expected: &[usize]) -> Result<()> {
                if self.shape != expected {
                    return Err(Error::shape(expected, &self.shape));
                }
                Ok(())
            }
        }
    };
}

field_type!(
    /// Physical-space values.
    RealField,
    f64,
    shape_x
);

field_type!(
    /// Half-spectrum coefficients.
    SpectralField,
    Complex64,
    shape_k
);

impl RealField {
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let shape = grid.shape_x();
        let mut data = Vec::with_capacity(grid.num_points());
        for_each_index(&shape, |idx| data.push(f(idx)));
        let offset = vec![0; shape.len()];
        Self {
            grid,
            shape,
            offset,
            data,
        }
    }
}

/// Visits every multi-index of `shape` in row-major order.
pub fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut axis = shape.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < shape[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; shape.len()];
    for a in (0..shape.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * shape[a + 1];
    }
    s
}
