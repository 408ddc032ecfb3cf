//! Axis-wise application of line transforms over row-major blocks.
//!
//! Shared by sequential and distributed plans so that both follow the same
//! arithmetic path.

use num_complex::Complex64;

use super::line::{Direction, LineTransform};

/// Per-caller buffers reused across transform calls.
#[derive(Default)]
pub(crate) struct Workspace {
    pub line: Vec<Complex64>,
    pub scratch: Vec<Complex64>,
    pub spectral: Vec<Complex64>,
}

impl Workspace {
    pub fn for_lines(lines: &[&dyn LineTransform], spectral_len: usize) -> Self {
        let line_len = lines.iter().map(|l| l.len()).max().unwrap_or(0);
        let scratch_len = lines.iter().map(|l| l.scratch_len()).max().unwrap_or(0);
        Self {
            line: vec![Complex64::default(); line_len],
            scratch: vec![Complex64::default(); scratch_len],
            spectral: vec![Complex64::default(); spectral_len],
        }
    }
}

/// Real-to-half-complex transform of every contiguous row of length
/// `line.len()`.
pub(crate) fn r2c_rows(
    line: &dyn LineTransform,
    input: &[f64],
    output: &mut [Complex64],
    linebuf: &mut [Complex64],
    scratch: &mut [Complex64],
) {
    let n = line.len();
    let nh = n / 2 + 1;
    let linebuf = &mut linebuf[..n];
    for (row_in, row_out) in input.chunks_exact(n).zip(output.chunks_exact_mut(nh)) {
        for (b, &x) in linebuf.iter_mut().zip(row_in) {
            *b = Complex64::new(x, 0.0);
        }
        line.process(linebuf, scratch, Direction::Forward);
        row_out.copy_from_slice(&linebuf[..nh]);
    }
}

/// Inverse of [`r2c_rows`]: completes each half row by Hermitian symmetry and
/// keeps the real part of the synthesis.
pub(crate) fn c2r_rows(
    line: &dyn LineTransform,
    input: &[Complex64],
    output: &mut [f64],
    linebuf: &mut [Complex64],
    scratch: &mut [Complex64],
) {
    let n = line.len();
    let nh = n / 2 + 1;
    let linebuf = &mut linebuf[..n];
    for (row_in, row_out) in input.chunks_exact(nh).zip(output.chunks_exact_mut(n)) {
        linebuf[..nh].copy_from_slice(row_in);
        for k in nh..n {
            linebuf[k] = row_in[n - k].conj();
        }
        line.process(linebuf, scratch, Direction::Inverse);
        for (o, b) in row_out.iter_mut().zip(linebuf.iter()) {
            *o = b.re;
        }
    }
}

/// Complex transform along `axis` of a row-major block of extent `shape`.
pub(crate) fn c2c_axis(
    line: &dyn LineTransform,
    data: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    direction: Direction,
    linebuf: &mut [Complex64],
    scratch: &mut [Complex64],
) {
    let n = shape[axis];
    debug_assert_eq!(n, line.len());
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    if n == 0 || outer == 0 || inner == 0 {
        return;
    }
    if inner == 1 {
        for chunk in data.chunks_exact_mut(n) {
            line.process(chunk, scratch, direction);
        }
        return;
    }
    let linebuf = &mut linebuf[..n];
    for o in 0..outer {
        let base = o * n * inner;
        for i in 0..inner {
            for (j, b) in linebuf.iter_mut().enumerate() {
                *b = data[base + j * inner + i];
            }
            line.process(linebuf, scratch, direction);
            for (j, b) in linebuf.iter().enumerate() {
                data[base + j * inner + i] = *b;
            }
        }
    }
}

pub(crate) fn scale(data: &mut [Complex64], factor: f64) {
    for v in data {
        *v *= factor;
    }
}
