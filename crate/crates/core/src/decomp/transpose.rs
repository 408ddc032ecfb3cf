//! Redistribution of block-distributed arrays between tilings.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use super::comm::RankContext;
use super::layout::{Block, DecompositionInfo, Tiling};
use crate::error::{Error, Result};
use crate::grid::{for_each_index, strides, RealField, SpectralField};

/// Calls `f(src_start, dst_start, run)` for every contiguous row of `region`,
/// with flat indices into row-major arrays of extent `src` and `dst`.
fn for_each_run(region: &Block, src: &Block, dst: &Block, mut f: impl FnMut(usize, usize, usize)) {
    if region.is_empty() {
        return;
    }
    let nd = region.shape.len();
    let run = region.shape[nd - 1];
    let ss = strides(&src.shape);
    let ds = strides(&dst.shape);
    for_each_index(&region.shape[..nd - 1], |outer| {
        let mut s = 0;
        let mut d = 0;
        for a in 0..nd - 1 {
            let g = region.offset[a] + outer[a];
            s += (g - src.offset[a]) * ss[a];
            d += (g - dst.offset[a]) * ds[a];
        }
        s += region.offset[nd - 1] - src.offset[nd - 1];
        d += region.offset[nd - 1] - dst.offset[nd - 1];
        f(s, d, run);
    });
}

fn pack<T: Copy>(data: &[T], region: &Block, owner: &Block) -> Vec<T> {
    let mut out = Vec::with_capacity(region.len());
    let packed = Block {
        offset: region.offset.clone(),
        shape: region.shape.clone(),
    };
    for_each_run(region, owner, &packed, |s, _, n| {
        out.extend_from_slice(&data[s..s + n])
    });
    out
}

fn unpack<T: Copy>(packed: &[T], region: &Block, out: &mut [T], owner: &Block) {
    let src = Block {
        offset: region.offset.clone(),
        shape: region.shape.clone(),
    };
    for_each_run(region, &src, owner, |s, d, n| {
        out[d..d + n].copy_from_slice(&packed[s..s + n])
    });
}

fn fingerprint(from: &Tiling, to: &Tiling) -> u64 {
    let mut h = DefaultHasher::new();
    from.hash(&mut h);
    to.hash(&mut h);
    h.finish()
}

/// Moves this rank's block from layout `from` to layout `to`.
///
/// Collective. Every rank must pass the same pair of tilings; a rank that
/// receives data tagged with a different pair fails with `LayoutMismatch`.
pub fn transpose_exchange<T: Copy + Default + Send + 'static>(
    context: &RankContext,
    local_block: &[T],
    from: &Tiling,
    to: &Tiling,
) -> Result<Vec<T>> {
    if from.global() != to.global() {
        return Err(Error::LayoutMismatch(format!(
            "global shapes differ: {:?} vs {:?}",
            from.global(),
            to.global()
        )));
    }
    if from.size() != context.size() || to.size() != context.size() {
        return Err(Error::LayoutMismatch(format!(
            "tilings for {} and {} ranks on a {}-rank context",
            from.size(),
            to.size(),
            context.size()
        )));
    }
    let me = context.rank();
    let mine = from.block(me);
    if local_block.len() != mine.len() {
        return Err(Error::shape(&mine.shape, &[local_block.len()]));
    }
    let tag = fingerprint(from, to);
    let sends = (0..context.size())
        .map(|dest| {
            let region = mine.intersect(to.block(dest));
            (tag, pack(local_block, &region, mine))
        })
        .map(|(t, v)| vec![(t, v)])
        .collect();
    let recv: Vec<Vec<(u64, Vec<T>)>> = context.all_to_all_variable(sends)?;
    let target = to.block(me);
    let mut out = vec![T::default(); target.len()];
    for (src, mut msg) in recv.into_iter().enumerate() {
        let (t, packed) = msg.pop().expect("one message per peer");
        if t != tag {
            return Err(Error::LayoutMismatch(format!(
                "rank {src} used a different layout pair than rank {me}"
            )));
        }
        let region = from.block(src).intersect(target);
        if packed.len() != region.len() {
            return Err(Error::LayoutMismatch(format!(
                "rank {src} sent {} values, expected {}",
                packed.len(),
                region.len()
            )));
        }
        unpack(&packed, &region, &mut out, target);
    }
    Ok(out)
}

/// Assembles the global array on the root rank.
pub fn gather_block<T: Copy + Default + Send + 'static>(
    context: &RankContext,
    tiling: &Tiling,
    local_block: &[T],
) -> Result<Option<Vec<T>>> {
    let parts = context.gather_to_root(local_block.to_vec())?;
    let Some(parts) = parts else {
        return Ok(None);
    };
    let whole = Block {
        offset: vec![0; tiling.global().len()],
        shape: tiling.global().to_vec(),
    };
    let mut out = vec![T::default(); whole.len()];
    for (rank, part) in parts.iter().enumerate() {
        let b = tiling.block(rank);
        if part.len() != b.len() {
            return Err(Error::LayoutMismatch(format!(
                "rank {rank} contributed {} values for a block of {}",
                part.len(),
                b.len()
            )));
        }
        unpack(part, b, &mut out, &whole);
    }
    Ok(Some(out))
}

/// Splits the root's global array into every rank's block.
pub fn scatter_block<T: Copy + Send + 'static>(
    context: &RankContext,
    tiling: &Tiling,
    global: Option<&[T]>,
) -> Result<Vec<T>> {
    let parts = match global {
        Some(g) if context.is_root() => {
            let total: usize = tiling.global().iter().product();
            if g.len() != total {
                return Err(Error::shape(tiling.global(), &[g.len()]));
            }
            let whole = Block {
                offset: vec![0; tiling.global().len()],
                shape: tiling.global().to_vec(),
            };
            Some(tiling.blocks().iter().map(|b| pack(g, b, &whole)).collect())
        }
        _ => None,
    };
    context.scatter_from_root(parts)
}

pub fn gather_x(
    context: &RankContext,
    decomposition: &DecompositionInfo,
    local_block: &RealField,
) -> Result<Option<RealField>> {
    local_block.check_shape(&decomposition.shape_x_loc)?;
    gather_block(context, decomposition.physical_tiling(), local_block.data())?
        .map(|data| RealField::new(decomposition.grid.clone(), data))
        .transpose()
}

/// `global` is only read on the root rank.
pub fn scatter_x(
    context: &RankContext,
    decomposition: &DecompositionInfo,
    global: Option<&RealField>,
) -> Result<RealField> {
    let data = scatter_block(
        context,
        decomposition.physical_tiling(),
        global.map(|g| g.data()),
    )?;
    RealField::block(
        decomposition.grid.clone(),
        decomposition.shape_x_loc.clone(),
        decomposition.offset_x_loc.clone(),
        data,
    )
}

pub fn gather_k(
    context: &RankContext,
    decomposition: &DecompositionInfo,
    local_block: &SpectralField,
) -> Result<Option<SpectralField>> {
    local_block.check_shape(&decomposition.shape_k_loc)?;
    gather_block(context, decomposition.spectral_tiling(), local_block.data())?
        .map(|data| SpectralField::new(decomposition.grid.clone(), data))
        .transpose()
}

pub fn scatter_k(
    context: &RankContext,
    decomposition: &DecompositionInfo,
    global: Option<&SpectralField>,
) -> Result<SpectralField> {
    let data: Vec<Complex64> = scatter_block(
        context,
        decomposition.spectral_tiling(),
        global.map(|g| g.data()),
    )?;
    SpectralField::block(
        decomposition.grid.clone(),
        decomposition.shape_k_loc.clone(),
        decomposition.offset_k_loc.clone(),
        data,
    )
}
