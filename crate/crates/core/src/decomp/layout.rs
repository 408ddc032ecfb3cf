//! Block distributions of global arrays over ranks.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::comm::RankContext;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompKind {
    Slab,
    Pencil,
}

impl fmt::Display for DecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompKind::Slab => "slab",
            DecompKind::Pencil => "pencil",
        })
    }
}

/// `(offset, len)` of part `idx` when `n` items are split into `parts`
/// contiguous blocks whose sizes differ by at most one, larger blocks first.
pub fn balanced_block(n: usize, parts: usize, idx: usize) -> (usize, usize) {
    let base = n / parts;
    let rem = n % parts;
    let len = base + usize::from(idx < rem);
    (idx * base + idx.min(rem), len)
}

/// Near-square process grid `(p0, p1)`: `p0` is the largest divisor of
/// `size` not exceeding `√size`.
pub fn pencil_grid(size: usize) -> (usize, usize) {
    let mut p0 = 1;
    let mut d = 1;
    while d * d <= size {
        if size.is_multiple_of(d) {
            p0 = d;
        }
        d += 1;
    }
    (p0, size / p0)
}

/// Returns `false` when `dims` can be decomposed over `size` ranks.
///
/// Slab decompositions accept any rank count because ranks beyond the axis
/// length hold empty blocks. Pencil decompositions need a 3D grid whose
/// first two axes are at least as long as the process grid.
pub fn are_parameters_bad(kind: DecompKind, dims: &[usize], size: usize) -> bool {
    if size == 0 || dims.len() < 2 {
        return true;
    }
    match kind {
        DecompKind::Slab => false,
        DecompKind::Pencil => {
            if dims.len() != 3 {
                return true;
            }
            let (p0, p1) = pencil_grid(size);
            p0 > dims[0] || p1 > dims[1]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub offset: Vec<usize>,
    pub shape: Vec<usize>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn intersect(&self, other: &Block) -> Block {
        let mut offset = Vec::with_capacity(self.shape.len());
        let mut shape = Vec::with_capacity(self.shape.len());
        for a in 0..self.shape.len() {
            let lo = self.offset[a].max(other.offset[a]);
            let hi = (self.offset[a] + self.shape[a]).min(other.offset[a] + other.shape[a]);
            offset.push(lo);
            shape.push(hi.saturating_sub(lo));
        }
        Block { offset, shape }
    }
}

/// One block per rank covering a global array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tiling {
    global: Vec<usize>,
    blocks: Vec<Block>,
}

impl Tiling {
    /// `splits(rank)` lists `(axis, parts, part_index)` for every split axis;
    /// unlisted axes stay whole.
    pub fn new(
        global: &[usize],
        size: usize,
        splits: impl Fn(usize) -> Vec<(usize, usize, usize)>,
    ) -> Self {
        let blocks = (0..size)
            .map(|rank| {
                let mut offset = vec![0; global.len()];
                let mut shape = global.to_vec();
                for (axis, parts, idx) in splits(rank) {
                    let (o, l) = balanced_block(global[axis], parts, idx);
                    offset[axis] = o;
                    shape[axis] = l;
                }
                Block { offset, shape }
            })
            .collect();
        Self {
            global: global.to_vec(),
            blocks,
        }
    }

    pub fn global(&self) -> &[usize] {
        &self.global
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, rank: usize) -> &Block {
        &self.blocks[rank]
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }
}

/// One stage of a distributed transform: the layout of the half spectrum
/// and the axes that are fully local in it and get a complex transform.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Stage {
    pub tiling: Tiling,
    pub axes: Vec<usize>,
}

/// How a grid is shared between ranks, seen from one rank.
///
/// The spectral layout is transposed with respect to the physical one: slab
/// splits physical axis 0 and spectral axis 1; pencil splits physical axes
/// (0, 1) and spectral axes (1, 2). Blocks keep the natural axis order in
/// memory.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionInfo {
    pub kind: DecompKind,
    pub rank: usize,
    pub size: usize,
    pub proc_grid: Vec<usize>,
    pub grid: GridSpec,
    pub shape_x_seq: Vec<usize>,
    pub shape_x_loc: Vec<usize>,
    pub offset_x_loc: Vec<usize>,
    pub shape_k_seq: Vec<usize>,
    pub shape_k_loc: Vec<usize>,
    pub offset_k_loc: Vec<usize>,
    physical: Tiling,
    stages: Vec<Stage>,
}

impl DecompositionInfo {
    /// Decomposition for `rank` out of `size`, without a live context.
    pub fn for_rank(kind: DecompKind, grid: &GridSpec, rank: usize, size: usize) -> Result<Self> {
        let dims = grid.dims();
        if are_parameters_bad(kind, dims, size) {
            return Err(Error::BadParameters(format!(
                "{kind} decomposition of {dims:?} over {size} ranks"
            )));
        }
        if rank >= size {
            return Err(Error::BadParameters(format!("rank {rank} >= size {size}")));
        }
        let shape_x = grid.shape_x();
        let shape_k = grid.shape_k();
        let (proc_grid, physical, stages) = match (kind, dims.len()) {
            (DecompKind::Slab, nd) => {
                let physical = Tiling::new(&shape_x, size, |r| vec![(0, size, r)]);
                let half_x = Tiling::new(&shape_k, size, |r| vec![(0, size, r)]);
                let spectral = Tiling::new(&shape_k, size, |r| vec![(1, size, r)]);
                let first_axes = if nd == 3 { vec![1] } else { vec![] };
                let stages = vec![
                    Stage {
                        tiling: half_x,
                        axes: first_axes,
                    },
                    Stage {
                        tiling: spectral,
                        axes: vec![0],
                    },
                ];
                (vec![size], physical, stages)
            }
            (DecompKind::Pencil, _) => {
                let (p0, p1) = pencil_grid(size);
                let coords = move |r: usize| (r / p1, r % p1);
                let physical = Tiling::new(&shape_x, size, |r| {
                    let (r0, r1) = coords(r);
                    vec![(0, p0, r0), (1, p1, r1)]
                });
                let half_x = Tiling::new(&shape_k, size, |r| {
                    let (r0, r1) = coords(r);
                    vec![(0, p0, r0), (1, p1, r1)]
                });
                let middle = Tiling::new(&shape_k, size, |r| {
                    let (r0, r1) = coords(r);
                    vec![(0, p0, r0), (2, p1, r1)]
                });
                let spectral = Tiling::new(&shape_k, size, |r| {
                    let (r0, r1) = coords(r);
                    vec![(1, p0, r0), (2, p1, r1)]
                });
                let stages = vec![
                    Stage {
                        tiling: half_x,
                        axes: vec![],
                    },
                    Stage {
                        tiling: middle,
                        axes: vec![1],
                    },
                    Stage {
                        tiling: spectral,
                        axes: vec![0],
                    },
                ];
                (vec![p0, p1], physical, stages)
            }
        };
        let xb = physical.block(rank).clone();
        let kb = stages.last().unwrap().tiling.block(rank).clone();
        Ok(Self {
            kind,
            rank,
            size,
            proc_grid,
            grid: grid.clone(),
            shape_x_seq: shape_x,
            shape_x_loc: xb.shape,
            offset_x_loc: xb.offset,
            shape_k_seq: shape_k,
            shape_k_loc: kb.shape,
            offset_k_loc: kb.offset,
            physical,
            stages,
        })
    }

    pub fn physical_tiling(&self) -> &Tiling {
        &self.physical
    }

    pub fn spectral_tiling(&self) -> &Tiling {
        &self.stages.last().unwrap().tiling
    }

    pub(crate) fn stages(&self) -> &[Stage] {
        &self.stages
    }
}

pub fn make_decomposition(
    kind: DecompKind,
    grid: &GridSpec,
    context: &RankContext,
) -> Result<DecompositionInfo> {
    DecompositionInfo::for_rank(kind, grid, context.rank(), context.size())
}
