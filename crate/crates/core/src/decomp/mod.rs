//! Domain decomposition and distributed transforms.
//!
//! Ranks run inside [`run_spmd`], an in-process executor with deterministic
//! blocking collectives. Layouts are described by [`Tiling`]s and moved
//! between with [`transpose_exchange`].

mod comm;
mod layout;
mod plan;
mod transpose;

pub use comm::{run_spmd, RankContext};
pub use layout::{
    are_parameters_bad, balanced_block, make_decomposition, pencil_grid, Block, DecompKind,
    DecompositionInfo, Tiling,
};
pub use plan::DistPlan;
pub use transpose::{
    gather_block, gather_k, gather_x, scatter_block, scatter_k, scatter_x, transpose_exchange,
};
