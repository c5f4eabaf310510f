//! Graph families, spectral scaling and linear-solver advantage analysis.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod advantage;
pub mod error;
pub mod families;
pub mod fit;
pub mod graph;
pub mod growth;
pub mod hhl;
pub mod spectral;
pub mod superfamily;
pub mod survey;

pub use error::{Error, Result};
