//! Exact computation of graph pebbling and domination invariants: the cover
//! pebbling number, the domination cover pebbling number and the non-split
//! domination cover pebbling number, together with closed-form evaluators
//! for middle graphs and a campaign that compares the two.

pub mod cache;
pub mod campaign;
pub mod cli;
pub mod domination;
mod error;
pub mod expr;
pub mod formulas;
pub mod graph;
pub mod numbers;
pub mod pebbling;
mod vertex_set;

pub use error::{Error, Result};
pub use vertex_set::VertexSet;

/// Salts graph digests and gates cache reads.
pub const ENGINE_VERSION: &str = concat!("nsdcp-", env!("CARGO_PKG_VERSION"));
