//! Merge trees, interleavings between them, residual interleaving distances
//! and locally correct interleavings.

// violation reports carry exact heights and are only built on failure
#![allow(clippy::result_large_err)]

pub mod critical;
pub mod error;
pub mod fixtures;
pub mod height;
pub mod ingest;
pub mod interleaving;
pub mod json;
pub mod locally_correct;
pub mod oracle;
pub mod random;
pub mod solver;
pub mod tree;

pub use error::{Error, HeightError, Result, Violation};
pub use height::Height;
pub use interleaving::{
    AnchoredInterleaving, Arrow, CompletenessViolation, Direction, PartialInterleaving, TreePair, UpMap,
};
pub use tree::{MergeTree, Node, NodeId, Point};
