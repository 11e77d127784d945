//! Dynamic nearest common ancestors.
//!
//! Engines, from simplest to most general:
//!
//! * [`forest::Forest`]: the reference model and brute-force oracle.
//! * [`fat_preorder::StaticNca`]: static trees, `O(1)` queries.
//! * [`incremental::IncrementalTree`]: `add_leaf`/`add_root` in amortized `O(log² n)`.
//! * [`multilevel::Multilevel`]: the 2-level and linear-time 3-level incremental structures.
//! * [`link::LinkForest`] and [`link::AdaptiveLinkForest`]: `link` and `nca` in
//!   `O(m α(m, n) + n)` total time.
//!
//! With the `parallel` feature (default), [`par`] runs batches of read-only
//! queries on the rayon pool.

pub mod arena;
pub mod error;
pub mod fat_preorder;
pub mod forest;
pub mod incremental;
pub mod link;
pub mod microset;
pub mod multilevel;
pub mod numeric;
pub mod par;

pub use error::{NcaError, Result};
pub use forest::{rerooted_ca, CaProvider, CaTriple, Forest, NodeId};
