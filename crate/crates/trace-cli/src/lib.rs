//! Trace files, generators and a differential runner over the `nca-core`
//! engines.

pub mod engine;
pub mod gen;
pub mod run;
pub mod trace;

pub use engine::{EngineKind, Step};
pub use gen::{generate, Profile};
pub use run::{run, RunReport};
pub use trace::{parse_trace, Trace, TraceOp};

/// Default node capacity when neither `--max-n` nor `NCA_MAX_N` is given.
pub const DEFAULT_MAX_N: u32 = 1 << 20;
