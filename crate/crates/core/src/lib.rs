//! Laboratory for membership search over sorted sets of 64-bit integers.
//!
//! * [`search`]: instrumented binary, interpolation, interpolation-binary
//!   and adaptive search, all counting element reads through one choke point.
//! * [`binned`]: a static bin index keyed by value range, plus the
//!   max-gap/min-gap smoothness ratio.
//! * [`generate`]: seeded generators for uniform, increasing, stepwise,
//!   Paretian, Gaussian-gap and null-model instances.
//! * [`stats`]: gap correlations and distance from uniform gaps.
//! * [`bench`]: the repetition/workload/normalization benchmark protocol.
//! * [`io`]: instance files, subinstance splitting and CSV reports.

pub mod bench;
pub mod binned;
pub mod generate;
pub mod instance;
pub mod io;
pub mod search;
pub mod stats;

pub use instance::{InstanceError, SortedInstance};
pub use search::{
    adaptive_search, binary_search, ibs_search, interpolation_search, Algorithm, IbsConfig, Outcome,
    ProbeMetrics, SearchObserver, SearchResult,
};
