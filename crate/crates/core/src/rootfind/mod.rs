//! Floating-point root finding and fiber continuation.

mod aberth;
mod track;

pub use aberth::{all_roots, trim_negligible, Cluster, RootError, RootFinder, RootSet};
pub use track::{min_separation, track, Path, Segment, TrackConfig, TrackError, TrackedPath};
