//! Centrality statistics for spatial case patterns.
//!
//! The crate covers the full pipeline used to ask whether a named landmark
//! can be the "center" of a cloud of case locations:
//!
//! * [`geo`]: WGS84 to UTM projection, Haversine and planar distances.
//! * [`pattern`]: case and landmark files, duplicates, location jitter.
//! * [`central`]: centroid (coordinate-wise mean) and center-point
//!   (coordinate-wise median).
//! * [`resample`]: clouds of centers from subsamples and bootstrap samples.
//! * [`mctest`]: Monte Carlo rank tests, both the landmark-center test and
//!   the population-density proximity test.
//! * [`popsim`]: density rasters and the fixed-n null sampler.
//! * [`synth`]: synthetic clusters and the proximity-test flaw demonstration.
//! * [`svg`]: figure writers.
//!
//! Every randomized routine takes an explicit 64-bit seed. Replicate `i`
//! draws from its own counter-derived stream (see [`seeding`]), so results
//! do not depend on how many worker threads rayon uses.

pub mod central;
pub mod error;
pub mod geo;
pub mod mctest;
pub mod pattern;
pub mod popsim;
pub mod resample;
pub mod seeding;
pub mod svg;
pub mod synth;

pub use central::CenterEstimator;
pub use error::{Error, Result};
pub use geo::{EarthModel, GeoPoint, PlanePoint, Zone};
pub use mctest::{Direction, Metric, TestResult};
pub use pattern::{CasePattern, Landmark};
pub use popsim::DensityGrid;
pub use resample::{CenterCloud, Ellipse, ResamplePlan};
pub use synth::ClusterModel;
