//! Cluster-head election for wireless sensor networks.
//!
//! Two distributed clustering protocols run on a stationary, single-hop
//! network and are compared by network lifetime:
//!
//! * LEACH: randomized head rotation with the `T(n)` threshold;
//! * FCA: probabilistic tentative heads whose competition radius comes from
//!   a Mamdani fuzzy controller over distance to the base station and
//!   residual energy.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and
//! parallel trial execution live in the companion `wsncluster` crate.

#![no_std]

extern crate alloc;

pub mod energy;
pub mod error;
pub mod fuzzy;
pub mod geometry;
pub mod protocol;
pub mod sim;

pub use error::{FuzzyError, InvalidParameter, SeriesError};
pub use geometry::Point;
pub use protocol::{Protocol, ProtocolParams};
pub use sim::{run_scenario, run_trial, ScenarioConfig, TrialResult};
