//! McCulloch-Pitts dynamical systems as bit-stream generators, and exact
//! linear-separability distinguishers that tell their output apart from
//! uniform random bits.

pub mod counting;
pub mod distinguisher;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod lp;
pub mod separability;
pub mod types;

pub use distinguisher::{classify_multi, classify_single, MultiSampleInput, SingleStreamInput};
pub use dynamics::{BitStream, CycleInfo};
pub use error::{Error, Result};
pub use separability::SeparationWitness;
pub use types::{BitVector, Dichotomy, MPSystem, Rational, ThresholdUnit, Verdict};
