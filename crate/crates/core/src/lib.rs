//! Exact service rate regions of Hamming-coded distributed storage.
//!
//! The pipeline is: build or import a Hamming code ([`codes`]), enumerate
//! its minimum recovery system ([`recovery`]), then query the service rate
//! region with exact rational linear programming ([`lp`], [`srr`]) or
//! through the recovery hypergraph ([`hypergraph`]).

pub mod cli;
pub mod codes;
pub mod error;
pub mod exactmath;
pub mod hypergraph;
pub mod lp;
pub mod recovery;
pub mod srr;

pub use codes::{systematic_hamming, LinearCode};
pub use error::{Error, Result};
pub use exactmath::Rational;
pub use recovery::{build_recovery_system, RecoverySet, RecoverySystem};
pub use srr::SrrInstance;
