//! Symmetric basis-exchange sequences between compatible basis pairs.
//!
//! The crate provides:
//!
//! - exact pair/exchange/sequence primitives with rational weights,
//! - concrete matroid families (graphic matroids and wheels, uniform and
//!   partition matroids, elementary split matroids and direct sums, spikes),
//! - constructive solvers per family producing sequences of bounded length,
//!   weight, and per-element usage,
//! - a brute-force oracle (basis enumeration, exchange-distance search,
//!   monotone-sequence search, bound sweeps, extremal-witness searches)
//!   for ground truth at desk scale.

pub mod error;
pub mod ground;
pub mod instances;
pub mod matroid;
pub mod oracle;
pub mod pairs;
mod par;
pub mod sbo;
pub mod spike;
pub mod split;
pub mod weight;
pub mod wheel;

pub use error::{Error, Result};
pub use ground::{ElemSet, Element, Relabel, MAX_GROUND};
pub use matroid::{DeletionView, MatroidOracle};
pub use pairs::{
    apply_exchange, is_feasible_exchange, lower_bounds, verify_sequence, BasisPair, Exchange,
    ExchangeSequence, SequenceReport, VerifyFailure,
};
pub use weight::{format_weight, parse_weight, Weight, WeightFn};
