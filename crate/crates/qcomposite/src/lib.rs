//! Analysis toolkit for the q-composite key predistribution scheme in
//! wireless sensor networks: exact node-capture resilience, asymptotic
//! design rules, secure-connectivity Monte Carlo on the unit torus, and
//! replication-attack planning.
//!
//! Modules:
//! - [`exact`]: lossless big-rational probabilities (overlap, link setup,
//!   captured-key coverage, link compromise).
//! - [`asymptotic`]: large-network laws, optimal overlap thresholds, and
//!   critical design parameters for connectivity.
//! - [`sim`]: seeded Monte Carlo over the intersection of the key graph
//!   and the random geometric graph on the unit torus.
//! - [`replication`]: exact and asymptotic replication-attack success and
//!   the attacker's optimal budget split.
//!
//! Trials and the heavy inclusion-exclusion sums run on rayon by default;
//! build with `--no-default-features` for a fully sequential library with
//! bit-identical results.

pub mod asymptotic;
pub mod error;
pub mod exact;
pub mod replication;
pub mod runner;
pub mod sim;
pub mod types;

pub use error::{Error, Result};
pub use types::{ExactProbability, SchemeParams};
