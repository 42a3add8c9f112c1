//! Quantitative security evaluation for keys produced by quantum key
//! distribution.
//!
//! The crate cross-checks the numbers behind trace-distance ("ε-security")
//! claims from several independent directions:
//!
//! - [`probdist`]: exact finite distributions, statistical distance,
//!   guessing probability and binary entropy.
//! - [`coupling`]: maximal couplings, an exact linear-program oracle for the
//!   coupling inequality, the copy-channel identity and the gap between the
//!   maximal and the independent coupling.
//! - [`quantum`]: trace distance, Helstrom minimum error, measured distance
//!   and overlap for small density matrices.
//! - [`bounds`]: guessing-probability bounds, leakage estimates and the
//!   finite-key length / security-rate trade-off, in log-domain arithmetic.
//! - [`attacks`]: one-time pad ciphertext-only and known-plaintext attacks,
//!   Toeplitz hashing and the effect of privacy amplification on guessing.
//! - [`rngtest`]: simulated imperfect randomness sources and exact
//!   uniformity checks.
//! - [`cli`]: the `qkdsec` command-line front end.

pub mod attacks;
pub mod bits;
pub mod bounds;
pub mod cli;
pub mod coupling;
pub mod error;
pub mod logprob;
pub mod probdist;
pub mod quantum;
pub mod rngtest;

pub use bits::BitString;
pub use error::{Error, Result};
pub use logprob::LogProb;
pub use probdist::{ConditionalChannel, Distribution, JointDistribution};
