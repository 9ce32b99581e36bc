//! Variable-exponent sequence spaces and discrete harmonic analysis.
//!
//! This crate implements the computational core for sequence spaces with a
//! variable summability exponent `p(i)`:
//!
//! - [`exponents`]: exponent sequences `p(·): ℤ → [1, ∞)` stored as a tabulated
//!   window plus a constant tail, with conjugation, scaling, Sobolev shifts,
//!   and the log-Hölder decay constant;
//! - [`spaces`]: finitely supported sequences, the modular, the Luxemburg norm
//!   (bracketed bisection), the Hölder pairing, and a duality-based norm
//!   estimate;
//! - [`operators`]: the discrete fractional maximal operator, Hilbert
//!   transform, Riesz potential, the grid-restricted maximal and its iterates,
//!   and pointwise `ℓ^θ` aggregation of families;
//! - [`weights`]: discrete Muckenhoupt constants (`A_1`, `A_r`, `A_{r,s}`) over
//!   all subintervals of a grid, plus power-weight generators;
//! - [`rdf`]: the Rubio de Francia iteration `b ↦ Σ_k M^k b / (2A)^k`, an
//!   empirical maximal-norm estimator, and a report of the iteration's three
//!   defining properties;
//! - [`ensemble`]: deterministic seeded ensembles of test sequences.
//!
//! Everything here is pure computation on owned data: no IO, no global state,
//! and reproducible output for a given input. File formats, the CLI, and the
//! verification harness live in the companion `varseq` crate.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("varseq-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod ensemble;
pub mod error;
pub mod exponents;
mod fmath;
pub mod operators;
pub mod rdf;
pub mod rng;
pub mod spaces;
pub mod weights;

pub use error::CoreError;
pub use exponents::ExponentSequence;
pub use operators::Grid;
pub use spaces::Seq;
pub use weights::Weight;

/// Default relative tolerance for norm bisections.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
