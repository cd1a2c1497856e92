//! Core numerics for power-free values of polynomials over integers, primes,
//! and sums of two squares: transitive-group entropies, Sanov-type rate
//! functions, the minimax log-power exponent, local root densities with
//! Euler-product predictions, and an exact survey engine.
//!
//! The crate is `no_std` + `alloc`; all IO, CLI and file formats live in the
//! companion `powerfree` binary crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod catalog;
pub mod error;
pub mod exponents;
pub mod groups;
pub mod localarith;
pub mod perm;
pub mod ratefn;
pub mod rng;
pub mod sequences;
pub mod survey;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
