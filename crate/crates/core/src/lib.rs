//! Smooth-number counting and bound machinery.
//!
//! The crate computes exact counts of y-smooth integers up to x by two
//! independent methods, numerical values of Dickman's function, rigorous
//! lower/upper lattice-simplex sandwich counts, the auxiliary weighted
//! lattice sums F(c,M) / G(c,M) with their iteration kernel, and the
//! iterated-logarithm bound evaluators, together with sieve-backed prime
//! queries and an exhaustive prime-gap scanner.
//!
//! Everything here is `no_std` + `alloc`; IO, CLI and file formats live in
//! the companion `smoothbound-cli` crate.

#![no_std]
#![deny(unsafe_code)]
// `!(x > 0.0)` guards reject NaN along with the out-of-domain values;
// the suggested `x <= 0.0` would silently admit NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod bertrand;
pub mod dickman;
pub mod error;
pub mod iterlog;
pub mod logvalue;
pub mod math;
pub mod primes;
pub mod recursion;
pub mod simplex;
pub mod smooth;

pub use error::{Error, Result};
pub use logvalue::LogValue;
pub use primes::PrimeTable;
pub use smooth::{Convention, SmoothQuery};
