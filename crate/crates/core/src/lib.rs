//! Exact-arithmetic index iteration data for closed characteristics on
//! star-shaped hypersurfaces in R^4.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; IO, config files and the CLI live in the
//! `maslovkit` crate.

#![no_std]
#![warn(clippy::std_instead_of_alloc)]
#![warn(clippy::std_instead_of_core)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

pub mod analyzer;
pub mod critical;
pub mod iteration;
pub mod resonance;
pub mod series;
pub mod symplectic;

pub use self::error::Error;

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::Ratio<i64>;

pub type Result<T> = core::result::Result<T, Error>;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Shorthand for `numer / denom` as a reduced [`Rational`].
pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}
