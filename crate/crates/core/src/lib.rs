//! Khovanov-type homologies of braid closures over a family of rank-2
//! Frobenius algebras, and the transverse invariants read off from them.

pub mod coeff;
pub mod error;
pub mod frobenius;
pub mod braid;
pub mod cube;
pub mod homalg;
pub mod invariants;
pub mod moves;
pub mod catalog;

pub use error::{Error, Result};
