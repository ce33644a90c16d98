//! Exact verification toolkit for the Jacobian condition of d-linear maps.
//!
//! The crate computes the generators of the Jacobian ideal `J_{d,n}`, fern
//! weight elements, the truncated formal inverse of a d-linear map, verifies
//! the two generalized Cayley-Hamilton identities symbolically and through
//! their sign-reversing involutions, and certifies ideal membership by exact
//! linear algebra.

pub mod algebra;
pub mod combinatorics;
mod error;
pub mod fern;
pub mod generators;
pub mod ideal;
pub mod identities;
pub mod involution;
pub mod inverse;

pub use error::{Error, Result};
