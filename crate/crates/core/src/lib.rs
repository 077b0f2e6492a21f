//! Exact computation of torsion functors, local cohomology and idempotent
//! pairs over polynomial rings and explicit finite commutative rings.

pub mod error;
pub mod exact;
pub mod homotopy;
pub mod idempotents;
pub mod linalg;
pub mod suite;
pub mod support;
pub mod torsion;

pub use error::{Error, Result};
