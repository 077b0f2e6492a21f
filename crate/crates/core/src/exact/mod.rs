//! Exact arithmetic: polynomials and ideals over Q and F_p, explicit finite
//! rings and modules over them.

pub mod finite_ring;
pub mod localize;
pub mod groebner;
pub mod ideal;
pub mod module;
pub mod parse;
pub mod poly;
pub mod polymod;
pub mod presentation;
pub mod scalar;

pub use finite_ring::{FiniteRing, Prime, RingMap};
pub use ideal::{Ideal, IdealOp};
pub use module::{FinModule, HomSpace, Subquotient, TensorModule};
pub use poly::{MonomialOrder, PolyRing, Polynomial};
pub use scalar::{Field, Scalar};
