//! Complexes of finite modules, their tensor products, derived morphisms and
//! local cohomology.

pub mod cech;
pub mod complex;
pub mod derived_hom;
pub mod graded;
pub mod local_cohomology;
pub mod profile;
pub mod resolution;
pub mod tensor;

pub use complex::{ChainMap, Complex};
pub use derived_hom::{DMor, DerivedHom};
pub use profile::InvariantProfile;
