//! Quadratic spaces over GF(2^n) and the conformal geometries built on them.

pub mod error;
pub mod field;
pub mod geometry;
pub mod group;
pub mod linalg;
pub mod metric;
pub mod oracle;
pub mod quadratic;
pub mod virtual_space;

pub use error::{Error, Result};
pub use field::{ArfClass, ArfValue, FieldElement, FieldSpec};
pub use linalg::{Matrix, Subspace, Vector};
pub use quadratic::QuadraticForm;
