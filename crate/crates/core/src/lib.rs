//! Exact arithmetic for pencils of symmetric matrices, binary quartic
//! covariants, and simultaneous diagonalization over number fields.

pub mod calibrate;
pub mod diagonalize;
pub mod error;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod pencil;
pub mod quartic;
pub mod roots;
pub mod wood;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldTower, Rational};
