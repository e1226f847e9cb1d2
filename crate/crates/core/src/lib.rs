//! Chief series of finite-dimensional Lie algebras over small prime fields:
//! Frattini / supplemented / complemented classification of chief factors,
//! m-relatedness between factors, and the Jordan-Hölder permutation pairing
//! the factors of two chief series.

pub mod analysis;
pub mod chieffactors;
pub mod corpus;
pub mod error;
pub mod field;
pub mod ideals;
pub mod jordanholder;
pub mod lie;
pub mod linalg;
pub mod maximal;
pub mod oracle;

pub use analysis::Analysis;
pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use lie::LieAlgebra;
pub use linalg::{Matrix, Subspace};
