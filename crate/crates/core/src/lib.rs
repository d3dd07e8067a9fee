//! Verification of totally acyclic complexes over short graded algebras
//! (cube of the maximal ideal zero) over prime fields, and of the connected
//! sum constructions built from them.

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod connected_sum;
pub mod doubling;
pub mod error;
pub mod ezd;
pub mod field;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod linalg;

pub use algebra::{Element, LiftPair, ShortAlgebra};
pub use complex::{LinearMatrix, PeriodicComplex};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use linalg::DenseMatrix;
