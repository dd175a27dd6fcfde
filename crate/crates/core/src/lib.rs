//! Exact `gamma_2`-positivity and nefness checks for complete simplicial toric
//! varieties given by their fans.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals).

pub mod catalog;
pub mod error;
pub mod fan;
pub mod fanfile;
pub mod gamma2;
pub mod lattice;
pub mod report;
pub mod singularities;
pub mod verify;
pub mod walls;

pub use error::{Error, Result};
pub use fan::{Cone, Fan};
pub use lattice::{LatticePoint, Rational};
