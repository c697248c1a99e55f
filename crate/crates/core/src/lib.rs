//! Exact computations with cosets, torsion cosets and curves in algebraic
//! tori `G_m^n`: special and weakly special closures, defects, bounded
//! certified searches for atypical intersections, and finite models of
//! special structures for property-testing the formal theory.

pub mod atypical;
pub mod axiom_lab;
pub mod curve;
pub mod error;
pub mod fuzz;
pub mod lattice;
pub mod modp;
pub mod poly;
pub mod scalar;
pub mod torus;
pub mod wire;

pub use error::{Error, Result};
