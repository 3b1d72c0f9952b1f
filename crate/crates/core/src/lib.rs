//! Exact characteristic-class calculus on products of projective spaces.
//!
//! The crate computes Chern characters, Adams and Bott operations, Todd and
//! inverse-Todd genera, the mod-p operations `T_i` and `T^i`, and checks the
//! p-integrality of the Chern character together with the degree-formula
//! arithmetic on variety records. Everything is exact: rationals are
//! `num-rational` values and mod-p classes are tagged with their prime.

pub mod degree;
pub mod error;
pub mod integrality;
pub mod exactnum;
pub mod kchow;
pub mod numeric_checks;
pub mod poly;
pub mod render;
pub mod report;
pub mod rng;
pub mod series;
pub mod steenrod;

pub use error::{Error, Result};
