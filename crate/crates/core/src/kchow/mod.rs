//! Products of projective spaces: Chow rings, `K_0` and `K'_0`, genera,
//! Chern characters, Adams and Bott operations, and simple morphisms.

mod chow;
mod genus;
mod ktheory;
mod morphism;
mod variety;

pub use chow::{codim_exponents, ChowElt};
pub use genus::{genus_apply, r_class, r_component, todd_class, w_class};
pub use ktheory::{FactorTable, KCohElt, KHomElt, VirtualBundle};
pub use morphism::Morphism;
pub use variety::ModelVariety;
