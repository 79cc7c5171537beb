//! Integer matrices as morphisms `E^g -> E^r`.

pub mod enumerate;
pub mod gauss;
pub mod helping;
pub mod matrix;

pub use enumerate::{count_gauss_reduced, count_special, enumerate_gauss_reduced, enumerate_special};
pub use gauss::{classify_special, gauss_reduce, is_gauss_reduced, kernel_contains_up_to_torsion, GaussReducedForm, SpecialClass, SpecialKind};
pub use helping::{helping_isogenies, HelpingTriple};
pub use matrix::IntMorphism;
