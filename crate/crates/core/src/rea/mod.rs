//! The reflection equation algebra: quadratic exchange relations derived
//! from `L₁R̂L₁R̂ = R̂L₁R̂L₁`, a PBW rewrite system on sorted words, and
//! matrices over the algebra.

mod matrix;
mod ncpoly;
mod rewrite;

pub use matrix::Matrix;
pub use ncpoly::{Generator, NCPoly, Word};
pub use rewrite::{derive_relations, l_matrix_op, ConfluenceReport, RewriteSystem, Strategy};
