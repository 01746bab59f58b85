//! Coherent configurations whose fibers are `C_p ≀ C_p`.
//!
//! The crate verifies coherent configurations given as color matrices,
//! computes closed subsets, thin radicals and thin residues, builds schemes
//! from groups, closes colorings under two-dimensional Weisfeiler-Leman
//! refinement, and extracts generalized Hadamard matrices and mutually
//! unbiased bases from configurations with `C_p ≀ C_p` fibers. All
//! arithmetic is exact.

pub mod cli;
pub mod coherent;
pub mod constructions;
pub mod cyclotomic;
pub mod fixtures;
pub mod hadamard;
pub mod regularity;
pub mod stabilization;
pub mod structure;

pub use coherent::{
    build_configuration, check_lemma_int, Color, ColorMatrix, ColorSet, Configuration,
};
