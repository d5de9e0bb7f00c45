//! Forest expansions of determinants, characteristic polynomials, minors,
//! cofactors and eigenvectors of weighted digraph adjacency matrices, plus a
//! min-plus layer for sub-generators with exponentially small rates.
//!
//! Library indices are zero-based. The extra boundary vertex `†` of the
//! augmented digraph has index `n`.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod oracles;
pub mod polynomial;
pub mod scalar;
pub mod tropical;

pub use calculus::{
    char_poly, char_poly_augmented, cofactor, denominator_poly, determinant, diagonal_minor_det,
    eigenvector_components, kirchhoff_char_poly, kirchhoff_matrix, numerator_poly, EigenvectorResult,
};
pub use error::{Error, Result};
pub use graph::{build_augmented, AugmentedDigraph, Digraph, Forest, ForestQuery};
pub use matrix::AdjacencyMatrix;
pub use polynomial::{CharPolynomial, Polynomial};
pub use scalar::Rational;
