//! Lyndon algebras of finite lines.
//!
//! The atoms are `1'` and the points of a line `ℓ` with `n` points. Every
//! point is self-converse, and for points `p ≠ q`
//!
//! ```text
//! p ; q = ℓ ∖ {p, q}        p ; p = p + 1'
//! ```

use thiserror::Error;

use crate::algebra::{AtomStructure, Element, FiniteRelationAlgebra};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum LyndonError {
    #[error("a line needs at least one point, got {0}")]
    InvalidSize(usize),
}

/// Atom id of `1'`.
pub const IDENTITY: usize = 0;

/// Atom id of point `p`.
pub fn point(p: usize) -> usize {
    p + 1
}

pub fn lyndon_algebra(n: usize) -> Result<FiniteRelationAlgebra, LyndonError> {
    if n == 0 {
        return Err(LyndonError::InvalidSize(n));
    }
    let structure = AtomStructure::new(n + 1, [IDENTITY], (0..=n).collect(), |a, b| match (a, b) {
        (IDENTITY, b) => vec![b],
        (a, IDENTITY) => vec![a],
        (a, b) if a == b => vec![IDENTITY, a],
        (a, b) => (1..=n).filter(|&c| c != a && c != b).collect(),
    })
    .expect("atoms are in range")
    .with_labels(
        std::iter::once("1'".to_string())
            .chain((0..n).map(|p| format!("p{p}")))
            .collect(),
    )
    .expect("one label per atom");
    Ok(FiniteRelationAlgebra::new(structure))
}

/// The equivalence element `p + 1'`.
pub fn equivalence_element(algebra: &FiniteRelationAlgebra, p: usize) -> Element {
    algebra.element([IDENTITY, point(p)])
}
