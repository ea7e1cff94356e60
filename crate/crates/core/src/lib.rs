//! Finite coset relation algebras.
//!
//! A [`pair::GroupTriple`] (groups, an equivalence on their indices, quotient
//! isomorphisms and shifting cosets) determines an atom structure whose
//! atoms are unions of products of cosets. This crate validates such data,
//! builds the resulting algebra, checks the relation algebra axioms, and
//! compares it with Lyndon algebras and complex algebras of groups.

pub mod groups;
pub mod report;
pub mod pair;
pub mod fixtures;
pub mod relations;
pub mod algebra;
pub mod lyndon;
pub mod analysis;
pub mod records;
