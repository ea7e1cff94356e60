//! Concrete relations over the disjoint union of the group carriers.
//!
//! [`atom_relation`] expands `R_{xy,α} = ⋃_γ H_{xy,γ} × (K_{xy,γ} ∘ K_{xy,α})`
//! into an explicit set of pairs. [`rel_converse`] and [`rel_compose`] are
//! brute-force set operations; they serve as the oracle that every atom-level
//! map in this module ([`atom_converse`], [`atom_compose`],
//! [`atom_shifted_compose`]) is checked against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groups::Subset;
use crate::pair::{GroupPair, GroupTriple};
use crate::report::{Condition, ConditionReport, Location};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("atom {0} does not exist")]
    IndexOutOfRange(AtomIndex),
}

/// An element `g` of the group `G_x`, tagged with `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub index: usize,
    pub element: usize,
}

impl Point {
    pub fn new(index: usize, element: usize) -> Self {
        Point { index, element }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.index, self.element)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConcreteRelation(BTreeSet<(Point, Point)>);

impl ConcreteRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, u: Point, v: Point) -> bool {
        self.0.contains(&(u, v))
    }

    pub fn insert(&mut self, u: Point, v: Point) -> bool {
        self.0.insert((u, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &ConcreteRelation) -> ConcreteRelation {
        ConcreteRelation(self.0.union(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &ConcreteRelation) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// The identity relation on `G_x`.
    pub fn identity_on(index: usize, order: usize) -> Self {
        (0..order)
            .map(|g| (Point::new(index, g), Point::new(index, g)))
            .collect()
    }

    /// `G_x × G_y`.
    pub fn block(pair: &GroupPair, x: usize, y: usize) -> Self {
        let (nx, ny) = (pair.group(x).order(), pair.group(y).order());
        (0..nx)
            .flat_map(|u| (0..ny).map(move |v| (Point::new(x, u), Point::new(y, v))))
            .collect()
    }
}

impl FromIterator<(Point, Point)> for ConcreteRelation {
    fn from_iter<I: IntoIterator<Item = (Point, Point)>>(iter: I) -> Self {
        ConcreteRelation(iter.into_iter().collect())
    }
}

impl fmt::Display for ConcreteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (u, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({u},{v})")?;
        }
        write!(f, "}}")
    }
}

/// `(x, y, α)`; on the diagonal `α` is a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomIndex {
    pub x: usize,
    pub y: usize,
    pub alpha: usize,
}

impl AtomIndex {
    pub fn new(x: usize, y: usize, alpha: usize) -> Self {
        AtomIndex { x, y, alpha }
    }
}

impl fmt::Display for AtomIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R[{},{},α={}]", self.x, self.y, self.alpha)
    }
}

/// Every atom index of the pair, in lexicographic order.
pub fn atoms(pair: &GroupPair) -> Vec<AtomIndex> {
    pair.equivalence()
        .iter()
        .flat_map(|&(x, y)| (0..pair.kappa(x, y)).map(move |a| AtomIndex::new(x, y, a)))
        .collect()
}

fn check_index(pair: &GroupPair, a: AtomIndex) -> Result<(), RelationError> {
    if pair.contains_pair(a.x, a.y) && a.alpha < pair.kappa(a.x, a.y) {
        Ok(())
    } else {
        Err(RelationError::IndexOutOfRange(a))
    }
}

/// Expands `R_{xy,α}` into its set of pairs.
pub fn atom_relation(pair: &GroupPair, a: AtomIndex) -> Result<ConcreteRelation, RelationError> {
    check_index(pair, a)?;
    let iso = pair.iso(a.x, a.y);
    let gy = pair.group(a.y);
    let k_alpha = iso.k_coset(a.alpha);
    let mut rel = ConcreteRelation::new();
    for gamma in 0..iso.kappa() {
        let right = gy.complex_product(iso.k_coset(gamma), k_alpha);
        for u in iso.h_coset(gamma).iter() {
            for v in right.iter() {
                rel.insert(Point::new(a.x, u), Point::new(a.y, v));
            }
        }
    }
    Ok(rel)
}

/// Membership `(u, v) ∈ R_{xy,α}` for `u ∈ G_x`, `v ∈ G_y`, without
/// expanding the relation.
pub fn atom_contains(pair: &GroupPair, a: AtomIndex, u: usize, v: usize) -> bool {
    let iso = pair.iso(a.x, a.y);
    let gamma = iso.gamma_of_source(u);
    let gy = pair.group(a.y);
    // v ∈ K_γ ∘ K_α  iff  the coset of v is K_γ K_α
    let target = gy.complex_product(iso.k_coset(gamma), iso.k_coset(a.alpha));
    target.contains(v)
}

pub fn rel_converse(r: &ConcreteRelation) -> ConcreteRelation {
    r.iter().map(|(u, v)| (v, u)).collect()
}

pub fn rel_compose(r: &ConcreteRelation, s: &ConcreteRelation) -> ConcreteRelation {
    let mut succ: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
    for (v, w) in s.iter() {
        succ.entry(v).or_default().push(w);
    }
    let mut out = ConcreteRelation::new();
    for (u, v) in r.iter() {
        if let Some(ws) = succ.get(&v) {
            for &w in ws {
                out.insert(u, w);
            }
        }
    }
    out
}

/// The union of the relations of `atoms`.
pub fn union_of(pair: &GroupPair, atoms: &[AtomIndex]) -> ConcreteRelation {
    let mut out = ConcreteRelation::new();
    for &a in atoms {
        out.0.extend(atom_relation(pair, a).expect("valid atom").0);
    }
    out
}

/// `(y, x, β)` with `H_{xy,β} = H_{xy,α}⁻¹`.
pub fn atom_converse(pair: &GroupPair, a: AtomIndex) -> AtomIndex {
    let iso = pair.iso(a.x, a.y);
    let inverse = pair.group(a.x).inverse_set(iso.h_coset(a.alpha));
    let beta = iso.gamma_of_source(inverse.smallest().expect("cosets are non-empty"));
    AtomIndex::new(a.y, a.x, beta)
}

fn compose_with(
    pair: &GroupPair,
    a: AtomIndex,
    b: AtomIndex,
    shift: Option<&Subset>,
) -> Vec<AtomIndex> {
    if a.y != b.x {
        return Vec::new();
    }
    let (x, y, z) = (a.x, a.y, b.y);
    let (xy, yz, xz) = (pair.iso(x, y), pair.iso(y, z), pair.iso(x, z));
    let middle = pair
        .group(y)
        .complex_product(xy.k_coset(a.alpha), yz.h_coset(b.alpha));
    let mut target = xy.preimage(&middle);
    if let Some(c) = shift {
        target = pair.group(x).complex_product(&target, c);
    }
    let gammas: BTreeSet<usize> = target.iter().map(|g| xz.gamma_of_source(g)).collect();
    gammas
        .into_iter()
        .filter(|&g| xz.h_coset(g).is_subset(&target))
        .map(|g| AtomIndex::new(x, z, g))
        .collect()
}

/// Atoms `(x, z, γ)` with `H_{xz,γ} ⊆ φ_xy⁻¹[K_{xy,α} ∘ H_{yz,β}]`; empty when
/// the middle indices differ.
pub fn atom_compose(pair: &GroupPair, a: AtomIndex, b: AtomIndex) -> Vec<AtomIndex> {
    compose_with(pair, a, b, None)
}

/// As [`atom_compose`] with the target coset multiplied on the right by
/// `C_xyz`.
pub fn atom_shifted_compose(triple: &GroupTriple, a: AtomIndex, b: AtomIndex) -> Vec<AtomIndex> {
    if a.y != b.x {
        return Vec::new();
    }
    let c = triple.shift(a.x, a.y, b.y);
    compose_with(&triple.pair, a, b, Some(c))
}

/// Atoms of the block `G_x × G_y`.
pub fn block_atoms(pair: &GroupPair, x: usize, y: usize) -> Vec<AtomIndex> {
    (0..pair.kappa(x, y)).map(|a| AtomIndex::new(x, y, a)).collect()
}

/// The atoms of each block are non-empty, pairwise disjoint and cover it.
pub fn check_partition(pair: &GroupPair) -> ConditionReport {
    let mut report = ConditionReport::new();
    for &(x, y) in pair.equivalence() {
        let block = ConcreteRelation::block(pair, x, y);
        let mut seen = ConcreteRelation::new();
        let mut total = 0;
        for a in block_atoms(pair, x, y) {
            let r = atom_relation(pair, a).unwrap();
            if r.is_empty() {
                report.fail(Condition::Partition, Location::Pair(x, y), format!("{a} is empty"));
            }
            if !r.is_disjoint(&seen) {
                report.fail(
                    Condition::Partition,
                    Location::Pair(x, y),
                    format!("{a} overlaps an earlier atom"),
                );
            }
            total += r.len();
            seen = seen.union(&r);
        }
        if seen != block || total != block.len() {
            report.fail(
                Condition::Partition,
                Location::Pair(x, y),
                format!("atoms cover {} of {} pairs", seen.len(), block.len()),
            );
        }
    }
    report
}

/// `R_{xx,e} = id_{G_x}` for every index.
pub fn check_identity_atoms(pair: &GroupPair) -> ConditionReport {
    let mut report = ConditionReport::new();
    for x in 0..pair.len() {
        let r = atom_relation(pair, AtomIndex::new(x, x, 0)).unwrap();
        if r != ConcreteRelation::identity_on(x, pair.group(x).order()) {
            report.fail(Condition::IdentityAtom, Location::Index(x), format!("R[{x},{x},0] = {r}"));
        }
    }
    report
}

/// `atom_relation(atom_converse(a)) = rel_converse(atom_relation(a))` for
/// every atom.
pub fn check_converse_coherence(pair: &GroupPair) -> ConditionReport {
    let mut report = ConditionReport::new();
    for a in atoms(pair) {
        let c = atom_converse(pair, a);
        let lhs = atom_relation(pair, c);
        let rhs = rel_converse(&atom_relation(pair, a).unwrap());
        if lhs.as_ref() != Ok(&rhs) {
            report.fail(
                Condition::ConverseCoherence,
                Location::Pair(a.x, a.y),
                format!("{a}⁻¹ is not {c}"),
            );
        }
    }
    report
}

/// How composition coherence is checked on large blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    /// Blocks with at most this many pairs are checked exhaustively.
    pub exhaustive_limit: usize,
    /// Points sampled from each atom pair's result block above the limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            exhaustive_limit: 10_000,
            samples: 1_000,
            seed: 0x0dd_ba11,
        }
    }
}

/// Counts of what [`check_composition_coherence`] looked at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoherenceStats {
    pub exhaustive_pairs: usize,
    pub sampled_pairs: usize,
    pub sampled_points: usize,
}

/// The union of `atom_compose(a, b)` equals `rel_compose` of the two atom
/// relations, for every composable atom pair. Blocks above
/// `sampling.exhaustive_limit` pairs are checked on random points instead.
pub fn check_composition_coherence(pair: &GroupPair, sampling: Sampling) -> (ConditionReport, CoherenceStats) {
    let mut report = ConditionReport::new();
    let mut stats = CoherenceStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut cache: BTreeMap<AtomIndex, ConcreteRelation> = BTreeMap::new();
    for (x, y, z) in pair.triples() {
        let (nx, ny, nz) = (pair.group(x).order(), pair.group(y).order(), pair.group(z).order());
        let exhaustive = nx * nz <= sampling.exhaustive_limit && nx * ny <= sampling.exhaustive_limit;
        for a in block_atoms(pair, x, y) {
            for b in block_atoms(pair, y, z) {
                let predicted = atom_compose(pair, a, b);
                let ok = if exhaustive {
                    stats.exhaustive_pairs += 1;
                    for atom in [a, b].iter().chain(predicted.iter()) {
                        cache
                            .entry(*atom)
                            .or_insert_with(|| atom_relation(pair, *atom).unwrap());
                    }
                    let actual = rel_compose(&cache[&a], &cache[&b]);
                    let mut union = ConcreteRelation::new();
                    for p in &predicted {
                        union = union.union(&cache[p]);
                    }
                    actual == union
                } else {
                    stats.sampled_pairs += 1;
                    (0..sampling.samples).all(|_| {
                        stats.sampled_points += 1;
                        let (u, w) = (rng.gen_range(0..nx), rng.gen_range(0..nz));
                        let actual = (0..ny)
                            .any(|v| atom_contains(pair, a, u, v) && atom_contains(pair, b, v, w));
                        let expected = predicted.iter().any(|&c| atom_contains(pair, c, u, w));
                        actual == expected
                    })
                };
                if !ok {
                    report.fail(
                        Condition::CompositionCoherence,
                        Location::Triple(x, y, z),
                        format!("{a};{b} predicted as {predicted:?}"),
                    );
                }
            }
        }
    }
    (report, stats)
}

/// `a ⊗ a⁻¹ = a ∘ a⁻¹ = {R_{xx,g} : g ∈ H_xy}` for every atom.
pub fn check_square_identity(triple: &GroupTriple) -> ConditionReport {
    let mut report = ConditionReport::new();
    let pair = &triple.pair;
    for a in atoms(pair) {
        let c = atom_converse(pair, a);
        let expected: Vec<AtomIndex> = pair
            .h(a.x, a.y)
            .iter()
            .map(|g| AtomIndex::new(a.x, a.x, g))
            .collect();
        let plain = atom_compose(pair, a, c);
        let shifted = atom_shifted_compose(triple, a, c);
        if plain != expected || shifted != expected {
            report.fail(
                Condition::ShiftedSquare,
                Location::Pair(a.x, a.y),
                format!("{a}: ⊗ gives {shifted:?}, ∘ gives {plain:?}, expected {expected:?}"),
            );
        }
    }
    report
}

/// `(G_x×G_y) ⊗ (G_y×G_z) = (G_x×G_y) ∘ (G_y×G_z) = G_x×G_z` at atom level,
/// plus the concrete second equality for blocks of at most `concrete_limit`
/// pairs.
pub fn check_row_identity(triple: &GroupTriple, concrete_limit: usize) -> ConditionReport {
    let mut report = ConditionReport::new();
    let pair = &triple.pair;
    for (x, y, z) in pair.triples() {
        let full: BTreeSet<AtomIndex> = block_atoms(pair, x, z).into_iter().collect();
        let mut plain = BTreeSet::new();
        let mut shifted = BTreeSet::new();
        for a in block_atoms(pair, x, y) {
            for b in block_atoms(pair, y, z) {
                plain.extend(atom_compose(pair, a, b));
                shifted.extend(atom_shifted_compose(triple, a, b));
            }
        }
        if plain != full || shifted != full {
            report.fail(
                Condition::ShiftedRow,
                Location::Triple(x, y, z),
                format!(
                    "⊗ row covers {} and ∘ row covers {} of {} atoms",
                    shifted.len(),
                    plain.len(),
                    full.len()
                ),
            );
        }
        let (nx, ny, nz) = (pair.group(x).order(), pair.group(y).order(), pair.group(z).order());
        if nx * ny <= concrete_limit && ny * nz <= concrete_limit {
            let lhs = rel_compose(&ConcreteRelation::block(pair, x, y), &ConcreteRelation::block(pair, y, z));
            if lhs != ConcreteRelation::block(pair, x, z) {
                report.fail(
                    Condition::ShiftedRow,
                    Location::Triple(x, y, z),
                    "concrete block composition is not G_x × G_z",
                );
            }
        }
    }
    report
}
