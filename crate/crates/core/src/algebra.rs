//! Finite atomic relation algebras.
//!
//! An [`AtomStructure`] fixes the atoms, the identity atoms, the converse
//! permutation and the composition of atoms. [`FiniteRelationAlgebra`] lifts
//! these to [`Element`]s (sets of atoms) and checks the relation algebra
//! axioms at atom level: involution, identity, the Peircean cycle law,
//! converse distribution and associativity. For a finite atomic algebra this
//! is equivalent to the equational axioms.
//!
//! [`build_full_algebra`] assembles the algebra of a group triple, and
//! [`complex_algebra`] the complex algebra of a group.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::groups::FiniteGroup;
use crate::pair::GroupTriple;
use crate::relations::{atom_converse, atom_shifted_compose, atoms, AtomIndex};
use crate::report::{Condition, ConditionReport, Location};

/// Failures recorded per condition before the rest are only counted.
pub const MAX_WITNESSES: usize = 8;

/// Largest number of atoms below a square whose subsets are enumerated
/// exhaustively by [`FiniteRelationAlgebra::measurability`].
pub const EXHAUSTIVE_MEASURE_ATOMS: usize = 20;

/// Node limit of the functional-atom search used above
/// [`EXHAUSTIVE_MEASURE_ATOMS`].
pub const MEASURE_NODE_LIMIT: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("atom {atom} out of range for {atom_count} atoms")]
    OutOfRange { atom: usize, atom_count: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("invalid triple:\n{0}")]
    InvalidTriple(ConditionReport),
}

/// A set of atom ids, stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    len: usize,
    words: Vec<u64>,
}

impl Element {
    pub fn empty(len: usize) -> Self {
        Element {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut e = Self::empty(len);
        for a in 0..len {
            e.insert(a);
        }
        e
    }

    pub fn singleton(len: usize, a: usize) -> Self {
        let mut e = Self::empty(len);
        e.insert(a);
        e
    }

    pub fn from_atoms(len: usize, atoms: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Self::empty(len);
        for a in atoms {
            e.insert(a);
        }
        e
    }

    /// Size of the atom universe.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, a: usize) {
        assert!(a < self.len, "atom {a} out of range for {} atoms", self.len);
        self.words[a / 64] |= 1 << (a % 64);
    }

    pub fn remove(&mut self, a: usize) {
        if a < self.len {
            self.words[a / 64] &= !(1 << (a % 64));
        }
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.len && self.words[a / 64] & (1 << (a % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn union_with(&mut self, other: &Element) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn complement(&self) -> Element {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Element) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Element) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Atoms `0..n`, identity atoms, converse and atom composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomStructure {
    atom_count: usize,
    identity: Element,
    converse: Vec<usize>,
    compose: Vec<Element>,
    labels: Vec<String>,
}

impl AtomStructure {
    /// `compose(a, b)` is called once for every pair of atoms. Labels default
    /// to the atom ids.
    pub fn new<I>(
        atom_count: usize,
        identity_atoms: impl IntoIterator<Item = usize>,
        converse: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> I,
    ) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = usize>,
    {
        let check = |atom: usize| {
            if atom < atom_count {
                Ok(atom)
            } else {
                Err(AlgebraError::OutOfRange { atom, atom_count })
            }
        };
        let mut identity = Element::empty(atom_count);
        for a in identity_atoms {
            identity.insert(check(a)?);
        }
        if converse.len() != atom_count {
            return Err(AlgebraError::OutOfRange {
                atom: converse.len(),
                atom_count,
            });
        }
        for &c in &converse {
            check(c)?;
        }
        let mut table = Vec::with_capacity(atom_count * atom_count);
        for a in 0..atom_count {
            for b in 0..atom_count {
                let mut e = Element::empty(atom_count);
                for c in compose(a, b) {
                    e.insert(check(c)?);
                }
                table.push(e);
            }
        }
        Ok(AtomStructure {
            atom_count,
            identity,
            converse,
            compose: table,
            labels: (0..atom_count).map(|a| a.to_string()).collect(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.atom_count {
            return Err(AlgebraError::LabelCount {
                expected: self.atom_count,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn identity_atoms(&self) -> Vec<usize> {
        self.identity.iter().collect()
    }

    pub fn is_identity_atom(&self, a: usize) -> bool {
        self.identity.contains(a)
    }

    pub fn converse(&self, a: usize) -> usize {
        self.converse[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> &Element {
        &self.compose[a * self.atom_count + b]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// The complex algebra of an [`AtomStructure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelationAlgebra {
    structure: AtomStructure,
}

impl FiniteRelationAlgebra {
    pub fn new(structure: AtomStructure) -> Self {
        FiniteRelationAlgebra { structure }
    }

    pub fn structure(&self) -> &AtomStructure {
        &self.structure
    }

    pub fn atom_count(&self) -> usize {
        self.structure.atom_count
    }

    pub fn zero(&self) -> Element {
        Element::empty(self.atom_count())
    }

    pub fn one(&self) -> Element {
        Element::full(self.atom_count())
    }

    /// `1'`, the union of the identity atoms.
    pub fn identity(&self) -> Element {
        self.structure.identity.clone()
    }

    pub fn atom(&self, a: usize) -> Element {
        Element::singleton(self.atom_count(), a)
    }

    pub fn element(&self, atoms: impl IntoIterator<Item = usize>) -> Element {
        Element::from_atoms(self.atom_count(), atoms)
    }

    pub fn atoms_below(&self, e: &Element) -> Vec<usize> {
        e.iter().collect()
    }

    pub fn join(&self, e: &Element, f: &Element) -> Element {
        e.union(f)
    }

    pub fn meet(&self, e: &Element, f: &Element) -> Element {
        e.intersection(f)
    }

    pub fn complement(&self, e: &Element) -> Element {
        e.complement()
    }

    pub fn converse(&self, e: &Element) -> Element {
        self.element(e.iter().map(|a| self.structure.converse(a)))
    }

    pub fn compose(&self, e: &Element, f: &Element) -> Element {
        let mut out = self.zero();
        for a in e.iter() {
            for b in f.iter() {
                out.union_with(self.structure.compose(a, b));
            }
        }
        out
    }

    /// `f˘ ; f ≤ 1'`.
    pub fn is_functional(&self, f: &Element) -> bool {
        self.compose(&self.converse(f), f).is_subset(&self.structure.identity)
    }

    /// `1 ; a ; 1 = 1` for every atom `a`. False for the algebra with no
    /// atoms.
    pub fn is_simple_ra(&self) -> bool {
        let n = self.atom_count();
        if n == 0 {
            return false;
        }
        let one = self.one();
        (0..n).all(|a| {
            let left = self.compose(&one, &self.atom(a));
            self.compose(&left, &one) == one
        })
    }

    pub fn check_ra_axioms(&self) -> ConditionReport {
        let s = &self.structure;
        let n = s.atom_count;
        let mut report = ConditionReport::new();
        let mut limited = Limited::default();

        for a in 0..n {
            if s.converse(s.converse(a)) != a {
                limited.fail(
                    &mut report,
                    Condition::Involution,
                    Location::Atoms(vec![a]),
                    format!("converse(converse({a})) = {}", s.converse(s.converse(a))),
                );
            }
        }

        for a in 0..n {
            let single = self.atom(a);
            let right = self.compose(&single, &s.identity);
            let left = self.compose(&s.identity, &single);
            if right != single || left != single {
                limited.fail(
                    &mut report,
                    Condition::IdentityLaw,
                    Location::Atoms(vec![a]),
                    format!("{a};1' = {right}, 1';{a} = {left}"),
                );
            }
        }

        for a in 0..n {
            for b in 0..n {
                let ab = s.compose(a, b);
                let ba = s.compose(s.converse(b), s.converse(a));
                let conv = self.converse(ab);
                if conv != *ba {
                    limited.fail(
                        &mut report,
                        Condition::ConverseDistribution,
                        Location::Atoms(vec![a, b]),
                        format!("({a};{b})˘ = {conv}, {b}˘;{a}˘ = {ba}"),
                    );
                }
                for c in 0..n {
                    let first = ab.contains(c);
                    let second = s.compose(s.converse(a), c).contains(b);
                    let third = s.compose(c, s.converse(b)).contains(a);
                    if first != second || first != third {
                        limited.fail(
                            &mut report,
                            Condition::CycleLaw,
                            Location::Atoms(vec![a, b, c]),
                            format!(
                                "{c} ∈ {a};{b} is {first}, {b} ∈ {a}˘;{c} is {second}, {a} ∈ {c};{b}˘ is {third}"
                            ),
                        );
                    }
                }
            }
        }

        let failures: Vec<Vec<(usize, usize, Element, Element)>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut found = Vec::new();
                for b in 0..n {
                    let ab = s.compose(a, b);
                    for c in 0..n {
                        let mut lhs = self.zero();
                        for d in ab.iter() {
                            lhs.union_with(s.compose(d, c));
                        }
                        let mut rhs = self.zero();
                        for e in s.compose(b, c).iter() {
                            rhs.union_with(s.compose(a, e));
                        }
                        if lhs != rhs {
                            found.push((b, c, lhs, rhs));
                        }
                    }
                }
                found
            })
            .collect();
        for (a, found) in failures.into_iter().enumerate() {
            for (b, c, lhs, rhs) in found {
                limited.fail(
                    &mut report,
                    Condition::Associativity,
                    Location::Atoms(vec![a, b, c]),
                    format!("({a};{b});{c} = {lhs}, {a};({b};{c}) = {rhs}"),
                );
            }
        }
        limited.finish(&mut report);
        report
    }

    /// Measurability of every subidentity atom `x`: whether `x;1;x` is a sum
    /// of functional elements, and how many non-zero functional elements lie
    /// below it.
    pub fn measurability(&self) -> MeasurabilityReport {
        let one = self.one();
        let mut atoms = Vec::new();
        for x in self.structure.identity.iter() {
            let ex = self.atom(x);
            let square = self.compose(&self.compose(&ex, &one), &ex);
            let below = self.atoms_below(&square);
            let functional: Vec<usize> = below
                .iter()
                .copied()
                .filter(|&a| self.is_functional(&self.atom(a)))
                .collect();
            let measurable = functional.len() == below.len();
            let (measure, exhaustive) = if below.len() <= EXHAUSTIVE_MEASURE_ATOMS {
                (Some(self.count_functional_exhaustive(&below)), true)
            } else {
                (self.count_functional_search(&functional), false)
            };
            atoms.push(AtomMeasurement {
                atom: x,
                square_atoms: below.len(),
                measurable,
                measure,
                exhaustive,
            });
        }
        MeasurabilityReport {
            measurable: atoms.iter().all(|m| m.measurable),
            atoms,
        }
    }

    /// `compat[i]` has bit `j` when `a_i˘ ; a_j ≤ 1'`.
    fn compatibility(&self, atoms: &[usize]) -> Vec<Vec<bool>> {
        let s = &self.structure;
        atoms
            .iter()
            .map(|&a| {
                atoms
                    .iter()
                    .map(|&b| s.compose(s.converse(a), b).is_subset(&s.identity))
                    .collect()
            })
            .collect()
    }

    /// Every non-empty subset of `atoms`, tested through the pairwise
    /// expansion `e˘;e = ⋃ a_i˘;a_j`.
    fn count_functional_exhaustive(&self, atoms: &[usize]) -> usize {
        let k = atoms.len();
        let compat = self.compatibility(atoms);
        let rows: Vec<u64> = (0..k)
            .map(|i| (0..k).filter(|&j| compat[i][j] && compat[j][i]).fold(0, |m, j| m | 1 << j))
            .collect();
        let mut functional = vec![false; 1 << k];
        functional[0] = true;
        let mut count = 0;
        for mask in 1u64..(1 << k) {
            let high = 63 - mask.leading_zeros() as usize;
            let rest = mask & !(1 << high);
            let ok = functional[rest as usize] && rows[high] & mask == mask;
            functional[mask as usize] = ok;
            count += ok as usize;
        }
        count
    }

    /// Counts sets of pairwise compatible functional atoms, giving up after
    /// [`MEASURE_NODE_LIMIT`] nodes.
    fn count_functional_search(&self, functional: &[usize]) -> Option<usize> {
        let compat = self.compatibility(functional);
        let k = functional.len();
        let ok = |i: usize, j: usize| compat[i][j] && compat[j][i];
        let mut count = 0usize;
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((chosen, start)) = stack.pop() {
            for j in start..k {
                if chosen.iter().all(|&i| ok(i, j)) {
                    count += 1;
                    if count > MEASURE_NODE_LIMIT {
                        return None;
                    }
                    let mut next = chosen.clone();
                    next.push(j);
                    stack.push((next, j + 1));
                }
            }
        }
        Some(count)
    }
}

/// Caps the recorded failures per condition at [`MAX_WITNESSES`].
#[derive(Default)]
struct Limited {
    counts: BTreeMap<Condition, usize>,
}

impl Limited {
    fn fail(&mut self, report: &mut ConditionReport, condition: Condition, location: Location, witness: String) {
        let count = self.counts.entry(condition).or_default();
        *count += 1;
        if *count <= MAX_WITNESSES {
            report.fail(condition, location, witness);
        }
    }

    fn finish(self, report: &mut ConditionReport) {
        for (condition, count) in self.counts {
            if count > MAX_WITNESSES {
                report.note(format!("{condition}: {} further failures not listed", count - MAX_WITNESSES));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomMeasurement {
    /// The subidentity atom `x`.
    pub atom: usize,
    /// Number of atoms below `x;1;x`.
    pub square_atoms: usize,
    pub measurable: bool,
    /// Number of non-zero functional elements below `x;1;x`, or `None` when
    /// the search limit was hit.
    pub measure: Option<usize>,
    /// Whether every subset of the square was examined, rather than only
    /// unions of functional atoms.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurabilityReport {
    pub measurable: bool,
    pub atoms: Vec<AtomMeasurement>,
}

/// The complex algebra of `G`: one atom per element, `1' = {e}`,
/// `g˘ = g⁻¹` and `g ; h = {gh}`.
pub fn complex_algebra(g: &FiniteGroup) -> FiniteRelationAlgebra {
    let structure = AtomStructure::new(
        g.order(),
        [g.identity()],
        g.elements().map(|a| g.inv(a)).collect(),
        |a, b| [g.mul(a, b)],
    )
    .expect("group tables are in range");
    FiniteRelationAlgebra::new(structure)
}

/// The algebra built from a group triple, with the atom index behind each id.
#[derive(Debug, Clone)]
pub struct CosetAlgebra {
    algebra: FiniteRelationAlgebra,
    triple: GroupTriple,
    atoms: Vec<AtomIndex>,
    ids: BTreeMap<AtomIndex, usize>,
}

/// Builds the algebra of a triple: atom ids enumerate `(x, y, α)`
/// lexicographically, `1'` is the set of atoms `(x, x, e)`, converse comes
/// from [`atom_converse`] and composition from [`atom_shifted_compose`]. The
/// result need not satisfy the axioms.
pub fn build_full_algebra(t: &GroupTriple) -> Result<CosetAlgebra, AlgebraError> {
    let (report, canonical) = t.validate();
    let triple = canonical.ok_or(AlgebraError::InvalidTriple(report))?;
    let pair = &triple.pair;
    let list = atoms(pair);
    let ids: BTreeMap<AtomIndex, usize> = list.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let identity = list
        .iter()
        .enumerate()
        .filter(|(_, a)| a.x == a.y && a.alpha == 0)
        .map(|(i, _)| i);
    let converse = list.iter().map(|&a| ids[&atom_converse(pair, a)]).collect();
    let structure = AtomStructure::new(list.len(), identity, converse, |i, j| {
        atom_shifted_compose(&triple, list[i], list[j])
            .into_iter()
            .map(|c| ids[&c])
            .collect::<Vec<_>>()
    })?
    .with_labels(list.iter().map(|a| a.to_string()).collect())?;
    Ok(CosetAlgebra {
        algebra: FiniteRelationAlgebra::new(structure),
        triple,
        atoms: list,
        ids,
    })
}

impl CosetAlgebra {
    pub fn algebra(&self) -> &FiniteRelationAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> FiniteRelationAlgebra {
        self.algebra
    }

    /// The canonical triple the algebra was built from.
    pub fn triple(&self) -> &GroupTriple {
        &self.triple
    }

    pub fn atom_index(&self, id: usize) -> AtomIndex {
        self.atoms[id]
    }

    pub fn atom_indices(&self) -> &[AtomIndex] {
        &self.atoms
    }

    pub fn id_of(&self, a: AtomIndex) -> Option<usize> {
        self.ids.get(&a).copied()
    }

    /// `G_x × G_y` as an element; empty when `(x, y)` is not in `E`.
    pub fn block(&self, x: usize, y: usize) -> Element {
        self.algebra.element(
            self.atoms
                .iter()
                .enumerate()
                .filter(|(_, a)| a.x == x && a.y == y)
                .map(|(i, _)| i),
        )
    }

    /// The identity atom `R_{xx,e}` of index `x`.
    pub fn identity_atom(&self, x: usize) -> usize {
        self.ids[&AtomIndex::new(x, x, 0)]
    }

    /// `a ; a˘ = {R_{xx,g} : g ∈ H_xy}` for every atom and
    /// `(G_x×G_y) ; (G_y×G_z) = G_x×G_z` for every triple of `E`, on elements.
    pub fn check_square_and_row(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        let alg = &self.algebra;
        let pair = &self.triple.pair;
        for (id, a) in self.atoms.iter().enumerate() {
            let single = alg.atom(id);
            let got = alg.compose(&single, &alg.converse(&single));
            let expected = alg.element(pair.h(a.x, a.y).iter().map(|g| self.ids[&AtomIndex::new(a.x, a.x, g)]));
            if got != expected {
                report.fail(
                    Condition::ShiftedSquare,
                    Location::Pair(a.x, a.y),
                    format!("{a};{a}˘ = {got}, expected {expected}"),
                );
            }
        }
        for (x, y, z) in pair.triples() {
            let got = alg.compose(&self.block(x, y), &self.block(y, z));
            if got != self.block(x, z) {
                report.fail(
                    Condition::ShiftedRow,
                    Location::Triple(x, y, z),
                    format!("block product is {got}"),
                );
            }
        }
        report
    }
}
