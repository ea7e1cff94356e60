//! Embeddings, shift systems and the point analysis of embedded Lyndon
//! algebras.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::algebra::{build_full_algebra, AlgebraError, CosetAlgebra, Element, FiniteRelationAlgebra};
use crate::groups::Subset;
use crate::lyndon;
use crate::pair::{GroupPair, GroupTriple};
use crate::relations::{atom_compose, atom_shifted_compose, atoms, AtomIndex};
use crate::report::{Condition, ConditionReport, Location};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("invalid triple:\n{0}")]
    InvalidTriple(ConditionReport),
    #[error(transparent)]
    Algebra(AlgebraError),
}

impl From<AlgebraError> for AnalysisError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::InvalidTriple(r) => AnalysisError::InvalidTriple(r),
            other => AnalysisError::Algebra(other),
        }
    }
}

/// A map from source atoms to target elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub source: FiniteRelationAlgebra,
    pub target: FiniteRelationAlgebra,
    pub map: Vec<Element>,
    /// Whether `θ(1) = 1` was required.
    pub unital: bool,
}

/// Largest source, in elements, whose element pairs are all checked by
/// [`Embedding::verify`].
pub const EXHAUSTIVE_VERIFY_ELEMENTS: usize = 1 << 12;

impl Embedding {
    /// `θ(e)`, the union of the images of the atoms of `e`.
    pub fn image(&self, e: &Element) -> Element {
        let mut out = self.target.zero();
        for a in e.iter() {
            out.union_with(&self.map[a]);
        }
        out
    }

    /// Checks the embedding on atoms and, for sources with at most
    /// [`EXHAUSTIVE_VERIFY_ELEMENTS`] elements, on every pair of elements.
    pub fn verify(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        let (src, tgt) = (&self.source, &self.target);
        let n = src.atom_count();
        let fail = |report: &mut ConditionReport, loc: Vec<usize>, w: String| {
            report.fail(Condition::Embedding, Location::Atoms(loc), w);
        };
        if self.map.len() != n {
            fail(&mut report, vec![], format!("{} images for {n} atoms", self.map.len()));
            return report;
        }
        let mut seen = tgt.zero();
        for (a, img) in self.map.iter().enumerate() {
            if img.is_empty() {
                fail(&mut report, vec![a], format!("θ({a}) is empty"));
            }
            if !img.is_disjoint(&seen) {
                fail(&mut report, vec![a], format!("θ({a}) = {img} overlaps earlier images"));
            }
            seen.union_with(img);
        }
        if self.unital && seen != tgt.one() {
            fail(&mut report, vec![], format!("θ(1) = {seen}"));
        }
        if self.image(&src.identity()) != tgt.identity() {
            fail(&mut report, vec![], format!("θ(1') = {}", self.image(&src.identity())));
        }
        for a in 0..n {
            let conv = self.map[src.structure().converse(a)].clone();
            if conv != tgt.converse(&self.map[a]) {
                fail(&mut report, vec![a], format!("θ({a}˘) ≠ θ({a})˘"));
            }
            for b in 0..n {
                let lhs = self.image(src.structure().compose(a, b));
                let rhs = tgt.compose(&self.map[a], &self.map[b]);
                if lhs != rhs {
                    fail(&mut report, vec![a, b], format!("θ({a};{b}) = {lhs}, θ({a});θ({b}) = {rhs}"));
                }
            }
        }
        if report.ok() && n < usize::BITS as usize && (1usize << n) <= EXHAUSTIVE_VERIFY_ELEMENTS {
            report.merge(self.verify_elements());
        }
        report
    }

    fn verify_elements(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        let (src, tgt) = (&self.source, &self.target);
        let n = src.atom_count();
        let size = 1usize << n;
        let from_mask = |m: usize| src.element((0..n).filter(|a| m >> a & 1 == 1));
        let theta: Vec<Element> = (0..size).map(|m| self.image(&from_mask(m))).collect();
        let mask_of = |e: &Element| e.iter().fold(0usize, |m, a| m | 1 << a);
        for e in 0..size {
            let ee = from_mask(e);
            if theta[mask_of(&src.converse(&ee))] != tgt.converse(&theta[e]) {
                report.fail(Condition::Embedding, Location::Global, format!("converse of {ee}"));
            }
            if self.unital && theta[!e & (size - 1)] != theta[e].complement() {
                report.fail(Condition::Embedding, Location::Global, format!("complement of {ee}"));
            }
            let src_row: Vec<usize> = (0..n).map(|b| mask_of(&src.compose(&ee, &src.atom(b)))).collect();
            let tgt_row: Vec<Element> = (0..n).map(|b| tgt.compose(&theta[e], &self.map[b])).collect();
            let mut s_acc = vec![0usize; size];
            let mut t_acc = vec![tgt.zero(); size];
            for f in 1..size {
                let low = f.trailing_zeros() as usize;
                let prev = f & (f - 1);
                s_acc[f] = s_acc[prev] | src_row[low];
                t_acc[f] = t_acc[prev].union(&tgt_row[low]);
                if theta[s_acc[f]] != t_acc[f] {
                    report.fail(
                        Condition::Embedding,
                        Location::Global,
                        format!("θ({ee};{}) ≠ θ({ee});θ({})", from_mask(f), from_mask(f)),
                    );
                    return report;
                }
                if theta[e & f] != theta[e].intersection(&theta[f]) {
                    report.fail(Condition::Embedding, Location::Global, format!("meet of {ee} and {}", from_mask(f)));
                    return report;
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingOutcome {
    Found(Box<Embedding>),
    NotFoundWithinBudget { nodes: u64 },
    NoEmbedding { nodes: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingOptions {
    /// Maximum number of candidate assignments tried.
    pub budget: u64,
    /// Require the images to cover the target, i.e. `θ(1) = 1`.
    pub unital: bool,
}

/// Searches for an embedding of `source` into `target` preserving `1`,
/// `1'`, converse and composition.
pub fn find_embedding(source: &FiniteRelationAlgebra, target: &FiniteRelationAlgebra, budget: u64) -> EmbeddingOutcome {
    find_embedding_with(source, target, EmbeddingOptions { budget, unital: true })
}

/// Backtracking over source atoms by descending composition degree. Each
/// atom receives a non-empty set of unused target atoms of the same kind
/// (identity or not), smallest sets first, together with its converse.
pub fn find_embedding_with(
    source: &FiniteRelationAlgebra,
    target: &FiniteRelationAlgebra,
    options: EmbeddingOptions,
) -> EmbeddingOutcome {
    let n = source.atom_count();
    let ss = source.structure();
    let degree = |a: usize| {
        (0..n)
            .map(|b| ss.compose(a, b).count() + ss.compose(b, a).count())
            .sum::<usize>()
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (std::cmp::Reverse(degree(a)), a));
    let mut search = Search {
        src: source,
        tgt: target,
        order,
        theta: vec![None; n],
        used: target.zero(),
        nodes: 0,
        options,
    };
    match search.dfs(0) {
        Ok(true) => EmbeddingOutcome::Found(Box::new(Embedding {
            source: source.clone(),
            target: target.clone(),
            map: search.theta.into_iter().map(|t| t.expect("complete")).collect(),
            unital: options.unital,
        })),
        Ok(false) => EmbeddingOutcome::NoEmbedding { nodes: search.nodes },
        Err(OutOfBudget) => EmbeddingOutcome::NotFoundWithinBudget { nodes: search.nodes },
    }
}

struct OutOfBudget;

struct Search<'a> {
    src: &'a FiniteRelationAlgebra,
    tgt: &'a FiniteRelationAlgebra,
    order: Vec<usize>,
    theta: Vec<Option<Element>>,
    used: Element,
    nodes: u64,
    options: EmbeddingOptions,
}

impl Search<'_> {
    fn dfs(&mut self, pos: usize) -> Result<bool, OutOfBudget> {
        let Some(&a) = self.order[pos..].iter().find(|&&a| self.theta[a].is_none()) else {
            return Ok(self.complete());
        };
        let ss = self.src.structure();
        let ts = self.tgt.structure();
        let c = ss.converse(a);
        let kind = ss.is_identity_atom(a);
        let pool: Vec<usize> = (0..self.tgt.atom_count())
            .filter(|&t| !self.used.contains(t) && ts.is_identity_atom(t) == kind)
            .collect();
        let pool_set: BTreeSet<usize> = pool.iter().copied().collect();
        // items are converse-closed groups of target atoms when `a` is
        // self-converse, single atoms otherwise
        let items: Vec<Vec<usize>> = if c == a {
            pool.iter()
                .filter(|&&t| pool_set.contains(&ts.converse(t)) && ts.converse(t) >= t)
                .map(|&t| if ts.converse(t) == t { vec![t] } else { vec![t, ts.converse(t)] })
                .collect()
        } else {
            pool.iter()
                .filter(|&&t| ts.converse(t) != t && pool_set.contains(&ts.converse(t)))
                .map(|&t| vec![t])
                .collect()
        };
        for k in 1..=items.len() {
            for combo in items.iter().combinations(k) {
                let image = self.tgt.element(combo.iter().flat_map(|i| i.iter().copied()));
                let conv = self.tgt.converse(&image);
                if c != a && !image.is_disjoint(&conv) {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.options.budget {
                    return Err(OutOfBudget);
                }
                self.assign(a, c, Some((image.clone(), conv.clone())));
                if self.consistent(a, c) && self.dfs(pos + 1)? {
                    return Ok(true);
                }
                self.assign(a, c, None);
            }
        }
        Ok(false)
    }

    fn assign(&mut self, a: usize, c: usize, value: Option<(Element, Element)>) {
        match value {
            Some((image, conv)) => {
                self.used.union_with(&image);
                self.used.union_with(&conv);
                self.theta[a] = Some(image);
                self.theta[c] = Some(conv);
            }
            None => {
                for x in [a, c] {
                    if let Some(img) = self.theta[x].take() {
                        for t in img.iter() {
                            self.used.remove(t);
                        }
                    }
                }
            }
        }
    }

    fn consistent(&self, a: usize, c: usize) -> bool {
        let ss = self.src.structure();
        let ts = self.tgt.structure();
        // every remaining source atom still needs a target atom of its kind
        for kind in [true, false] {
            let open = (0..self.src.atom_count())
                .filter(|&s| self.theta[s].is_none() && ss.is_identity_atom(s) == kind)
                .count();
            let free = (0..self.tgt.atom_count())
                .filter(|&t| !self.used.contains(t) && ts.is_identity_atom(t) == kind)
                .count();
            if free < open || (open == 0 && free > 0 && (kind || self.options.unital)) {
                return false;
            }
        }
        let assigned: Vec<usize> = (0..self.src.atom_count()).filter(|&s| self.theta[s].is_some()).collect();
        for &u in &assigned {
            for &v in &assigned {
                if ![u, v].iter().any(|x| *x == a || *x == c) {
                    continue;
                }
                let product = self.tgt.compose(self.theta[u].as_ref().unwrap(), self.theta[v].as_ref().unwrap());
                let expected = ss.compose(u, v);
                let mut covered = self.tgt.zero();
                let mut all_assigned = true;
                for w in 0..self.src.atom_count() {
                    match &self.theta[w] {
                        Some(img) if expected.contains(w) => {
                            if !img.is_subset(&product) {
                                return false;
                            }
                            covered.union_with(img);
                        }
                        Some(img) => {
                            if !img.is_disjoint(&product) {
                                return false;
                            }
                        }
                        None => all_assigned &= !expected.contains(w),
                    }
                }
                if all_assigned && covered != product {
                    return false;
                }
            }
        }
        true
    }

    fn complete(&self) -> bool {
        let ts = self.tgt.structure();
        (0..self.tgt.atom_count()).all(|t| self.used.contains(t) || !(self.options.unital || ts.is_identity_atom(t)))
    }
}

/// Atom pairs whose shifted product differs from the unshifted one.
pub fn compare_compositions(t: &GroupTriple) -> Result<Vec<(AtomIndex, AtomIndex)>, AnalysisError> {
    let (report, canonical) = t.validate();
    let t = canonical.ok_or(AnalysisError::InvalidTriple(report))?;
    let list = atoms(&t.pair);
    let mut diffs = Vec::new();
    for &a in &list {
        for &b in list.iter().filter(|b| b.x == a.y) {
            if atom_compose(&t.pair, a, b) != atom_shifted_compose(&t, a, b) {
                diffs.push((a, b));
            }
        }
    }
    Ok(diffs)
}

/// The classes of `∼_p` for a point `p`: `x ∼_p y` when `(x, y) ∈ E` and
/// `G_x × G_y ⊆ θ(p + 1')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointPartition {
    pub point: usize,
    /// Indices related to at least one index.
    pub domain: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// Symmetry and transitivity violations; empty when `∼_p` is an
    /// equivalence on its domain.
    pub report: ConditionReport,
}

/// `emb` must embed a Lyndon algebra into the algebra built from `target`.
pub fn point_partition(emb: &Embedding, target: &CosetAlgebra, p: usize) -> PointPartition {
    let n = target.triple().pair.len();
    let related = point_relation(emb, target, p);
    let mut report = ConditionReport::new();
    for &(x, y) in &related {
        if !related.contains(&(y, x)) {
            report.fail(Condition::PointPartition, Location::Pair(x, y), format!("∼_{p} is not symmetric"));
        }
        for &(_, z) in related.range((y, 0)..(y + 1, 0)) {
            if !related.contains(&(x, z)) {
                report.fail(
                    Condition::PointPartition,
                    Location::Triple(x, y, z),
                    format!("∼_{p} is not transitive"),
                );
            }
        }
    }
    let domain: Vec<usize> = (0..n).filter(|&x| related.iter().any(|&(u, _)| u == x)).collect();
    for &x in &domain {
        if !related.contains(&(x, x)) {
            report.fail(Condition::PointPartition, Location::Index(x), format!("∼_{p} is not reflexive"));
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &domain {
        if classes.iter().any(|c| c.contains(&x)) {
            continue;
        }
        classes.push(domain.iter().copied().filter(|&y| related.contains(&(x, y))).collect());
    }
    PointPartition {
        point: p,
        domain,
        classes,
        report,
    }
}

fn point_relation(emb: &Embedding, target: &CosetAlgebra, p: usize) -> BTreeSet<(usize, usize)> {
    let eq = emb.image(&lyndon::equivalence_element(&emb.source, p));
    target
        .triple()
        .pair
        .equivalence()
        .iter()
        .copied()
        .filter(|&(x, y)| target.block(x, y).is_subset(&eq))
        .collect()
}

/// Checks, for an embedding of a Lyndon algebra with `points` points into
/// the algebra built from `target`, that every `∼_p` is an equivalence on
/// its domain, that with at least two points each index is unrelated to
/// some index, and that every block with non-trivial `H_xy` meets exactly
/// one `θ(p)`, which then contains both blocks between `x` and `y`, while
/// `θ(p + 1')` contains all four.
pub fn check_point_invariants(emb: &Embedding, target: &CosetAlgebra, points: usize) -> ConditionReport {
    let mut report = ConditionReport::new();
    let pair = &target.triple().pair;
    let n = pair.len();
    for p in 0..points {
        report.merge(point_partition(emb, target, p).report);
        if points >= 2 {
            let related = point_relation(emb, target, p);
            for x in 0..n {
                if (0..n).all(|y| related.contains(&(x, y))) {
                    report.fail(
                        Condition::PointPartition,
                        Location::Index(x),
                        format!("{x} is ∼_{p}-related to every index"),
                    );
                }
            }
        }
    }
    for &(x, y) in pair.equivalence() {
        if pair.h(x, y).is_trivial() {
            continue;
        }
        let block = target.block(x, y);
        let meeting: Vec<usize> = (0..points)
            .filter(|&p| !emb.map[lyndon::point(p)].is_disjoint(&block))
            .collect();
        if meeting.len() != 1 {
            report.fail(
                Condition::PointPartition,
                Location::Pair(x, y),
                format!("H_{x}{y} is non-trivial and the block meets points {meeting:?}"),
            );
            continue;
        }
        let p = meeting[0];
        let both = block.union(&target.block(y, x));
        let square = [(x, x), (x, y), (y, x), (y, y)]
            .iter()
            .fold(target.algebra().zero(), |acc, &(u, v)| acc.union(&target.block(u, v)));
        let eq = emb.image(&lyndon::equivalence_element(&emb.source, p));
        if !both.is_subset(&emb.map[lyndon::point(p)]) || !square.is_subset(&eq) {
            report.fail(
                Condition::PointPartition,
                Location::Pair(x, y),
                format!("θ(p{p}) does not contain the blocks between {x} and {y}"),
            );
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityReport {
    pub all_h_trivial: bool,
    pub all_atoms_functional: bool,
    /// Every shift acts as the identity, so `⊗` agrees with `∘`.
    pub shifts_act_trivially: bool,
    /// Fails when trivial subgroups coexist with a non-functional atom.
    pub report: ConditionReport,
}

pub fn triviality_analysis(t: &GroupTriple) -> Result<TrivialityReport, AnalysisError> {
    let built = build_full_algebra(t)?;
    let pair = &built.triple().pair;
    let all_h_trivial = pair.equivalence().iter().all(|&(x, y)| pair.h(x, y).is_trivial());
    let alg = built.algebra();
    let non_functional: Vec<usize> = (0..alg.atom_count()).filter(|&a| !alg.is_functional(&alg.atom(a))).collect();
    let all_atoms_functional = non_functional.is_empty();
    let shifts_act_trivially = compare_compositions(built.triple())?.is_empty();
    let mut report = ConditionReport::new();
    if all_h_trivial && !all_atoms_functional {
        report.fail(
            Condition::Triviality,
            Location::Atoms(non_functional.clone()),
            "all H_xy are trivial but these atoms are not functional",
        );
    }
    if !all_atoms_functional {
        let first = built.atom_index(non_functional[0]);
        report.note(format!("{} non-functional atoms, first {first}", non_functional.len()));
    }
    Ok(TrivialityReport {
        all_h_trivial,
        all_atoms_functional,
        shifts_act_trivially,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftAssignment {
    pub shifts: BTreeMap<(usize, usize, usize), Subset>,
    /// Every `C_xyz` is the subgroup `H_xy ∘ H_xz` itself.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSearch {
    /// Assignments whose algebra passes the axioms, in enumeration order.
    pub passing: Vec<ShiftAssignment>,
    pub examined: u64,
    /// Size of the search space, saturating at `u128::MAX`.
    pub space: u128,
    /// The budget ran out before the space was exhausted.
    pub budget_exceeded: bool,
}

/// Enumerates every choice of `C_xyz` among the cosets of `H_xy ∘ H_xz`,
/// the last triple of `E³` varying fastest, and keeps those whose algebra
/// passes the axioms. At most `budget` assignments are examined.
pub fn search_shift_systems(pair: &GroupPair, budget: u64) -> Result<ShiftSearch, AnalysisError> {
    let base = GroupTriple::with_identity_shifts(pair.clone());
    let (report, canonical) = base.validate();
    let base = canonical.ok_or(AnalysisError::InvalidTriple(report))?;
    let triples: Vec<(usize, usize, usize)> = base.pair.triples().collect();
    let choices: Vec<Vec<Subset>> = triples
        .iter()
        .map(|&(x, y, z)| {
            base.pair
                .group(x)
                .cosets(&base.shift_base(x, y, z))
                .expect("H_xy ∘ H_xz is a subgroup")
                .cosets
        })
        .collect();
    let space = choices
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    let mut digits = vec![0usize; triples.len()];
    let mut out = ShiftSearch {
        passing: Vec::new(),
        examined: 0,
        space,
        budget_exceeded: false,
    };
    loop {
        if out.examined >= budget {
            out.budget_exceeded = true;
            break;
        }
        out.examined += 1;
        let mut t = base.clone();
        for (i, &triple) in triples.iter().enumerate() {
            t.set_shift(triple, choices[i][digits[i]].clone()).expect("triple of E");
        }
        let built = build_full_algebra(&t)?;
        if built.algebra().check_ra_axioms().ok() {
            out.passing.push(ShiftAssignment {
                trivial: digits.iter().all(|&d| d == 0),
                shifts: t.shifts().clone(),
            });
        }
        // increment the mixed-radix counter, last digit fastest
        let mut i = triples.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
    Ok(out)
}

/// `C_xyx = H_xy` for every `(x, y) ∈ E`.
pub fn verify_coset_consequences(t: &GroupTriple) -> ConditionReport {
    let mut report = ConditionReport::new();
    for &(x, y) in t.pair.equivalence() {
        let (c, h) = (t.shift(x, y, x), t.pair.h(x, y));
        if c != h {
            report.fail(
                Condition::CosetConsequence,
                Location::Pair(x, y),
                format!("C_{x}{y}{x} = {c}, H_{x}{y} = {h}"),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::complex_algebra;
    use crate::fixtures;
    use crate::groups::FiniteGroup;
    use crate::lyndon::lyndon_algebra;

    fn z(n: usize) -> FiniteRelationAlgebra {
        complex_algebra(&FiniteGroup::cyclic(n))
    }

    #[test]
    fn identity_embedding_of_z2() {
        match find_embedding(&z(2), &z(2), 1000) {
            EmbeddingOutcome::Found(e) => {
                assert_eq!(e.map, vec![z(2).atom(0), z(2).atom(1)]);
                assert!(e.verify().ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_point_line_does_not_embed_in_small_cyclic_groups() {
        let l2 = lyndon_algebra(2).unwrap();
        for n in [2, 3, 4] {
            assert!(matches!(find_embedding(&l2, &z(n), 10_000), EmbeddingOutcome::NoEmbedding { .. }));
        }
    }

    #[test]
    fn one_point_line_embeds_in_z3() {
        let l1 = lyndon_algebra(1).unwrap();
        match find_embedding(&l1, &z(3), 1000) {
            EmbeddingOutcome::Found(e) => {
                assert_eq!(e.map[lyndon::point(0)], z(3).element([1, 2]));
                assert!(e.verify().ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn four_point_line_embeds_in_the_affine_plane_of_order_three() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        let target = complex_algebra(&g);
        let l4 = lyndon_algebra(4).unwrap();
        let EmbeddingOutcome::Found(e) = find_embedding(&l4, &target, 100_000) else {
            panic!("expected an embedding");
        };
        assert!(e.verify().ok());
        for p in 0..4 {
            // θ(p) ∪ {0} is a line through the origin
            let line = e.map[lyndon::point(p)].union(&target.identity());
            let as_subset: Subset = line.iter().collect();
            assert_eq!(as_subset.len(), 3);
            assert!(g.is_subgroup(&as_subset));
        }
    }

    #[test]
    fn identity_only_algebra_embeds_without_the_unit() {
        let trivial = z(1);
        let target = z(4);
        let options = EmbeddingOptions {
            budget: 100,
            unital: false,
        };
        let EmbeddingOutcome::Found(e) = find_embedding_with(&trivial, &target, options) else {
            panic!("expected an embedding");
        };
        assert_eq!(e.map, vec![target.identity()]);
        assert!(e.verify().ok());
        assert!(matches!(find_embedding(&trivial, &target, 100), EmbeddingOutcome::NoEmbedding { .. }));
    }

    #[test]
    fn budget_is_reported() {
        let l4 = lyndon_algebra(4).unwrap();
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        assert_eq!(
            find_embedding(&l4, &complex_algebra(&g), 1),
            EmbeddingOutcome::NotFoundWithinBudget { nodes: 2 }
        );
    }

    #[test]
    fn verify_rejects_a_bad_map() {
        let e = Embedding {
            source: z(2),
            target: z(2),
            map: vec![z(2).atom(1), z(2).atom(0)],
            unital: true,
        };
        assert!(!e.verify().ok());
    }

    #[test]
    fn compositions_agree_without_shifts() {
        assert!(compare_compositions(&fixtures::t1()).unwrap().is_empty());
        let diffs = compare_compositions(&fixtures::f1_shifted()).unwrap();
        assert_eq!(diffs.len(), 4);
    }

    #[test]
    fn shifted_t1_differs_on_the_middle_block() {
        let mut t = fixtures::t1().canonicalize().unwrap();
        t.set_shift_rep((0, 1, 2), 1).unwrap();
        assert_eq!(t.shift(0, 1, 2), &Subset::from([1, 3]));
        let diffs = compare_compositions(&t).unwrap();
        assert!(!diffs.is_empty());
        assert!(diffs.iter().all(|(a, b)| (a.x, a.y, b.y) == (0, 1, 2)));
        assert_eq!(diffs.len(), 4);
    }

    #[test]
    fn point_partition_of_a_single_block() {
        let target = build_full_algebra(&fixtures::single(FiniteGroup::cyclic(3))).unwrap();
        let l1 = lyndon_algebra(1).unwrap();
        let EmbeddingOutcome::Found(e) = find_embedding(&l1, target.algebra(), 1000) else {
            panic!("expected an embedding");
        };
        let part = point_partition(&e, &target, 0);
        assert_eq!(part.classes, vec![vec![0]]);
        assert!(part.report.ok());
        assert!(check_point_invariants(&e, &target, 1).ok());
    }

    #[test]
    fn four_point_line_in_a_single_block() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
        let target = build_full_algebra(&fixtures::single(g)).unwrap();
        let l4 = lyndon_algebra(4).unwrap();
        let EmbeddingOutcome::Found(e) = find_embedding(&l4, target.algebra(), 100_000) else {
            panic!("expected an embedding");
        };
        for p in 0..4 {
            assert!(point_partition(&e, &target, p).domain.is_empty());
        }
        assert!(check_point_invariants(&e, &target, 4).ok());
    }

    #[test]
    fn triviality() {
        let z2 = triviality_analysis(&fixtures::trivial_system(&FiniteGroup::cyclic(2), 2)).unwrap();
        assert!(z2.all_h_trivial && z2.all_atoms_functional && z2.report.ok());
        let t1 = triviality_analysis(&fixtures::t1()).unwrap();
        assert!(!t1.all_h_trivial && !t1.all_atoms_functional && t1.report.ok());
        let one = triviality_analysis(&fixtures::single(FiniteGroup::cyclic(1))).unwrap();
        assert!(one.all_h_trivial && one.all_atoms_functional && one.shifts_act_trivially);
    }

    #[test]
    fn shift_search_on_small_pairs() {
        let f1 = search_shift_systems(&fixtures::f1().pair, 100).unwrap();
        assert_eq!(f1.examined, 2);
        assert_eq!(f1.passing.len(), 1);
        assert!(f1.passing[0].trivial);
        assert_eq!(f1.passing[0].shifts[&(0, 0, 0)], Subset::from([0]));

        let f2 = search_shift_systems(&fixtures::f2().pair, 100).unwrap();
        assert_eq!(f2.space, 4);
        assert_eq!(f2.passing.len(), 1);

        let z2 = search_shift_systems(&fixtures::trivial_system(&FiniteGroup::cyclic(2), 2).pair, 1000).unwrap();
        assert_eq!(z2.space, 256);
        assert_eq!(z2.examined, 256);
        assert!(!z2.budget_exceeded);

        let partial = search_shift_systems(&fixtures::t1().pair, 10).unwrap();
        assert!(partial.budget_exceeded);
        assert_eq!(partial.examined, 10);
        assert_eq!(partial.passing.len(), 1);
    }

    #[test]
    fn coset_consequences() {
        assert!(verify_coset_consequences(&fixtures::t1()).ok());
        assert!(verify_coset_consequences(&fixtures::f1()).ok());
        assert!(verify_coset_consequences(&fixtures::f1_shifted()).has(Condition::CosetConsequence));
    }
}
