//! Group pairs `(G, φ)` and group triples `(G, φ, C)`.
//!
//! A [`GroupPair`] holds disjoint finite groups indexed by `0..n`, an
//! equivalence relation `E` on the indices, and for every `(x, y)` in `E` a
//! [`QuotientIso`] from `G_x / H_xy` onto `G_y / K_xy`. A [`GroupTriple`]
//! adds a coset `C_xyz` of `H_xy ∘ H_xz` in `G_x` for every `(x, y, z)` with
//! `(x, y), (y, z)` in `E`.
//!
//! The checks in this module are the executable versions of the closure
//! criteria for identity, converse and composition. They never panic on bad
//! data: failures are collected into a [`ConditionReport`].

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::groups::{CosetList, FiniteGroup, GroupError, Subset};
use crate::report::{Condition, ConditionReport, Location};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("index {0} is not a group index")]
    UnknownIndex(usize),
    #[error("E is not an equivalence relation: {0}")]
    NotAnEquivalence(String),
    #[error("no quotient isomorphism given for ({0},{1})")]
    MissingIso(usize, usize),
    #[error("quotient isomorphism given for ({0},{1}), which is not in E")]
    UnexpectedIso(usize, usize),
    #[error("duplicate quotient isomorphism for ({0},{1})")]
    DuplicateIso(usize, usize),
    #[error("not a quotient isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("coset convention unsatisfiable at ({x},{y}): {witness}")]
    ConventionUnsatisfiable { x: usize, y: usize, witness: String },
    #[error("({0},{1},{2}) is not a triple of E")]
    NotATriple(usize, usize, usize),
}

/// An isomorphism `φ_xy : G_x / H → G_y / K` stored on coset indices.
///
/// `map` sends the canonical index of an `H`-coset (in the order of
/// [`FiniteGroup::cosets`]) to the canonical index of a `K`-coset. The
/// enumeration `γ ↦ H_{xy,γ}` used by the atomic relations is kept
/// separately so it can be re-ordered by [`GroupPair::canonicalize`]; the
/// associated enumeration is `K_{xy,γ} = φ_xy[H_{xy,γ}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientIso {
    source: usize,
    target: usize,
    h_cosets: CosetList,
    k_cosets: CosetList,
    map: Vec<usize>,
    enumeration: Vec<usize>,
    gamma_of: Vec<usize>,
}

impl QuotientIso {
    /// Builds `φ` from its canonical coset map, checking normality,
    /// bijectivity and multiplicativity.
    pub fn new(
        gx: &FiniteGroup,
        gy: &FiniteGroup,
        (source, target): (usize, usize),
        h: Subset,
        k: Subset,
        map: Vec<usize>,
    ) -> Result<Self, PairError> {
        gx.check_subset(&h)?;
        gy.check_subset(&k)?;
        let qx = gx.quotient(&h)?;
        let qy = gy.quotient(&k)?;
        let n = qx.group.order();
        if qy.group.order() != n {
            return Err(PairError::NotAnIsomorphism(format!(
                "G_{source}/{h} has {n} cosets but G_{target}/{k} has {}",
                qy.group.order()
            )));
        }
        if map.len() != n {
            return Err(PairError::NotAnIsomorphism(format!(
                "map has {} entries, expected {n}",
                map.len()
            )));
        }
        let image: BTreeSet<usize> = map.iter().copied().collect();
        if image.len() != n || image.iter().any(|&c| c >= n) {
            return Err(PairError::NotAnIsomorphism(format!(
                "map {map:?} is not a bijection of coset indices"
            )));
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = map[qx.group.mul(a, b)];
                let rhs = qy.group.mul(map[a], map[b]);
                if lhs != rhs {
                    return Err(PairError::NotAnIsomorphism(format!(
                        "map is not multiplicative on cosets {} and {}",
                        qx.cosets.cosets[a], qx.cosets.cosets[b]
                    )));
                }
            }
        }
        Ok(QuotientIso {
            source,
            target,
            h_cosets: qx.cosets,
            k_cosets: qy.cosets,
            map,
            enumeration: (0..n).collect(),
            gamma_of: (0..n).collect(),
        })
    }

    /// Builds `φ` from representative pairs `(g, g')` meaning
    /// `φ(g H) = g' K`. The pairs only need to reach a generating set of the
    /// quotient; the rest is filled in multiplicatively.
    pub fn from_representatives(
        gx: &FiniteGroup,
        gy: &FiniteGroup,
        indices: (usize, usize),
        h: Subset,
        k: Subset,
        pairs: &[(usize, usize)],
    ) -> Result<Self, PairError> {
        gx.check_subset(&h)?;
        gy.check_subset(&k)?;
        let qx = gx.quotient(&h)?;
        let qy = gy.quotient(&k)?;
        let n = qx.group.order();
        let mut map: Vec<Option<usize>> = vec![None; n];
        map[0] = Some(0);
        let set = |map: &mut Vec<Option<usize>>, a: usize, b: usize| match map[a] {
            Some(old) if old != b => Err(PairError::NotAnIsomorphism(format!(
                "coset {} is sent to both {} and {}",
                qx.cosets.cosets[a], qy.cosets.cosets[old], qy.cosets.cosets[b]
            ))),
            Some(_) => Ok(false),
            None => {
                map[a] = Some(b);
                Ok(true)
            }
        };
        for &(g, g2) in pairs {
            gx.check_member(g)?;
            gy.check_member(g2)?;
            set(&mut map, qx.project(g), qy.project(g2))?;
        }
        loop {
            let mut changed = false;
            let known: Vec<(usize, usize)> = map
                .iter()
                .enumerate()
                .filter_map(|(a, m)| m.map(|b| (a, b)))
                .collect();
            for &(a, ma) in &known {
                for &(b, mb) in &known {
                    changed |= set(&mut map, qx.group.mul(a, b), qy.group.mul(ma, mb))?;
                }
            }
            if !changed {
                break;
            }
        }
        let map: Vec<usize> = map
            .into_iter()
            .enumerate()
            .map(|(a, m)| {
                m.ok_or_else(|| {
                    PairError::NotAnIsomorphism(format!(
                        "representatives do not determine the image of coset {}",
                        qx.cosets.cosets[a]
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        Self::new(gx, gy, indices, h, k, map)
    }

    /// `φ(g H) = f(g) K` for an element map `f`, which must be well defined
    /// on cosets.
    pub fn from_element_map(
        gx: &FiniteGroup,
        gy: &FiniteGroup,
        indices: (usize, usize),
        h: Subset,
        k: Subset,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self, PairError> {
        let pairs: Vec<(usize, usize)> = gx.elements().map(|g| (g, f(g))).collect();
        Self::from_representatives(gx, gy, indices, h, k, &pairs)
    }

    /// The identity automorphism of `G_x / {e}`.
    pub fn identity(g: &FiniteGroup, x: usize) -> Self {
        Self::new(g, g, (x, x), Subset::trivial(), Subset::trivial(), g.elements().collect())
            .expect("identity map is an isomorphism")
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn h(&self) -> &Subset {
        &self.h_cosets.subgroup
    }

    pub fn k(&self) -> &Subset {
        &self.k_cosets.subgroup
    }

    /// `κ_xy`, the number of cosets.
    pub fn kappa(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn h_cosets(&self) -> &CosetList {
        &self.h_cosets
    }

    pub fn k_cosets(&self) -> &CosetList {
        &self.k_cosets
    }

    /// `γ ↦` canonical index of `H_{xy,γ}`.
    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    /// `H_{xy,γ}`.
    pub fn h_coset(&self, gamma: usize) -> &Subset {
        &self.h_cosets.cosets[self.enumeration[gamma]]
    }

    /// `K_{xy,γ} = φ_xy[H_{xy,γ}]`.
    pub fn k_coset(&self, gamma: usize) -> &Subset {
        &self.k_cosets.cosets[self.map[self.enumeration[gamma]]]
    }

    /// The `γ` with `g ∈ H_{xy,γ}`.
    pub fn gamma_of_source(&self, g: usize) -> usize {
        self.gamma_of[self.h_cosets.index_of(g)]
    }

    /// The `γ` with `g ∈ K_{xy,γ}`.
    pub fn gamma_of_target(&self, g: usize) -> usize {
        let canonical_k = self.k_cosets.index_of(g);
        let canonical_h = self.map.iter().position(|&m| m == canonical_k).unwrap();
        self.gamma_of[canonical_h]
    }

    /// `φ[S]`, taken over every `H`-coset meeting `S`.
    pub fn image(&self, s: &Subset) -> Subset {
        let hit: BTreeSet<usize> = s.iter().map(|g| self.h_cosets.index_of(g)).collect();
        hit.into_iter()
            .flat_map(|c| self.k_cosets.cosets[self.map[c]].iter())
            .collect()
    }

    /// `φ⁻¹[S]`: the union of the `H`-cosets whose image lies inside `S`.
    pub fn preimage(&self, s: &Subset) -> Subset {
        (0..self.kappa())
            .filter(|&c| self.k_cosets.cosets[self.map[c]].is_subset(s))
            .flat_map(|c| self.h_cosets.cosets[c].iter())
            .collect()
    }

    fn set_enumeration(&mut self, enumeration: Vec<usize>) {
        let mut gamma_of = vec![0; enumeration.len()];
        for (gamma, &c) in enumeration.iter().enumerate() {
            gamma_of[c] = gamma;
        }
        self.enumeration = enumeration;
        self.gamma_of = gamma_of;
    }

    fn reindexed(&self, offset: usize) -> Self {
        let mut out = self.clone();
        out.source += offset;
        out.target += offset;
        out
    }

    fn is_identity_map(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }
}

/// Disjoint groups, an equivalence relation on their indices, and one
/// quotient isomorphism per pair of the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPair {
    groups: Vec<FiniteGroup>,
    equivalence: BTreeSet<(usize, usize)>,
    isos: BTreeMap<(usize, usize), QuotientIso>,
}

impl GroupPair {
    pub fn new(
        groups: Vec<FiniteGroup>,
        equivalence: impl IntoIterator<Item = (usize, usize)>,
        isos: Vec<QuotientIso>,
    ) -> Result<Self, PairError> {
        let n = groups.len();
        let equivalence: BTreeSet<(usize, usize)> = equivalence.into_iter().collect();
        if let Some(&(x, y)) = equivalence.iter().find(|&&(x, y)| x >= n || y >= n) {
            return Err(PairError::UnknownIndex(x.max(y)));
        }
        check_equivalence(n, &equivalence).map_err(PairError::NotAnEquivalence)?;

        let mut by_pair = BTreeMap::new();
        for iso in isos {
            let key = (iso.source, iso.target);
            if !equivalence.contains(&key) {
                return Err(PairError::UnexpectedIso(key.0, key.1));
            }
            let (gx, gy) = (&groups[key.0], &groups[key.1]);
            if iso.h_cosets.subgroup.iter().any(|g| g >= gx.order())
                || iso.k_cosets.subgroup.iter().any(|g| g >= gy.order())
                || iso.h_cosets.cosets.iter().map(Subset::len).sum::<usize>() != gx.order()
                || iso.k_cosets.cosets.iter().map(Subset::len).sum::<usize>() != gy.order()
            {
                return Err(PairError::NotAnIsomorphism(format!(
                    "isomorphism for ({},{}) was built over different groups",
                    key.0, key.1
                )));
            }
            if by_pair.insert(key, iso).is_some() {
                return Err(PairError::DuplicateIso(key.0, key.1));
            }
        }
        if let Some(&(x, y)) = equivalence.iter().find(|p| !by_pair.contains_key(p)) {
            return Err(PairError::MissingIso(x, y));
        }
        Ok(GroupPair {
            groups,
            equivalence,
            isos: by_pair,
        })
    }

    pub fn empty() -> Self {
        GroupPair {
            groups: Vec::new(),
            equivalence: BTreeSet::new(),
            isos: BTreeMap::new(),
        }
    }

    /// Number of groups, i.e. `|I|`.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, x: usize) -> &FiniteGroup {
        &self.groups[x]
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn equivalence(&self) -> &BTreeSet<(usize, usize)> {
        &self.equivalence
    }

    pub fn contains_pair(&self, x: usize, y: usize) -> bool {
        self.equivalence.contains(&(x, y))
    }

    pub fn iso(&self, x: usize, y: usize) -> &QuotientIso {
        &self.isos[&(x, y)]
    }

    pub fn h(&self, x: usize, y: usize) -> &Subset {
        self.iso(x, y).h()
    }

    pub fn k(&self, x: usize, y: usize) -> &Subset {
        self.iso(x, y).k()
    }

    pub fn kappa(&self, x: usize, y: usize) -> usize {
        self.iso(x, y).kappa()
    }

    /// All `(x, y, z)` with `(x, y)` and `(y, z)` in `E`, in lexicographic
    /// order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.equivalence.iter().flat_map(move |&(x, y)| {
            self.equivalence
                .range((y, 0)..(y + 1, 0))
                .map(move |&(_, z)| (x, y, z))
        })
    }

    /// The equivalence classes of `E`, each sorted, ordered by least member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if seen[x] {
                continue;
            }
            let class: Vec<usize> = self
                .equivalence
                .range((x, 0)..(x + 1, 0))
                .map(|&(_, y)| y)
                .collect();
            for &y in &class {
                seen[y] = true;
            }
            out.push(class);
        }
        out
    }

    /// True when `E` coincides with `I × I` on a non-empty index set.
    pub fn is_simple(&self) -> bool {
        !self.is_empty() && self.equivalence.len() == self.len() * self.len()
    }

    /// Re-orders coset enumerations so that `H_{yx,γ} = K_{xy,γ}` for every
    /// pair with `x < y`; the orientation with the smaller source index is the
    /// master. Diagonal pairs keep the natural enumeration, in which
    /// `H_{xx,γ} = {γ}` whenever `H_xx` is trivial.
    pub fn canonicalize(&self) -> Result<GroupPair, PairError> {
        let mut out = self.clone();
        for &(x, y) in self.equivalence.iter().filter(|(x, y)| x < y) {
            let master = &self.isos[&(x, y)];
            let slave = &self.isos[&(y, x)];
            if slave.h() != master.k() {
                return Err(PairError::ConventionUnsatisfiable {
                    x,
                    y,
                    witness: format!("H_{y}{x} = {} but K_{x}{y} = {}", slave.h(), master.k()),
                });
            }
            let enumeration = (0..master.kappa())
                .map(|gamma| {
                    slave
                        .h_cosets
                        .position(master.k_coset(gamma))
                        .expect("same subgroup, same cosets")
                })
                .collect();
            out.isos
                .get_mut(&(y, x))
                .unwrap()
                .set_enumeration(enumeration);
        }
        for &(x, _) in self.equivalence.iter().filter(|(x, y)| x == y) {
            let n = out.isos[&(x, x)].kappa();
            out.isos.get_mut(&(x, x)).unwrap().set_enumeration((0..n).collect());
        }
        Ok(out)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize().map(|c| c == *self).unwrap_or(false)
    }

    /// Identity criterion: `φ_xx` is the identity automorphism of
    /// `G_x / {e_x}` for every `x`.
    pub fn check_identity_condition(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        for x in 0..self.len() {
            let iso = self.iso(x, x);
            if !iso.h().is_trivial() {
                report.fail(
                    Condition::Identity,
                    Location::Index(x),
                    format!("H_{x}{x} = {} is not trivial", iso.h()),
                );
            } else if !iso.k().is_trivial() {
                report.fail(
                    Condition::Identity,
                    Location::Index(x),
                    format!("K_{x}{x} = {} is not trivial", iso.k()),
                );
            } else if !iso.is_identity_map() {
                let g = iso.map.iter().enumerate().find(|(i, &m)| *i != m).unwrap().0;
                report.fail(
                    Condition::Identity,
                    Location::Index(x),
                    format!("φ_{x}{x} sends {g} to {}", iso.map[g]),
                );
            }
        }
        report
    }

    /// Converse criterion: `φ_xy⁻¹ = φ_yx`. Checked once per unordered pair.
    pub fn check_converse_condition(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        for &(x, y) in self.equivalence.iter().filter(|(x, y)| x <= y) {
            let (xy, yx) = (self.iso(x, y), self.iso(y, x));
            let loc = Location::Pair(x, y);
            if yx.h() != xy.k() {
                report.fail(
                    Condition::Converse,
                    loc,
                    format!("H_{y}{x} = {} differs from K_{x}{y} = {}", yx.h(), xy.k()),
                );
                continue;
            }
            if yx.k() != xy.h() {
                report.fail(
                    Condition::Converse,
                    loc,
                    format!("K_{y}{x} = {} differs from H_{x}{y} = {}", yx.k(), xy.h()),
                );
                continue;
            }
            if let Some(c) = xy
                .h_cosets
                .cosets
                .iter()
                .find(|c| yx.image(&xy.image(c)) != **c)
            {
                let back = yx.image(&xy.image(c));
                report.fail(
                    Condition::Converse,
                    loc,
                    format!("φ_{y}{x}(φ_{x}{y}({c})) = {back}"),
                );
            }
        }
        report
    }

    /// Composition criterion, both halves: `H_xz ⊆ φ_xy⁻¹[K_xy ∘ H_yz]`, and
    /// the maps induced modulo `φ_xy⁻¹[K_xy ∘ H_yz]` satisfy
    /// `φ̂_xy ; φ̂_yz = φ̂_xz`.
    pub fn check_composition_condition(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        for (x, y, z) in self.triples() {
            let loc = Location::Triple(x, y, z);
            let (xy, yz, xz) = (self.iso(x, y), self.iso(y, z), self.iso(x, z));
            let middle = self.groups[y].complex_product(xy.k(), yz.h());
            let pulled = xy.preimage(&middle);
            if !xz.h().is_subset(&pulled) {
                report.fail(
                    Condition::CompositionSubset,
                    loc,
                    format!(
                        "H_{x}{z} = {} is not contained in φ_{x}{y}⁻¹[K_{x}{y}∘H_{y}{z}] = {}",
                        xz.h(),
                        pulled
                    ),
                );
                continue;
            }
            let cosets = match self.groups[x].cosets(&pulled) {
                Ok(c) => c,
                Err(e) => {
                    report.fail(Condition::CompositionInduced, loc, e.to_string());
                    continue;
                }
            };
            if let Some(c) = cosets
                .cosets
                .iter()
                .find(|c| yz.image(&xy.image(c)) != xz.image(c))
            {
                report.fail(
                    Condition::CompositionInduced,
                    loc,
                    format!(
                        "coset {c}: φ_{y}{z}∘φ_{x}{y} gives {} but φ_{x}{z} gives {}",
                        yz.image(&xy.image(c)),
                        xz.image(c)
                    ),
                );
            }
        }
        report
    }

    /// The three image equations that must hold once the converse and
    /// composition criteria do. A failure here means a bug upstream.
    pub fn check_image_theorem(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        for (x, y, z) in self.triples() {
            let loc = Location::Triple(x, y, z);
            let (xy, yz, xz) = (self.iso(x, y), self.iso(y, z), self.iso(x, z));
            let (gx, gy, gz) = (&self.groups[x], &self.groups[y], &self.groups[z]);
            let hh = gx.complex_product(xy.h(), xz.h());
            let kh = gy.complex_product(xy.k(), yz.h());
            let kk = gz.complex_product(xz.k(), yz.k());
            let checks = [
                (xy.image(&hh), &kh, format!("φ_{x}{y}[H_{x}{y}∘H_{x}{z}]"), format!("K_{x}{y}∘H_{y}{z}")),
                (yz.image(&kh), &kk, format!("φ_{y}{z}[K_{x}{y}∘H_{y}{z}]"), format!("K_{x}{z}∘K_{y}{z}")),
                (xz.image(&hh), &kk, format!("φ_{x}{z}[H_{x}{y}∘H_{x}{z}]"), format!("K_{x}{z}∘K_{y}{z}")),
            ];
            for (lhs, rhs, lname, rname) in checks {
                if lhs != *rhs {
                    report.fail(
                        Condition::ImageEquations,
                        loc.clone(),
                        format!("{lname} = {lhs} but {rname} = {rhs}"),
                    );
                }
            }
        }
        report
    }

    /// Identity, converse and composition criteria in order; later stages
    /// only run when the earlier ones pass.
    pub fn check_conditions(&self) -> ConditionReport {
        let mut report = self.check_identity_condition();
        report.merge(self.check_converse_condition());
        if report.ok() {
            report.merge(self.check_composition_condition());
        }
        report
    }

    fn reindexed(&self, offset: usize) -> (BTreeSet<(usize, usize)>, Vec<QuotientIso>) {
        (
            self.equivalence
                .iter()
                .map(|&(x, y)| (x + offset, y + offset))
                .collect(),
            self.isos.values().map(|iso| iso.reindexed(offset)).collect(),
        )
    }

    /// The pair restricted to the indices in `keep` (renumbered in order).
    pub fn restrict(&self, keep: &[usize]) -> GroupPair {
        let new_index: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let groups = keep.iter().map(|&x| self.groups[x].clone()).collect();
        let mut equivalence = BTreeSet::new();
        let mut isos = BTreeMap::new();
        for (&(x, y), iso) in &self.isos {
            if let (Some(&nx), Some(&ny)) = (new_index.get(&x), new_index.get(&y)) {
                equivalence.insert((nx, ny));
                let mut iso = iso.clone();
                iso.source = nx;
                iso.target = ny;
                isos.insert((nx, ny), iso);
            }
        }
        GroupPair {
            groups,
            equivalence,
            isos,
        }
    }
}

fn check_equivalence(n: usize, e: &BTreeSet<(usize, usize)>) -> Result<(), String> {
    if let Some(x) = (0..n).find(|&x| !e.contains(&(x, x))) {
        return Err(format!("not reflexive: ({x},{x}) missing"));
    }
    if let Some(&(x, y)) = e.iter().find(|&&(x, y)| !e.contains(&(y, x))) {
        return Err(format!("not symmetric: ({x},{y}) present, ({y},{x}) missing"));
    }
    for &(x, y) in e {
        for &(_, z) in e.range((y, 0)..(y + 1, 0)) {
            if !e.contains(&(x, z)) {
                return Err(format!(
                    "not transitive: ({x},{y}) and ({y},{z}) present, ({x},{z}) missing"
                ));
            }
        }
    }
    Ok(())
}

/// The smallest equivalence relation on `0..n` containing `pairs`.
pub fn equivalence_closure(
    n: usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> BTreeSet<(usize, usize)> {
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while class[r] != r {
            r = class[r];
        }
        class[x] = r;
        r
    }
    for (x, y) in pairs {
        let (rx, ry) = (find(&mut class, x), find(&mut class, y));
        class[rx.max(ry)] = rx.min(ry);
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut class, x)).collect();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| roots[x] == roots[y])
        .collect()
}

/// A group pair together with a coset system `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTriple {
    pub pair: GroupPair,
    shifts: BTreeMap<(usize, usize, usize), Subset>,
}

impl GroupTriple {
    /// Every `C_xyz` set to the subgroup `H_xy ∘ H_xz` itself.
    pub fn with_identity_shifts(pair: GroupPair) -> Self {
        let shifts = pair
            .triples()
            .map(|(x, y, z)| ((x, y, z), Self::base_of(&pair, x, y, z)))
            .collect();
        GroupTriple { pair, shifts }
    }

    pub fn empty() -> Self {
        Self::with_identity_shifts(GroupPair::empty())
    }

    fn base_of(pair: &GroupPair, x: usize, y: usize, z: usize) -> Subset {
        pair.group(x).complex_product(pair.h(x, y), pair.h(x, z))
    }

    /// `H_xy ∘ H_xz`, the subgroup whose cosets are admissible shifts.
    pub fn shift_base(&self, x: usize, y: usize, z: usize) -> Subset {
        Self::base_of(&self.pair, x, y, z)
    }

    pub fn shift(&self, x: usize, y: usize, z: usize) -> &Subset {
        &self.shifts[&(x, y, z)]
    }

    pub fn shifts(&self) -> &BTreeMap<(usize, usize, usize), Subset> {
        &self.shifts
    }

    /// Replaces `C_xyz` by an arbitrary subset; shape is checked by
    /// [`GroupTriple::validate_shifts`].
    pub fn set_shift(&mut self, (x, y, z): (usize, usize, usize), c: Subset) -> Result<(), PairError> {
        if !self.shifts.contains_key(&(x, y, z)) {
            return Err(PairError::NotATriple(x, y, z));
        }
        self.pair.group(x).check_subset(&c)?;
        self.shifts.insert((x, y, z), c);
        Ok(())
    }

    /// Sets `C_xyz = g ∘ (H_xy ∘ H_xz)`.
    pub fn set_shift_rep(&mut self, (x, y, z): (usize, usize, usize), g: usize) -> Result<(), PairError> {
        if !self.shifts.contains_key(&(x, y, z)) {
            return Err(PairError::NotATriple(x, y, z));
        }
        let gx = self.pair.group(x);
        gx.check_member(g)?;
        let c = gx.complex_product(&Subset::from([g]), &self.shift_base(x, y, z));
        self.shifts.insert((x, y, z), c);
        Ok(())
    }

    pub fn canonicalize(&self) -> Result<GroupTriple, PairError> {
        Ok(GroupTriple {
            pair: self.pair.canonicalize()?,
            shifts: self.shifts.clone(),
        })
    }

    /// Checks that each `C_xyz` is a coset of `H_xy ∘ H_xz`, and notes every
    /// triple where it is not the subgroup itself.
    pub fn validate_shifts(&self) -> ConditionReport {
        let mut report = ConditionReport::new();
        for (x, y, z) in self.pair.triples() {
            let loc = Location::Triple(x, y, z);
            let base = self.shift_base(x, y, z);
            let Some(c) = self.shifts.get(&(x, y, z)) else {
                report.fail(Condition::ShiftShape, loc, "no shift given");
                continue;
            };
            let gx = self.pair.group(x);
            let is_coset = c
                .smallest()
                .is_some_and(|g| gx.complex_product(&Subset::from([g]), &base) == *c);
            if !is_coset {
                report.fail(
                    Condition::ShiftShape,
                    loc,
                    format!("C_{x}{y}{z} = {c} is not a coset of H_{x}{y}∘H_{x}{z} = {base}"),
                );
            } else if *c != base {
                report.note(format!("nontrivial shift C_{x}{y}{z} = {c} (subgroup {base})"));
            }
        }
        report
    }

    /// Triples whose shift is not the subgroup `H_xy ∘ H_xz` itself.
    pub fn nontrivial_shifts(&self) -> Vec<(usize, usize, usize)> {
        self.shifts
            .iter()
            .filter(|(&(x, y, z), c)| **c != self.shift_base(x, y, z))
            .map(|(&t, _)| t)
            .collect()
    }

    /// Canonicalizes and runs every pair criterion plus the shift shape
    /// check. Returns the canonical triple when everything passes.
    pub fn validate(&self) -> (ConditionReport, Option<GroupTriple>) {
        let canonical = match self.canonicalize() {
            Ok(c) => c,
            Err(PairError::ConventionUnsatisfiable { x, y, witness }) => {
                let mut report = ConditionReport::new();
                report.fail(Condition::Converse, Location::Pair(x, y), witness);
                return (report, None);
            }
            Err(e) => {
                let mut report = ConditionReport::new();
                report.fail(Condition::Converse, Location::Global, e.to_string());
                return (report, None);
            }
        };
        let mut report = canonical.pair.check_conditions();
        if report.ok() {
            report.merge(canonical.pair.check_image_theorem());
        }
        if report.ok() {
            report.merge(canonical.validate_shifts());
        }
        let ok = report.ok();
        (report, ok.then_some(canonical))
    }

    /// Disjoint union of two triples; the second one's indices are shifted
    /// past the first's.
    pub fn direct_product(&self, other: &GroupTriple) -> GroupTriple {
        let offset = self.pair.len();
        let mut groups = self.pair.groups.clone();
        groups.extend(other.pair.groups.iter().cloned());
        let (e2, isos2) = other.pair.reindexed(offset);
        let mut equivalence = self.pair.equivalence.clone();
        equivalence.extend(e2);
        let mut isos = self.pair.isos.clone();
        isos.extend(isos2.into_iter().map(|iso| ((iso.source, iso.target), iso)));
        let mut shifts = self.shifts.clone();
        shifts.extend(
            other
                .shifts
                .iter()
                .map(|(&(x, y, z), c)| ((x + offset, y + offset, z + offset), c.clone())),
        );
        GroupTriple {
            pair: GroupPair {
                groups,
                equivalence,
                isos,
            },
            shifts,
        }
    }

    pub fn is_simple(&self) -> bool {
        self.pair.is_simple()
    }

    /// Restriction to the indices in `keep`, renumbered in order.
    pub fn restrict(&self, keep: &[usize]) -> GroupTriple {
        let pair = self.pair.restrict(keep);
        let new_index: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let shifts = self
            .shifts
            .iter()
            .filter_map(|(&(x, y, z), c)| {
                Some(((new_index.get(&x).copied()?, new_index.get(&y).copied()?, new_index.get(&z).copied()?), c.clone()))
            })
            .collect();
        GroupTriple { pair, shifts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(v: &[usize]) -> Subset {
        v.iter().copied().collect()
    }

    #[test]
    fn e3_of_universal_relation_on_three_indices() {
        assert_eq!(fixtures::t1().pair.triples().count(), 27);
    }

    #[test]
    fn rejects_non_equivalences() {
        let g = FiniteGroup::cyclic(2);
        let isos = vec![QuotientIso::identity(&g, 0)];
        let err = GroupPair::new(vec![g.clone(), g.clone()], [(0, 0)], isos).unwrap_err();
        assert!(matches!(err, PairError::NotAnEquivalence(ref m) if m.contains("reflexive")));
    }

    #[test]
    fn closure_of_a_chain() {
        let e = equivalence_closure(3, [(0, 1), (1, 2)]);
        assert_eq!(e.len(), 9);
        let e = equivalence_closure(3, [(2, 0)]);
        assert_eq!(e, [(0, 0), (0, 2), (1, 1), (2, 0), (2, 2)].into_iter().collect());
    }

    #[test]
    fn representatives_extend_multiplicatively() {
        let z4 = FiniteGroup::cyclic(4);
        // negation on Z4, given only on the generator
        let iso = QuotientIso::from_representatives(&z4, &z4, (0, 1), s(&[0]), s(&[0]), &[(1, 3)]).unwrap();
        assert_eq!(iso.map(), &[0, 3, 2, 1]);
        let bad = QuotientIso::from_representatives(&z4, &z4, (0, 1), s(&[0]), s(&[0]), &[(1, 2)]);
        assert!(bad.is_err());
    }

    #[test]
    fn single_group_pair_is_already_canonical() {
        let f1 = fixtures::f1();
        assert_eq!(f1.pair.canonicalize().unwrap(), f1.pair);
    }

    #[test]
    fn canonicalize_aligns_reverse_enumeration() {
        let z4 = FiniteGroup::cyclic(4);
        let h = s(&[0, 2]);
        let iso01 = QuotientIso::new(&z4, &z4, (0, 1), h.clone(), h.clone(), vec![0, 1]).unwrap();
        let iso10 = QuotientIso::new(&z4, &z4, (1, 0), h.clone(), h.clone(), vec![0, 1]).unwrap();
        let pair = GroupPair::new(
            vec![z4.clone(), z4.clone()],
            equivalence_closure(2, [(0, 1)]),
            vec![QuotientIso::identity(&z4, 0), QuotientIso::identity(&z4, 1), iso01, iso10],
        )
        .unwrap();
        let c = pair.canonicalize().unwrap();
        for gamma in 0..2 {
            assert_eq!(c.iso(1, 0).h_coset(gamma), c.iso(0, 1).k_coset(gamma));
        }

        // negation forces a genuine re-ordering
        let neg = QuotientIso::new(&z4, &z4, (0, 1), s(&[0]), s(&[0]), vec![0, 3, 2, 1]).unwrap();
        let neg_back = QuotientIso::new(&z4, &z4, (1, 0), s(&[0]), s(&[0]), vec![0, 3, 2, 1]).unwrap();
        let pair = GroupPair::new(
            vec![z4.clone(), z4.clone()],
            equivalence_closure(2, [(0, 1)]),
            vec![QuotientIso::identity(&z4, 0), QuotientIso::identity(&z4, 1), neg, neg_back],
        )
        .unwrap();
        let c = pair.canonicalize().unwrap();
        assert_eq!(c.iso(1, 0).enumeration(), &[0, 3, 2, 1]);
        for gamma in 0..4 {
            assert_eq!(c.iso(1, 0).h_coset(gamma), c.iso(0, 1).k_coset(gamma));
            assert_eq!(c.iso(1, 0).k_coset(gamma), c.iso(0, 1).h_coset(gamma));
        }
        assert_eq!(c.canonicalize().unwrap(), c);
    }

    #[test]
    fn convention_unsatisfiable() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        // φ_01 : Z4/{0,2} → Z2/{0}, but φ_10 : Z2/{0,1} → Z4/Z4
        let iso01 = QuotientIso::new(&z4, &z2, (0, 1), s(&[0, 2]), s(&[0]), vec![0, 1]).unwrap();
        let iso10 = QuotientIso::new(&z2, &z4, (1, 0), s(&[0, 1]), s(&[0, 1, 2, 3]), vec![0]).unwrap();
        let pair = GroupPair::new(
            vec![z4.clone(), z2.clone()],
            equivalence_closure(2, [(0, 1)]),
            vec![QuotientIso::identity(&z4, 0), QuotientIso::identity(&z2, 1), iso01, iso10],
        )
        .unwrap();
        assert!(matches!(
            pair.canonicalize(),
            Err(PairError::ConventionUnsatisfiable { x: 0, y: 1, .. })
        ));
        let (report, canonical) = GroupTriple::with_identity_shifts(pair).validate();
        assert!(canonical.is_none());
        assert_eq!(report.failures[0].condition, Condition::Converse);
    }

    #[test]
    fn identity_condition() {
        assert!(fixtures::f1().pair.check_identity_condition().ok());

        // inversion on Z2 is the identity map
        let z2 = FiniteGroup::cyclic(2);
        let inv = QuotientIso::from_element_map(&z2, &z2, (0, 0), s(&[0]), s(&[0]), |g| z2.inv(g)).unwrap();
        let pair = GroupPair::new(vec![z2.clone()], [(0, 0)], vec![inv]).unwrap();
        assert!(pair.check_identity_condition().ok());

        let z4 = FiniteGroup::cyclic(4);
        let iso = QuotientIso::new(&z4, &z4, (0, 0), s(&[0, 2]), s(&[0, 2]), vec![0, 1]).unwrap();
        let pair = GroupPair::new(vec![z4], [(0, 0)], vec![iso]).unwrap();
        let report = pair.check_identity_condition();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].location, Location::Index(0));
    }

    #[test]
    fn converse_condition() {
        assert!(fixtures::t1().pair.check_converse_condition().ok());
        assert!(fixtures::f1().pair.check_converse_condition().ok());

        let z4 = FiniteGroup::cyclic(4);
        let id01 = QuotientIso::new(&z4, &z4, (0, 1), s(&[0]), s(&[0]), vec![0, 1, 2, 3]).unwrap();
        let neg10 = QuotientIso::new(&z4, &z4, (1, 0), s(&[0]), s(&[0]), vec![0, 3, 2, 1]).unwrap();
        let pair = GroupPair::new(
            vec![z4.clone(), z4.clone()],
            equivalence_closure(2, [(0, 1)]),
            vec![QuotientIso::identity(&z4, 0), QuotientIso::identity(&z4, 1), id01, neg10],
        )
        .unwrap();
        let report = pair.canonicalize().unwrap().check_converse_condition();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].location, Location::Pair(0, 1));
    }

    #[test]
    fn composition_condition() {
        let t1 = fixtures::t1();
        assert!(t1.pair.canonicalize().unwrap().check_composition_condition().ok());
        assert!(fixtures::f1().pair.check_composition_condition().ok());

        let b1 = fixtures::b1().pair.canonicalize().unwrap();
        let report = b1.check_composition_condition();
        let first = report.first(Condition::CompositionSubset).unwrap();
        assert_eq!(first.location, Location::Triple(0, 1, 2));
        assert!(first.witness.contains("{0,1,2,3}"), "{}", first.witness);
        assert!(first.witness.ends_with("= {0,2}"), "{}", first.witness);
    }

    #[test]
    fn image_theorem_on_fixtures() {
        for t in [fixtures::t1(), fixtures::f1(), fixtures::f2()] {
            let p = t.pair.canonicalize().unwrap();
            assert!(p.check_conditions().ok());
            assert!(p.check_image_theorem().ok());
        }
    }

    #[test]
    fn shift_validation() {
        let t1 = fixtures::t1();
        let r = t1.validate_shifts();
        assert!(r.ok() && r.notes.is_empty());

        let f1s = fixtures::f1_shifted();
        let r = f1s.validate_shifts();
        assert!(r.ok());
        assert_eq!(r.notes.len(), 1);

        let mut t = fixtures::t1();
        t.set_shift((0, 1, 2), s(&[1, 3])).unwrap();
        let r = t.validate_shifts();
        assert!(r.ok());
        assert_eq!(t.nontrivial_shifts(), vec![(0, 1, 2)]);

        t.set_shift((0, 1, 2), s(&[1, 2])).unwrap();
        assert!(t.validate_shifts().has(Condition::ShiftShape));
    }

    #[test]
    fn direct_products() {
        let f1 = fixtures::f1();
        let ff = f1.direct_product(&f1);
        assert_eq!(ff.pair.len(), 2);
        assert_eq!(
            ff.pair.equivalence().iter().copied().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1)]
        );
        assert!(!ff.is_simple());
        assert!(ff.validate().0.ok());

        let t1 = fixtures::t1();
        assert_eq!(t1.direct_product(&GroupTriple::empty()), t1);
        assert_eq!(GroupTriple::empty().direct_product(&t1), t1);
    }

    #[test]
    fn simplicity_of_triples() {
        assert!(fixtures::t1().is_simple());
        assert!(fixtures::f1().is_simple());
        assert!(!fixtures::f1().direct_product(&fixtures::f1()).is_simple());
    }

    #[test]
    fn restriction_to_a_component() {
        let t = fixtures::f1().direct_product(&fixtures::t1());
        assert_eq!(t.pair.components(), vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(t.restrict(&[1, 2, 3]), fixtures::t1());
    }
}
