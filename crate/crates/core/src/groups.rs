//! Finite groups given by explicit multiplication tables.
//!
//! Elements are dense indices `0..order` and the identity is always index 0.
//! Everything built on top (quotient isomorphisms, atomic relations, coset
//! shifts) speaks in terms of [`Subset`]s of these indices.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(Subset),
    #[error("subgroup {0} is not normal")]
    NotNormal(Subset),
    #[error("element {element} is out of range for a group of order {order}")]
    OutOfRange { element: usize, order: usize },
}

/// A finite group stored as a flat Cayley table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("table", &self.rows())
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and returns the group it describes.
    ///
    /// The identity is located from the table and relabelled to index 0 if
    /// it is not there already.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::NotAGroup(format!(
                    "entry {bad} in row {a} is out of range"
                )));
            }
        }
        let mul = |a: usize, b: usize| rows[a][b];

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;

        for a in 0..n {
            if !(0..n).any(|b| mul(a, b) == identity && mul(b, a) == identity) {
                return Err(GroupError::NotAGroup(format!("element {a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }

        // swap labels `identity` and 0
        let relabel = |v: usize| {
            if v == identity {
                0
            } else if v == 0 {
                identity
            } else {
                v
            }
        };
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(mul(a, b));
            }
        }
        Ok(Self::from_canonical_table(n, table))
    }

    fn from_canonical_table(order: usize, table: Vec<usize>) -> Self {
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table[a * order + b] == 0)
                    .expect("validated table has inverses")
            })
            .collect();
        FiniteGroup {
            order,
            table,
            inverse,
        }
    }

    /// The cyclic group `Z_n` under addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_canonical_table(n, table)
    }

    /// Direct product; the pair `(i, j)` is stored as `i * |right| + j`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Self {
        let (m, k) = (left.order, right.order);
        let n = m * k;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / k, a % k);
                let (b1, b2) = (b / k, b % k);
                table[a * n + b] = left.mul(a1, b1) * k + right.mul(a2, b2);
            }
        }
        Self::from_canonical_table(n, table)
    }

    /// The symmetric group on `n` letters. Permutations are listed in
    /// lexicographic order, so the identity comes first; `a * b` applies `b`
    /// first.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1, "symmetric group needs n >= 1");
        let perms: Vec<Vec<usize>> = {
            use itertools::Itertools;
            (0..n).permutations(n).collect()
        };
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let order = perms.len();
        let mut table = vec![0; order * order];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                table[a * order + b] = index(&pq);
            }
        }
        Self::from_canonical_table(order, table)
    }

    /// The dihedral group of order `2n`; `r^i s^j` is stored as `i + n*j`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral group needs n >= 1");
        let order = 2 * n;
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let (i, s) = (a % n, a / n);
                let (j, t) = (b % n, b / n);
                let rot = if s == 0 { (i + j) % n } else { (i + n - j) % n };
                table[a * order + b] = rot + n * ((s + t) % 2);
            }
        }
        Self::from_canonical_table(order, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Renames elements through `perm` (old index to new index). The
    /// identity must stay at 0.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order);
        assert_eq!(perm[0], 0, "relabelling must fix the identity");
        let n = self.order;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self::from_canonical_table(n, table)
    }

    pub fn check_member(&self, g: usize) -> Result<(), GroupError> {
        if g < self.order {
            Ok(())
        } else {
            Err(GroupError::OutOfRange {
                element: g,
                order: self.order,
            })
        }
    }

    pub fn check_subset(&self, s: &Subset) -> Result<(), GroupError> {
        s.iter().try_for_each(|g| self.check_member(g))
    }

    pub fn is_subgroup(&self, s: &Subset) -> bool {
        s.contains(0)
            && s.iter().all(|g| g < self.order)
            && s.iter().all(|a| s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    fn require_subgroup(&self, h: &Subset) -> Result<(), GroupError> {
        if self.is_subgroup(h) {
            Ok(())
        } else {
            Err(GroupError::NotASubgroup(h.clone()))
        }
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &Subset) -> Subset {
        let mut members: BTreeSet<usize> = gens.iter().collect();
        members.insert(0);
        let mut frontier: Vec<usize> = members.iter().copied().collect();
        let gens: Vec<usize> = members.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                let p = self.mul(a, g);
                if members.insert(p) {
                    frontier.push(p);
                }
            }
        }
        Subset(members)
    }

    pub fn is_normal(&self, h: &Subset) -> Result<bool, GroupError> {
        self.require_subgroup(h)?;
        Ok(self.elements().all(|g| {
            let gi = self.inv(g);
            h.iter().all(|x| h.contains(self.mul(self.mul(g, x), gi)))
        }))
    }

    /// Left cosets `gH`: the subgroup first, the rest by smallest member.
    pub fn cosets(&self, h: &Subset) -> Result<CosetList, GroupError> {
        self.require_subgroup(h)?;
        let mut index_of = vec![usize::MAX; self.order];
        let mut cosets = Vec::with_capacity(self.order / h.len());
        for g in self.elements() {
            if index_of[g] != usize::MAX {
                continue;
            }
            let coset: Subset = h.iter().map(|x| self.mul(g, x)).collect();
            for m in coset.iter() {
                index_of[m] = cosets.len();
            }
            cosets.push(coset);
        }
        Ok(CosetList {
            subgroup: h.clone(),
            cosets,
            index_of,
        })
    }

    /// Setwise product `{s t : s in S, t in T}`.
    pub fn complex_product(&self, s: &Subset, t: &Subset) -> Subset {
        s.iter()
            .flat_map(|a| t.iter().map(move |b| (a, b)))
            .map(|(a, b)| self.mul(a, b))
            .collect()
    }

    pub fn inverse_set(&self, s: &Subset) -> Subset {
        s.iter().map(|a| self.inv(a)).collect()
    }

    /// The quotient by a normal subgroup. Elements of the quotient are the
    /// coset indices of [`FiniteGroup::cosets`], so the identity stays at 0.
    pub fn quotient(&self, h: &Subset) -> Result<Quotient, GroupError> {
        if !self.is_normal(h)? {
            return Err(GroupError::NotNormal(h.clone()));
        }
        let cosets = self.cosets(h)?;
        let reps: Vec<usize> = cosets.cosets.iter().map(|c| c.smallest().unwrap()).collect();
        let k = reps.len();
        let mut table = vec![0; k * k];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * k + j] = cosets.index_of[self.mul(a, b)];
            }
        }
        Ok(Quotient {
            group: Self::from_canonical_table(k, table),
            cosets,
        })
    }

    /// Every subgroup, as joins of cyclic subgroups. Sorted by size, then
    /// lexicographically.
    pub fn all_subgroups(&self) -> Vec<Subset> {
        let cyclic: BTreeSet<Subset> = self
            .elements()
            .map(|g| self.subgroup_generated(&Subset::from_iter([g])))
            .collect();
        let mut all: BTreeSet<Subset> = cyclic.clone();
        let mut frontier: Vec<Subset> = all.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&s) {
                    continue;
                }
                let joined = self.subgroup_generated(&s.union(c));
                if all.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut out: Vec<Subset> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Subset> {
        self.all_subgroups()
            .into_iter()
            .filter(|h| self.is_normal(h).unwrap_or(false))
            .collect()
    }
}

/// A set of element indices of some group.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(BTreeSet<usize>);

impl Subset {
    pub fn new() -> Self {
        Subset(BTreeSet::new())
    }

    pub fn trivial() -> Self {
        Subset::from_iter([0])
    }

    pub fn full(order: usize) -> Self {
        (0..order).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.contains(&g)
    }

    pub fn insert(&mut self, g: usize) -> bool {
        self.0.insert(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + Clone + '_ {
        self.0.iter().copied()
    }

    pub fn smallest(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1 && self.0.contains(&0)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for Subset {
    fn from(arr: [usize; N]) -> Self {
        arr.into_iter().collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The left cosets of a subgroup in a fixed order, `cosets[0]` being the
/// subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetList {
    pub subgroup: Subset,
    pub cosets: Vec<Subset>,
    index_of: Vec<usize>,
}

impl CosetList {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Index of the coset containing `g`.
    pub fn index_of(&self, g: usize) -> usize {
        self.index_of[g]
    }

    pub fn position(&self, coset: &Subset) -> Option<usize> {
        let i = self.index_of[coset.smallest()?];
        (self.cosets[i] == *coset).then_some(i)
    }
}

/// A quotient group together with the cosets that label its elements.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub cosets: CosetList,
}

impl Quotient {
    pub fn project(&self, g: usize) -> usize {
        self.cosets.index_of(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Subset {
        v.iter().copied().collect()
    }

    #[test]
    fn z2_from_table() {
        let g = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn idempotent_row_is_rejected() {
        let err = FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NotAGroup(ref m) if m.contains("inverse")), "{err}");
    }

    #[test]
    fn addition_mod_4_table_is_z4() {
        let rows: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        assert_eq!(FiniteGroup::from_table(&rows).unwrap(), FiniteGroup::cyclic(4));
    }

    #[test]
    fn identity_is_relabelled_to_zero() {
        // Z2 with the identity written as element 1
        let g = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a loop of order 5 that is not a group
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(&rows).unwrap_err();
        assert!(matches!(err, GroupError::NotAGroup(ref m) if m.contains("associativity")), "{err}");
    }

    #[test]
    fn cyclic_groups() {
        assert_eq!(FiniteGroup::cyclic(1).order(), 1);
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(FiniteGroup::cyclic(4).inv(1), 3);
    }

    #[test]
    fn generated_subgroups_of_z4() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.subgroup_generated(&s(&[2])), s(&[0, 2]));
        assert_eq!(z4.subgroup_generated(&s(&[])), s(&[0]));
        assert_eq!(z4.subgroup_generated(&s(&[1])), s(&[0, 1, 2, 3]));
    }

    #[test]
    fn normality() {
        let z4 = FiniteGroup::cyclic(4);
        assert!(z4.is_normal(&s(&[0, 2])).unwrap());

        let s3 = FiniteGroup::symmetric(3);
        let transposition = (1..6).find(|&g| s3.mul(g, g) == 0).unwrap();
        let two = s3.subgroup_generated(&s(&[transposition]));
        assert_eq!(two.len(), 2);
        assert!(!s3.is_normal(&two).unwrap());

        let three_cycle = (1..6).find(|&g| s3.mul(g, g) != 0).unwrap();
        let alt = s3.subgroup_generated(&s(&[three_cycle]));
        assert_eq!(alt.len(), 3);
        assert!(s3.is_normal(&alt).unwrap());

        assert_eq!(
            z4.is_normal(&s(&[0, 1])),
            Err(GroupError::NotASubgroup(s(&[0, 1])))
        );
    }

    #[test]
    fn coset_enumeration() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.cosets(&s(&[0, 2])).unwrap().cosets, vec![s(&[0, 2]), s(&[1, 3])]);
        assert_eq!(
            z4.cosets(&s(&[0])).unwrap().cosets,
            vec![s(&[0]), s(&[1]), s(&[2]), s(&[3])]
        );
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.cosets(&s(&[0, 1])).unwrap().cosets, vec![s(&[0, 1])]);
        assert!(z4.cosets(&s(&[1])).is_err());
    }

    #[test]
    fn complex_products() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.complex_product(&s(&[0, 2]), &s(&[0, 2])), s(&[0, 2]));
        assert_eq!(z4.complex_product(&s(&[1, 3]), &s(&[1, 3])), s(&[0, 2]));
        assert_eq!(z4.complex_product(&s(&[0, 2]), &s(&[])), s(&[]));
    }

    #[test]
    fn quotients() {
        let z4 = FiniteGroup::cyclic(4);
        let q = z4.quotient(&s(&[0, 2])).unwrap();
        assert_eq!(q.group, FiniteGroup::cyclic(2));
        assert_eq!((0..4).map(|g| q.project(g)).collect::<Vec<_>>(), vec![0, 1, 0, 1]);

        assert_eq!(z4.quotient(&s(&[0])).unwrap().group, z4);
        assert_eq!(
            FiniteGroup::cyclic(2).quotient(&s(&[0, 1])).unwrap().group.order(),
            1
        );

        let s3 = FiniteGroup::symmetric(3);
        let t = (1..6).find(|&g| s3.mul(g, g) == 0).unwrap();
        assert!(matches!(
            s3.quotient(&s(&[0, t])),
            Err(GroupError::NotNormal(_))
        ));
    }

    #[test]
    fn subgroup_census() {
        assert_eq!(FiniteGroup::cyclic(12).all_subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(3).all_subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(3).normal_subgroups().len(), 3);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(v4.all_subgroups().len(), 5);
        // D4 has 10 subgroups, 6 of them normal
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.all_subgroups().len(), 10);
        assert_eq!(d4.normal_subgroups().len(), 6);
    }
}
