//! Named fixtures and a seeded generator of valid group pairs.
//!
//! The generator takes a base group `B`, a normal subgroup `N_x` for each
//! index (so `G_x = B / N_x`), and for each pair of `E` a normal subgroup
//! `L_xy = L_yx ⊇ N_x N_y`. Then `H_xy = L_xy / N_x`, `K_xy = L_xy / N_y`, and
//! `φ_xy` is the canonical isomorphism through `B / L_xy`. Whenever
//! `L_xz ⊆ L_xy L_yz` for every triple, all three closure criteria hold.
//! Each `G_x` is finally relabelled by a random permutation fixing 0.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::groups::{FiniteGroup, Subset};
use crate::pair::{equivalence_closure, GroupPair, GroupTriple, QuotientIso};

/// `Z_n` with `φ_00` the identity.
pub fn single(g: FiniteGroup) -> GroupTriple {
    let iso = QuotientIso::identity(&g, 0);
    GroupTriple::with_identity_shifts(GroupPair::new(vec![g], [(0, 0)], vec![iso]).unwrap())
}

/// One copy of `Z2`, identity isomorphism, identity shift.
pub fn f1() -> GroupTriple {
    single(FiniteGroup::cyclic(2))
}

/// One copy of `Z4`, identity isomorphism, identity shift.
pub fn f2() -> GroupTriple {
    single(FiniteGroup::cyclic(4))
}

/// [`f1`] with `C_000 = {1}`.
pub fn f1_shifted() -> GroupTriple {
    let mut t = f1();
    t.set_shift_rep((0, 0, 0), 1).unwrap();
    t
}

/// Three copies of `Z4` over the universal relation on `{0,1,2}`, with
/// `H_xy = K_xy` generated by the given elements and identity maps on cosets.
pub fn z4_system(h01: &[usize], h12: &[usize], h02: &[usize]) -> GroupTriple {
    let z4 = FiniteGroup::cyclic(4);
    let sub = |x: usize, y: usize| -> Subset {
        match (x.min(y), x.max(y)) {
            (a, b) if a == b => Subset::trivial(),
            (0, 1) => h01.iter().copied().collect(),
            (1, 2) => h12.iter().copied().collect(),
            _ => h02.iter().copied().collect(),
        }
    };
    let isos = (0..3)
        .flat_map(|x| (0..3).map(move |y| (x, y)))
        .map(|(x, y)| {
            let h = z4.subgroup_generated(&sub(x, y));
            QuotientIso::from_element_map(&z4, &z4, (x, y), h.clone(), h, |g| g).unwrap()
        })
        .collect();
    let pair = GroupPair::new(
        vec![z4.clone(), z4.clone(), z4],
        equivalence_closure(3, [(0, 1), (1, 2)]),
        isos,
    )
    .unwrap();
    GroupTriple::with_identity_shifts(pair)
}

/// The 28-atom system: `H_01 = H_12 = {0,2}`, `H_02 = {0}`.
pub fn t1() -> GroupTriple {
    z4_system(&[0, 2], &[0, 2], &[0])
}

/// [`t1`] broken at `(0,1,2)`: `H_01 = {0,2}`, `H_12 = {0}`, `H_02 = Z4`.
pub fn b1() -> GroupTriple {
    z4_system(&[0, 2], &[0], &[0, 1, 2, 3])
}

/// `n` copies of `g` over the universal relation, every `H` trivial and every
/// map the identity.
pub fn trivial_system(g: &FiniteGroup, n: usize) -> GroupTriple {
    let isos = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| {
            QuotientIso::new(g, g, (x, y), Subset::trivial(), Subset::trivial(), g.elements().collect())
                .unwrap()
        })
        .collect();
    let pair = GroupPair::new(
        vec![g.clone(); n],
        equivalence_closure(n, (0..n).map(|x| (0, x))),
        isos,
    )
    .unwrap();
    GroupTriple::with_identity_shifts(pair)
}

/// Base groups of order at most 16 used by [`random_pair`].
pub fn base_groups() -> Vec<(String, FiniteGroup)> {
    let c = FiniteGroup::cyclic;
    let p = |a: &FiniteGroup, b: &FiniteGroup| FiniteGroup::direct_product(a, b);
    vec![
        ("Z2".into(), c(2)),
        ("Z3".into(), c(3)),
        ("Z4".into(), c(4)),
        ("Z6".into(), c(6)),
        ("Z8".into(), c(8)),
        ("Z9".into(), c(9)),
        ("Z12".into(), c(12)),
        ("Z16".into(), c(16)),
        ("Z2xZ2".into(), p(&c(2), &c(2))),
        ("Z2xZ4".into(), p(&c(2), &c(4))),
        ("Z2xZ2xZ2".into(), p(&p(&c(2), &c(2)), &c(2))),
        ("Z3xZ3".into(), p(&c(3), &c(3))),
        ("Z4xZ4".into(), p(&c(4), &c(4))),
        ("S3".into(), FiniteGroup::symmetric(3)),
        ("D4".into(), FiniteGroup::dihedral(4)),
        ("D5".into(), FiniteGroup::dihedral(5)),
        ("D6".into(), FiniteGroup::dihedral(6)),
    ]
}

/// A random valid group pair with at most `max_indices` groups.
pub fn random_pair<R: Rng>(rng: &mut R, max_indices: usize) -> GroupPair {
    let bases = base_groups();
    loop {
        let (_, base) = bases.choose(rng).unwrap();
        if let Some(pair) = try_random_pair(rng, base, max_indices) {
            return pair;
        }
    }
}

fn try_random_pair<R: Rng>(rng: &mut R, base: &FiniteGroup, max_indices: usize) -> Option<GroupPair> {
    let normals = base.normal_subgroups();
    let n = rng.gen_range(1..=max_indices.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let equivalence = equivalence_closure(
        n,
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| labels[x] == labels[y]),
    );
    let kernel: Vec<Subset> = (0..n).map(|_| normals.choose(rng).unwrap().clone()).collect();

    let mut link = vec![vec![Subset::new(); n]; n];
    for &(x, y) in &equivalence {
        if x == y {
            link[x][x] = kernel[x].clone();
        } else if x < y {
            let floor = base.complex_product(&kernel[x], &kernel[y]);
            let candidates: Vec<&Subset> = normals.iter().filter(|l| floor.is_subset(l)).collect();
            let l = (*candidates.choose(rng)?).clone();
            link[x][y] = l.clone();
            link[y][x] = l;
        }
    }
    for &(x, y) in &equivalence {
        for &(_, z) in equivalence.range((y, 0)..(y + 1, 0)) {
            if !link[x][z].is_subset(&base.complex_product(&link[x][y], &link[y][z])) {
                return None;
            }
        }
    }

    // G_x = B / N_x, relabelled; proj[x][b] is the image of b in G_x
    let mut groups = Vec::with_capacity(n);
    let mut proj: Vec<Vec<usize>> = Vec::with_capacity(n);
    for nx in &kernel {
        let q = base.quotient(nx).ok()?;
        let mut perm: Vec<usize> = (1..q.group.order()).collect();
        perm.shuffle(rng);
        perm.insert(0, 0);
        proj.push(base.elements().map(|b| perm[q.project(b)]).collect());
        groups.push(q.group.relabel(&perm));
    }
    let image = |x: usize, s: &Subset| -> Subset { s.iter().map(|b| proj[x][b]).collect() };
    let mut isos = Vec::new();
    for &(x, y) in &equivalence {
        let reps: Vec<(usize, usize)> = base.elements().map(|b| (proj[x][b], proj[y][b])).collect();
        let iso = QuotientIso::from_representatives(
            &groups[x],
            &groups[y],
            (x, y),
            image(x, &link[x][y]),
            image(y, &link[x][y]),
            &reps,
        )
        .ok()?;
        isos.push(iso);
    }
    GroupPair::new(groups, equivalence, isos).ok()
}

/// The fixed corpus used by the property suites: `F1`, `F2`, `T1`, then
/// `generated` random pairs from `seed`. Every member satisfies all three
/// closure criteria and is canonicalized.
pub fn corpus(seed: u64, generated: usize) -> Vec<GroupTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![f1(), f2(), t1()];
    out.extend((0..generated).map(|_| GroupTriple::with_identity_shifts(random_pair(&mut rng, 3))));
    out.into_iter()
        .map(|t| t.canonicalize().expect("corpus pairs admit the coset convention"))
        .collect()
}

/// Seed of [`corpus`] used throughout the test suites.
pub const CORPUS_SEED: u64 = 0x5eed_c05e7;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_fixtures_validate() {
        for t in [f1(), f2(), t1(), f1_shifted()] {
            let (report, canonical) = t.validate();
            assert!(report.ok(), "{report}");
            assert!(canonical.is_some());
        }
        assert!(!b1().validate().0.ok());
    }

    #[test]
    fn t1_has_expected_kappas() {
        let t = t1();
        let k: Vec<usize> = [(0, 1), (0, 2), (1, 2)].iter().map(|&(x, y)| t.pair.kappa(x, y)).collect();
        assert_eq!(k, vec![2, 4, 2]);
    }

    #[test]
    fn generated_pairs_satisfy_all_criteria() {
        for t in corpus(7, 30) {
            let (report, _) = t.validate();
            assert!(report.ok(), "{report}");
            assert!(t.pair.len() <= 3);
            assert!(t.pair.groups().iter().all(|g| g.order() <= 16));
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(corpus(CORPUS_SEED, 5), corpus(CORPUS_SEED, 5));
    }
}
