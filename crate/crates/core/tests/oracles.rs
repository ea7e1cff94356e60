//! Library results compared with values computed independently here.

use itertools::Itertools;

use cra_core::algebra::{build_full_algebra, complex_algebra};
use cra_core::analysis::{find_embedding, EmbeddingOutcome};
use cra_core::fixtures;
use cra_core::groups::FiniteGroup;
use cra_core::lyndon::lyndon_algebra;
use cra_core::relations::{atom_relation, rel_compose, union_of, atom_compose, AtomIndex};

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

#[test]
fn symmetric_group_table_composes_permutations() {
    for n in 1..=4 {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let g = FiniteGroup::symmetric(n);
        for a in 0..perms.len() {
            for b in 0..perms.len() {
                let c = perms.iter().position(|p| *p == compose(&perms[a], &perms[b])).unwrap();
                assert_eq!(g.mul(a, b), c);
            }
        }
    }
}

#[test]
fn dihedral_group_acts_on_a_polygon() {
    for n in 3..=6 {
        let g = FiniteGroup::dihedral(n);
        // r^i s^j as a map on vertices, s applied first
        let perm = |e: usize| -> Vec<usize> {
            let (i, j) = (e % n, e / n);
            (0..n).map(|v| if j == 1 { (n - v) % n } else { v }).map(|v| (v + i) % n).collect()
        };
        for a in 0..2 * n {
            for b in 0..2 * n {
                assert_eq!(perm(g.mul(a, b)), compose(&perm(a), &perm(b)));
            }
        }
    }
}

#[test]
fn cyclic_products_are_additions() {
    let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(4));
    for a in 0..12 {
        for b in 0..12 {
            let expected = ((a / 4 + b / 4) % 3) * 4 + (a % 4 + b % 4) % 4;
            assert_eq!(g.mul(a, b), expected);
        }
    }
}

#[test]
fn t1_atoms_compose_like_their_relations() {
    let t1 = fixtures::t1().canonicalize().unwrap();
    let list: Vec<AtomIndex> = cra_core::relations::atoms(&t1.pair);
    assert_eq!(list.len(), 28);
    for &a in &list {
        for &b in list.iter().filter(|b| b.x == a.y) {
            let actual = rel_compose(&atom_relation(&t1.pair, a).unwrap(), &atom_relation(&t1.pair, b).unwrap());
            assert_eq!(actual, union_of(&t1.pair, &atom_compose(&t1.pair, a, b)), "{a};{b}");
        }
    }
}

#[test]
fn f2_is_the_complex_algebra_of_z4() {
    let built = build_full_algebra(&fixtures::f2()).unwrap();
    let z4 = complex_algebra(&FiniteGroup::cyclic(4));
    for a in 0..4 {
        for b in 0..4 {
            let got: Vec<usize> = built.algebra().structure().compose(a, b).iter().collect();
            assert_eq!(got, vec![(a + b) % 4]);
        }
    }
    assert_eq!(built.algebra().structure(), z4.structure().clone().with_labels(built.algebra().structure().labels().to_vec()).as_ref().unwrap());
}

#[test]
fn lines_through_the_origin_represent_the_four_point_line() {
    // Z3 × Z3 has four lines through 0; removing 0 from each gives a
    // partition of the non-zero elements that realises the table.
    let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(3));
    let target = complex_algebra(&g);
    let lines: Vec<Vec<usize>> = [1usize, 3, 4, 5]
        .iter()
        .map(|&d| vec![d, g.mul(d, d)])
        .collect();
    let l4 = lyndon_algebra(4).unwrap();
    let map = std::iter::once(target.identity())
        .chain(lines.iter().map(|l| target.element(l.iter().copied())))
        .collect();
    let emb = cra_core::analysis::Embedding {
        source: l4.clone(),
        target: target.clone(),
        map,
        unital: true,
    };
    assert!(emb.verify().ok());
    assert!(matches!(find_embedding(&l4, &target, 100_000), EmbeddingOutcome::Found(_)));
}
