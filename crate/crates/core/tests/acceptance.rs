//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cra_core::algebra::{build_full_algebra, complex_algebra};
use cra_core::analysis::{
    find_embedding, search_shift_systems, triviality_analysis, verify_coset_consequences,
    EmbeddingOutcome,
};
use cra_core::fixtures::{self, CORPUS_SEED};
use cra_core::groups::{FiniteGroup, Subset};
use cra_core::lyndon::{lyndon_algebra, point, IDENTITY};
use cra_core::pair::GroupTriple;
use cra_core::relations::{
    check_composition_coherence, check_converse_coherence, check_partition, check_row_identity,
    check_square_identity, Sampling,
};
use cra_core::report::{Condition, Location};

/// Generated pairs in the corpus, on top of F1, F2 and T1.
const GENERATED: usize = 24;
const MIN_GENERATED: usize = 20;
/// Failures tolerated by every exact criterion.
const ZERO: usize = 0;
const PARTITION_TIME_LIMIT: Duration = Duration::from_secs(10);
const TOTAL_TIME_LIMIT: Duration = Duration::from_secs(120);
const SAMPLING: Sampling = Sampling {
    exhaustive_limit: 10_000,
    samples: 1_000,
    seed: 0x0dd_ba11,
};
const LYNDON_POINTS: std::ops::RangeInclusive<usize> = 1..=7;
const EMBEDDING_BUDGET: u64 = 1_000_000;
/// Shift systems examined per corpus pair.
const SHIFT_BUDGET: u64 = 64;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn corpus() -> Vec<GroupTriple> {
    fixtures::corpus(CORPUS_SEED, GENERATED)
}

fn partition_suite() -> Verdict {
    let start = Instant::now();
    let corpus = corpus();
    let failures: usize = corpus.iter().map(|t| check_partition(&t.pair).failures.len()).sum();
    let elapsed = start.elapsed();
    let small = corpus
        .iter()
        .all(|t| t.pair.len() <= 3 && t.pair.groups().iter().all(|g| g.order() <= 16));
    verdict(
        failures == ZERO && small && corpus.len() - 3 >= MIN_GENERATED && elapsed < PARTITION_TIME_LIMIT,
        format!("{} triples, {failures} failures, {elapsed:.2?}", corpus.len()),
    )
}

fn oracle_coherence() -> Verdict {
    let mut failures = 0;
    let mut pairs = 0;
    let mut sampled = 0;
    for t in corpus() {
        failures += check_converse_coherence(&t.pair).failures.len();
        let (report, stats) = check_composition_coherence(&t.pair, SAMPLING);
        failures += report.failures.len();
        pairs += stats.exhaustive_pairs;
        sampled += stats.sampled_pairs;
    }
    verdict(
        failures == ZERO,
        format!("{pairs} atom pairs exhaustive, {sampled} sampled, {failures} disagreements"),
    )
}

fn square_and_row() -> Verdict {
    let mut failures = 0;
    let corpus = corpus();
    for t in &corpus {
        failures += check_square_identity(t).failures.len();
        failures += check_row_identity(t, SAMPLING.exhaustive_limit).failures.len();
        failures += build_full_algebra(t).unwrap().check_square_and_row().failures.len();
    }
    verdict(failures == ZERO, format!("{} triples, {failures} exceptions", corpus.len()))
}

fn axiom_gate() -> Verdict {
    let corpus = corpus();
    let passing = corpus
        .iter()
        .filter(|t| build_full_algebra(t).unwrap().algebra().check_ra_axioms().ok())
        .count();
    let b1 = fixtures::b1().validate().0;
    let b1_ok = b1.failures.iter().any(|f| {
        f.condition == Condition::CompositionSubset
            && f.location == Location::Triple(0, 1, 2)
            && f.witness == "H_02 = {0,1,2,3} is not contained in φ_01⁻¹[K_01∘H_12] = {0,2}"
    }) && build_full_algebra(&fixtures::b1()).is_err();
    let shifted = build_full_algebra(&fixtures::f1_shifted()).unwrap();
    let identity_atom = shifted.identity_atom(0);
    let shifted_ok = shifted.algebra().structure().compose(identity_atom, identity_atom).iter().collect::<Vec<_>>()
        == vec![1]
        && shifted
            .algebra()
            .check_ra_axioms()
            .first(Condition::IdentityLaw)
            .is_some_and(|f| f.location == Location::Atoms(vec![identity_atom]));
    verdict(
        passing == corpus.len() && b1_ok && shifted_ok,
        format!(
            "{passing}/{} corpus algebras pass, B1 rejected: {b1_ok}, shifted F1 rejected: {shifted_ok}",
            corpus.len()
        ),
    )
}

fn measurability() -> Verdict {
    let mut wrong = 0;
    let mut checked = 0;
    for t in corpus() {
        let built = build_full_algebra(&t).unwrap();
        if !built.algebra().check_ra_axioms().ok() {
            continue;
        }
        let report = built.algebra().measurability();
        checked += 1;
        if !report.measurable {
            wrong += 1;
        }
        for m in &report.atoms {
            let x = built.atom_index(m.atom).x;
            if m.measure != Some(built.triple().pair.group(x).order()) {
                wrong += 1;
            }
        }
    }
    let lyndon_measurable: Vec<usize> = LYNDON_POINTS
        .filter(|&n| lyndon_algebra(n).unwrap().measurability().measurable)
        .collect();
    verdict(
        wrong == ZERO && lyndon_measurable.is_empty(),
        format!("{checked} algebras, {wrong} wrong measures, Lyndon reported measurable for n in {lyndon_measurable:?}"),
    )
}

fn lyndon_suite() -> Verdict {
    let mut failing = Vec::new();
    let mut table_errors = 0;
    for n in LYNDON_POINTS {
        let l = lyndon_algebra(n).unwrap();
        if !l.check_ra_axioms().ok() || !l.is_simple_ra() {
            failing.push(n);
        }
        // the table straight from the definition
        let s = l.structure();
        let ell: Vec<usize> = (0..n).map(point).collect();
        for a in 0..=n {
            for b in 0..=n {
                let expected: Vec<usize> = if a == IDENTITY {
                    vec![b]
                } else if b == IDENTITY {
                    vec![a]
                } else if a == b {
                    vec![IDENTITY, a]
                } else {
                    ell.iter().copied().filter(|&c| c != a && c != b).collect()
                };
                if s.compose(a, b).iter().collect::<Vec<_>>() != expected {
                    table_errors += 1;
                }
            }
        }
    }
    verdict(
        failing.is_empty() && table_errors == ZERO,
        format!("axioms or simplicity fail for n in {failing:?}; {table_errors} table mismatches"),
    )
}

fn simplicity() -> Verdict {
    let mut disagreements = 0;
    let mut checked = 0;
    for t in corpus() {
        let built = build_full_algebra(&t).unwrap();
        if built.algebra().check_ra_axioms().ok() {
            checked += 1;
            if built.algebra().is_simple_ra() != t.is_simple() {
                disagreements += 1;
            }
        }
    }
    let products = [
        fixtures::f1().direct_product(&fixtures::f1()),
        fixtures::f1().direct_product(&fixtures::t1()),
        fixtures::t1().direct_product(&fixtures::f2()),
    ];
    let simple_products = products
        .iter()
        .filter(|t| build_full_algebra(t).unwrap().algebra().is_simple_ra())
        .count();
    verdict(
        disagreements == ZERO && simple_products == ZERO,
        format!("{checked} algebras, {disagreements} disagreements, {simple_products} products reported simple"),
    )
}

fn point_pipeline() -> Verdict {
    let mut violations = 0;
    for t in corpus() {
        let report = triviality_analysis(&t).unwrap();
        if report.all_h_trivial && !report.all_atoms_functional {
            violations += 1;
        }
    }
    let l2 = lyndon_algebra(2).unwrap();
    let mut outcomes = Vec::new();
    let mut terminated = true;
    for n in [2, 3, 4] {
        let target = complex_algebra(&FiniteGroup::cyclic(n));
        match find_embedding(&l2, &target, EMBEDDING_BUDGET) {
            EmbeddingOutcome::NoEmbedding { .. } => outcomes.push(format!("Z{n}: none")),
            EmbeddingOutcome::Found(e) => {
                let ok = e.verify().ok();
                terminated &= ok;
                outcomes.push(format!("Z{n}: found, verified {ok}"));
            }
            EmbeddingOutcome::NotFoundWithinBudget { .. } => {
                terminated = false;
                outcomes.push(format!("Z{n}: budget exhausted"));
            }
        }
    }
    verdict(
        violations == ZERO && terminated,
        format!("{violations} triviality violations; {}", outcomes.join(", ")),
    )
}

fn shift_census() -> Verdict {
    let f1 = search_shift_systems(&fixtures::f1().pair, SHIFT_BUDGET).unwrap();
    let f1_ok = f1.passing.len() == 1
        && f1.passing[0].shifts.len() == 1
        && f1.passing[0].shifts[&(0, 0, 0)] == Subset::from([0])
        && !f1.budget_exceeded;
    let mut found = 0;
    let mut failures = 0;
    for t in corpus() {
        let search = search_shift_systems(&t.pair, SHIFT_BUDGET).unwrap();
        for assignment in search.passing {
            found += 1;
            let mut with = t.clone();
            for (&at, c) in &assignment.shifts {
                with.set_shift(at, c.clone()).unwrap();
            }
            failures += verify_coset_consequences(&with).failures.len();
        }
    }
    verdict(
        f1_ok && failures == ZERO,
        format!("F1 census exact: {f1_ok}; {found} passing assignments, {failures} consequence failures"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("partition", partition_suite),
        ("oracle coherence", oracle_coherence),
        ("square and row identities", square_and_row),
        ("axiom gate", axiom_gate),
        ("measurability", measurability),
        ("lyndon algebras", lyndon_suite),
        ("simplicity", simplicity),
        ("point pipeline", point_pipeline),
        ("shift census", shift_census),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| verdict(false, "panicked"));
        failed += usize::from(!v.pass);
        println!(
            "criterion {} {name}: {} ({}; {:.2?})",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed()
        );
    }
    let total = start.elapsed();
    let in_time = total < TOTAL_TIME_LIMIT;
    failed += usize::from(!in_time);
    println!(
        "criterion total runtime: {} ({total:.2?}, limit {TOTAL_TIME_LIMIT:?})",
        if in_time { "PASS" } else { "FAIL" }
    );
    println!("acceptance: {} of {} criteria failed", failed, criteria.len() + 1);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
