//! Subcommands of `cra`.

use std::fmt::Write as _;
use std::io::Read as _;

use clap::{Parser, Subcommand};
use cra_core::algebra::{build_full_algebra, complex_algebra, CosetAlgebra, FiniteRelationAlgebra};
use cra_core::analysis::{
    compare_compositions, find_embedding_with, search_shift_systems, triviality_analysis,
    verify_coset_consequences, EmbeddingOptions, EmbeddingOutcome,
};
use cra_core::lyndon::lyndon_algebra;
use cra_core::pair::GroupTriple;
use cra_core::records::{self, field, write_algebra, write_report, write_verdict, HEADER};
use cra_core::relations::{
    atom_compose, atom_shifted_compose, check_composition_coherence, check_converse_coherence,
    check_identity_atoms, check_partition, check_row_identity, check_square_identity, Sampling,
};
use cra_core::report::ConditionReport;

use crate::spec::{parse_group_kind, parse_spec, TripleSpec};

/// Largest algebra, in atoms, the commands will build or load.
pub const MAX_ATOMS: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "cra", version, about = "Finite coset relation algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the pair conditions and the shape of the shifts.
    Validate { spec: String },
    /// Print the atom structure built from a spec.
    Build { spec: String },
    /// Check the relation algebra axioms.
    Axioms { algebra: String },
    /// Report measurability and the measure of each subidentity atom.
    Measure { algebra: String },
    /// Check that 1;a;1 = 1 for every atom.
    Simple { algebra: String },
    /// Print the Lyndon algebra of a line with N points.
    Lyndon { n: usize },
    /// Search for an embedding of SOURCE into TARGET.
    Embed {
        source: String,
        target: String,
        /// Candidate assignments tried before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Do not require the images to cover the target.
        #[arg(long)]
        non_unital: bool,
    },
    /// List atom pairs whose shifted product differs from composition.
    CompareComp { spec: String },
    /// Enumerate shift systems and keep those passing the axioms.
    SearchShifts {
        spec: String,
        /// Shift systems examined before stopping.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Run every check on a spec.
    Analyze {
        spec: String,
        /// Seed of the sampled coherence checks.
        #[arg(long, default_value_t = Sampling::default().seed)]
        seed: u64,
        /// Points sampled per atom pair on large blocks.
        #[arg(long, default_value_t = Sampling::default().samples)]
        samples: usize,
        /// Blocks up to this many pairs are checked exhaustively.
        #[arg(long, default_value_t = Sampling::default().exhaustive_limit)]
        exhaustive_limit: usize,
    },
}

/// Output of a command: the record stream and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

/// An input error; reported on stderr with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn read(path: &str) -> Result<String, InputError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| InputError(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
    }
}

fn load_spec(path: &str) -> Result<TripleSpec, InputError> {
    let text = read(path)?;
    parse_spec(&text).map_err(|e| InputError(format!("{path}:{e}")))
}

fn check_size(triple: &GroupTriple) -> Result<(), InputError> {
    let atoms: usize = triple
        .pair
        .equivalence()
        .iter()
        .map(|&(x, y)| triple.pair.kappa(x, y))
        .sum();
    if atoms > MAX_ATOMS {
        return Err(InputError(format!("{atoms} atoms exceed the limit of {MAX_ATOMS}")));
    }
    Ok(())
}

/// An algebra, or the report explaining why a spec has none.
enum Loaded {
    Algebra(FiniteRelationAlgebra),
    Invalid(ConditionReport),
}

/// `lyndon:N`, `complex:<group kind>`, a record dump, or a spec; `-` reads
/// standard input.
fn load_algebra(source: &str) -> Result<Loaded, InputError> {
    if let Some(n) = source.strip_prefix("lyndon:") {
        let n: usize = n.parse().map_err(|_| InputError(format!("bad point count in {source:?}")))?;
        return lyndon(n).map(Loaded::Algebra);
    }
    if let Some(kind) = source.strip_prefix("complex:") {
        let g = parse_group_kind(kind).map_err(|e| InputError(format!("{source}: {e}")))?;
        return Ok(Loaded::Algebra(complex_algebra(&g)));
    }
    let text = read(source)?;
    if text.starts_with("cra-records") {
        let algebra = records::parse_algebra(&text).map_err(|e| InputError(format!("{source}: {e}")))?;
        if algebra.atom_count() > MAX_ATOMS {
            return Err(InputError(format!("{source}: more than {MAX_ATOMS} atoms")));
        }
        return Ok(Loaded::Algebra(algebra));
    }
    let spec = parse_spec(&text).map_err(|e| InputError(format!("{source}:{e}")))?;
    check_size(&spec.triple)?;
    Ok(match build_full_algebra(&spec.triple) {
        Ok(built) => Loaded::Algebra(built.into_algebra()),
        Err(cra_core::algebra::AlgebraError::InvalidTriple(report)) => Loaded::Invalid(report),
        Err(e) => return Err(InputError(e.to_string())),
    })
}

fn lyndon(n: usize) -> Result<FiniteRelationAlgebra, InputError> {
    if n + 1 > MAX_ATOMS {
        return Err(InputError(format!("{n} points exceed the limit of {MAX_ATOMS} atoms")));
    }
    lyndon_algebra(n).map_err(|e| InputError(e.to_string()))
}

fn finish(mut out: String, pass: bool) -> Outcome {
    write_verdict(&mut out, pass);
    Outcome {
        stdout: out,
        code: if pass { 0 } else { 1 },
    }
}

fn invalid(mut out: String, report: &ConditionReport) -> Outcome {
    write_report(&mut out, report);
    finish(out, false)
}

pub fn run(cli: Cli) -> Result<Outcome, InputError> {
    let mut out = format!("{HEADER}\n");
    match cli.command {
        Command::Validate { spec } => {
            let spec = load_spec(&spec)?;
            let (report, _) = spec.triple.validate();
            for (x, name) in spec.groups.iter().enumerate() {
                writeln!(out, "group\t{x}\t{}\t{}", field(name), spec.triple.pair.group(x).order()).unwrap();
            }
            write_report(&mut out, &report);
            Ok(finish(out, report.ok()))
        }
        Command::Build { spec } => {
            let spec = load_spec(&spec)?;
            check_size(&spec.triple)?;
            match build_full_algebra(&spec.triple) {
                Ok(built) => {
                    write_algebra(&mut out, built.algebra());
                    Ok(finish(out, true))
                }
                Err(cra_core::algebra::AlgebraError::InvalidTriple(report)) => Ok(invalid(out, &report)),
                Err(e) => Err(InputError(e.to_string())),
            }
        }
        Command::Axioms { algebra } => match load_algebra(&algebra)? {
            Loaded::Invalid(report) => Ok(invalid(out, &report)),
            Loaded::Algebra(a) => {
                let report = a.check_ra_axioms();
                writeln!(out, "atoms\t{}", a.atom_count()).unwrap();
                write_report(&mut out, &report);
                Ok(finish(out, report.ok()))
            }
        },
        Command::Measure { algebra } => match load_algebra(&algebra)? {
            Loaded::Invalid(report) => Ok(invalid(out, &report)),
            Loaded::Algebra(a) => {
                let report = a.measurability();
                writeln!(out, "measurable\t{}", report.measurable).unwrap();
                for m in &report.atoms {
                    writeln!(
                        out,
                        "measure\t{}\t{}\t{}\t{}\t{}",
                        m.atom,
                        field(a.structure().label(m.atom)),
                        m.measurable,
                        m.measure.map_or("-".to_string(), |v| v.to_string()),
                        if m.exhaustive { "exhaustive" } else { "functional-atoms" }
                    )
                    .unwrap();
                }
                Ok(finish(out, report.measurable))
            }
        },
        Command::Simple { algebra } => match load_algebra(&algebra)? {
            Loaded::Invalid(report) => Ok(invalid(out, &report)),
            Loaded::Algebra(a) => {
                let simple = a.is_simple_ra();
                writeln!(out, "simple\t{simple}").unwrap();
                Ok(finish(out, simple))
            }
        },
        Command::Lyndon { n } => {
            write_algebra(&mut out, &lyndon(n)?);
            Ok(finish(out, true))
        }
        Command::Embed {
            source,
            target,
            budget,
            non_unital,
        } => {
            let (Loaded::Algebra(src), Loaded::Algebra(tgt)) = (load_algebra(&source)?, load_algebra(&target)?) else {
                return Err(InputError("both algebras must come from valid triples".into()));
            };
            let options = EmbeddingOptions {
                budget,
                unital: !non_unital,
            };
            match find_embedding_with(&src, &tgt, options) {
                EmbeddingOutcome::Found(e) => {
                    writeln!(out, "embedding\tfound").unwrap();
                    for (a, img) in e.map.iter().enumerate() {
                        let targets: Vec<String> = img.iter().map(|t| field(tgt.structure().label(t))).collect();
                        writeln!(out, "image\t{a}\t{}\t{}", field(src.structure().label(a)), targets.join(",")).unwrap();
                    }
                    let report = e.verify();
                    write_report(&mut out, &report);
                    Ok(finish(out, report.ok()))
                }
                EmbeddingOutcome::NoEmbedding { nodes } => {
                    writeln!(out, "embedding\tnone\t{nodes}").unwrap();
                    Ok(finish(out, false))
                }
                EmbeddingOutcome::NotFoundWithinBudget { nodes } => {
                    writeln!(out, "embedding\tbudget-exhausted\t{nodes}").unwrap();
                    Ok(finish(out, false))
                }
            }
        }
        Command::CompareComp { spec } => {
            let spec = load_spec(&spec)?;
            check_size(&spec.triple)?;
            let (report, canonical) = spec.triple.validate();
            let Some(t) = canonical else {
                return Ok(invalid(out, &report));
            };
            let diffs = compare_compositions(&t).map_err(|e| InputError(e.to_string()))?;
            for (a, b) in &diffs {
                let show = |v: Vec<cra_core::relations::AtomIndex>| {
                    if v.is_empty() {
                        "-".to_string()
                    } else {
                        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                    }
                };
                writeln!(
                    out,
                    "diff\t{a}\t{b}\t{}\t{}",
                    show(atom_compose(&t.pair, *a, *b)),
                    show(atom_shifted_compose(&t, *a, *b))
                )
                .unwrap();
            }
            writeln!(out, "diffs\t{}", diffs.len()).unwrap();
            Ok(finish(out, true))
        }
        Command::SearchShifts { spec, budget } => {
            let spec = load_spec(&spec)?;
            check_size(&spec.triple)?;
            let (report, canonical) = GroupTriple::with_identity_shifts(spec.triple.pair.clone()).validate();
            let Some(t) = canonical else {
                return Ok(invalid(out, &report));
            };
            let search = search_shift_systems(&t.pair, budget).map_err(|e| InputError(e.to_string()))?;
            writeln!(out, "space\t{}", search.space).unwrap();
            writeln!(out, "examined\t{}", search.examined).unwrap();
            writeln!(out, "budget-exceeded\t{}", search.budget_exceeded).unwrap();
            let mut consequences = ConditionReport::new();
            for (i, found) in search.passing.iter().enumerate() {
                let shifts: Vec<String> = found
                    .shifts
                    .iter()
                    .map(|((x, y, z), c)| format!("{x},{y},{z}={c}"))
                    .collect();
                let kind = if found.trivial { "trivial" } else { "nontrivial" };
                writeln!(out, "passing\t{i}\t{kind}\t{}", shifts.join(";")).unwrap();
                let mut with = t.clone();
                for (&at, c) in &found.shifts {
                    with.set_shift(at, c.clone()).expect("triple of E");
                }
                consequences.merge(verify_coset_consequences(&with));
            }
            write_report(&mut out, &consequences);
            Ok(finish(out, consequences.ok()))
        }
        Command::Analyze {
            spec,
            seed,
            samples,
            exhaustive_limit,
        } => {
            let spec = load_spec(&spec)?;
            check_size(&spec.triple)?;
            let (report, canonical) = spec.triple.validate();
            writeln!(out, "check\tvalidate\t{}", verdict(&report)).unwrap();
            let Some(t) = canonical else {
                return Ok(invalid(out, &report));
            };
            let sampling = Sampling {
                exhaustive_limit,
                samples,
                seed,
            };
            analyze(&mut out, &t, sampling)
        }
    }
}

fn verdict(report: &ConditionReport) -> &'static str {
    if report.ok() {
        "pass"
    } else {
        "fail"
    }
}

fn analyze(out: &mut String, t: &GroupTriple, sampling: Sampling) -> Result<Outcome, InputError> {
    let mut hard = ConditionReport::new();
    let record = |out: &mut String, name: &str, report: ConditionReport, hard: &mut ConditionReport| {
        writeln!(out, "check\t{name}\t{}", verdict(&report)).unwrap();
        hard.merge(report);
    };
    record(out, "partition", check_partition(&t.pair), &mut hard);
    record(out, "identity-atoms", check_identity_atoms(&t.pair), &mut hard);
    record(out, "converse-coherence", check_converse_coherence(&t.pair), &mut hard);
    let (coherence, stats) = check_composition_coherence(&t.pair, sampling);
    record(out, "composition-coherence", coherence, &mut hard);
    writeln!(
        out,
        "coherence\t{}\t{}\t{}\t{}",
        stats.exhaustive_pairs, stats.sampled_pairs, stats.sampled_points, sampling.seed
    )
    .unwrap();

    let built: CosetAlgebra = build_full_algebra(t).map_err(|e| InputError(e.to_string()))?;
    let alg = built.algebra();
    writeln!(out, "atoms\t{}", alg.atom_count()).unwrap();
    let axioms = alg.check_ra_axioms();
    let axioms_ok = axioms.ok();
    record(out, "axioms", axioms, &mut hard);

    let mut lemmas = check_square_identity(t);
    lemmas.merge(check_row_identity(t, sampling.exhaustive_limit));
    lemmas.merge(built.check_square_and_row());
    if axioms_ok {
        record(out, "square-and-row", lemmas, &mut hard);
        record(out, "coset-consequences", verify_coset_consequences(t), &mut hard);
    } else {
        writeln!(out, "check\tsquare-and-row\t{}\tinformational", verdict(&lemmas)).unwrap();
    }

    writeln!(out, "simple\t{}", alg.is_simple_ra()).unwrap();
    let m = alg.measurability();
    writeln!(out, "measurable\t{}", m.measurable).unwrap();
    let triv = triviality_analysis(t).map_err(|e| InputError(e.to_string()))?;
    writeln!(
        out,
        "triviality\t{}\t{}\t{}",
        triv.all_h_trivial, triv.all_atoms_functional, triv.shifts_act_trivially
    )
    .unwrap();
    record(out, "triviality", triv.report, &mut hard);
    let diffs = compare_compositions(t).map_err(|e| InputError(e.to_string()))?;
    writeln!(out, "diffs\t{}", diffs.len()).unwrap();
    write_report(out, &hard);
    Ok(finish(std::mem::take(out), hard.ok()))
}
