//! Pass/fail verdicts with witnesses.

use std::fmt;

/// Which law or condition a failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Equivalence,
    Identity,
    Converse,
    CompositionSubset,
    CompositionInduced,
    ImageEquations,
    ShiftShape,
    Partition,
    IdentityAtom,
    ConverseCoherence,
    CompositionCoherence,
    ShiftedSquare,
    ShiftedRow,
    Involution,
    IdentityLaw,
    CycleLaw,
    ConverseDistribution,
    Associativity,
    CosetConsequence,
    PointPartition,
    Triviality,
    Embedding,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Equivalence => "equivalence",
            Condition::Identity => "identity",
            Condition::Converse => "converse",
            Condition::CompositionSubset => "composition-subset",
            Condition::CompositionInduced => "composition-induced",
            Condition::ImageEquations => "image-equations",
            Condition::ShiftShape => "shift-shape",
            Condition::Partition => "partition",
            Condition::IdentityAtom => "identity-atom",
            Condition::ConverseCoherence => "converse-coherence",
            Condition::CompositionCoherence => "composition-coherence",
            Condition::ShiftedSquare => "shifted-square",
            Condition::ShiftedRow => "shifted-row",
            Condition::Involution => "involution",
            Condition::IdentityLaw => "identity-law",
            Condition::CycleLaw => "cycle-law",
            Condition::ConverseDistribution => "converse-distribution",
            Condition::Associativity => "associativity",
            Condition::CosetConsequence => "coset-consequence",
            Condition::PointPartition => "point-partition",
            Condition::Triviality => "triviality",
            Condition::Embedding => "embedding",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a failure was observed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Global,
    Index(usize),
    Pair(usize, usize),
    Triple(usize, usize, usize),
    /// Atom ids of an algebra (one, two or three of them).
    Atoms(Vec<usize>),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Global => write!(f, "-"),
            Location::Index(x) => write!(f, "({x})"),
            Location::Pair(x, y) => write!(f, "({x},{y})"),
            Location::Triple(x, y, z) => write!(f, "({x},{y},{z})"),
            Location::Atoms(ids) => {
                write!(f, "atoms[")?;
                for (i, a) in ids.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub condition: Condition,
    pub location: Location,
    pub witness: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.condition, self.location, self.witness)
    }
}

/// Outcome of a batch of checks. `ok()` holds exactly when no failure was
/// recorded; `notes` carry informational findings that are not failures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionReport {
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, condition: Condition, location: Location, witness: impl Into<String>) {
        self.failures.push(Failure {
            condition,
            location,
            witness: witness.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: ConditionReport) {
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }

    pub fn first(&self, condition: Condition) -> Option<&Failure> {
        self.failures.iter().find(|f| f.condition == condition)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            writeln!(f, "ok")?;
        }
        for failure in &self.failures {
            writeln!(f, "FAIL {failure}")?;
        }
        for note in &self.notes {
            writeln!(f, "note {note}")?;
        }
        Ok(())
    }
}
