//! The `coset-triple/1` specification format.
//!
//! A spec is a TOML document:
//!
//! ```toml
//! format = "coset-triple/1"
//!
//! [[group]]                 # index 0, then 1, ... in order of appearance
//! kind = "cyclic:4"         # or "symmetric:n", "dihedral:n",
//!                           # "product:[cyclic:2,cyclic:2]", or
//! # table = [[0, 1], [1, 0]]  a Cayley table over 0..n
//!
//! [equivalence]
//! pairs = [[0, 1]]          # closed to an equivalence unless close = false
//!
//! [[iso]]
//! from = 0
//! to = 1
//! h = [2]                   # generators of H_xy
//! k = [2]                   # generators of K_xy, default h
//! map = [[1, 3]]            # φ(1 H) = 3 K, extended multiplicatively;
//!                           # default φ(g H) = g K
//!
//! [[shift]]
//! at = [0, 1, 2]
//! rep = 1                   # C_012 = 1 ∘ (H_01 ∘ H_02)
//! ```
//!
//! Unlisted `(x, x)` isomorphisms are the identity of `G_x / {e}`; an
//! unlisted `(y, x)` is the inverse of a listed `(x, y)`. Unlisted shifts
//! are the subgroups `H_xy ∘ H_xz` themselves.

use std::collections::BTreeMap;
use std::ops::Range;

use cra_core::groups::{FiniteGroup, Subset};
use cra_core::pair::{equivalence_closure, GroupPair, GroupTriple, QuotientIso};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

pub const FORMAT: &str = "coset-triple/1";

/// Largest group order accepted.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("{line}:{column}: parse error: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {message}")]
    Resolution { line: usize, column: usize, message: String },
}

/// A resolved specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSpec {
    /// The group descriptions, by index.
    pub groups: Vec<String>,
    pub triple: GroupTriple,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    format: Spanned<String>,
    #[serde(default, rename = "group")]
    groups: Vec<Spanned<RawGroup>>,
    equivalence: Option<RawEquivalence>,
    #[serde(default, rename = "iso")]
    isos: Vec<Spanned<RawIso>>,
    #[serde(default, rename = "shift")]
    shifts: Vec<Spanned<RawShift>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    kind: Option<Spanned<String>>,
    table: Option<Spanned<Vec<Vec<usize>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEquivalence {
    pairs: Spanned<Vec<(usize, usize)>>,
    #[serde(default = "yes")]
    close: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIso {
    from: Spanned<usize>,
    to: Spanned<usize>,
    #[serde(default)]
    h: Vec<usize>,
    k: Option<Vec<usize>>,
    map: Option<Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShift {
    at: Spanned<(usize, usize, usize)>,
    rep: Spanned<usize>,
}

struct Resolver<'a> {
    text: &'a str,
}

impl Resolver<'_> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error(&self, span: Range<usize>, message: impl Into<String>) -> SpecError {
        let (line, column) = self.position(span.start);
        SpecError::Resolution {
            line,
            column,
            message: message.into(),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<TripleSpec, SpecError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| {
        let r = Resolver { text };
        let (line, column) = r.position(e.span().map_or(0, |s| s.start));
        SpecError::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    let r = Resolver { text };
    if raw.format.get_ref() != FORMAT {
        return Err(r.error(
            raw.format.span(),
            format!("unsupported format {:?}, expected {FORMAT:?}", raw.format.get_ref()),
        ));
    }

    let mut groups = Vec::new();
    let mut names = Vec::new();
    for g in &raw.groups {
        let (group, name) = match (&g.get_ref().kind, &g.get_ref().table) {
            (Some(kind), None) => (
                parse_group_kind(kind.get_ref()).map_err(|m| r.error(kind.span(), m))?,
                kind.get_ref().clone(),
            ),
            (None, Some(table)) => (
                FiniteGroup::from_table(table.get_ref()).map_err(|e| r.error(table.span(), e.to_string()))?,
                format!("table:{}", table.get_ref().len()),
            ),
            _ => return Err(r.error(g.span(), "a group needs exactly one of `kind` and `table`")),
        };
        if group.order() > MAX_ORDER {
            return Err(r.error(g.span(), format!("group order {} exceeds {MAX_ORDER}", group.order())));
        }
        groups.push(group);
        names.push(name);
    }
    let n = groups.len();
    let check_index = |x: &Spanned<usize>| {
        if *x.get_ref() < n {
            Ok(*x.get_ref())
        } else {
            Err(r.error(x.span(), format!("no group with index {}", x.get_ref())))
        }
    };

    let equivalence = match &raw.equivalence {
        None => equivalence_closure(n, []),
        Some(eq) => {
            for &(x, y) in eq.pairs.get_ref() {
                if x >= n || y >= n {
                    return Err(r.error(eq.pairs.span(), format!("pair ({x},{y}) names a missing group")));
                }
            }
            if eq.close {
                equivalence_closure(n, eq.pairs.get_ref().iter().copied())
            } else {
                eq.pairs.get_ref().iter().copied().collect()
            }
        }
    };

    let mut isos: BTreeMap<(usize, usize), QuotientIso> = BTreeMap::new();
    for raw_iso in &raw.isos {
        let iso = raw_iso.get_ref();
        let (x, y) = (check_index(&iso.from)?, check_index(&iso.to)?);
        if isos.contains_key(&(x, y)) {
            return Err(r.error(raw_iso.span(), format!("second isomorphism for ({x},{y})")));
        }
        let err = |m: String| r.error(raw_iso.span(), m);
        let (gx, gy) = (&groups[x], &groups[y]);
        let subgroup = |g: &FiniteGroup, gens: &[usize]| -> Result<Subset, SpecError> {
            let gens: Subset = gens.iter().copied().collect();
            g.check_subset(&gens).map_err(|e| err(e.to_string()))?;
            Ok(g.subgroup_generated(&gens))
        };
        let h = subgroup(gx, &iso.h)?;
        let k = subgroup(gy, iso.k.as_deref().unwrap_or(&iso.h))?;
        let built = match &iso.map {
            Some(pairs) => QuotientIso::from_representatives(gx, gy, (x, y), h, k, pairs),
            None if gx.order() == gy.order() => QuotientIso::from_element_map(gx, gy, (x, y), h, k, |g| g),
            None => return Err(err(format!("G_{x} and G_{y} differ in order, so `map` is required"))),
        };
        isos.insert((x, y), built.map_err(|e| err(e.to_string()))?);
    }
    let mut all = Vec::new();
    for &(x, y) in &equivalence {
        let iso = if let Some(iso) = isos.get(&(x, y)) {
            iso.clone()
        } else if let Some(back) = isos.get(&(y, x)) {
            inverse(&groups, back)
        } else if x == y {
            QuotientIso::identity(&groups[x], x)
        } else {
            let span = raw.equivalence.as_ref().map_or(0..0, |e| e.pairs.span());
            return Err(r.error(span, format!("no isomorphism given for ({x},{y}) or ({y},{x})")));
        };
        all.push(iso);
    }
    if let Some((&(x, y), _)) = isos.iter().find(|(p, _)| !equivalence.contains(p)) {
        let span = raw
            .isos
            .iter()
            .find(|i| (*i.get_ref().from.get_ref(), *i.get_ref().to.get_ref()) == (x, y))
            .map_or(0..0, |i| i.span());
        return Err(r.error(span, format!("({x},{y}) is not in the equivalence")));
    }

    let pair = GroupPair::new(groups, equivalence, all).map_err(|e| r.error(0..0, e.to_string()))?;
    let mut triple = GroupTriple::with_identity_shifts(pair);
    for shift in &raw.shifts {
        let s = shift.get_ref();
        let (x, y, z) = *s.at.get_ref();
        if !triple.shifts().contains_key(&(x, y, z)) {
            return Err(r.error(s.at.span(), format!("({x},{y},{z}) is not a triple of the equivalence")));
        }
        triple
            .set_shift_rep((x, y, z), *s.rep.get_ref())
            .map_err(|e| r.error(s.rep.span(), e.to_string()))?;
    }
    Ok(TripleSpec { groups: names, triple })
}

fn inverse(groups: &[FiniteGroup], iso: &QuotientIso) -> QuotientIso {
    let (x, y) = (iso.source(), iso.target());
    let pairs: Vec<(usize, usize)> = iso
        .map()
        .iter()
        .enumerate()
        .map(|(c, &d)| {
            let rep = |s: &Subset| s.smallest().expect("cosets are non-empty");
            (rep(&iso.k_cosets().cosets[d]), rep(&iso.h_cosets().cosets[c]))
        })
        .collect();
    QuotientIso::from_representatives(&groups[y], &groups[x], (y, x), iso.k().clone(), iso.h().clone(), &pairs)
        .expect("the inverse of an isomorphism is an isomorphism")
}

/// Parses `cyclic:n`, `symmetric:n`, `dihedral:n` and
/// `product:[kind,kind,...]`.
pub fn parse_group_kind(kind: &str) -> Result<FiniteGroup, String> {
    let kind = kind.trim();
    let number = |s: &str, min: usize| -> Result<usize, String> {
        let n: usize = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
        if n < min {
            return Err(format!("{kind:?} needs n ≥ {min}"));
        }
        Ok(n)
    };
    let group = if let Some(n) = kind.strip_prefix("cyclic:") {
        FiniteGroup::cyclic(number(n, 1)?)
    } else if let Some(n) = kind.strip_prefix("symmetric:") {
        let n = number(n, 1)?;
        if n > 5 {
            return Err(format!("symmetric:{n} exceeds order {MAX_ORDER}"));
        }
        FiniteGroup::symmetric(n)
    } else if let Some(n) = kind.strip_prefix("dihedral:") {
        FiniteGroup::dihedral(number(n, 3)?)
    } else if let Some(inner) = kind.strip_prefix("product:[").and_then(|s| s.strip_suffix(']')) {
        let mut factors = Vec::new();
        let (mut depth, mut start) = (0usize, 0usize);
        for (i, ch) in inner.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth = depth.checked_sub(1).ok_or("unbalanced brackets")?,
                ',' if depth == 0 => {
                    factors.push(parse_group_kind(&inner[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        factors.push(parse_group_kind(&inner[start..])?);
        if factors.len() < 2 {
            return Err("a product needs at least two factors".into());
        }
        let mut acc = factors.remove(0);
        for f in factors {
            if acc.order() * f.order() > MAX_ORDER {
                return Err(format!("product exceeds order {MAX_ORDER}"));
            }
            acc = FiniteGroup::direct_product(&acc, &f);
        }
        acc
    } else {
        return Err(format!("unknown group kind {kind:?}"));
    };
    if group.order() > MAX_ORDER {
        return Err(format!("group order {} exceeds {MAX_ORDER}", group.order()));
    }
    Ok(group)
}
