//! Modal formulas over numbered atoms.

mod axioms;
mod closure;
mod parse;
mod translate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use axioms::{axiom_instances, literal_conjunction, valuation_patterns, Scheme};
pub use closure::{closure, ClosureSet};
pub use parse::{parse, ParseError};
pub use translate::{standard_translation, translate, FirstOrder};

use crate::error::{Error, Result};

/// Abstract syntax of the modal language. Atom indices start at 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(u32),
    Bottom,
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

impl Formula {
    /// Panics on index 0; use `parse` for untrusted input.
    pub fn atom(index: u32) -> Formula {
        assert!(index >= 1, "atom indices start at 1");
        Formula::Atom(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }

    /// Left-nested conjunction; `Top` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Negation that strips an outer `Not` instead of stacking a second one.
    pub fn complement(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Node count.
    pub fn len(&self) -> usize {
        1 + self.children().iter().map(|c| c.len()).sum::<usize>()
    }

    /// Always false; a formula has at least one node.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Box(f) | Formula::Diamond(f) => 1 + f.modal_depth(),
            other => other.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Bottom | Formula::Top => vec![],
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
        }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<u32>) {
        if let Formula::Atom(i) = self {
            out.insert(*i);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// All subformulas including `self`, without duplicates, in post-order.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas(&self, seen: &mut BTreeSet<Formula>, out: &mut Vec<Formula>) {
        for c in self.children() {
            c.collect_subformulas(seen, out);
        }
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
    }

    /// Applies `map` to every atom index.
    pub fn rename_atoms(&self, map: &impl Fn(u32) -> u32) -> Formula {
        match self {
            Formula::Atom(i) => Formula::atom(map(*i)),
            Formula::Bottom => Formula::Bottom,
            Formula::Top => Formula::Top,
            Formula::Not(f) => Formula::not(f.rename_atoms(map)),
            Formula::And(a, b) => Formula::and(a.rename_atoms(map), b.rename_atoms(map)),
            Formula::Or(a, b) => Formula::or(a.rename_atoms(map), b.rename_atoms(map)),
            Formula::Implies(a, b) => Formula::implies(a.rename_atoms(map), b.rename_atoms(map)),
            Formula::Box(f) => Formula::boxed(f.rename_atoms(map)),
            Formula::Diamond(f) => Formula::diamond(f.rename_atoms(map)),
        }
    }
}

/// Canonical rendering: binary connectives are always parenthesized.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(i) => write!(out, "p{i}"),
            Formula::Bottom => out.write_str("false"),
            Formula::Top => out.write_str("true"),
            Formula::Not(f) => write!(out, "~{f}"),
            Formula::And(a, b) => write!(out, "({a} & {b})"),
            Formula::Or(a, b) => write!(out, "({a} | {b})"),
            Formula::Implies(a, b) => write!(out, "({a} -> {b})"),
            Formula::Box(f) => write!(out, "[]{f}"),
            Formula::Diamond(f) => write!(out, "<>{f}"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Sorted, duplicate-free, non-empty list of atom indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Vocabulary(Vec<u32>);

impl Vocabulary {
    pub fn new(atoms: impl IntoIterator<Item = u32>) -> Result<Vocabulary> {
        let set: BTreeSet<u32> = atoms.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        if set.contains(&0) {
            return Err(Error::ZeroAtom);
        }
        Ok(Vocabulary(set.into_iter().collect()))
    }

    /// `{p1, ..., pk}`.
    pub fn first(k: usize) -> Result<Vocabulary> {
        Vocabulary::new(1..=k as u32)
    }

    /// Atoms of `f`, or `{p1}` when `f` has none.
    pub fn of_formula(f: &Formula) -> Vocabulary {
        let atoms = f.atoms();
        if atoms.is_empty() {
            Vocabulary(vec![1])
        } else {
            Vocabulary(atoms.into_iter().collect())
        }
    }

    pub fn atoms(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, atom: u32) -> Option<usize> {
        self.0.binary_search(&atom).ok()
    }

    pub fn contains_all(&self, atoms: &BTreeSet<u32>) -> bool {
        atoms.iter().all(|a| self.position(*a).is_some())
    }

    /// This vocabulary extended with `atom`.
    pub fn with(&self, atom: u32) -> Result<Vocabulary> {
        Vocabulary::new(self.0.iter().copied().chain(std::iter::once(atom)))
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<u32>::deserialize(d)?;
        Vocabulary::new(atoms).map_err(serde::de::Error::custom)
    }
}
