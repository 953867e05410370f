//! Bisimulation witnesses and their verification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::model::KripkeModel;
use crate::error::{Error, Result};

/// Pairs (source world, target world).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisimulationWitness {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl BisimulationWitness {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> BisimulationWitness {
        BisimulationWitness {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn targets(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, t)| t).collect()
    }
}

/// First failed condition found by `verify_bisimulation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    /// Paired worlds disagree on an atom.
    Valuation { source: usize, target: usize, atom: u32 },
    /// `source` sees `missing`, but no successor of `target` is paired with it.
    Forth {
        source: usize,
        target: usize,
        missing: usize,
    },
    /// `target` sees `missing`, but no successor of `source` is paired with it.
    Back {
        source: usize,
        target: usize,
        missing: usize,
    },
}

/// Checks valuation agreement on the source vocabulary for all pairs, then
/// forth for all pairs, then back; returns the first violation or `None`.
pub fn verify_bisimulation(
    source: &KripkeModel,
    target: &KripkeModel,
    z: &BisimulationWitness,
) -> Result<Option<Violation>> {
    for &(s, t) in &z.pairs {
        if !source.frame.contains_world(s) {
            return Err(Error::UnknownWorld(s));
        }
        if !target.frame.contains_world(t) {
            return Err(Error::UnknownWorld(t));
        }
    }
    for &(s, t) in &z.pairs {
        for &a in source.vocab().atoms() {
            if source.valuation.get(s, a)? != target.valuation.get(t, a)? {
                return Ok(Some(Violation::Valuation {
                    source: s,
                    target: t,
                    atom: a,
                }));
            }
        }
    }
    for &(s, t) in &z.pairs {
        for s2 in source.frame.successors(s).ones() {
            let matched = target.frame.successors(t).ones().any(|t2| z.pairs.contains(&(s2, t2)));
            if !matched {
                return Ok(Some(Violation::Forth {
                    source: s,
                    target: t,
                    missing: s2,
                }));
            }
        }
    }
    for &(s, t) in &z.pairs {
        for t2 in target.frame.successors(t).ones() {
            let matched = source.frame.successors(s).ones().any(|s2| z.pairs.contains(&(s2, t2)));
            if !matched {
                return Ok(Some(Violation::Back {
                    source: s,
                    target: t,
                    missing: t2,
                }));
            }
        }
    }
    Ok(None)
}
