//! Instances of the axiom schemes used by the almost-sure axiomatizations.

use serde::{Deserialize, Serialize};

use super::{Formula, Vocabulary};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// `[][][]false`: depth at most three.
    T3,
    /// `<>true -> <>A` for every consistent literal conjunction `A`.
    C1,
    /// `<><>true -> <>(B & <>C)` for literal conjunctions `B`, `C`.
    C2,
    /// Confluence-style scheme with payload `phi_0 .. phi_k`.
    Diamond,
    /// Umbrella scheme with payload `phi_0 .. phi_k`.
    Umbrella,
}

/// All valuations of `k` atoms. Pattern `i` makes atom `j` (0-based,
/// ascending) true iff bit `k-1-j` of `i` is clear, so the all-true
/// valuation comes first and the all-false one last.
pub fn valuation_patterns(k: usize) -> Vec<Vec<bool>> {
    (0..1usize << k)
        .map(|i| (0..k).map(|j| (i >> (k - 1 - j)) & 1 == 0).collect())
        .collect()
}

/// The conjunction of literals describing one valuation of `vocab`.
pub fn literal_conjunction(vocab: &Vocabulary, values: &[bool]) -> Formula {
    Formula::conjunction(vocab.atoms().iter().zip(values).map(|(&a, &v)| {
        if v {
            Formula::atom(a)
        } else {
            Formula::not(Formula::atom(a))
        }
    }))
}

fn literal_conjunctions(vocab: &Vocabulary) -> Vec<Formula> {
    valuation_patterns(vocab.len())
        .iter()
        .map(|v| literal_conjunction(vocab, v))
        .collect()
}

/// Instances of `scheme`. C1 and C2 enumerate the literal conjunctions over
/// `vocab` and ignore `k`; DIAMOND and UMBRELLA need a payload of exactly
/// `k + 1` formulas; T3 has one instance.
pub fn axiom_instances(
    scheme: Scheme,
    vocab: &Vocabulary,
    k: usize,
    payload: Option<&[Formula]>,
) -> Result<Vec<Formula>> {
    let top = Formula::Top;
    let dia_top = Formula::diamond(top.clone());
    let dia_dia_top = Formula::diamond(dia_top.clone());
    match scheme {
        Scheme::T3 => Ok(vec![Formula::boxed(Formula::boxed(Formula::boxed(Formula::Bottom)))]),
        Scheme::C1 => Ok(literal_conjunctions(vocab)
            .into_iter()
            .map(|a| Formula::implies(dia_top.clone(), Formula::diamond(a)))
            .collect()),
        Scheme::C2 => {
            let lits = literal_conjunctions(vocab);
            let mut out = Vec::with_capacity(lits.len() * lits.len());
            for b in &lits {
                for c in &lits {
                    let body = Formula::and(b.clone(), Formula::diamond(c.clone()));
                    out.push(Formula::implies(dia_dia_top.clone(), Formula::diamond(body)));
                }
            }
            Ok(out)
        }
        Scheme::Diamond | Scheme::Umbrella => {
            let payload = match payload {
                Some(p) if !p.is_empty() => p,
                _ => return Err(Error::EmptyPayload),
            };
            if payload.len() != k + 1 {
                return Err(Error::PayloadLength {
                    expected: k + 1,
                    found: payload.len(),
                });
            }
            let f = if scheme == Scheme::Diamond {
                let premises = payload
                    .iter()
                    .map(|phi| Formula::diamond(Formula::and(dia_top.clone(), Formula::boxed(phi.clone()))));
                let lhs = Formula::conjunction(std::iter::once(dia_dia_top).chain(premises));
                let all = Formula::conjunction(payload.iter().cloned());
                let rhs = Formula::boxed(Formula::implies(dia_top, Formula::diamond(all)));
                Formula::implies(lhs, rhs)
            } else {
                let premises = payload
                    .iter()
                    .map(|phi| Formula::diamond(Formula::and(Formula::boxed(Formula::Bottom), phi.clone())));
                let lhs = Formula::conjunction(std::iter::once(dia_dia_top).chain(premises));
                let each = Formula::conjunction(payload.iter().cloned().map(Formula::diamond));
                Formula::implies(lhs, Formula::diamond(each))
            };
            Ok(vec![f])
        }
    }
}
