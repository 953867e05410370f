//! Closure set of a formula: the finite set of formulas a counter-model
//! construction has to track.

use std::collections::BTreeSet;

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    pub source: Formula,
    pub members: BTreeSet<Formula>,
}

impl ClosureSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    /// Formulas of the form `<>psi` in the set.
    pub fn diamonds(&self) -> impl Iterator<Item = &Formula> {
        self.members.iter().filter(|f| matches!(f, Formula::Diamond(_)))
    }
}

fn is_diamond_like(f: &Formula) -> bool {
    match f {
        Formula::Diamond(_) => true,
        Formula::Not(inner) => matches!(**inner, Formula::Box(_)),
        _ => false,
    }
}

fn is_box_like(f: &Formula) -> bool {
    match f {
        Formula::Box(_) => true,
        Formula::Not(inner) => matches!(**inner, Formula::Diamond(_)),
        _ => false,
    }
}

/// Everything one formula contributes to the closure in a single step.
fn successors(f: &Formula) -> Vec<Formula> {
    let mut out: Vec<Formula> = f.children().into_iter().cloned().collect();
    if !matches!(f, Formula::Not(_)) {
        out.push(Formula::not(f.clone()));
    }
    match f {
        Formula::Diamond(psi) if !is_diamond_like(psi) => {
            let neg = psi.complement();
            out.push(Formula::diamond(f.clone()));
            out.push(Formula::boxed(neg.clone()));
            out.push(Formula::boxed(Formula::boxed(neg)));
        }
        Formula::Box(psi) if !is_box_like(psi) => {
            let neg = psi.complement();
            out.push(Formula::boxed(f.clone()));
            out.push(Formula::diamond(neg.clone()));
            out.push(Formula::diamond(Formula::diamond(neg)));
        }
        _ => {}
    }
    out
}

/// Least set containing `f` and `[][][]false`, closed under subformulas,
/// under negation of non-negations (constants included), and under the two
/// modal clauses. The test "of the form `<>xi` or `~[]xi`" looks at the
/// syntax as written; double negations are not normalized. The negations
/// the modal clauses add are formal complements (`~~psi` becomes `psi`),
/// which keeps the set finite.
pub fn closure(f: &Formula) -> ClosureSet {
    let t3 = Formula::boxed(Formula::boxed(Formula::boxed(Formula::Bottom)));
    let mut members = BTreeSet::new();
    let mut work = vec![f.clone(), t3];
    while let Some(next) = work.pop() {
        if members.insert(next.clone()) {
            work.extend(successors(&next).into_iter().filter(|s| !members.contains(s)));
        }
    }
    ClosureSet {
        source: f.clone(),
        members,
    }
}
