//! GL satisfiability and validity by tableau search for finite tree models.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::formula::{Formula, Vocabulary};
use crate::kripke::{check, KripkeFrame, KripkeModel, PointedModel, Valuation};

/// A saturated tableau node: the atoms it makes true and one child per
/// diamond obligation.
#[derive(Debug)]
struct Node {
    atoms: BTreeSet<u32>,
    children: Vec<Rc<Node>>,
}

type Memo = HashMap<BTreeSet<Formula>, Option<Rc<Node>>>;

#[derive(Default)]
struct Tableau {
    memo: Memo,
}

impl Tableau {
    fn sat(&mut self, set: BTreeSet<Formula>) -> Option<Rc<Node>> {
        if let Some(hit) = self.memo.get(&set) {
            return hit.clone();
        }
        let pending: Vec<Formula> = set.iter().cloned().collect();
        let result = self.expand(pending, BTreeSet::new());
        self.memo.insert(set, result.clone());
        result
    }

    /// Propositional saturation with branching; on each open saturated
    /// branch, tries to satisfy every diamond obligation in a child.
    fn expand(&mut self, mut pending: Vec<Formula>, mut branch: BTreeSet<Formula>) -> Option<Rc<Node>> {
        while let Some(g) = pending.pop() {
            if branch.contains(&g) {
                continue;
            }
            let clash = match &g {
                Formula::Bottom => true,
                Formula::Not(h) => **h == Formula::Top || branch.contains(h),
                _ => branch.contains(&Formula::not(g.clone())),
            };
            if clash {
                return None;
            }
            branch.insert(g.clone());
            let split: Option<(Formula, Formula)> = match &g {
                Formula::And(a, b) => {
                    pending.push((**a).clone());
                    pending.push((**b).clone());
                    None
                }
                Formula::Or(a, b) => Some(((**a).clone(), (**b).clone())),
                Formula::Implies(a, b) => Some((Formula::not((**a).clone()), (**b).clone())),
                Formula::Not(h) => match &**h {
                    Formula::Not(x) => {
                        pending.push((**x).clone());
                        None
                    }
                    Formula::And(a, b) => Some((Formula::not((**a).clone()), Formula::not((**b).clone()))),
                    Formula::Or(a, b) => {
                        pending.push(Formula::not((**a).clone()));
                        pending.push(Formula::not((**b).clone()));
                        None
                    }
                    Formula::Implies(a, b) => {
                        pending.push((**a).clone());
                        pending.push(Formula::not((**b).clone()));
                        None
                    }
                    _ => None,
                },
                _ => None,
            };
            if let Some((left, right)) = split {
                for choice in [left, right] {
                    let mut p = pending.clone();
                    p.push(choice);
                    if let Some(node) = self.expand(p, branch.clone()) {
                        return Some(node);
                    }
                }
                return None;
            }
        }
        self.modal_step(&branch)
    }

    fn modal_step(&mut self, branch: &BTreeSet<Formula>) -> Option<Rc<Node>> {
        // Formulas that must hold at every successor, and the boxes that
        // carry them on.
        let mut carried: BTreeSet<Formula> = BTreeSet::new();
        let mut obligations: Vec<Formula> = Vec::new();
        let mut atoms = BTreeSet::new();
        for g in branch {
            match g {
                Formula::Atom(a) => {
                    atoms.insert(*a);
                }
                Formula::Box(x) => {
                    carried.insert((**x).clone());
                    carried.insert(g.clone());
                }
                Formula::Diamond(x) => obligations.push((**x).clone()),
                Formula::Not(h) => match &**h {
                    Formula::Diamond(x) => {
                        carried.insert(Formula::not((**x).clone()));
                        carried.insert(g.clone());
                    }
                    Formula::Box(x) => obligations.push(Formula::not((**x).clone())),
                    _ => {}
                },
                _ => {}
            }
        }
        let mut children = Vec::with_capacity(obligations.len());
        for psi in obligations {
            let mut child = carried.clone();
            child.insert(Formula::boxed(psi.complement()));
            child.insert(psi);
            children.push(self.sat(child)?);
        }
        Some(Rc::new(Node { atoms, children }))
    }
}

/// Unfolds the tableau into a tree with the root as world 1, then closes
/// the relation transitively.
fn tree_model(root: &Node, vocab: &Vocabulary) -> KripkeModel {
    let mut nodes: Vec<&Node> = vec![root];
    let mut edges = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let node = nodes[next];
        next += 1;
        for c in &node.children {
            nodes.push(c);
            edges.push((next, nodes.len()));
        }
    }
    let n = nodes.len();
    let frame = KripkeFrame::closure_of(n, &edges).expect("trees are acyclic");
    let mut val = Valuation::all_false(n, vocab.clone());
    for (i, node) in nodes.iter().enumerate() {
        for &a in &node.atoms {
            val.set(i + 1, a, true).expect("tableau atoms come from the formula");
        }
    }
    KripkeModel { frame, valuation: val }
}

/// A finite transitive tree model satisfying `f` at world 1, or `None`
/// when `f` is GL-unsatisfiable.
pub fn gl_satisfiable(f: &Formula) -> Option<PointedModel> {
    let vocab = Vocabulary::of_formula(f);
    let root = Tableau::default().sat(BTreeSet::from([f.clone()]))?;
    let model = tree_model(&root, &vocab);
    assert!(
        check(&model, 1, f).expect("vocabulary covers f"),
        "tableau model does not satisfy the formula"
    );
    Some(PointedModel { model, point: 1 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlValidity {
    pub valid: bool,
    #[serde(skip)]
    pub counter_model: Option<PointedModel>,
}

/// Valid iff the negation is unsatisfiable; otherwise the counter-model
/// refutes `f` at its point.
pub fn gl_valid(f: &Formula) -> GlValidity {
    let counter_model = gl_satisfiable(&Formula::not(f.clone()));
    GlValidity {
        valid: counter_model.is_none(),
        counter_model,
    }
}

/// Distinct formulas `ψ` occurring as `◇ψ` or under `¬□`, which bounds the
/// height of tableau trees.
pub fn obligation_count(f: &Formula) -> usize {
    let mut set = BTreeSet::new();
    for g in f.subformulas() {
        match &g {
            Formula::Diamond(x) => {
                set.insert((**x).clone());
            }
            Formula::Box(x) => {
                set.insert(Formula::not((**x).clone()));
            }
            _ => {}
        }
    }
    set.len()
}
