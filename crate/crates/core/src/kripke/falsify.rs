//! Exact search for a valuation that refutes a formula somewhere on a frame.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::frame::{world_set, LayeredFrame};
use super::model::{check, Compiled, KripkeModel, Node, Valuation};
use crate::error::{Error, Result};
use crate::formula::{Formula, Vocabulary};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A valuation together with a world where the formula fails under it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Falsification {
    pub valuation: Valuation,
    pub world: usize,
}

/// Searches with the default budget of `DEFAULT_BUDGET` nodes.
pub fn find_falsifying_valuation(
    frame: &LayeredFrame,
    f: &Formula,
    vocab: &Vocabulary,
) -> Result<Option<Falsification>> {
    find_falsifying_valuation_with_budget(frame, f, vocab, DEFAULT_BUDGET)
}

/// Backtracking over (world, atom) assignments with three-valued pruning.
/// Candidate failure points are tried one at a time; for each, only the
/// point's cone is assigned, worlds by descending level, atoms ascending.
/// Returns `Ok(None)` when the formula holds under every valuation and
/// `Err(BudgetExceeded)` when the node budget runs out first.
pub fn find_falsifying_valuation_with_budget(
    frame: &LayeredFrame,
    f: &Formula,
    vocab: &Vocabulary,
    budget: u64,
) -> Result<Option<Falsification>> {
    let compiled = Compiled::new(f, vocab)?;
    let (local, remote) = atom_depths(f, vocab);
    let mut roots: Vec<usize> = frame.frame().worlds().collect();
    roots.sort_by_key(|&w| (std::cmp::Reverse(frame.level(w)), w));
    let mut seen_cones: HashSet<(u8, Vec<usize>)> = HashSet::new();
    let mut search = Search {
        frame,
        compiled: &compiled,
        k: vocab.len(),
        budget,
        nodes: 0,
    };
    for root in roots {
        let succ: Vec<usize> = frame.frame().successors(root).ones().collect();
        if !seen_cones.insert((frame.level(root), succ)) {
            continue;
        }
        if let Some(truth) = search.refute_at(root, &local, &remote)? {
            let n = frame.world_count();
            let mut valuation = Valuation::all_false(n, vocab.clone());
            for (i, t) in truth.iter().enumerate() {
                for w in t.ones() {
                    valuation.set(w, vocab.atoms()[i], true)?;
                }
            }
            let model = KripkeModel::new(frame.frame().clone(), valuation)?;
            assert!(
                !check(&model, root, f)?,
                "three-valued search produced a non-refutation"
            );
            return Ok(Some(Falsification {
                valuation: model.valuation,
                world: root,
            }));
        }
    }
    Ok(None)
}

/// Vocabulary positions occurring outside any modality, and under one.
fn atom_depths(f: &Formula, vocab: &Vocabulary) -> (Vec<bool>, Vec<bool>) {
    fn walk(f: &Formula, depth: usize, vocab: &Vocabulary, local: &mut [bool], remote: &mut [bool]) {
        match f {
            Formula::Atom(a) => {
                if let Some(i) = vocab.position(*a) {
                    if depth == 0 {
                        local[i] = true;
                    } else {
                        remote[i] = true;
                    }
                }
            }
            Formula::Box(g) | Formula::Diamond(g) => walk(g, depth + 1, vocab, local, remote),
            other => {
                for c in other.children() {
                    walk(c, depth, vocab, local, remote);
                }
            }
        }
    }
    let mut local = vec![false; vocab.len()];
    let mut remote = vec![false; vocab.len()];
    walk(f, 0, vocab, &mut local, &mut remote);
    (local, remote)
}

struct Search<'a> {
    frame: &'a LayeredFrame,
    compiled: &'a Compiled,
    k: usize,
    budget: u64,
    nodes: u64,
}

/// Per-root state: which atoms are known true and known false.
struct Partial {
    cone: FixedBitSet,
    known_true: Vec<FixedBitSet>,
    known_false: Vec<FixedBitSet>,
}

impl<'a> Search<'a> {
    fn refute_at(&mut self, root: usize, local: &[bool], remote: &[bool]) -> Result<Option<Vec<FixedBitSet>>> {
        let fr = self.frame.frame();
        let n = fr.world_count();
        let cone = fr.cone(root);
        let mut cone_worlds: Vec<usize> = cone.ones().collect();
        cone_worlds.sort_by_key(|&w| (std::cmp::Reverse(self.frame.level(w)), w));
        let mut vars = Vec::new();
        let mut known_false = vec![world_set(n); self.k];
        for &w in &cone_worlds {
            for i in 0..self.k {
                let relevant = if w == root { local[i] } else { remote[i] };
                if relevant {
                    vars.push((w, i));
                } else {
                    known_false[i].insert(w);
                }
            }
        }
        let mut state = Partial {
            cone,
            known_true: vec![world_set(n); self.k],
            known_false,
        };
        if self.dfs(root, &vars, 0, &mut state)? {
            Ok(Some(state.known_true))
        } else {
            Ok(None)
        }
    }

    fn dfs(&mut self, root: usize, vars: &[(usize, usize)], next: usize, state: &mut Partial) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let (t, fls) = self.evaluate_root(state);
        if fls.contains(root) {
            return Ok(true);
        }
        if t.contains(root) || next == vars.len() {
            return Ok(false);
        }
        let (w, i) = vars[next];
        state.known_false[i].insert(w);
        if self.dfs(root, vars, next + 1, state)? {
            return Ok(true);
        }
        state.known_false[i].set(w, false);
        state.known_true[i].insert(w);
        if self.dfs(root, vars, next + 1, state)? {
            return Ok(true);
        }
        state.known_true[i].set(w, false);
        Ok(false)
    }

    /// Sets of cone worlds where the formula is definitely true / false.
    fn evaluate_root(&self, state: &Partial) -> (FixedBitSet, FixedBitSet) {
        let fr = self.frame.frame();
        let cone = &state.cone;
        let empty = world_set(fr.world_count());
        let mut vals: Vec<(FixedBitSet, FixedBitSet)> = Vec::with_capacity(self.compiled.nodes.len());
        for node in &self.compiled.nodes {
            let v = match *node {
                Node::Atom(i) => {
                    let mut t = state.known_true[i].clone();
                    t.intersect_with(cone);
                    let mut f = state.known_false[i].clone();
                    f.intersect_with(cone);
                    (t, f)
                }
                Node::Bottom => (empty.clone(), cone.clone()),
                Node::Top => (cone.clone(), empty.clone()),
                Node::Not(a) => (vals[a].1.clone(), vals[a].0.clone()),
                Node::And(a, b) => {
                    let mut t = vals[a].0.clone();
                    t.intersect_with(&vals[b].0);
                    let mut f = vals[a].1.clone();
                    f.union_with(&vals[b].1);
                    (t, f)
                }
                Node::Or(a, b) => {
                    let mut t = vals[a].0.clone();
                    t.union_with(&vals[b].0);
                    let mut f = vals[a].1.clone();
                    f.intersect_with(&vals[b].1);
                    (t, f)
                }
                Node::Implies(a, b) => {
                    let mut t = vals[a].1.clone();
                    t.union_with(&vals[b].0);
                    let mut f = vals[a].0.clone();
                    f.intersect_with(&vals[b].1);
                    (t, f)
                }
                Node::Box(a) => {
                    let (mut t, mut f) = (empty.clone(), empty.clone());
                    for w in cone.ones() {
                        let s = fr.successors(w);
                        if s.is_subset(&vals[a].0) {
                            t.insert(w);
                        }
                        if !s.is_disjoint(&vals[a].1) {
                            f.insert(w);
                        }
                    }
                    (t, f)
                }
                Node::Diamond(a) => {
                    let (mut t, mut f) = (empty.clone(), empty.clone());
                    for w in cone.ones() {
                        let s = fr.successors(w);
                        if !s.is_disjoint(&vals[a].0) {
                            t.insert(w);
                        }
                        if s.is_subset(&vals[a].1) {
                            f.insert(w);
                        }
                    }
                    (t, f)
                }
            };
            vals.push(v);
        }
        vals.swap_remove(self.compiled.root())
    }
}
