//! Valuations, models and the model checker.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::frame::{world_set, KripkeFrame};
use crate::error::{Error, Result};
use crate::formula::{Formula, Vocabulary};

/// Truth of each vocabulary atom at each world; false unless set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    n: usize,
    vocab: Vocabulary,
    truth: Vec<FixedBitSet>,
}

impl Valuation {
    pub fn all_false(n: usize, vocab: Vocabulary) -> Valuation {
        let truth = vec![world_set(n); vocab.len()];
        Valuation { n, vocab, truth }
    }

    pub fn world_count(&self) -> usize {
        self.n
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    fn slot(&self, world: usize, atom: u32) -> Result<usize> {
        if world == 0 || world > self.n {
            return Err(Error::UnknownWorld(world));
        }
        self.vocab.position(atom).ok_or(Error::UnknownAtom(atom))
    }

    pub fn get(&self, world: usize, atom: u32) -> Result<bool> {
        let i = self.slot(world, atom)?;
        Ok(self.truth[i].contains(world))
    }

    pub fn set(&mut self, world: usize, atom: u32, value: bool) -> Result<()> {
        let i = self.slot(world, atom)?;
        self.truth[i].set(world, value);
        Ok(())
    }

    /// Values of the vocabulary atoms at `world`, in vocabulary order.
    pub fn pattern(&self, world: usize) -> Vec<bool> {
        self.truth.iter().map(|t| t.contains(world)).collect()
    }

    pub fn set_pattern(&mut self, world: usize, values: &[bool]) {
        for (t, &v) in self.truth.iter_mut().zip(values) {
            t.set(world, v);
        }
    }

    /// Worlds where the atom at vocabulary position `i` holds.
    pub fn atom_set(&self, i: usize) -> &FixedBitSet {
        &self.truth[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub frame: KripkeFrame,
    pub valuation: Valuation,
}

impl KripkeModel {
    pub fn new(frame: KripkeFrame, valuation: Valuation) -> Result<KripkeModel> {
        if frame.world_count() != valuation.world_count() {
            return Err(Error::InvalidConfig(format!(
                "frame has {} worlds but valuation covers {}",
                frame.world_count(),
                valuation.world_count()
            )));
        }
        Ok(KripkeModel { frame, valuation })
    }

    pub fn vocab(&self) -> &Vocabulary {
        self.valuation.vocab()
    }

    pub fn world_count(&self) -> usize {
        self.frame.world_count()
    }

    /// Submodel generated by `root`, renumbered with `root` as world 1.
    pub fn generated(&self, root: usize) -> (KripkeModel, Vec<usize>) {
        let (frame, old) = self.frame.generated(root);
        let mut val = Valuation::all_false(frame.world_count(), self.vocab().clone());
        for (new, &w) in old.iter().enumerate().skip(1) {
            val.set_pattern(new, &self.valuation.pattern(w));
        }
        (KripkeModel { frame, valuation: val }, old)
    }
}

/// A model with a distinguished world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: KripkeModel,
    pub point: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Atom(usize),
    Bottom,
    Top,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Box(usize),
    Diamond(usize),
}

/// A formula flattened into its distinct subformulas, children first.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub nodes: Vec<Node>,
    pub formulas: Vec<Formula>,
}

impl Compiled {
    pub fn new(f: &Formula, vocab: &Vocabulary) -> Result<Compiled> {
        let mut c = Compiled {
            nodes: Vec::new(),
            formulas: Vec::new(),
        };
        let mut index: HashMap<Node, usize> = HashMap::new();
        c.add(f, vocab, &mut index)?;
        Ok(c)
    }

    /// Post-order insertion; structurally equal subformulas share a node.
    fn add(&mut self, f: &Formula, vocab: &Vocabulary, index: &mut HashMap<Node, usize>) -> Result<usize> {
        let node = match f {
            Formula::Atom(a) => Node::Atom(vocab.position(*a).ok_or(Error::UnknownAtom(*a))?),
            Formula::Bottom => Node::Bottom,
            Formula::Top => Node::Top,
            Formula::Not(g) => Node::Not(self.add(g, vocab, index)?),
            Formula::And(a, b) => Node::And(self.add(a, vocab, index)?, self.add(b, vocab, index)?),
            Formula::Or(a, b) => Node::Or(self.add(a, vocab, index)?, self.add(b, vocab, index)?),
            Formula::Implies(a, b) => Node::Implies(self.add(a, vocab, index)?, self.add(b, vocab, index)?),
            Formula::Box(g) => Node::Box(self.add(g, vocab, index)?),
            Formula::Diamond(g) => Node::Diamond(self.add(g, vocab, index)?),
        };
        if let Some(&id) = index.get(&node) {
            return Ok(id);
        }
        let id = self.nodes.len();
        index.insert(node, id);
        self.nodes.push(node);
        self.formulas.push(f.clone());
        Ok(id)
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Truth sets of every node.
    pub fn evaluate(&self, model: &KripkeModel) -> Vec<FixedBitSet> {
        let frame = &model.frame;
        let all = frame.all_worlds();
        let mut sets: Vec<FixedBitSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match *node {
                Node::Atom(i) => model.valuation.atom_set(i).clone(),
                Node::Bottom => world_set(frame.world_count()),
                Node::Top => all.clone(),
                Node::Not(a) => {
                    let mut s = all.clone();
                    s.difference_with(&sets[a]);
                    s
                }
                Node::And(a, b) => {
                    let mut s = sets[a].clone();
                    s.intersect_with(&sets[b]);
                    s
                }
                Node::Or(a, b) => {
                    let mut s = sets[a].clone();
                    s.union_with(&sets[b]);
                    s
                }
                Node::Implies(a, b) => {
                    let mut s = all.clone();
                    s.difference_with(&sets[a]);
                    s.union_with(&sets[b]);
                    s
                }
                Node::Box(a) => {
                    let mut s = world_set(frame.world_count());
                    for w in frame.worlds() {
                        if frame.successors(w).is_subset(&sets[a]) {
                            s.insert(w);
                        }
                    }
                    s
                }
                Node::Diamond(a) => {
                    let mut s = world_set(frame.world_count());
                    for w in frame.worlds() {
                        if !frame.successors(w).is_disjoint(&sets[a]) {
                            s.insert(w);
                        }
                    }
                    s
                }
            };
            sets.push(s);
        }
        sets
    }
}

/// Worlds of `model` where `f` holds.
pub fn truth_set(model: &KripkeModel, f: &Formula) -> Result<FixedBitSet> {
    let c = Compiled::new(f, model.vocab())?;
    let mut sets = c.evaluate(model);
    Ok(sets.swap_remove(c.root()))
}

pub fn check(model: &KripkeModel, world: usize, f: &Formula) -> Result<bool> {
    if !model.frame.contains_world(world) {
        return Err(Error::UnknownWorld(world));
    }
    Ok(truth_set(model, f)?.contains(world))
}

/// The lowest-numbered world where `f` fails, if any.
pub fn first_failing_world(model: &KripkeModel, f: &Formula) -> Result<Option<usize>> {
    let t = truth_set(model, f)?;
    Ok(model.frame.worlds().find(|&w| !t.contains(w)))
}

pub fn model_valid(model: &KripkeModel, f: &Formula) -> Result<bool> {
    Ok(first_failing_world(model, f)?.is_none())
}
