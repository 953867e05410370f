//! Almost-sure frame validity: search for a shaped pointed counter-model.
//!
//! Up to bisimulation a shaped model is described by types. Tops are
//! determined by their valuation, so a top set `T` is a set of valuation
//! patterns. A middle is determined by its valuation and the set `S ⊆ T` of
//! tops it sees. Truth at the root depends only on the root valuation and,
//! for each modal argument `ψ` at modal depth zero, whether some successor
//! satisfies `ψ` and whether some successor refutes it. The search
//! enumerates these two-bit profiles instead of concrete models.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::Verdict;
use crate::error::{Error, Result};
use crate::formula::{valuation_patterns, Formula, Vocabulary};
use crate::kripke::{
    check, find_embedding, Compiled, EmbedConfig, KripkeFrame, KripkeModel, PointedModel, Valuation, DEFAULT_BUDGET,
    DEFAULT_RETRIES,
};
use crate::sampling::{sample_kr_frame, SamplerConfig};
use crate::shape::{shape_check, ShapeClass};

/// Sampled frames a witness is embedded into before it is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedCheck {
    pub n: usize,
    pub seeds: Vec<u64>,
    pub retries: usize,
}

impl Default for EmbedCheck {
    fn default() -> Self {
        EmbedCheck {
            n: 64,
            seeds: vec![1, 2, 3, 4],
            retries: DEFAULT_RETRIES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameConfig {
    /// Work allowed per search partition, and for the whole type space.
    pub budget: u64,
    /// `None` skips the embedding check.
    pub embed_check: Option<EmbedCheck>,
}

impl Default for FrameConfig {
    fn default() -> Self {
        FrameConfig {
            budget: DEFAULT_BUDGET,
            embed_check: Some(EmbedCheck::default()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EmbedReport {
    pub successes: usize,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchCertificate {
    pub vocab: Vocabulary,
    /// `max(4, |f|^3)`.
    pub stated_bound: usize,
    /// Largest counter-model the reduced search can need: `2 + 2J + 2^k`.
    pub witness_bound: usize,
    /// Distinct modal arguments at modal depth zero.
    pub root_arguments: usize,
    pub partitions: usize,
    /// True when every partition was searched without finding a witness.
    pub exhausted: bool,
    pub embed: Option<EmbedReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameDecision {
    pub verdict: Verdict,
    /// Falsifies the formula at its point.
    pub witness: Option<PointedModel>,
    pub shape: Option<ShapeClass>,
    pub certificate: SearchCertificate,
}

/// Decides with the default budget and embedding check.
pub fn decide_frame_limit(f: &Formula) -> Result<FrameDecision> {
    decide_frame_limit_with(f, &FrameConfig::default())
}

/// `limit_zero` iff some shaped pointed model over the atoms of `f` (or
/// `{p1}`) refutes `f` at its point. A witness that fails to embed into
/// any of the configured sampled frames gives `Error::NotEmbeddable`.
pub fn decide_frame_limit_with(f: &Formula, cfg: &FrameConfig) -> Result<FrameDecision> {
    let vocab = Vocabulary::of_formula(f);
    let search = Search::new(f, &vocab)?;
    search.precheck(cfg.budget)?;
    let witness = search.run(cfg.budget)?;
    let len = f.len();
    let mut certificate = SearchCertificate {
        vocab: vocab.clone(),
        stated_bound: 4.max(len.saturating_mul(len).saturating_mul(len)),
        witness_bound: 2 + 2 * search.args.len() + search.patterns.len(),
        root_arguments: search.args.len(),
        partitions: search.partitions().len(),
        exhausted: witness.is_none(),
        embed: None,
    };
    let Some(witness) = witness else {
        return Ok(FrameDecision {
            verdict: Verdict::LimitOne,
            witness: None,
            shape: None,
            certificate,
        });
    };
    if let Some(ec) = &cfg.embed_check {
        let report = embed_report(&witness, ec)?;
        certificate.embed = Some(report);
        if report.successes == 0 {
            return Err(Error::NotEmbeddable {
                successes: 0,
                attempts: report.attempts,
            });
        }
    }
    let shape = shape_check(&witness);
    Ok(FrameDecision {
        verdict: Verdict::LimitZero,
        witness: Some(witness),
        shape,
        certificate,
    })
}

/// The first counter-model in search order, without any embedding check.
pub fn search_counter_model(f: &Formula, vocab: &Vocabulary, budget: u64) -> Result<Option<PointedModel>> {
    let search = Search::new(f, vocab)?;
    search.precheck(budget)?;
    search.run(budget)
}

fn embed_report(witness: &PointedModel, ec: &EmbedCheck) -> Result<EmbedReport> {
    let mut successes = 0;
    for &seed in &ec.seeds {
        let frame = sample_kr_frame(&SamplerConfig::new(ec.n, seed))?;
        if find_embedding(
            witness,
            &frame,
            EmbedConfig {
                retries: ec.retries,
                seed,
            },
        )?
        .is_some()
        {
            successes += 1;
        }
    }
    Ok(EmbedReport {
        successes,
        attempts: ec.seeds.len(),
    })
}

/// Two bits per root argument: bit `2j` "some successor satisfies ψ_j",
/// bit `2j+1` "some successor refutes ψ_j".
type Profile = u128;

const MAX_ARGUMENTS: usize = 64;

#[derive(Clone, Copy, Debug)]
enum Partition {
    U,
    M(u64),
    B(u64),
}

struct Search<'a> {
    f: &'a Formula,
    vocab: Vocabulary,
    compiled: Compiled,
    patterns: Vec<Vec<bool>>,
    args: Vec<Formula>,
    /// Node index in `compiled` of each argument.
    arg_nodes: Vec<usize>,
}

/// Modal arguments occurring at modal depth zero, first occurrence order.
fn root_arguments(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Box(g) | Formula::Diamond(g) => {
            if !out.contains(g) {
                out.push((**g).clone());
            }
        }
        other => {
            for c in other.children() {
                root_arguments(c, out);
            }
        }
    }
}

/// A concrete shaped model under construction.
struct Shaped {
    root: Vec<bool>,
    middles: Vec<(Vec<bool>, Vec<usize>)>,
    tops: Vec<Vec<bool>>,
}

impl Shaped {
    fn build(&self, vocab: &Vocabulary) -> PointedModel {
        let m = self.middles.len();
        let n = 1 + m + self.tops.len();
        let top_world = |i: usize| 2 + m + i;
        let mut edges = Vec::new();
        for w in 2..=n {
            edges.push((1, w));
        }
        for (i, (_, sees)) in self.middles.iter().enumerate() {
            for &t in sees {
                edges.push((2 + i, top_world(t)));
            }
        }
        let frame = KripkeFrame::new(n, &edges).expect("shaped models are strict orders");
        let mut val = Valuation::all_false(n, vocab.clone());
        val.set_pattern(1, &self.root);
        for (i, (v, _)) in self.middles.iter().enumerate() {
            val.set_pattern(2 + i, v);
        }
        for (i, v) in self.tops.iter().enumerate() {
            val.set_pattern(top_world(i), v);
        }
        PointedModel {
            model: KripkeModel { frame, valuation: val },
            point: 1,
        }
    }
}

impl<'a> Search<'a> {
    fn new(f: &'a Formula, vocab: &Vocabulary) -> Result<Search<'a>> {
        let compiled = Compiled::new(f, vocab)?;
        let mut args = Vec::new();
        root_arguments(f, &mut args);
        if args.len() > MAX_ARGUMENTS {
            return Err(Error::BudgetExceeded(args.len() as u64));
        }
        let arg_nodes = args
            .iter()
            .map(|a| {
                compiled
                    .formulas
                    .iter()
                    .position(|g| g == a)
                    .expect("argument is a subformula")
            })
            .collect();
        // All-false first, so witnesses make as few atoms true as possible.
        let mut patterns = valuation_patterns(vocab.len());
        patterns.reverse();
        Ok(Search {
            f,
            vocab: vocab.clone(),
            compiled,
            patterns,
            args,
            arg_nodes,
        })
    }

    /// Rejects type spaces too large to enumerate: the number of middle
    /// classes summed over all top sets is `P * (3^P - 2^P)`.
    fn precheck(&self, budget: u64) -> Result<()> {
        let p = self.patterns.len() as u32;
        let classes = 3u128
            .checked_pow(p)
            .map(|t| (t - (1u128 << p)) * p as u128)
            .unwrap_or(u128::MAX);
        if p >= 64 || classes > budget as u128 {
            return Err(Error::BudgetExceeded(budget));
        }
        Ok(())
    }

    fn partitions(&self) -> Vec<Partition> {
        let full = (1u64 << self.patterns.len()) - 1;
        let mut parts = vec![Partition::U];
        parts.extend((1..=full).map(Partition::M));
        parts.extend((1..=full).map(Partition::B));
        parts
    }

    fn run(&self, budget: u64) -> Result<Option<PointedModel>> {
        let found = self
            .partitions()
            .into_par_iter()
            .map(|p| self.search_partition(p, budget))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        let Some(result) = found else { return Ok(None) };
        let Some(shaped) = result? else { return Ok(None) };
        let witness = shaped.build(&self.vocab);
        assert!(shape_check(&witness).is_some(), "search produced an unshaped model");
        assert!(!check(&witness.model, 1, self.f)?, "search produced a non-refutation");
        Ok(Some(witness))
    }

    /// Truth of `f` at a root with valuation `root` whose successors have
    /// combined profile `succ`.
    fn root_truth(&self, g: &Formula, root: &[bool], succ: Profile) -> bool {
        let arg = |h: &Formula| self.args.iter().position(|a| a == h).expect("root argument");
        match g {
            Formula::Atom(a) => root[self.vocab.position(*a).expect("atom in vocabulary")],
            Formula::Bottom => false,
            Formula::Top => true,
            Formula::Not(h) => !self.root_truth(h, root, succ),
            Formula::And(a, b) => self.root_truth(a, root, succ) && self.root_truth(b, root, succ),
            Formula::Or(a, b) => self.root_truth(a, root, succ) || self.root_truth(b, root, succ),
            Formula::Implies(a, b) => !self.root_truth(a, root, succ) || self.root_truth(b, root, succ),
            Formula::Box(h) => succ >> (2 * arg(h) + 1) & 1 == 0,
            Formula::Diamond(h) => succ >> (2 * arg(h)) & 1 == 1,
        }
    }

    fn first_refuted_root(&self, succ: Profile) -> Option<usize> {
        (0..self.patterns.len()).find(|&r| !self.root_truth(self.f, &self.patterns[r], succ))
    }

    fn search_partition(&self, part: Partition, budget: u64) -> Result<Option<Shaped>> {
        match part {
            Partition::U => Ok(self.first_refuted_root(0).map(|r| Shaped {
                root: self.patterns[r].clone(),
                middles: Vec::new(),
                tops: Vec::new(),
            })),
            Partition::M(t) => {
                let layer = self.layer(t);
                Ok(self.first_refuted_root(layer.tops_profile).map(|r| Shaped {
                    root: self.patterns[r].clone(),
                    middles: Vec::new(),
                    tops: layer.top_patterns(self),
                }))
            }
            Partition::B(t) => self.search_b(t, budget),
        }
    }

    /// Tops of `t` and every middle class over them, with their profiles.
    fn layer(&self, t: u64) -> Layer {
        let tops: Vec<usize> = (0..self.patterns.len()).filter(|&i| t >> i & 1 == 1).collect();
        let nt = tops.len();
        let mut classes = Vec::new();
        for sees in 1..1u64 << nt {
            for v in 0..self.patterns.len() {
                classes.push((v, sees));
            }
        }
        let n = nt + classes.len();
        let mut edges = Vec::new();
        for (c, &(_, sees)) in classes.iter().enumerate() {
            for i in 0..nt {
                if sees >> i & 1 == 1 {
                    edges.push((nt + 1 + c, 1 + i));
                }
            }
        }
        let frame = KripkeFrame::new(n, &edges).expect("two-level frames are strict orders");
        let mut val = Valuation::all_false(n, self.vocab.clone());
        for (i, &p) in tops.iter().enumerate() {
            val.set_pattern(1 + i, &self.patterns[p]);
        }
        for (c, &(v, _)) in classes.iter().enumerate() {
            val.set_pattern(nt + 1 + c, &self.patterns[v]);
        }
        let model = KripkeModel { frame, valuation: val };
        let sets = self.compiled.evaluate(&model);
        let profile = |w: usize| -> Profile {
            let mut p = 0;
            for (j, &node) in self.arg_nodes.iter().enumerate() {
                p |= if sets[node].contains(w) {
                    1 << (2 * j)
                } else {
                    1 << (2 * j + 1)
                };
            }
            p
        };
        let tops_profile = (1..=nt).fold(0, |acc, w| acc | profile(w));
        let class_profiles = (0..classes.len()).map(|c| profile(nt + 1 + c)).collect();
        Layer {
            tops,
            classes,
            class_profiles,
            tops_profile,
        }
    }

    fn search_b(&self, t: u64, budget: u64) -> Result<Option<Shaped>> {
        let layer = self.layer(t);
        let nt = layer.tops.len();
        let all = (1u64 << nt) - 1;
        let mut work = layer.classes.len() as u64;
        for umbrella in 0..nt {
            let allowed: Vec<usize> = (0..layer.classes.len())
                .filter(|&c| layer.classes[c].1 >> umbrella & 1 == 1)
                .collect();
            // One representative class per distinct profile.
            let mut reps: Vec<usize> = Vec::new();
            for &c in &allowed {
                if !reps.iter().any(|&r| layer.class_profiles[r] == layer.class_profiles[c]) {
                    reps.push(c);
                }
            }
            let mut order: Vec<Profile> = Vec::new();
            let mut parent: HashMap<Profile, (Option<Profile>, usize)> = HashMap::new();
            for &c in allowed.iter().filter(|&&c| layer.classes[c].1 == all) {
                let p = layer.class_profiles[c];
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(p) {
                    e.insert((None, c));
                    order.push(p);
                }
            }
            let mut next = 0;
            while next < order.len() {
                let cur = order[next];
                next += 1;
                work += reps.len() as u64;
                if work > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                for &c in &reps {
                    let p = cur | layer.class_profiles[c];
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(p) {
                        e.insert((Some(cur), c));
                        order.push(p);
                    }
                }
            }
            for &mids in &order {
                if let Some(r) = self.first_refuted_root(mids | layer.tops_profile) {
                    let mut chosen = Vec::new();
                    let mut cur = Some(mids);
                    while let Some(p) = cur {
                        let (prev, c) = parent[&p];
                        chosen.push(c);
                        cur = prev;
                    }
                    chosen.reverse();
                    let middles = chosen
                        .into_iter()
                        .map(|c| {
                            let (v, sees) = layer.classes[c];
                            let s = (0..nt).filter(|&i| sees >> i & 1 == 1).collect();
                            (self.patterns[v].clone(), s)
                        })
                        .collect();
                    return Ok(Some(Shaped {
                        root: self.patterns[r].clone(),
                        middles,
                        tops: layer.top_patterns(self),
                    }));
                }
            }
        }
        Ok(None)
    }
}

struct Layer {
    /// Pattern indices of the tops, ascending.
    tops: Vec<usize>,
    /// (pattern index, bitmask over `tops`) of each middle class.
    classes: Vec<(usize, u64)>,
    class_profiles: Vec<Profile>,
    tops_profile: Profile,
}

impl Layer {
    fn top_patterns(&self, s: &Search) -> Vec<Vec<bool>> {
        self.tops.iter().map(|&p| s.patterns[p].clone()).collect()
    }
}
