//! Places a shaped counter-model onto a generated subframe of a large frame.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bisim::{verify_bisimulation, BisimulationWitness};
use super::frame::LayeredFrame;
use super::model::{KripkeModel, PointedModel, Valuation};
use crate::error::{Error, Result};
use crate::shape::{roles, shape_check, ShapeClass};

pub const DEFAULT_RETRIES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbedConfig {
    pub retries: usize,
    pub seed: u64,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            retries: DEFAULT_RETRIES,
            seed: 0,
        }
    }
}

/// A verified embedding: the witness relation, the valuation placed on the
/// target frame, and the image of the counter-model's point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub witness: BisimulationWitness,
    pub valuation: Valuation,
    pub root: usize,
}

impl Embedding {
    pub fn target_model(&self, target: &LayeredFrame) -> KripkeModel {
        KripkeModel {
            frame: target.frame().clone(),
            valuation: self.valuation.clone(),
        }
    }
}

/// Tries up to `cfg.retries` randomized placements of `counter` (which must
/// have shape U, M or B) into `target`. Each candidate is accepted only if
/// it passes `verify_bisimulation` and its image is exactly the cone of the
/// image root. `Ok(None)` means every attempt failed.
pub fn find_embedding(counter: &PointedModel, target: &LayeredFrame, cfg: EmbedConfig) -> Result<Option<Embedding>> {
    let shape = shape_check(counter).ok_or(Error::NotShaped)?;
    let r = roles(counter).ok_or(Error::NotShaped)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.retries.max(1) {
        let attempt = match shape {
            ShapeClass::U => place_u(counter, target, &mut rng),
            ShapeClass::M => place_m(counter, &r.tops, target, &mut rng),
            ShapeClass::B { umbrella } => place_b(counter, &r.middles, &r.tops, umbrella, target, &mut rng),
        };
        let Some((root, pairs)) = attempt else { continue };
        if let Some(e) = finish(counter, target, root, pairs)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

fn finish(
    counter: &PointedModel,
    target: &LayeredFrame,
    root: usize,
    pairs: Vec<(usize, usize)>,
) -> Result<Option<Embedding>> {
    let witness = BisimulationWitness::new(pairs);
    let mut valuation = Valuation::all_false(target.world_count(), counter.model.vocab().clone());
    for &(s, t) in &witness.pairs {
        valuation.set_pattern(t, &counter.model.valuation.pattern(s));
    }
    let model = KripkeModel {
        frame: target.frame().clone(),
        valuation,
    };
    if verify_bisimulation(&counter.model, &model, &witness)?.is_some() {
        return Ok(None);
    }
    let image = witness.targets();
    let cone: BTreeSet<usize> = target.frame().cone(root).ones().collect();
    if image != cone || !witness.pairs.contains(&(counter.point, root)) {
        return Ok(None);
    }
    Ok(Some(Embedding {
        witness,
        valuation: model.valuation,
        root,
    }))
}

fn place_u(
    counter: &PointedModel,
    target: &LayeredFrame,
    rng: &mut ChaCha8Rng,
) -> Option<(usize, Vec<(usize, usize)>)> {
    let fr = target.frame();
    let mut ends: Vec<usize> = target.layer(3).into_iter().filter(|&w| fr.is_endpoint(w)).collect();
    if ends.is_empty() {
        ends = fr.worlds().filter(|&w| fr.is_endpoint(w)).collect();
    }
    let &t = ends.choose(rng)?;
    Some((t, vec![(counter.point, t)]))
}

fn place_m(
    counter: &PointedModel,
    tops: &[usize],
    target: &LayeredFrame,
    rng: &mut ChaCha8Rng,
) -> Option<(usize, Vec<(usize, usize)>)> {
    let fr = target.frame();
    let fits = |w: usize| {
        let s = fr.successors(w);
        s.count_ones(..) >= tops.len() && s.ones().all(|v| fr.is_endpoint(v))
    };
    let mut cands: Vec<usize> = target.layer(2).into_iter().filter(|&w| fits(w)).collect();
    if cands.is_empty() {
        cands = fr.worlds().filter(|&w| fits(w)).collect();
    }
    let &m = cands.choose(rng)?;
    let mut succ: Vec<usize> = fr.successors(m).ones().collect();
    succ.shuffle(rng);
    let mut pairs = vec![(counter.point, m)];
    for (i, &u) in succ.iter().enumerate() {
        pairs.push((tops[i.min(tops.len() - 1)], u));
    }
    Some((m, pairs))
}

/// Special middles get their own target middle with dedicated witnesses
/// for each of their tops; every other target middle of the chosen bottom
/// is paired with one middle that sees every top; unlabeled target tops
/// default to the umbrella top.
fn place_b(
    counter: &PointedModel,
    middles: &[usize],
    tops: &[usize],
    umbrella: usize,
    target: &LayeredFrame,
    rng: &mut ChaCha8Rng,
) -> Option<(usize, Vec<(usize, usize)>)> {
    let cf = &counter.model.frame;
    let tf = target.frame();
    let succ_of = |c: usize| -> BTreeSet<usize> { cf.successors(c).ones().collect() };
    let all_tops: BTreeSet<usize> = tops.iter().copied().collect();
    let full = *middles.iter().find(|&&c| succ_of(c) == all_tops)?;
    let specials: Vec<usize> = middles.iter().copied().filter(|&c| c != full).collect();

    let target_middles = |b: usize| -> Vec<usize> { tf.successors(b).ones().filter(|&v| !tf.is_endpoint(v)).collect() };
    let deep_enough = |b: usize| {
        let mids = target_middles(b);
        mids.len() > specials.len() && mids.iter().all(|&m| tf.successors(m).ones().all(|u| tf.is_endpoint(u)))
    };
    let mut bottoms: Vec<usize> = target.layer(1).into_iter().filter(|&b| deep_enough(b)).collect();
    if bottoms.is_empty() {
        bottoms = tf.worlds().filter(|&b| deep_enough(b)).collect();
    }
    let &b = bottoms.choose(rng)?;
    let mut mids = target_middles(b);
    mids.shuffle(rng);
    let placed: Vec<(usize, usize)> = specials.iter().copied().zip(mids.iter().copied()).collect();
    let rest: Vec<usize> = mids[specials.len()..].to_vec();
    let target_tops: Vec<usize> = tf.successors(b).ones().filter(|&v| tf.is_endpoint(v)).collect();

    // Counter tops a target top may stand for, given the special middles below it.
    let allowed = |u: usize| -> BTreeSet<usize> {
        let mut a = all_tops.clone();
        for &(c, m) in &placed {
            if tf.has_edge(m, u) {
                a = a.intersection(&succ_of(c)).copied().collect();
            }
        }
        a
    };
    let mut label: BTreeMap<usize, usize> = BTreeMap::new();
    let pick = |m: usize, x: usize, label: &mut BTreeMap<usize, usize>, rng: &mut ChaCha8Rng| {
        let mut free: Vec<usize> = tf
            .successors(m)
            .ones()
            .filter(|u| !label.contains_key(u) && allowed(*u).contains(&x))
            .collect();
        free.shuffle(rng);
        free.first().map(|&u| {
            label.insert(u, x);
        })
    };
    for &(c, m) in &placed {
        for x in succ_of(c) {
            if x != umbrella {
                pick(m, x, &mut label, rng)?;
            }
        }
    }
    for &m in &rest {
        for &x in tops {
            let covered = tf.successors(m).ones().any(|u| label.get(&u) == Some(&x));
            if x != umbrella && !covered {
                pick(m, x, &mut label, rng)?;
            }
        }
    }
    for &m in &mids {
        if tf.successors(m).ones().all(|u| label.contains_key(&u)) {
            return None;
        }
    }
    let mut pairs = vec![(counter.point, b)];
    pairs.extend(placed.iter().copied());
    pairs.extend(rest.iter().map(|&m| (full, m)));
    for u in target_tops {
        pairs.push((*label.get(&u).unwrap_or(&umbrella), u));
    }
    Some((b, pairs))
}
