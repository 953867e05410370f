//! Random three-layer partial orders, extension-axiom checks on them, and
//! Monte Carlo estimates of model and frame validity.

use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Vocabulary};
use crate::kripke::{
    find_falsifying_valuation_with_budget, model_valid, KripkeFrame, KripkeModel, LayeredFrame, Valuation,
    DEFAULT_BUDGET,
};

/// RNG stream used for frame edges.
pub const FRAME_STREAM: u64 = 0;
/// RNG stream used for valuation bits.
pub const VALUATION_STREAM: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub seed: u64,
    pub bottom_ratio: f64,
    pub middle_ratio: f64,
    pub edge_prob: f64,
}

impl SamplerConfig {
    /// Ratios 1/4 bottom, 1/2 middle; edge probability 1/2.
    pub fn new(n: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            n,
            seed,
            bottom_ratio: 0.25,
            middle_ratio: 0.5,
            edge_prob: 0.5,
        }
    }

    pub fn with_seed(&self, seed: u64) -> SamplerConfig {
        SamplerConfig { seed, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if self.n < 4 {
            return Err(Error::InvalidConfig(format!("n must be at least 4, got {}", self.n)));
        }
        if !open(self.bottom_ratio) || !open(self.middle_ratio) || self.bottom_ratio + self.middle_ratio >= 1.0 {
            return Err(Error::InvalidConfig(
                "layer ratios must lie in (0,1) and sum below 1".into(),
            ));
        }
        if !open(self.edge_prob) {
            return Err(Error::InvalidConfig("edge probability must lie in (0,1)".into()));
        }
        let (b, m, t) = self.layer_sizes();
        if b == 0 || m == 0 || t == 0 {
            return Err(Error::InvalidConfig(format!(
                "layer sizes {b}/{m}/{t} leave a layer empty"
            )));
        }
        Ok(())
    }

    /// Bottom, middle and top layer sizes: floor, ceiling, remainder.
    pub fn layer_sizes(&self) -> (usize, usize, usize) {
        let b = (self.n as f64 * self.bottom_ratio).floor() as usize;
        let m = ((self.n as f64 * self.middle_ratio).ceil() as usize).min(self.n - b);
        (b, m, self.n - b - m)
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bottoms are worlds `1..=b`, middles follow, tops come last. Every
/// bottom-middle pair, then every middle-top pair, is linked with
/// probability `edge_prob`; every bottom sees every top.
pub fn sample_kr_frame(cfg: &SamplerConfig) -> Result<LayeredFrame> {
    cfg.validate()?;
    let (b, m, _) = cfg.layer_sizes();
    let n = cfg.n;
    let mut rng = rng_for(cfg.seed, FRAME_STREAM);
    let mut edges = Vec::new();
    for x in 1..=b {
        for y in b + 1..=b + m {
            if rng.gen_bool(cfg.edge_prob) {
                edges.push((x, y));
            }
        }
    }
    for y in b + 1..=b + m {
        for z in b + m + 1..=n {
            if rng.gen_bool(cfg.edge_prob) {
                edges.push((y, z));
            }
        }
    }
    for x in 1..=b {
        for z in b + m + 1..=n {
            edges.push((x, z));
        }
    }
    let frame = KripkeFrame::new(n, &edges)?;
    let mut levels = vec![0u8];
    levels.extend((1..=n).map(|w| {
        if w <= b {
            1
        } else if w <= b + m {
            2
        } else {
            3
        }
    }));
    Ok(LayeredFrame::with_levels(frame, levels)?)
}

/// Uniform valuation of `vocab` on `n` worlds, world-major then atom order.
pub fn sample_valuation(n: usize, vocab: &Vocabulary, seed: u64) -> Valuation {
    let mut rng = rng_for(seed, VALUATION_STREAM);
    let mut val = Valuation::all_false(n, vocab.clone());
    for w in 1..=n {
        for &a in vocab.atoms() {
            val.set(w, a, rng.gen::<bool>()).expect("world and atom in range");
        }
    }
    val
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionAxiom {
    /// A bottom below the `x`s and not below the `y`s (all middles).
    A,
    /// A top above the `x`s and not above the `y`s (all middles).
    B,
    /// A middle above bottoms `x`, not above bottoms `y`, below tops `x'`
    /// and not below tops `y'`.
    C,
}

pub const EXTENSION_PARAMETER_CAP: usize = 3;
pub const DEFAULT_DRAWS: usize = 20;

/// Parameters of one extension axiom instance. `j2` and `k2` are the primed
/// parameters of axiom (c) and are ignored otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub axiom: ExtensionAxiom,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub j2: usize,
    pub k2: usize,
}

impl ExtensionSpec {
    pub fn new(axiom: ExtensionAxiom, j: usize, k: usize, l: usize) -> ExtensionSpec {
        ExtensionSpec {
            axiom,
            j,
            k,
            l,
            j2: 0,
            k2: 0,
        }
    }

    pub fn with_primed(self, j2: usize, k2: usize) -> ExtensionSpec {
        ExtensionSpec { j2, k2, ..self }
    }

    fn validate(&self) -> Result<()> {
        let ps = [self.j, self.k, self.l, self.j2, self.k2];
        if ps.iter().any(|&p| p > EXTENSION_PARAMETER_CAP) {
            return Err(Error::InvalidConfig(format!(
                "extension parameters are capped at {EXTENSION_PARAMETER_CAP}"
            )));
        }
        Ok(())
    }
}

/// Draws `DEFAULT_DRAWS` random tuples and reports whether the required
/// witness exists for all of them.
pub fn check_extension_instance(frame: &LayeredFrame, spec: &ExtensionSpec, seed: u64) -> Result<bool> {
    check_extension_instance_with_draws(frame, spec, seed, DEFAULT_DRAWS)
}

pub fn check_extension_instance_with_draws(
    frame: &LayeredFrame,
    spec: &ExtensionSpec,
    seed: u64,
    draws: usize,
) -> Result<bool> {
    spec.validate()?;
    let l1 = frame.layer(1);
    let l2 = frame.layer(2);
    let l3 = frame.layer(3);
    let fr = frame.frame();
    // (layer the x/y tuple is drawn from, second x/y layer, witness layer)
    let (xy, xy2, zs) = match spec.axiom {
        ExtensionAxiom::A => (&l2, None, &l1),
        ExtensionAxiom::B => (&l2, None, &l3),
        ExtensionAxiom::C => (&l1, Some(&l3), &l2),
    };
    let too_small = |need: usize, have: &Vec<usize>, what: &str| {
        if need > have.len() {
            Err(Error::FrameTooSmall(format!(
                "need {need} distinct {what} worlds, frame has {}",
                have.len()
            )))
        } else {
            Ok(())
        }
    };
    too_small(spec.j + spec.k, xy, "tuple")?;
    too_small(spec.l, zs, "excluded")?;
    if let Some(second) = xy2 {
        too_small(spec.j2 + spec.k2, second, "primed tuple")?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |from: &Vec<usize>, count: usize, rng: &mut ChaCha8Rng| -> Vec<usize> {
        index::sample(rng, from.len(), count)
            .into_iter()
            .map(|i| from[i])
            .collect()
    };
    for _ in 0..draws {
        let first = pick(xy, spec.j + spec.k, &mut rng);
        let (xs, ys) = first.split_at(spec.k);
        let second = xy2.map(|s| pick(s, spec.j2 + spec.k2, &mut rng)).unwrap_or_default();
        let (xs2, ys2) = second.split_at(spec.k2.min(second.len()));
        let excluded = pick(zs, spec.l, &mut rng);
        let found = zs.iter().any(|&z| {
            if excluded.contains(&z) {
                return false;
            }
            match spec.axiom {
                ExtensionAxiom::A => xs.iter().all(|&x| fr.has_edge(z, x)) && ys.iter().all(|&y| !fr.has_edge(z, y)),
                ExtensionAxiom::B => xs.iter().all(|&x| fr.has_edge(x, z)) && ys.iter().all(|&y| !fr.has_edge(y, z)),
                ExtensionAxiom::C => {
                    xs.iter().all(|&x| fr.has_edge(x, z))
                        && ys.iter().all(|&y| !fr.has_edge(y, z))
                        && xs2.iter().all(|&x| fr.has_edge(z, x))
                        && ys2.iter().all(|&y| !fr.has_edge(z, y))
                }
            }
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateTarget {
    ModelValidity,
    FrameValidity,
}

impl EstimateTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateTarget::ModelValidity => "model_validity",
            EstimateTarget::FrameValidity => "frame_validity",
        }
    }
}

/// `frequency` is `successes / (samples - unknown_count)`, or 0 when every
/// sample was unknown.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub formula: Formula,
    pub target: EstimateTarget,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub successes: usize,
    pub unknown_count: usize,
    pub frequency: f64,
}

impl Estimate {
    fn from_counts(
        f: &Formula,
        target: EstimateTarget,
        cfg: &SamplerConfig,
        samples: usize,
        (successes, unknown_count): (usize, usize),
    ) -> Estimate {
        let decided = samples - unknown_count;
        let frequency = if decided == 0 {
            0.0
        } else {
            successes as f64 / decided as f64
        };
        Estimate {
            formula: f.clone(),
            target,
            n: cfg.n,
            seed: cfg.seed,
            samples,
            successes,
            unknown_count,
            frequency,
        }
    }
}

/// Sample `i` uses seed `cfg.seed + i` for both its frame and valuation.
fn sample_seed(cfg: &SamplerConfig, i: usize) -> u64 {
    cfg.seed.wrapping_add(i as u64)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidConfig("at least one sample is required".into()));
    }
    Ok(())
}

/// Fraction of sampled (frame, uniform valuation) pairs validating `f`.
pub fn estimate_model_validity(f: &Formula, cfg: &SamplerConfig, samples: usize) -> Result<Estimate> {
    check_samples(samples)?;
    cfg.validate()?;
    let vocab = Vocabulary::of_formula(f);
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<(usize, usize)> {
            let seed = sample_seed(cfg, i);
            let frame = sample_kr_frame(&cfg.with_seed(seed))?.into_frame();
            let val = sample_valuation(cfg.n, &vocab, seed);
            let model = KripkeModel::new(frame, val)?;
            Ok((model_valid(&model, f)? as usize, 0))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(Estimate::from_counts(
        f,
        EstimateTarget::ModelValidity,
        cfg,
        samples,
        counts,
    ))
}

/// Fraction of sampled frames validating `f` under every valuation, using
/// the default falsification budget per frame.
pub fn estimate_frame_validity(f: &Formula, cfg: &SamplerConfig, samples: usize) -> Result<Estimate> {
    estimate_frame_validity_with_budget(f, cfg, samples, DEFAULT_BUDGET)
}

/// Frames whose falsification search runs out of budget are counted in
/// `unknown_count` and left out of the frequency.
pub fn estimate_frame_validity_with_budget(
    f: &Formula,
    cfg: &SamplerConfig,
    samples: usize,
    budget: u64,
) -> Result<Estimate> {
    check_samples(samples)?;
    cfg.validate()?;
    let vocab = Vocabulary::of_formula(f);
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<(usize, usize)> {
            let frame = sample_kr_frame(&cfg.with_seed(sample_seed(cfg, i)))?;
            match find_falsifying_valuation_with_budget(&frame, f, &vocab, budget) {
                Ok(None) => Ok((1, 0)),
                Ok(Some(_)) => Ok((0, 0)),
                Err(Error::BudgetExceeded(_)) => Ok((0, 1)),
                Err(e) => Err(e),
            }
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(Estimate::from_counts(
        f,
        EstimateTarget::FrameValidity,
        cfg,
        samples,
        counts,
    ))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    formula: String,
    target: &'a str,
    n: usize,
    samples: usize,
    seed: u64,
    frequency: f64,
    unknown_count: usize,
}

/// Writes a header and one row per estimate.
pub fn write_estimates_csv<W: Write>(out: W, estimates: &[Estimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in estimates {
        w.serialize(CsvRow {
            formula: e.formula.to_string(),
            target: e.target.as_str(),
            n: e.n,
            samples: e.samples,
            seed: e.seed,
            frequency: e.frequency,
            unknown_count: e.unknown_count,
        })?;
    }
    w.flush()?;
    Ok(())
}
