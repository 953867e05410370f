//! The canonical three-layer model over a vocabulary and the almost-sure
//! model validity decision it supports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{valuation_patterns, Formula, Vocabulary};
use crate::kripke::{first_failing_world, KripkeFrame, KripkeModel, LayeredFrame, Valuation};

/// Largest vocabulary the canonical model is built for (3 * 4096 worlds).
pub const MAX_CANONICAL_ATOMS: usize = 12;

/// Layer of a canonical world.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    B,
    M,
    U,
}

impl Level {
    pub fn index(self) -> u8 {
        match self {
            Level::B => 1,
            Level::M => 2,
            Level::U => 3,
        }
    }
}

/// Worlds are numbered level-major: `b_v` for every valuation `v` first,
/// then the `m_v`, then the `u_v`. Within a level, valuations follow
/// `valuation_patterns` (all atoms true first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalModel {
    pub model: KripkeModel,
    patterns: usize,
}

impl CanonicalModel {
    pub fn vocab(&self) -> &Vocabulary {
        self.model.vocab()
    }

    pub fn world_count(&self) -> usize {
        3 * self.patterns
    }

    pub fn level_of(&self, w: usize) -> Level {
        match (w - 1) / self.patterns {
            0 => Level::B,
            1 => Level::M,
            _ => Level::U,
        }
    }

    /// Index of the world's valuation in `valuation_patterns` (0-based).
    pub fn valuation_index(&self, w: usize) -> usize {
        (w - 1) % self.patterns
    }

    pub fn world(&self, level: Level, valuation_index: usize) -> usize {
        assert!(valuation_index < self.patterns);
        (level.index() as usize - 1) * self.patterns + valuation_index + 1
    }

    /// The frame with the b/m/u tags as levels.
    pub fn layered(&self) -> LayeredFrame {
        let mut levels = vec![0u8];
        levels.extend(self.model.frame.worlds().map(|w| self.level_of(w).index()));
        LayeredFrame::with_levels(self.model.frame.clone(), levels).expect("canonical levels are ordered")
    }

    /// Display name such as `m_v3` (valuation indices are 1-based here).
    pub fn world_name(&self, w: usize) -> String {
        let l = match self.level_of(w) {
            Level::B => 'b',
            Level::M => 'm',
            Level::U => 'u',
        };
        format!("{l}_v{}", self.valuation_index(w) + 1)
    }
}

pub fn build_canonical_model(vocab: &Vocabulary) -> Result<CanonicalModel> {
    let k = vocab.len();
    if k > MAX_CANONICAL_ATOMS {
        return Err(Error::VocabularyTooLarge {
            k,
            cap: MAX_CANONICAL_ATOMS,
        });
    }
    let patterns = valuation_patterns(k);
    let p = patterns.len();
    let n = 3 * p;
    let mut edges = Vec::with_capacity(3 * p * p);
    for b in 1..=p {
        for v in p + 1..=n {
            edges.push((b, v));
        }
    }
    for m in p + 1..=2 * p {
        for u in 2 * p + 1..=n {
            edges.push((m, u));
        }
    }
    let frame = KripkeFrame::new(n, &edges)?;
    let mut val = Valuation::all_false(n, vocab.clone());
    for w in 1..=n {
        val.set_pattern(w, &patterns[(w - 1) % p]);
    }
    Ok(CanonicalModel {
        model: KripkeModel::new(frame, val)?,
        patterns: p,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LimitOne,
    LimitZero,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LimitOne => "limit_one",
            Verdict::LimitZero => "limit_zero",
        }
    }

    /// The limiting probability as a number.
    pub fn value(self) -> f64 {
        match self {
            Verdict::LimitOne => 1.0,
            Verdict::LimitZero => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDecision {
    pub verdict: Verdict,
    /// First canonical world where the formula fails.
    pub witness: Option<usize>,
    pub canonical: CanonicalModel,
}

/// Decides whether the probability that a random labelled model validates
/// `f` tends to one: exactly when the canonical model over the atoms of `f`
/// (or `{p1}` if there are none) validates `f`.
pub fn decide_model_limit(f: &Formula) -> Result<ModelDecision> {
    decide_model_limit_over(f, &Vocabulary::of_formula(f))
}

/// As `decide_model_limit`, over an explicit vocabulary containing the
/// atoms of `f`.
pub fn decide_model_limit_over(f: &Formula, vocab: &Vocabulary) -> Result<ModelDecision> {
    let canonical = build_canonical_model(vocab)?;
    let witness = first_failing_world(&canonical.model, f)?;
    let verdict = if witness.is_some() {
        Verdict::LimitZero
    } else {
        Verdict::LimitOne
    };
    Ok(ModelDecision {
        verdict,
        witness,
        canonical,
    })
}
