//! The three shapes of pointed counter-models that occur as generated
//! submodels of large random three-layer orders.

use serde::Serialize;

use crate::kripke::PointedModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape")]
pub enum ShapeClass {
    /// A single endpoint.
    U,
    /// A root whose successors are all endpoints.
    M,
    /// A root over middles and tops. Every middle sees at least one top,
    /// some middle sees every top, and `umbrella` is a top seen by every
    /// middle.
    B { umbrella: usize },
}

impl ShapeClass {
    pub fn letter(&self) -> char {
        match self {
            ShapeClass::U => 'U',
            ShapeClass::M => 'M',
            ShapeClass::B { .. } => 'B',
        }
    }
}

/// Worlds of a shaped model split by role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roles {
    pub root: usize,
    pub middles: Vec<usize>,
    pub tops: Vec<usize>,
}

/// Splits the model into root, middles and tops if the point sees every
/// other world; `None` otherwise.
pub fn roles(m: &PointedModel) -> Option<Roles> {
    let fr = &m.model.frame;
    let p = m.point;
    if !fr.contains_world(p) {
        return None;
    }
    let others: Vec<usize> = fr.worlds().filter(|&w| w != p).collect();
    if fr.successors(p).count_ones(..) != others.len() {
        return None;
    }
    let (tops, middles): (Vec<usize>, Vec<usize>) = others.into_iter().partition(|&w| fr.is_endpoint(w));
    Some(Roles { root: p, middles, tops })
}

/// Classifies a pointed model as U, M or B, or returns `None`.
pub fn shape_check(m: &PointedModel) -> Option<ShapeClass> {
    let r = roles(m)?;
    let fr = &m.model.frame;
    if r.tops.is_empty() && r.middles.is_empty() {
        return Some(ShapeClass::U);
    }
    if r.middles.is_empty() {
        return Some(ShapeClass::M);
    }
    let top_set: Vec<usize> = r.tops.clone();
    for &mid in &r.middles {
        if fr.successors(mid).ones().any(|v| !fr.is_endpoint(v)) {
            return None;
        }
    }
    let full = r
        .middles
        .iter()
        .any(|&mid| fr.successors(mid).ones().collect::<Vec<_>>() == top_set);
    if !full {
        return None;
    }
    let umbrella = r
        .tops
        .iter()
        .copied()
        .find(|&t| r.middles.iter().all(|&mid| fr.has_edge(mid, t)))?;
    Some(ShapeClass::B { umbrella })
}
