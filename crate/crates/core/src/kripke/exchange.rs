//! JSON document format shared by models, pointed models and frames.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::frame::{KripkeFrame, LayeredFrame};
use super::model::{KripkeModel, PointedModel, Valuation};
use crate::error::{Error, Result};
use crate::formula::Vocabulary;

/// `valuation` lists `[world, atom, bit]` for every world and vocabulary
/// atom. A bare frame has empty `vocab` and `valuation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub vocab: Vec<u32>,
    #[serde(default)]
    pub valuation: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
}

impl ModelDocument {
    pub fn from_frame(frame: &KripkeFrame) -> ModelDocument {
        ModelDocument {
            n: frame.world_count(),
            edges: frame.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            vocab: Vec::new(),
            valuation: Vec::new(),
            point: None,
        }
    }

    pub fn from_model(model: &KripkeModel) -> ModelDocument {
        let mut doc = ModelDocument::from_frame(&model.frame);
        doc.vocab = model.vocab().atoms().to_vec();
        for w in model.frame.worlds() {
            for (i, &a) in model.vocab().atoms().iter().enumerate() {
                let bit = model.valuation.atom_set(i).contains(w) as usize;
                doc.valuation.push([w, a as usize, bit]);
            }
        }
        doc
    }

    pub fn from_pointed(m: &PointedModel) -> ModelDocument {
        let mut doc = ModelDocument::from_model(&m.model);
        doc.point = Some(m.point);
        doc
    }

    fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e[0], e[1])).collect()
    }

    /// The frame, validated as irreflexive and transitive.
    pub fn to_frame(&self) -> Result<KripkeFrame> {
        Ok(KripkeFrame::new(self.n, &self.edge_pairs())?)
    }

    pub fn to_layered_frame(&self) -> Result<LayeredFrame> {
        Ok(LayeredFrame::from_frame(self.to_frame()?)?)
    }

    /// Requires a non-empty vocabulary and a total valuation over it.
    pub fn to_model(&self) -> Result<KripkeModel> {
        let frame = self.to_frame()?;
        let vocab = Vocabulary::new(self.vocab.iter().copied())?;
        if vocab.len() != self.vocab.len() {
            return Err(Error::Document("duplicate atoms in vocab".into()));
        }
        let mut val = Valuation::all_false(self.n, vocab.clone());
        let mut seen = std::collections::BTreeSet::new();
        for &[w, a, bit] in &self.valuation {
            let atom = u32::try_from(a).map_err(|_| Error::UnknownAtom(u32::MAX))?;
            if bit > 1 {
                return Err(Error::Document(format!("bit {bit} for world {w}, atom p{a}")));
            }
            if !seen.insert((w, atom)) {
                return Err(Error::Document(format!("world {w}, atom p{a} listed twice")));
            }
            val.set(w, atom, bit == 1)?;
        }
        if seen.len() != self.n * vocab.len() {
            return Err(Error::Document("valuation is not total".into()));
        }
        KripkeModel::new(frame, val)
    }

    pub fn to_pointed(&self) -> Result<PointedModel> {
        let model = self.to_model()?;
        let point = self.point.ok_or_else(|| Error::Document("missing point".into()))?;
        if !model.frame.contains_world(point) {
            return Err(Error::UnknownWorld(point));
        }
        Ok(PointedModel { model, point })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<ModelDocument> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<ModelDocument> {
        ModelDocument::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}
