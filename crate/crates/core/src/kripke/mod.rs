//! Finite strict partial orders, models over them, and the checks run on both.

mod bisim;
mod embed;
mod exchange;
mod falsify;
mod frame;
mod model;

pub use bisim::{verify_bisimulation, BisimulationWitness, Violation};
pub use embed::{find_embedding, EmbedConfig, Embedding, DEFAULT_RETRIES};
pub use exchange::ModelDocument;
pub use falsify::{find_falsifying_valuation, find_falsifying_valuation_with_budget, Falsification, DEFAULT_BUDGET};
pub use frame::{validate_frame, KripkeFrame, LayeredFrame};
pub use model::{check, first_failing_world, model_valid, truth_set, KripkeModel, PointedModel, Valuation};

pub(crate) use model::Compiled;
