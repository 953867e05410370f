//! Decision procedures for provability logic (GL) on finite strict partial
//! orders, with Monte Carlo checks on random three-layer orders.

pub mod canonical;
pub mod cli;
pub mod error;
pub mod formula;
pub mod frame_limit;
pub mod kripke;
pub mod prover;
pub mod sampling;
pub mod shape;

pub use error::{Error, FrameError, Result};
pub use formula::{parse, Formula, Vocabulary};
