use thiserror::Error;

use crate::formula::ParseError;

/// Structural defects found while validating a frame.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("edge ({u},{v}) names a world outside 1..={n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("reflexive loop at world {0}")]
    ReflexiveLoop(usize),
    #[error("edges ({0},{1}) and ({1},{2}) present but ({0},{2}) missing")]
    MissingTransitiveEdge(usize, usize, usize),
    #[error("chain of four worlds {0:?}")]
    FourChain([usize; 4]),
    #[error("edge ({u},{v}) does not go to a strictly higher level")]
    LevelOrder { u: usize, v: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("atom index 0 is not allowed")]
    ZeroAtom,
    #[error("vocabulary must not be empty")]
    EmptyVocabulary,
    #[error("axiom scheme needs a non-empty payload")]
    EmptyPayload,
    #[error("payload has {found} formulas, expected {expected}")]
    PayloadLength { expected: usize, found: usize },
    #[error("world {0} is not in the model")]
    UnknownWorld(usize),
    #[error("atom p{0} is not in the vocabulary")]
    UnknownAtom(u32),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("vocabulary of {k} atoms exceeds the cap of {cap}")]
    VocabularyTooLarge { k: usize, cap: usize },
    #[error("frame too small: {0}")]
    FrameTooSmall(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("pointed model has none of the shapes U, M, B")]
    NotShaped,
    #[error("counter-model could not be embedded into sampled frames ({successes} of {attempts})")]
    NotEmbeddable { successes: usize, attempts: usize },
    #[error("malformed model document: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for outcomes that mean "could not decide within resources".
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded(_) | Error::VocabularyTooLarge { .. } | Error::NotEmbeddable { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
