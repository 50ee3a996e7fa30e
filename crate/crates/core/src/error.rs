use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unsupported-precision: {0}")]
    UnsupportedPrecision(String),

    #[error("agreement-gap: no `{slot}` entry for language `{lang}`")]
    AgreementGap { lang: String, slot: String },

    #[error("duplicate template id `{0}`")]
    DuplicateTemplate(String),

    #[error("insufficient-entities: language `{lang}` has {count} entities, need at least 3")]
    InsufficientEntities { lang: String, count: usize },

    #[error("fold count {k} exceeds the number of properties ({pids})")]
    TooManyFolds { k: usize, pids: usize },

    #[error("unknown-example: prediction for `{0}` has no gold example")]
    UnknownExample(String),

    #[error("duplicate prediction for `{0}`")]
    DuplicatePrediction(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
