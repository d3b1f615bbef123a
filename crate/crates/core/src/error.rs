use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside its mathematical domain (negative size, extent beyond [-1, 1], ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A sample falls outside the grid it is being gridded onto or interpolated from.
    #[error("sample k={k} outside grid extent: {detail}")]
    OutOfRange { k: usize, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("training error: {0}")]
    Training(#[from] crate::classify::svm::TrainingFailure),

    #[error("schema error in {context}: {detail}")]
    Schema { context: String, detail: String },

    #[error("missing input {path}: {source}")]
    MissingInput {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Schema {
            context: context.into(),
            detail: detail.into(),
        }
    }

    /// Short machine-readable category, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Shape(_) => "shape",
            Error::Numeric(_) => "numeric",
            Error::Precondition(_) => "precondition",
            Error::OutOfRange { .. } => "range",
            Error::Config(_) | Error::Json(_) => "config",
            Error::Training(_) => "training",
            Error::Schema { .. } => "schema",
            Error::MissingInput { .. } => "missing_input",
            Error::Io(_) => "io",
        }
    }
}
