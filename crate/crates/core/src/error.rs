use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an identically zero scalar")]
    DivisionByZero,

    #[error("pole at q = {q}: factor {factor} vanishes")]
    Pole { factor: String, q: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular value of {what} at level {level}")]
    Singular { level: i64, what: String },

    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("expression mixes ladder symbols of different families")]
    MixedLadders,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than by the
    /// computation itself.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::UnknownClaim(_)
                | Error::Config(_)
        )
    }
}
