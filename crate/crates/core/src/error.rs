use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Syntax error in the expression grammar, with the byte offset where it
    /// was detected and the set of tokens that would have been accepted.
    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<String> },
    /// Well-formed input that violates a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("weight {weight} exceeds the configured maximum {max}")]
    WeightTooLarge { weight: u32, max: u32 },
    #[error("cannot combine index families `{0}` and `{1}`")]
    MixedFamilies(&'static str, &'static str),
    /// A letter of an iterated integral is singular on the integration path.
    #[error("singular integrand: {0}")]
    Singular(String),
    /// Evaluation point closer than the pole tolerance to a pole.
    #[error("pole at N = {pole} (distance {distance:e})")]
    Pole { pole: i64, distance: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
