//! Finitely presented groups: words, presentations, abelian invariants,
//! coset enumeration, Tietze simplification and homomorphism counts into
//! small symmetric groups.

pub mod abelian;
pub mod coset;
pub mod homs;
pub mod perm;
pub mod presentation;
pub mod sieradski;
pub mod tietze;
pub mod word;

use thiserror::Error;

pub use abelian::{abelianization, smith_diagonal, AbelianInvariants};
pub use coset::{todd_coxeter, CosetResult, DEFAULT_MAX_COSETS};
pub use homs::hom_count;
pub use perm::{PermError, Permutation};
pub use presentation::Presentation;
pub use sieradski::{match_sieradski, sieradski, sieradski_labeling};
pub use tietze::tietze_simplify;
pub use word::{Letter, Word};

/// A syntax error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid n = {0}: must be at least 2")]
    InvalidN(usize),
}
