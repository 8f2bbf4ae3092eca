use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbol {symbol:?} is not in the alphabet {alphabet:?}")]
    Domain { symbol: char, alphabet: String },
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("rotation number {num}/{den} is rational; an irrational rotation number is required")]
    RationalAlpha { num: i64, den: i64 },
    #[error("inexact rotation number {0:?}: use golden, silver, quad:p,q,d,r or cf:a1,a2,...")]
    InexactAlpha(String),
    #[error("continued fraction overflow at depth {0}")]
    Overflow(usize),
    #[error("word is not a factor of the Sturmian system: {0}")]
    Consistency(String),
    #[error("band resolution failed: {0}")]
    Resolution(String),
    #[error("substitution not reducible over {{a, b, ab}}: irreducible residue {residue}")]
    UnsupportedSubstitution { residue: String },
    #[error("certificate precondition failed: {0}")]
    Certificate(String),
    #[error("moment samples contaminated by boundary reflection from T = {first_t}")]
    Contaminated { first_t: f64 },
    #[error("linear algebra backend failure: {0}")]
    Backend(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
