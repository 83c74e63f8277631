use std::fmt;

use thiserror::Error;

/// Where in a grammar file a parse error occurred (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {location}: {message}")]
    Syntax { location: Location, message: String },

    #[error("undeclared symbol `{symbol}` at {location}")]
    UndeclaredSymbol { symbol: String, location: Location },

    #[error("duplicate alphabet letter `{letter}` at {location}")]
    DuplicateLetter { letter: String, location: Location },

    #[error("missing alphabet declaration")]
    MissingAlphabet,

    #[error("missing start declaration")]
    MissingStart,

    /// The language (after removing the empty word) is empty. `epsilon`
    /// records whether the empty word belonged to the original language.
    #[error("empty residual language (empty word in language: {epsilon})")]
    EmptyLanguage { epsilon: bool },

    #[error("grammar grew past {limit} productions during normalization")]
    ProductionCap { limit: usize },

    #[error("the language of the sentential form is finite")]
    FiniteLanguage,

    #[error("nonterminals `{0}` and `{1}` are not in the same recursion class")]
    NotInClass(String, String),

    #[error("alphabet mismatch: {0} vs {1} letters")]
    AlphabetMismatch(usize, usize),

    #[error("search cap of {0} exceeded")]
    SearchCap(usize),

    #[error("missing omega verdict for `{0}`")]
    MissingVerdict(String),

    #[error("operand is not an ordinal below omega^2")]
    NonOrdinal,

    #[error("language is not well-ordered")]
    NotWellOrdered,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
