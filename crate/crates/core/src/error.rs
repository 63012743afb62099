use alloc::string::String;
use core::fmt;

/// Errors raised by the core pipeline stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A keyword appears in both the include and exclude lists.
    OverlappingKeywords(String),
    /// A phrase dictionary entry is malformed.
    InvalidPhrase {
        surface: String,
        reason: &'static str,
    },
    /// Two phrase dictionary entries share a surface form.
    DuplicatePhrase(String),
    /// A stopword is empty or spans several tokens.
    InvalidStopword(String),
    /// A numeric parameter violates its precondition.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// An edge breaks a network invariant.
    InvalidEdge {
        a: String,
        b: String,
        reason: &'static str,
    },
    /// A term-frequency entry breaks a table invariant.
    InvalidCounts { term: String, reason: &'static str },
    /// Modularity is undefined on a graph without edge weight.
    UndefinedModularity,
    /// A graph node has no entry in the term-frequency table.
    MissingTerm(String),
    /// Inputs from different pipeline runs were combined.
    InconsistentNodes(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OverlappingKeywords(k) => {
                write!(f, "keyword `{k}` is both included and excluded")
            }
            Error::InvalidPhrase { surface, reason } => {
                write!(f, "invalid phrase `{surface}`: {reason}")
            }
            Error::DuplicatePhrase(s) => write!(f, "duplicate phrase surface form `{s}`"),
            Error::InvalidStopword(w) => write!(f, "invalid stopword `{w}`"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::InvalidEdge { a, b, reason } => write!(f, "invalid edge {a}-{b}: {reason}"),
            Error::InvalidCounts { term, reason } => {
                write!(f, "invalid counts for `{term}`: {reason}")
            }
            Error::UndefinedModularity => f.write_str("undefined modularity: graph has no edges"),
            Error::MissingTerm(t) => write!(f, "node `{t}` missing from term-frequency table"),
            Error::InconsistentNodes(msg) => write!(f, "inconsistent node sets: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
