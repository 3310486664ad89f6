//! Exact topological classification of ω-regular languages, alphabet-expansion
//! analysis, and solvers for the infinite-duration games that go with them.
//!
//! The crate is organised around four layers:
//!
//! * [`words`] — ultimately periodic ω-words `u·v^ω` with a canonical form and
//!   the exact prefix metric `d(x, y) = 1/2^n`.
//! * [`automata`] — deterministic complete ω-automata under six acceptance
//!   variants, loop (inf-set) enumeration, a Muller normal form, and the
//!   boolean/emptiness toolkit built on it.
//! * [`classify`] and [`expansion`] — the exact open/closed/Σ₂/Π₂ classifier
//!   with machine-checkable evidence, alphabet embedding, and the symbolic
//!   hierarchy-jump predictor.
//! * [`games`] — two-player games on finite graphs: attractors, the standard
//!   solvers up to parity (Zielonka) and Muller (latest-appearance records),
//!   objective lifting, and independent strategy verification.
//!
//! Everything is immutable after construction and deterministic: the same
//! inputs (and, where sampling is involved, the same seed) produce the same
//! outputs byte for byte.

pub mod automata;
pub mod classify;
pub mod expansion;
pub mod games;
pub mod generate;
pub mod oracle;
pub mod report;
pub mod selftest;
pub mod words;

use thiserror::Error;

/// Unified error type for construction, parsing, and resource guards.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol '{0}' in alphabet")]
    DuplicateSymbol(char),
    #[error("period of an ultimately periodic word must be non-empty")]
    EmptyPeriod,
    #[error("symbol '{0}' is not in the alphabet")]
    SymbolNotInAlphabet(char),
    #[error("state {0} is out of range (automaton has {1} states)")]
    StateOutOfRange(usize, usize),
    #[error("priority missing for state {0}")]
    MissingPriority(usize),
    #[error("automaton has {0} states, exceeding the configured limit of {1}")]
    StateLimitExceeded(usize, usize),
    #[error("game has {0} vertices, exceeding the configured memory limit of {1}")]
    MemoryLimitExceeded(usize, usize),
    #[error("language is not clopen: {0}")]
    NotClopen(String),
    #[error("alphabet {{{0}}} does not extend alphabet {{{1}}}")]
    NotAnExtension(String, String),
    #[error("vertex {0} is out of range (game has {1} vertices)")]
    VertexOutOfRange(usize, usize),
    #[error("vertex {0} has no successor")]
    NoSuccessor(usize),
    #[error("no strategy move defined for vertex {0} in its owner's winning region")]
    StrategyUndefined(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// Resource limits for the exponential-in-the-worst-case operations.
///
/// Loop enumeration and everything built on it (normal forms, products,
/// emptiness, classification) refuse inputs whose reachable state count
/// exceeds `max_states`; Muller game solving refuses arenas with more than
/// `max_vertices` vertices before building the appearance-record expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
    pub max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 20,
            max_vertices: 8,
        }
    }
}

impl Limits {
    /// Same defaults as [`Default`], spelled out for use in const contexts.
    pub const DEFAULT: Limits = Limits {
        max_states: 20,
        max_vertices: 8,
    };

    pub fn with_max_states(max_states: usize) -> Self {
        Limits {
            max_states,
            ..Limits::DEFAULT
        }
    }
}
