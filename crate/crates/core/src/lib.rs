//! Word combinatorics in Thompson's group F.
//!
//! The group F is presented by generators g0, g1, g2, ... subject to the
//! relations g_n g_k = g_k g_{n+1} for 0 <= k < n. This crate works with
//! formal words over those generators and their inverses:
//!
//! - [`word`]: letters, words, and their textual grammar.
//! - [`frep`]: the faithful representation of F by piecewise-linear
//!   homeomorphisms of [0,1], used as an exact ground-truth oracle for
//!   evaluating words and testing neutrality.
//! - [`rewrite`]: the rewriting relations that separate generators from
//!   inverses, order indices, and push minimal-index letters outward,
//!   together with normalization and empirical confluence checks.
//! - [`binning`]: the permutation and pair partition a word's
//!   normalization induces on letter positions, and the reconstruction of
//!   neutral words from partial data.
//! - [`census`]: enumeration and counting of neutral words, binomial
//!   sandwich bounds, and exact rational moments converging to (d-1)!!.
//!
//! All group-element arithmetic is exact (big-integer dyadic rationals);
//! all counts are exact big integers; moments are exact rationals.

pub mod binning;
pub mod census;
pub mod frep;
pub mod rewrite;
pub mod word;

use thiserror::Error;

/// Crate-wide error type. `class` maps each variant to the coarse
/// category the command-line tool turns into an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("overflow at byte {offset}: generator index exceeds the platform's natural-number capacity (u64)")]
    Overflow { offset: usize },

    #[error("no {kind} redex at position {position}")]
    NotARedex {
        kind: rewrite::ReductionKind,
        position: usize,
    },

    #[error("step budget {budget} exhausted while rewriting a word of length {length}; this indicates a bug, the reduction is proved terminating")]
    StepBudget { budget: usize, length: usize },

    #[error("domain error: {message}")]
    Domain { message: String },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("word of length {length} has odd length; pair partitions need even length")]
    OddLength { length: usize },

    #[error("word is not neutral: the piecewise-linear evaluation oracle returned a non-identity element")]
    NotNeutral,

    #[error("inconsistent completion data: {message}")]
    Inconsistent { message: String },

    #[error("spacing condition violated: {message}")]
    SpacingViolated { message: String },

    #[error("internal contradiction: {message}; this indicates a bug, not bad input")]
    InternalContradiction { message: String },

    #[error("candidate budget exceeded: {required} candidate words exceed the budget of {budget}; use the meet-in-the-middle census instead")]
    CandidateBudget { required: u128, budget: u64 },

    #[error("half-word budget exceeded: the table would hold {required} half-words, over the budget of {budget}")]
    HalfWordBudget { required: u128, budget: u64 },

    #[error("exhaustive permutation search is limited to d <= {max}, got d = {d}; use the double-factorial formula instead")]
    TooLarge { d: usize, max: usize },
}

/// Coarse error category; the CLI maps these to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Resource or budget exhaustion, including internal step budgets.
    Budget,
    /// Malformed textual input.
    Syntax,
    /// Well-formed input that violates a semantic precondition.
    Semantic,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Syntax { .. } | Error::Overflow { .. } => ErrorClass::Syntax,
            Error::StepBudget { .. }
            | Error::CandidateBudget { .. }
            | Error::HalfWordBudget { .. }
            | Error::TooLarge { .. }
            | Error::InternalContradiction { .. } => ErrorClass::Budget,
            Error::NotARedex { .. }
            | Error::Domain { .. }
            | Error::SizeMismatch { .. }
            | Error::OddLength { .. }
            | Error::NotNeutral
            | Error::Inconsistent { .. }
            | Error::SpacingViolated { .. } => ErrorClass::Semantic,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
