#![forbid(unsafe_code)]

//! Coxeter tournaments on signed graphs of types B, C and D.
//!
//! A signed graph schedules three kinds of games between `n` players:
//! competitive games (negative edges, one winner and one loser), cooperative
//! games (positive edges, both players win or both lose) and solitaire games
//! (half-edges worth half a point, loops worth a full point). A random
//! tournament assigns a probability to every game, and its mean score
//! sequence records the expected points of each player.
//!
//! The crate provides:
//!
//! * exact membership tests deciding whether a vector is a mean score
//!   sequence, on arbitrary signed graphs ([`score`]) and in the closed form
//!   available on complete graphs ([`majorize`]),
//! * three independent constructors that realize a feasible score sequence
//!   as an explicit tournament ([`hh`], [`birkhoff`]),
//! * Bradley-Terry strength fitting by moment matching ([`btfit`]),
//! * deterministic integer realization on balanced graphs ([`landau`]),
//! * a brute-force oracle used to cross-validate everything ([`oracle`]).
//!
//! All core algorithms use exact rational arithmetic; only the Bradley-Terry
//! module works in floating point. Terminology note: here negative edges are
//! the competitive games and positive edges the cooperative ones, which is
//! the reverse of part of the signed-graph literature.

pub mod birkhoff;
pub mod btfit;
pub mod hh;
pub mod landau;
pub mod majorize;
pub mod oracle;
pub mod rational;
pub mod roots;
pub mod score;
pub mod sgraph;
mod simplex;

pub use rational::Rat;

use std::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The requested operation is not defined for this root type.
    Unsupported(String),
    /// The input lies outside the feasible region.
    Infeasible(String),
    /// A stated precondition does not hold (for example, an unbalanced
    /// graph, or a boundary score where a strict interior point is needed).
    Precondition(String),
    /// A referenced edge or entity does not exist.
    NotFound(String),
    /// The instance exceeds a configured size cap.
    Budget(String),
    /// A number or data file could not be parsed.
    Parse(String),
    /// Structurally invalid data (malformed graph or tournament).
    Invalid(String),
    /// An iterative solver failed to converge within its iteration cap.
    NoConvergence { residual: f64 },
    /// An internal invariant was violated; this indicates a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Infeasible(m) => write!(f, "infeasible: {m}"),
            Error::Precondition(m) => write!(f, "precondition failed: {m}"),
            Error::NotFound(m) => write!(f, "not found: {m}"),
            Error::Budget(m) => write!(f, "size cap exceeded: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Invalid(m) => write!(f, "invalid data: {m}"),
            Error::NoConvergence { residual } => {
                write!(f, "did not converge (residual {residual:e})")
            }
            Error::Internal(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
