//! Provers and counter-system toolkit for the implicational relevance logic R→.
//!
//! The crate has three layers:
//!
//! * **Calculi** — the sequent calculus for R→ ([`lr`]) with its multiplicative
//!   extension (fusion `∘` and the unit `t`), and the focusing calculus
//!   ([`fr`]) together with executable proof transformations between the two
//!   (identity expansion, right-implication inversion, mix elimination,
//!   focalization, defocusing).
//! * **Counter systems** — branching vector addition systems with states
//!   ([`bvass`]), their stateless variant, deduction-tree semantics (plain,
//!   expansive, and comprehensive rule-usage accounting), independent witness
//!   checkers, brute-force enumerators, and cap-bounded saturation solvers
//!   ([`solvers`]) with completeness-threshold reporting ([`bounds`]).
//! * **Reductions** — the translations connecting the two worlds
//!   ([`reductions`]): formulas to branching counter systems implementing
//!   backward proof search, expansive reachability to coverability,
//!   coverability to comprehensive reachability, comprehensive reachability
//!   back to formulas, the stateful/stateless translations in both directions,
//!   and normalization to unit-vector rules.
//!
//! Text formats for formulas, sequents, proofs, systems, and witnesses live in
//! [`textio`]. All operations are deterministic: identical inputs produce
//! byte-identical artifacts.

pub mod bounds;
pub mod bvass;
pub mod formula;
pub mod fr;
pub mod lr;
pub mod multiset;
pub mod reductions;
pub mod solvers;
pub mod textio;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed concrete syntax (formulas, sequents); byte offset of the
    /// offending position plus a description of what was expected there.
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    /// Malformed line-oriented input (system, proof, or witness files).
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
    /// An identifier collides with a reserved token of the surface syntax.
    #[error("reserved name: {0:?} cannot be used as an atom")]
    ReservedName(String),
    /// A search exceeded its configured node budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// A saturation request exceeds the configured memory budget.
    #[error("cap overflow: {0}")]
    CapOverflow(String),
    /// Rule-usage bookkeeping would exceed the representable range.
    #[error("state explosion: {0}")]
    StateExplosion(String),
    /// A construction requiring unit-vector rules was given a general system.
    #[error("system is not ordinary: {0}")]
    NotOrdinary(String),
    /// Distinct states/coordinates would map to the same atom.
    #[error("atom collision: {0}")]
    AtomCollision(String),
    /// A proof object violates its calculus (reported by transformations that
    /// require checker-valid inputs).
    #[error("invalid proof: {0}")]
    InvalidProof(String),
    /// Inputs do not fit the shape contract of an operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A proof-search or transformation operation was asked to handle a
    /// connective outside its fragment.
    #[error("unsupported connective: {0}")]
    UnsupportedConnective(String),
}

/// Location-carrying diagnostic for structural validation of proof objects and
/// deduction trees. `path` lists child indices from the root down to the first
/// offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at node ")?;
        if self.path.is_empty() {
            write!(f, "<root>")?;
        } else {
            let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", path.join("."))?;
        }
        write!(f, ": {}", self.reason)
    }
}

/// Outcome of a complete provability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proved<P> {
    Provable(P),
    NotProvable,
}

impl<P> Proved<P> {
    pub fn is_provable(&self) -> bool {
        matches!(self, Proved::Provable(_))
    }

    pub fn proof(&self) -> Option<&P> {
        match self {
            Proved::Provable(p) => Some(p),
            Proved::NotProvable => None,
        }
    }

    pub fn into_proof(self) -> Option<P> {
        match self {
            Proved::Provable(p) => Some(p),
            Proved::NotProvable => None,
        }
    }
}

/// Outcome of a depth-bounded search: a negative answer only rules out proofs
/// within the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedVerdict {
    Provable,
    NotProvableWithinDepth,
}

impl BoundedVerdict {
    pub fn is_provable(self) -> bool {
        matches!(self, BoundedVerdict::Provable)
    }
}

/// Outcome of a cap-bounded solver query: a negative answer is conclusive only
/// when the cap meets the completeness threshold for the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solved<W> {
    Witness(W),
    NotFoundWithinCap,
}

impl<W> Solved<W> {
    pub fn is_witness(&self) -> bool {
        matches!(self, Solved::Witness(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Solved::Witness(w) => Some(w),
            Solved::NotFoundWithinCap => None,
        }
    }
}
