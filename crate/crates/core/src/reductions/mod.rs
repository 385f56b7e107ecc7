//! Translations between provability and counter-system problems.
//!
//! Each translation consumes an instance of one problem and produces an
//! equivalent instance of another, together with a [`SideMap`] that explains
//! the output in terms of the input.  The available directions are:
//!
//! * [`formula_to_bvass`] compiles proof search for a formula into expansive
//!   reachability, one coordinate per subformula;
//! * [`expansive_to_coverability`] absorbs duplication steps into a product
//!   of the state space with sets of coordinates;
//! * [`coverability_to_comprehensive`] adds a root gadget under which every
//!   rule can be exercised, so that the every-rule-used reading coincides
//!   with plain coverability;
//! * [`comprehensive_to_formula`] encodes rules as implicational hypotheses,
//!   closing the loop back to provability;
//! * [`bvass_to_bvas`] and [`bvas_to_bvass`] move between stateful and
//!   stateless systems, encoding states as pairs of counter values;
//! * [`to_ordinary`] replaces wide unary vectors by chains of unit steps.

pub mod comprehensive;
pub mod coverability;
pub mod formula;
pub mod ordinary;
pub mod stateless;

pub use comprehensive::coverability_to_comprehensive;
pub use coverability::expansive_to_coverability;
pub use formula::{comprehensive_to_formula, formula_to_bvass};
pub use ordinary::to_ordinary;
pub use stateless::{bvas_to_bvass, bvass_to_bvas};

use std::collections::BTreeSet;

/// A correspondence table emitted alongside a translated instance: ordered
/// pairs of (name in the output, meaning in terms of the input).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SideMap {
    pub pairs: Vec<(String, String)>,
}

impl SideMap {
    pub fn new() -> SideMap {
        SideMap { pairs: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.pairs.push((key.into(), value.into()));
    }

    /// First value recorded under `key`, if any.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// A set of retained coordinates (0-based); applying it projects a vector
/// onto those coordinates in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMask(pub BTreeSet<usize>);

impl CoordinateMask {
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.0.iter().map(|i| v[*i]).collect()
    }
}
