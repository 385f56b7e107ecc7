//! Branching vector addition systems, with and without states.
//!
//! A stateful system ([`Bvass`]) has unary rules `q → q₁` carrying an integer
//! vector and split rules `q → q₁ + q₂`.  A derivation is a tree of
//! configurations `(state, vector)` over ℕᵈ: leaves sit at the designated
//! leaf state with the zero vector, a unary child adds the rule vector to its
//! parent, and a split parent adds its two children.  Three readings of
//! derivability are used:
//!
//! * plain — exactly the rules above;
//! * expansive — additionally, a node `(q, v+eᵢ)` with `v(i) ≥ 0` may step to
//!   `(q, v+2eᵢ)`, duplicating one unit of a nonzero coordinate;
//! * comprehensive — expansive, with the extra requirement (checked by the
//!   solvers, not the tree shape) that every rule is used at least once.
//!
//! The stateless variant ([`Bvas`]) attaches a vector to every rule instead:
//! a unary parent is `u + child` and a split parent is `u + v₁ + v₂`, with a
//! designated leaf vector.
//!
//! Checkers validate explicit derivation trees; the `enumerate_*` functions
//! are small bottom-up oracles that list every derivable configuration within
//! a coordinate cap and height bound, used to cross-validate the solvers and
//! the translations on small instances.

use std::collections::{BTreeMap, BTreeSet};

use crate::{CheckFailure, Error};

/// Reading of derivability for a stateful system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Plain,
    Expansive,
    Comprehensive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Expansive => "expansive",
            Mode::Comprehensive => "comprehensive",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        match s {
            "plain" => Some(Mode::Plain),
            "expansive" => Some(Mode::Expansive),
            "comprehensive" => Some(Mode::Comprehensive),
            _ => None,
        }
    }

    /// Whether duplication steps are admitted.
    pub fn allows_expansion(self) -> bool {
        !matches!(self, Mode::Plain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnaryRule {
    pub source: usize,
    pub vector: Vec<i64>,
    pub target: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitRule {
    pub source: usize,
    pub left: usize,
    pub right: usize,
}

/// A branching vector addition system with states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bvass {
    pub states: Vec<String>,
    pub dimension: usize,
    pub unary_rules: Vec<UnaryRule>,
    pub split_rules: Vec<SplitRule>,
    ordinary: bool,
}

impl Bvass {
    /// Builds a system, checking that rule endpoints and vector lengths are
    /// consistent and that state names are distinct and nonempty.
    pub fn new(
        states: Vec<String>,
        dimension: usize,
        unary_rules: Vec<UnaryRule>,
        split_rules: Vec<SplitRule>,
    ) -> Result<Bvass, Error> {
        let n = states.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("a system needs at least one state".to_string()));
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if s.is_empty() {
                return Err(Error::ShapeMismatch("empty state name".to_string()));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::ShapeMismatch(format!("duplicate state name {s}")));
            }
        }
        for (i, r) in unary_rules.iter().enumerate() {
            if r.source >= n || r.target >= n {
                return Err(Error::ShapeMismatch(format!("unary rule {i} mentions an unknown state")));
            }
            if r.vector.len() != dimension {
                return Err(Error::ShapeMismatch(format!(
                    "unary rule {i} has a vector of length {}, dimension is {dimension}",
                    r.vector.len()
                )));
            }
        }
        for (i, r) in split_rules.iter().enumerate() {
            if r.source >= n || r.left >= n || r.right >= n {
                return Err(Error::ShapeMismatch(format!("split rule {i} mentions an unknown state")));
            }
        }
        let ordinary = unary_rules.iter().all(|r| {
            let nonzero: Vec<&i64> = r.vector.iter().filter(|x| **x != 0).collect();
            nonzero.len() == 1 && (*nonzero[0] == 1 || *nonzero[0] == -1)
        });
        Ok(Bvass { states, dimension, unary_rules, split_rules, ordinary })
    }

    /// Whether every unary vector is a unit increment or decrement.
    pub fn is_ordinary(&self) -> bool {
        self.ordinary
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn rule_count(&self) -> usize {
        self.unary_rules.len() + self.split_rules.len()
    }
}

/// A branching vector addition system without states: rules carry vectors
/// directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bvas {
    pub dimension: usize,
    pub unary_rules: Vec<Vec<i64>>,
    pub split_rules: Vec<Vec<i64>>,
}

impl Bvas {
    pub fn new(
        dimension: usize,
        unary_rules: Vec<Vec<i64>>,
        split_rules: Vec<Vec<i64>>,
    ) -> Result<Bvas, Error> {
        for (i, u) in unary_rules.iter().enumerate() {
            if u.len() != dimension {
                return Err(Error::ShapeMismatch(format!(
                    "unary vector {i} has length {}, dimension is {dimension}",
                    u.len()
                )));
            }
        }
        for (i, u) in split_rules.iter().enumerate() {
            if u.len() != dimension {
                return Err(Error::ShapeMismatch(format!(
                    "split vector {i} has length {}, dimension is {dimension}",
                    u.len()
                )));
            }
        }
        Ok(Bvas { dimension, unary_rules, split_rules })
    }
}

/// A configuration of a stateful system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    pub state: usize,
    pub vector: Vec<u64>,
}

/// The derivation step taken at a tree node.  `Expansion` holds a 0-based
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Leaf,
    Unary(usize),
    Split(usize),
    Expansion(usize),
}

/// A derivation tree for a stateful system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeductionTree {
    pub node: Config,
    pub step: Step,
    pub children: Vec<DeductionTree>,
}

impl DeductionTree {
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            stack.extend(t.children.iter());
        }
        n
    }
}

/// A derivation tree for a stateless system; nodes carry only vectors and
/// expansions are not admitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvasTree {
    pub vector: Vec<u64>,
    pub step: Step,
    pub children: Vec<BvasTree>,
}

/// A coverability question: can some configuration at `root_state` be derived
/// with every leaf at `leaf_state` and the zero vector, under the plain
/// reading?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub system: Bvass,
    pub root_state: String,
    pub leaf_state: String,
}

/// A reachability question: is exactly `(root_state, 0)` derivable, under the
/// chosen reading?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachInstance {
    pub system: Bvass,
    pub root_state: String,
    pub leaf_state: String,
    pub mode: Mode,
}

/// A stateless coverability question: does some tree with leaves labelled
/// exactly `leaf` have a root labelled `v ≥ root` pointwise?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvasInstance {
    pub system: Bvas,
    pub root: Vec<u64>,
    pub leaf: Vec<u64>,
}

/// Identifies a rule of a stateful system for used-rule bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Unary(usize),
    Split(usize),
}

pub type RuleSet = BTreeSet<RuleId>;

/// The set of every rule identifier of a system.
pub fn full_rule_set(sys: &Bvass) -> RuleSet {
    let mut set = RuleSet::new();
    for i in 0..sys.unary_rules.len() {
        set.insert(RuleId::Unary(i));
    }
    for i in 0..sys.split_rules.len() {
        set.insert(RuleId::Split(i));
    }
    set
}

fn fail(path: &[usize], reason: String) -> CheckFailure {
    CheckFailure { path: path.to_vec(), reason }
}

fn add_vector(base: &[u64], delta: &[i64]) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(base.len());
    for (b, d) in base.iter().zip(delta.iter()) {
        let v = (*b as i128) + (*d as i128);
        if v < 0 || v > u64::MAX as i128 {
            return None;
        }
        out.push(v as u64);
    }
    Some(out)
}

fn sum_vectors(a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    a.iter().zip(b.iter()).map(|(x, y)| x.checked_add(*y)).collect()
}

/// Validates a derivation tree against a system, leaf state, and mode.
/// Returns the set of unary and split rules used (expansions are not
/// recorded).
pub fn validate_deduction_tree(
    sys: &Bvass,
    leaf_state: usize,
    mode: Mode,
    tree: &DeductionTree,
) -> Result<RuleSet, CheckFailure> {
    let mut used = RuleSet::new();
    let mut stack: Vec<(&DeductionTree, Vec<usize>)> = vec![(tree, Vec::new())];
    while let Some((t, path)) = stack.pop() {
        if t.node.state >= sys.states.len() {
            return Err(fail(&path, format!("unknown state index {}", t.node.state)));
        }
        if t.node.vector.len() != sys.dimension {
            return Err(fail(
                &path,
                format!("vector length {} does not match dimension {}", t.node.vector.len(), sys.dimension),
            ));
        }
        match t.step {
            Step::Leaf => {
                if !t.children.is_empty() {
                    return Err(fail(&path, "leaf node has children".to_string()));
                }
                if t.node.state != leaf_state {
                    return Err(fail(
                        &path,
                        format!(
                            "leaf sits at state {}, expected {}",
                            sys.states[t.node.state], sys.states[leaf_state]
                        ),
                    ));
                }
                if t.node.vector.iter().any(|x| *x != 0) {
                    return Err(fail(&path, "leaf vector is not zero".to_string()));
                }
            }
            Step::Unary(i) => {
                let rule = sys
                    .unary_rules
                    .get(i)
                    .ok_or_else(|| fail(&path, format!("unknown unary rule {i}")))?;
                if t.children.len() != 1 {
                    return Err(fail(&path, "unary step needs exactly one child".to_string()));
                }
                if t.node.state != rule.source {
                    return Err(fail(
                        &path,
                        format!("unary rule {i} starts at {}", sys.states[rule.source]),
                    ));
                }
                let child = &t.children[0];
                if child.node.state != rule.target {
                    return Err(fail(
                        &path,
                        format!("unary rule {i} moves to {}", sys.states[rule.target]),
                    ));
                }
                let expected = add_vector(&t.node.vector, &rule.vector)
                    .ok_or_else(|| fail(&path, format!("unary rule {i} drops below zero")))?;
                if child.node.vector != expected {
                    return Err(fail(&path, format!("unary rule {i} vector arithmetic is wrong")));
                }
                used.insert(RuleId::Unary(i));
            }
            Step::Split(i) => {
                let rule = sys
                    .split_rules
                    .get(i)
                    .ok_or_else(|| fail(&path, format!("unknown split rule {i}")))?;
                if t.children.len() != 2 {
                    return Err(fail(&path, "split step needs exactly two children".to_string()));
                }
                if t.node.state != rule.source {
                    return Err(fail(
                        &path,
                        format!("split rule {i} starts at {}", sys.states[rule.source]),
                    ));
                }
                let (l, r) = (&t.children[0], &t.children[1]);
                if l.node.state != rule.left || r.node.state != rule.right {
                    return Err(fail(
                        &path,
                        format!(
                            "split rule {i} moves to {} and {}",
                            sys.states[rule.left], sys.states[rule.right]
                        ),
                    ));
                }
                let total = sum_vectors(&l.node.vector, &r.node.vector)
                    .ok_or_else(|| fail(&path, "split sum overflows".to_string()))?;
                if t.node.vector != total {
                    return Err(fail(&path, format!("split rule {i} children do not sum to the node")));
                }
                used.insert(RuleId::Split(i));
            }
            Step::Expansion(coord) => {
                if !mode.allows_expansion() {
                    return Err(fail(&path, "duplication step under the plain reading".to_string()));
                }
                if coord >= sys.dimension {
                    return Err(fail(&path, format!("duplication of unknown coordinate {coord}")));
                }
                if t.children.len() != 1 {
                    return Err(fail(&path, "duplication step needs exactly one child".to_string()));
                }
                if t.node.vector[coord] == 0 {
                    return Err(fail(
                        &path,
                        format!("coordinate {} is zero and cannot be duplicated", coord + 1),
                    ));
                }
                let child = &t.children[0];
                if child.node.state != t.node.state {
                    return Err(fail(&path, "duplication step changes the state".to_string()));
                }
                let mut expected = t.node.vector.clone();
                expected[coord] = expected[coord]
                    .checked_add(1)
                    .ok_or_else(|| fail(&path, "duplication overflows".to_string()))?;
                if child.node.vector != expected {
                    return Err(fail(&path, "duplication vector arithmetic is wrong".to_string()));
                }
            }
        }
        for (j, c) in t.children.iter().enumerate() {
            let mut p = path.clone();
            p.push(j);
            stack.push((c, p));
        }
    }
    Ok(used)
}

pub fn check_deduction_tree(sys: &Bvass, leaf_state: usize, mode: Mode, tree: &DeductionTree) -> bool {
    validate_deduction_tree(sys, leaf_state, mode, tree).is_ok()
}

/// Validates a stateless derivation tree: leaves carry exactly the leaf
/// vector, a unary parent is rule-vector plus child, a split parent is
/// rule-vector plus both children.
pub fn validate_bvas_tree(sys: &Bvas, leaf: &[u64], tree: &BvasTree) -> Result<(), CheckFailure> {
    let mut stack: Vec<(&BvasTree, Vec<usize>)> = vec![(tree, Vec::new())];
    while let Some((t, path)) = stack.pop() {
        if t.vector.len() != sys.dimension {
            return Err(fail(
                &path,
                format!("vector length {} does not match dimension {}", t.vector.len(), sys.dimension),
            ));
        }
        match t.step {
            Step::Leaf => {
                if !t.children.is_empty() {
                    return Err(fail(&path, "leaf node has children".to_string()));
                }
                if t.vector != leaf {
                    return Err(fail(&path, "leaf vector differs from the designated one".to_string()));
                }
            }
            Step::Unary(i) => {
                let u = sys
                    .unary_rules
                    .get(i)
                    .ok_or_else(|| fail(&path, format!("unknown unary rule {i}")))?;
                if t.children.len() != 1 {
                    return Err(fail(&path, "unary step needs exactly one child".to_string()));
                }
                let expected = add_vector(&t.children[0].vector, u)
                    .ok_or_else(|| fail(&path, format!("unary rule {i} drops below zero")))?;
                if t.vector != expected {
                    return Err(fail(&path, format!("unary rule {i} vector arithmetic is wrong")));
                }
            }
            Step::Split(i) => {
                let u = sys
                    .split_rules
                    .get(i)
                    .ok_or_else(|| fail(&path, format!("unknown split rule {i}")))?;
                if t.children.len() != 2 {
                    return Err(fail(&path, "split step needs exactly two children".to_string()));
                }
                let total = sum_vectors(&t.children[0].vector, &t.children[1].vector)
                    .and_then(|s| add_vector(&s, u))
                    .ok_or_else(|| fail(&path, format!("split rule {i} arithmetic leaves ℕ")))?;
                if t.vector != total {
                    return Err(fail(&path, format!("split rule {i} children do not sum to the node")));
                }
            }
            Step::Expansion(_) => {
                return Err(fail(&path, "stateless trees admit no duplication steps".to_string()));
            }
        }
        for (j, c) in t.children.iter().enumerate() {
            let mut p = path.clone();
            p.push(j);
            stack.push((c, p));
        }
    }
    Ok(())
}

pub fn check_bvas_tree(sys: &Bvas, leaf: &[u64], tree: &BvasTree) -> bool {
    validate_bvas_tree(sys, leaf, tree).is_ok()
}

/// Validates a tree as a coverability witness: a plain derivation whose root
/// sits at the instance's root state, with any vector.
pub fn validate_cover_witness(inst: &CoverInstance, tree: &DeductionTree) -> Result<(), CheckFailure> {
    let root = inst
        .system
        .state_index(&inst.root_state)
        .ok_or_else(|| fail(&[], format!("unknown root state {}", inst.root_state)))?;
    let leaf = inst
        .system
        .state_index(&inst.leaf_state)
        .ok_or_else(|| fail(&[], format!("unknown leaf state {}", inst.leaf_state)))?;
    validate_deduction_tree(&inst.system, leaf, Mode::Plain, tree)?;
    if tree.node.state != root {
        return Err(fail(
            &[],
            format!("root sits at state {}, expected {}", inst.system.states[tree.node.state], inst.root_state),
        ));
    }
    Ok(())
}

/// Validates a tree as a reachability witness: a derivation under the
/// instance's mode whose root is exactly the root state with the zero vector.
/// Under the comprehensive reading, every rule of the system must be used.
pub fn validate_reach_witness(inst: &ReachInstance, tree: &DeductionTree) -> Result<(), CheckFailure> {
    let root = inst
        .system
        .state_index(&inst.root_state)
        .ok_or_else(|| fail(&[], format!("unknown root state {}", inst.root_state)))?;
    let leaf = inst
        .system
        .state_index(&inst.leaf_state)
        .ok_or_else(|| fail(&[], format!("unknown leaf state {}", inst.leaf_state)))?;
    let used = validate_deduction_tree(&inst.system, leaf, inst.mode, tree)?;
    if tree.node.state != root {
        return Err(fail(
            &[],
            format!("root sits at state {}, expected {}", inst.system.states[tree.node.state], inst.root_state),
        ));
    }
    if tree.node.vector.iter().any(|x| *x != 0) {
        return Err(fail(&[], "root vector is not zero".to_string()));
    }
    if inst.mode == Mode::Comprehensive {
        for id in full_rule_set(&inst.system) {
            if !used.contains(&id) {
                let what = match id {
                    RuleId::Unary(i) => format!("unary rule {i}"),
                    RuleId::Split(i) => format!("split rule {i}"),
                };
                return Err(fail(&[], format!("{what} is never used")));
            }
        }
    }
    Ok(())
}

/// Validates a stateless tree as a coverability witness: leaves carry the
/// instance's leaf vector and the root dominates its root vector pointwise.
pub fn validate_bvas_cover_witness(inst: &BvasInstance, tree: &BvasTree) -> Result<(), CheckFailure> {
    validate_bvas_tree(&inst.system, &inst.leaf, tree)?;
    if tree.vector.len() != inst.root.len()
        || tree.vector.iter().zip(inst.root.iter()).any(|(x, y)| x < y)
    {
        return Err(fail(&[], "root vector does not dominate the target".to_string()));
    }
    Ok(())
}

/// Bottom-up enumeration of every derivable configuration whose coordinates
/// stay within `cap` using trees of height at most `height`, together with
/// the set of rules each tree uses.  Returns the table keyed by state and a
/// completeness flag: `false` means the work budget was exhausted and the
/// table is only an under-approximation.
pub fn enumerate_trees(
    sys: &Bvass,
    leaf_state: usize,
    mode: Mode,
    cap: u64,
    height: u32,
    budget: u64,
) -> (BTreeMap<usize, BTreeSet<(Vec<u64>, RuleSet)>>, bool) {
    let mut table: BTreeMap<usize, BTreeSet<(Vec<u64>, RuleSet)>> = BTreeMap::new();
    table
        .entry(leaf_state)
        .or_default()
        .insert((vec![0; sys.dimension], RuleSet::new()));
    let mut work = 0u64;
    for _ in 0..height {
        let snapshot = table.clone();
        let mut grew = false;
        for (i, rule) in sys.unary_rules.iter().enumerate() {
            if let Some(items) = snapshot.get(&rule.target) {
                for (w, used) in items {
                    work += 1;
                    if work > budget {
                        return (table, false);
                    }
                    let parent: Option<Vec<u64>> = w
                        .iter()
                        .zip(rule.vector.iter())
                        .map(|(x, d)| {
                            let v = (*x as i128) - (*d as i128);
                            if v < 0 || v > cap as i128 {
                                None
                            } else {
                                Some(v as u64)
                            }
                        })
                        .collect();
                    if let Some(p) = parent {
                        let mut set = used.clone();
                        set.insert(RuleId::Unary(i));
                        grew |= table.entry(rule.source).or_default().insert((p, set));
                    }
                }
            }
        }
        for (i, rule) in sys.split_rules.iter().enumerate() {
            if let (Some(ls), Some(rs)) = (snapshot.get(&rule.left), snapshot.get(&rule.right)) {
                for (wl, ul) in ls {
                    for (wr, ur) in rs {
                        work += 1;
                        if work > budget {
                            return (table, false);
                        }
                        let total: Option<Vec<u64>> = wl
                            .iter()
                            .zip(wr.iter())
                            .map(|(x, y)| {
                                let v = x.checked_add(*y)?;
                                if v > cap {
                                    None
                                } else {
                                    Some(v)
                                }
                            })
                            .collect();
                        if let Some(p) = total {
                            let mut set: RuleSet = ul.union(ur).cloned().collect();
                            set.insert(RuleId::Split(i));
                            grew |= table.entry(rule.source).or_default().insert((p, set));
                        }
                    }
                }
            }
        }
        if mode.allows_expansion() {
            for (state, items) in snapshot.iter() {
                for (w, used) in items {
                    for coord in 0..sys.dimension {
                        if w[coord] >= 2 {
                            work += 1;
                            if work > budget {
                                return (table, false);
                            }
                            let mut p = w.clone();
                            p[coord] -= 1;
                            grew |= table.entry(*state).or_default().insert((p, used.clone()));
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    (table, true)
}

/// Like [`enumerate_trees`] but without used-rule bookkeeping, so the table
/// stays small; suitable as a plain or expansive derivability oracle.
pub fn enumerate_vectors(
    sys: &Bvass,
    leaf_state: usize,
    mode: Mode,
    cap: u64,
    height: u32,
    budget: u64,
) -> (BTreeMap<usize, BTreeSet<Vec<u64>>>, bool) {
    let mut table: BTreeMap<usize, BTreeSet<Vec<u64>>> = BTreeMap::new();
    table.entry(leaf_state).or_default().insert(vec![0; sys.dimension]);
    let mut work = 0u64;
    for _ in 0..height {
        let snapshot = table.clone();
        let mut grew = false;
        for rule in sys.unary_rules.iter() {
            if let Some(items) = snapshot.get(&rule.target) {
                for w in items {
                    work += 1;
                    if work > budget {
                        return (table, false);
                    }
                    let parent: Option<Vec<u64>> = w
                        .iter()
                        .zip(rule.vector.iter())
                        .map(|(x, d)| {
                            let v = (*x as i128) - (*d as i128);
                            if v < 0 || v > cap as i128 {
                                None
                            } else {
                                Some(v as u64)
                            }
                        })
                        .collect();
                    if let Some(p) = parent {
                        grew |= table.entry(rule.source).or_default().insert(p);
                    }
                }
            }
        }
        for rule in sys.split_rules.iter() {
            if let (Some(ls), Some(rs)) = (snapshot.get(&rule.left), snapshot.get(&rule.right)) {
                for wl in ls {
                    for wr in rs {
                        work += 1;
                        if work > budget {
                            return (table, false);
                        }
                        let total: Option<Vec<u64>> = wl
                            .iter()
                            .zip(wr.iter())
                            .map(|(x, y)| {
                                let v = x.checked_add(*y)?;
                                if v > cap {
                                    None
                                } else {
                                    Some(v)
                                }
                            })
                            .collect();
                        if let Some(p) = total {
                            grew |= table.entry(rule.source).or_default().insert(p);
                        }
                    }
                }
            }
        }
        if mode.allows_expansion() {
            for (state, items) in snapshot.iter() {
                for w in items {
                    for coord in 0..sys.dimension {
                        if w[coord] >= 2 {
                            work += 1;
                            if work > budget {
                                return (table, false);
                            }
                            let mut p = w.clone();
                            p[coord] -= 1;
                            grew |= table.entry(*state).or_default().insert(p);
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    (table, true)
}

/// Bottom-up enumeration oracle for stateless systems under the plain
/// reading.
pub fn enumerate_bvas_vectors(
    sys: &Bvas,
    leaf: &[u64],
    cap: u64,
    height: u32,
    budget: u64,
) -> (BTreeSet<Vec<u64>>, bool) {
    let mut table: BTreeSet<Vec<u64>> = BTreeSet::new();
    if leaf.iter().all(|x| *x <= cap) {
        table.insert(leaf.to_vec());
    }
    let mut work = 0u64;
    for _ in 0..height {
        let snapshot = table.clone();
        let mut grew = false;
        for u in sys.unary_rules.iter() {
            for w in snapshot.iter() {
                work += 1;
                if work > budget {
                    return (table, false);
                }
                let parent: Option<Vec<u64>> = w
                    .iter()
                    .zip(u.iter())
                    .map(|(x, d)| {
                        let v = (*x as i128) + (*d as i128);
                        if v < 0 || v > cap as i128 {
                            None
                        } else {
                            Some(v as u64)
                        }
                    })
                    .collect();
                if let Some(p) = parent {
                    grew |= table.insert(p);
                }
            }
        }
        for u in sys.split_rules.iter() {
            for wl in snapshot.iter() {
                for wr in snapshot.iter() {
                    work += 1;
                    if work > budget {
                        return (table, false);
                    }
                    let total: Option<Vec<u64>> = wl
                        .iter()
                        .zip(wr.iter())
                        .zip(u.iter())
                        .map(|((x, y), d)| {
                            let v = (*x as i128) + (*y as i128) + (*d as i128);
                            if v < 0 || v > cap as i128 {
                                None
                            } else {
                                Some(v as u64)
                            }
                        })
                        .collect();
                    if let Some(p) = total {
                        grew |= table.insert(p);
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    (table, true)
}
