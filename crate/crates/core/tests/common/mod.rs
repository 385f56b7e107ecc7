//! Shared helpers for the integration suites: a small deterministic RNG,
//! exhaustive and random formula generators, and random counter-system
//! generators sized for the enumeration oracles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use relog_core::bvass::{
    enumerate_vectors, Bvass, CoverInstance, Mode, ReachInstance, SplitRule, UnaryRule,
};
use relog_core::formula::Formula;

/// SplitMix-style generator; deterministic across platforms, good enough for
/// shaking out test inputs without pulling in a dependency.
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..n`; the modulo bias is irrelevant at test
    /// sizes.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub fn flip(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// Every purely implicational formula over `atoms` with size at most
/// `max_size`, smallest first.  Sizes count atom and connective occurrences,
/// so they are always odd here.
pub fn implicational_corpus(atoms: &[&str], max_size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = atoms.iter().map(|a| Formula::atom(a).expect("plain atom")).collect();
    }
    for size in (3..=max_size).step_by(2) {
        let mut level = Vec::new();
        for left in (1..size - 1).step_by(2) {
            let right = size - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    level.push(Formula::imp(l.clone(), r.clone()));
                }
            }
        }
        by_size[size] = level;
    }
    by_size.into_iter().flatten().collect()
}

/// A random purely implicational formula of exactly `size` nodes (odd).
pub fn random_implicational(rng: &mut Rng, atoms: &[&str], size: usize) -> Formula {
    debug_assert!(size % 2 == 1);
    if size == 1 {
        let name = atoms[rng.below(atoms.len() as u64) as usize];
        return Formula::atom(name).expect("plain atom");
    }
    let left = 1 + 2 * rng.below(((size - 1) / 2) as u64) as usize;
    let right = size - 1 - left;
    Formula::imp(
        random_implicational(rng, atoms, left),
        random_implicational(rng, atoms, right),
    )
}

fn state_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("q{i}")).collect()
}

fn random_unit(rng: &mut Rng, dim: usize) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    v[rng.below(dim as u64) as usize] = if rng.flip() { 1 } else { -1 };
    v
}

/// A random ordinary expansive instance with dimension at most 3, at most 4
/// states, and at most 8 rules.
pub fn random_ordinary_expansive(rng: &mut Rng) -> ReachInstance {
    let dim = 1 + rng.below(3) as usize;
    let n = 1 + rng.below(4) as usize;
    let n_unary = 1 + rng.below(6) as usize;
    let n_split = rng.below(1 + (8 - n_unary).min(2) as u64) as usize;
    let unary = (0..n_unary)
        .map(|_| UnaryRule {
            source: rng.below(n as u64) as usize,
            vector: random_unit(rng, dim),
            target: rng.below(n as u64) as usize,
        })
        .collect();
    let splits = (0..n_split)
        .map(|_| SplitRule {
            source: rng.below(n as u64) as usize,
            left: rng.below(n as u64) as usize,
            right: rng.below(n as u64) as usize,
        })
        .collect();
    let system = Bvass::new(state_names(n), dim, unary, splits).expect("generated shape");
    let root = format!("q{}", rng.below(n as u64));
    let leaf = format!("q{}", rng.below(n as u64));
    ReachInstance { system, root_state: root, leaf_state: leaf, mode: Mode::Expansive }
}

/// A random ordinary coverability instance with dimension at most 2, at most
/// 3 states, and at most 5 rules; small enough for the comprehensive
/// translation chain.
pub fn random_ordinary_cover(rng: &mut Rng) -> CoverInstance {
    let dim = 1 + rng.below(2) as usize;
    let n = 1 + rng.below(3) as usize;
    let n_unary = 1 + rng.below(4) as usize;
    let n_split = rng.below(1 + (5 - n_unary).min(2) as u64) as usize;
    let unary = (0..n_unary)
        .map(|_| UnaryRule {
            source: rng.below(n as u64) as usize,
            vector: random_unit(rng, dim),
            target: rng.below(n as u64) as usize,
        })
        .collect();
    let splits = (0..n_split)
        .map(|_| SplitRule {
            source: rng.below(n as u64) as usize,
            left: rng.below(n as u64) as usize,
            right: rng.below(n as u64) as usize,
        })
        .collect();
    let system = Bvass::new(state_names(n), dim, unary, splits).expect("generated shape");
    let root = format!("q{}", rng.below(n as u64));
    let leaf = format!("q{}", rng.below(n as u64));
    CoverInstance { system, root_state: root, leaf_state: leaf }
}

/// A random coverability instance with small but not necessarily unit rule
/// vectors, for exercising the stateless translations.
pub fn random_plain_cover(rng: &mut Rng) -> CoverInstance {
    let dim = 1 + rng.below(2) as usize;
    let n = 1 + rng.below(3) as usize;
    let n_unary = rng.below(4) as usize;
    let n_split = rng.below(3) as usize;
    let unary = (0..n_unary)
        .map(|_| UnaryRule {
            source: rng.below(n as u64) as usize,
            vector: (0..dim).map(|_| rng.below(5) as i64 - 2).collect(),
            target: rng.below(n as u64) as usize,
        })
        .collect();
    let splits = (0..n_split)
        .map(|_| SplitRule {
            source: rng.below(n as u64) as usize,
            left: rng.below(n as u64) as usize,
            right: rng.below(n as u64) as usize,
        })
        .collect();
    let system = Bvass::new(state_names(n), dim, unary, splits).expect("generated shape");
    let root = format!("q{}", rng.below(n as u64));
    let leaf = format!("q{}", rng.below(n as u64));
    CoverInstance { system, root_state: root, leaf_state: leaf }
}

/// Runs the bottom-up enumeration once at `height` and once one level
/// deeper.  Returns the deeper table together with a flag that is true only
/// when the enumeration provably closed: both runs stayed within budget and
/// agree, so no tree of any height reaches further within the cap.
pub fn converged_vectors(
    sys: &Bvass,
    leaf_state: usize,
    mode: Mode,
    cap: u64,
    height: u32,
    budget: u64,
) -> (BTreeMap<usize, BTreeSet<Vec<u64>>>, bool) {
    let (shallow, ok1) = enumerate_vectors(sys, leaf_state, mode, cap, height, budget);
    let (deep, ok2) = enumerate_vectors(sys, leaf_state, mode, cap, height + 1, budget);
    let closed = ok1 && ok2 && shallow == deep;
    (deep, closed)
}

/// Runs `f` on a worker thread with a 64 MiB stack; deep proof terms and
/// witness trees overflow the default test stack otherwise.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(64 * 1024 * 1024)
        .spawn(f)
        .expect("spawned the worker")
        .join()
        .expect("the worker finished")
}
