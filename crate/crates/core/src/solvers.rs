//! Decision procedures for capped derivability questions.
//!
//! [`saturate`] runs a bottom-up fixpoint over configurations whose
//! coordinates stay within a cap, recording first-discovered provenance so a
//! witness tree can be materialized afterwards.  [`solve_coverability`] and
//! [`solve_reachability`] answer the standard questions within a cap;
//! [`solve_comprehensive`] additionally tracks the set of rules used along
//! each derivation as a bitmask and asks for a derivation of `(root, 0)`
//! that uses every rule.
//!
//! A `NotFoundWithinCap` answer means the capped search space is exhausted:
//! no derivation exists whose intermediate vectors all stay within the cap.
//! Budget exhaustion is reported as an error instead, never as a negative
//! answer.

use std::collections::{HashMap, VecDeque};

use crate::bvass::{
    Bvass, Config, CoverInstance, DeductionTree, Mode, ReachInstance, Step,
};
use crate::{Error, Solved};

/// Default work budget for the saturation solvers, counted in generated
/// candidate configurations.
pub const DEFAULT_SOLVER_BUDGET: u64 = 50_000_000;

/// Rough memory ceiling for saturation tables, in bytes.
const MEMORY_LIMIT: u64 = 1 << 30;

#[derive(Debug, Clone)]
enum Prov {
    Leaf,
    Unary { rule: usize, child: Config },
    Split { rule: usize, left: Config, right: Config },
    Expansion { coord: usize, child: Config },
}

/// The result of a saturation run: every configuration derivable within the
/// cap (under the requested reading), with provenance for witness
/// extraction.
pub struct Saturation {
    prov: HashMap<Config, Prov>,
    by_state: Vec<Vec<Vec<u64>>>,
}

impl Saturation {
    pub fn derivable(&self, c: &Config) -> bool {
        self.prov.contains_key(c)
    }

    /// Discovered vectors at a state, in discovery order.
    pub fn discovered(&self, state: usize) -> &[Vec<u64>] {
        &self.by_state[state]
    }

    pub fn config_count(&self) -> usize {
        self.prov.len()
    }

    /// Rebuilds the first-discovered derivation tree for a configuration.
    pub fn materialize(&self, target: &Config) -> Option<DeductionTree> {
        if !self.prov.contains_key(target) {
            return None;
        }
        enum Task {
            Enter(Config),
            Exit(Config),
        }
        let mut stack = vec![Task::Enter(target.clone())];
        let mut out: Vec<DeductionTree> = Vec::new();
        while let Some(task) = stack.pop() {
            match task {
                Task::Enter(c) => {
                    let p = self.prov.get(&c).expect("provenance is closed under children");
                    let children: Vec<Config> = match p {
                        Prov::Leaf => vec![],
                        Prov::Unary { child, .. } | Prov::Expansion { child, .. } => {
                            vec![child.clone()]
                        }
                        Prov::Split { left, right, .. } => vec![left.clone(), right.clone()],
                    };
                    stack.push(Task::Exit(c));
                    for ch in children.into_iter().rev() {
                        stack.push(Task::Enter(ch));
                    }
                }
                Task::Exit(c) => {
                    let p = self.prov.get(&c).expect("provenance is closed under children");
                    let (step, arity) = match p {
                        Prov::Leaf => (Step::Leaf, 0),
                        Prov::Unary { rule, .. } => (Step::Unary(*rule), 1),
                        Prov::Split { rule, .. } => (Step::Split(*rule), 2),
                        Prov::Expansion { coord, .. } => (Step::Expansion(*coord), 1),
                    };
                    let mut children = Vec::with_capacity(arity);
                    for _ in 0..arity {
                        children.push(out.pop().expect("child trees built first"));
                    }
                    children.reverse();
                    out.push(DeductionTree { node: c, step, children });
                }
            }
        }
        out.pop()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    None,
    AnyAtState(usize),
    Exact(usize),
}

struct Engine<'a> {
    sys: &'a Bvass,
    cap: u64,
    expansive: bool,
    budget: u64,
    work: u64,
    unary_by_target: Vec<Vec<usize>>,
    split_by_left: Vec<Vec<usize>>,
    split_by_right: Vec<Vec<usize>>,
    sat: Saturation,
    queue: VecDeque<Config>,
}

impl<'a> Engine<'a> {
    fn new(sys: &'a Bvass, cap: u64, expansive: bool, budget: u64) -> Engine<'a> {
        let n = sys.states.len();
        let mut unary_by_target = vec![Vec::new(); n];
        for (i, r) in sys.unary_rules.iter().enumerate() {
            unary_by_target[r.target].push(i);
        }
        let mut split_by_left = vec![Vec::new(); n];
        let mut split_by_right = vec![Vec::new(); n];
        for (i, r) in sys.split_rules.iter().enumerate() {
            split_by_left[r.left].push(i);
            split_by_right[r.right].push(i);
        }
        Engine {
            sys,
            cap,
            expansive,
            budget,
            work: 0,
            unary_by_target,
            split_by_left,
            split_by_right,
            sat: Saturation { prov: HashMap::new(), by_state: vec![Vec::new(); n] },
            queue: VecDeque::new(),
        }
    }

    fn tick(&mut self) -> Result<(), Error> {
        self.work += 1;
        if self.work > self.budget {
            return Err(Error::CapOverflow(format!(
                "saturation budget of {} candidates exhausted at cap {}",
                self.budget, self.cap
            )));
        }
        Ok(())
    }

    fn insert(&mut self, c: Config, prov: Prov, target: Target) -> Result<Option<Config>, Error> {
        if self.sat.prov.contains_key(&c) {
            return Ok(None);
        }
        let per_config = (self.sys.dimension as u64) * 16 + 96;
        if (self.sat.prov.len() as u64 + 1) * per_config > MEMORY_LIMIT {
            return Err(Error::CapOverflow(format!(
                "saturation table at cap {} exceeds the memory ceiling",
                self.cap
            )));
        }
        self.sat.by_state[c.state].push(c.vector.clone());
        self.sat.prov.insert(c.clone(), prov);
        self.queue.push_back(c.clone());
        let hit = match target {
            Target::None => false,
            Target::AnyAtState(q) => c.state == q,
            Target::Exact(q) => c.state == q && c.vector.iter().all(|x| *x == 0),
        };
        Ok(if hit { Some(c) } else { None })
    }

    /// Runs to fixpoint, or stops early when the target is discovered.
    fn run(&mut self, leaf_state: usize, target: Target) -> Result<Option<Config>, Error> {
        let zero = Config { state: leaf_state, vector: vec![0; self.sys.dimension] };
        if let Some(hit) = self.insert(zero, Prov::Leaf, target)? {
            return Ok(Some(hit));
        }
        while let Some(c) = self.queue.pop_front() {
            for &i in &self.unary_by_target[c.state].clone() {
                self.tick()?;
                let rule = &self.sys.unary_rules[i];
                if let Some(parent) = backward_unary(&c.vector, &rule.vector, self.cap) {
                    let pc = Config { state: rule.source, vector: parent };
                    if let Some(hit) =
                        self.insert(pc, Prov::Unary { rule: i, child: c.clone() }, target)?
                    {
                        return Ok(Some(hit));
                    }
                }
            }
            for &i in &self.split_by_left[c.state].clone() {
                let rule = self.sys.split_rules[i];
                // Pair against the partners discovered so far; later
                // partners pick up this config on their own turn.
                for j in 0..self.sat.by_state[rule.right].len() {
                    self.tick()?;
                    let total = capped_sum(&c.vector, &self.sat.by_state[rule.right][j], self.cap);
                    if let Some(total) = total {
                        let w = self.sat.by_state[rule.right][j].clone();
                        let pc = Config { state: rule.source, vector: total };
                        let prov = Prov::Split {
                            rule: i,
                            left: c.clone(),
                            right: Config { state: rule.right, vector: w },
                        };
                        if let Some(hit) = self.insert(pc, prov, target)? {
                            return Ok(Some(hit));
                        }
                    }
                }
            }
            for &i in &self.split_by_right[c.state].clone() {
                let rule = self.sys.split_rules[i];
                for j in 0..self.sat.by_state[rule.left].len() {
                    self.tick()?;
                    let total = capped_sum(&self.sat.by_state[rule.left][j], &c.vector, self.cap);
                    if let Some(total) = total {
                        let w = self.sat.by_state[rule.left][j].clone();
                        let pc = Config { state: rule.source, vector: total };
                        let prov = Prov::Split {
                            rule: i,
                            left: Config { state: rule.left, vector: w },
                            right: c.clone(),
                        };
                        if let Some(hit) = self.insert(pc, prov, target)? {
                            return Ok(Some(hit));
                        }
                    }
                }
            }
            if self.expansive {
                for coord in 0..self.sys.dimension {
                    if c.vector[coord] >= 2 {
                        self.tick()?;
                        let mut parent = c.vector.clone();
                        parent[coord] -= 1;
                        let pc = Config { state: c.state, vector: parent };
                        if let Some(hit) =
                            self.insert(pc, Prov::Expansion { coord, child: c.clone() }, target)?
                        {
                            return Ok(Some(hit));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Parent vector of a unary step read bottom-up: child minus the rule
/// vector, kept within `[0, cap]`.
fn backward_unary(child: &[u64], delta: &[i64], cap: u64) -> Option<Vec<u64>> {
    child
        .iter()
        .zip(delta.iter())
        .map(|(x, d)| {
            let v = (*x as i128) - (*d as i128);
            if v < 0 || v > cap as i128 {
                None
            } else {
                Some(v as u64)
            }
        })
        .collect()
}

fn capped_sum(a: &[u64], b: &[u64], cap: u64) -> Option<Vec<u64>> {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let v = x.checked_add(*y)?;
            if v > cap {
                None
            } else {
                Some(v)
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Packed verdict pass
//
// For small dimensions and caps, configurations pack into a single word:
// five bits per coordinate, value in the low four bits, the fifth bit spare
// so that field-wise subtraction can detect underflow without borrows
// crossing fields.  The pass answers "is the target derivable within the
// cap" without provenance; the provenance engine re-runs only when a
// witness must be produced.  Both passes insert in the same breadth-first
// order, so they discover the same configurations.

const FIELD_BITS: u32 = 5;
const FIELD_VALUE_MAX: u64 = 15;

fn packable(sys: &Bvass, cap: u64) -> bool {
    cap <= FIELD_VALUE_MAX
        && sys.dimension as u32 * FIELD_BITS <= 64
        && sys.states.len() <= u32::MAX as usize
}

fn pack(v: &[u64]) -> u64 {
    v.iter().rev().fold(0, |acc, x| (acc << FIELD_BITS) | x)
}

fn spare_mask(dim: usize) -> u64 {
    let mut m = 0u64;
    for i in 0..dim {
        m |= (1u64 << (FIELD_BITS - 1)) << (FIELD_BITS * i as u32);
    }
    m
}

/// Field-wise `x - y`, `None` when any field underflows.  Fields of `x` and
/// `y` must fit in four bits, so setting the spare bits of `x` prevents
/// borrows from ever crossing a field boundary.
fn sub_fields(x: u64, y: u64, spare: u64) -> Option<u64> {
    let diff = (x | spare).wrapping_sub(y);
    if diff & spare == spare {
        Some(diff & !spare)
    } else {
        None
    }
}

/// Hasher for packed configurations: multiplicative mixing, deterministic
/// across runs and platforms.
#[derive(Default)]
struct PackedHasher(u64);

impl std::hash::Hasher for PackedHasher {
    fn finish(&self) -> u64 {
        let mut h = self.0;
        h ^= h >> 33;
        h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
        h ^= h >> 33;
        h
    }

    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut w = [0u8; 8];
            w[..chunk.len()].copy_from_slice(chunk);
            self.write_u64(u64::from_le_bytes(w));
        }
    }

    fn write_u64(&mut self, w: u64) {
        self.0 = (self.0 ^ w).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }

    fn write_u32(&mut self, w: u32) {
        self.write_u64(w as u64);
    }

    fn write_usize(&mut self, w: usize) {
        self.write_u64(w as u64);
    }

    fn write_u8(&mut self, w: u8) {
        self.write_u64(w as u64);
    }
}

type PackedSet = std::collections::HashSet<(u32, u64), std::hash::BuildHasherDefault<PackedHasher>>;

struct PackedUnary {
    source: u32,
    sub: u64,
    add: u64,
}

/// Breadth-first closure over packed configurations.  Returns whether the
/// target was reached; `Ok(false)` means the capped space is exhausted.
fn packed_verdict(
    sys: &Bvass,
    leaf_state: usize,
    cap: u64,
    expansive: bool,
    target: Target,
    budget: u64,
) -> Result<bool, Error> {
    let dim = sys.dimension;
    let spare = spare_mask(dim);
    let cap_packed = pack(&vec![cap; dim]);
    let n = sys.states.len();

    let mut unary_by_target: Vec<Vec<PackedUnary>> = (0..n).map(|_| Vec::new()).collect();
    for r in &sys.unary_rules {
        let sub: Vec<u64> = r.vector.iter().map(|d| (*d).max(0) as u64).collect();
        let add: Vec<u64> = r.vector.iter().map(|d| (-*d).max(0) as u64).collect();
        unary_by_target[r.target].push(PackedUnary {
            source: r.source as u32,
            sub: pack(&sub),
            add: pack(&add),
        });
    }
    let mut split_by_left: Vec<Vec<(u32, u32)>> = (0..n).map(|_| Vec::new()).collect();
    let mut split_by_right: Vec<Vec<(u32, u32)>> = (0..n).map(|_| Vec::new()).collect();
    for r in &sys.split_rules {
        split_by_left[r.left].push((r.source as u32, r.right as u32));
        split_by_right[r.right].push((r.source as u32, r.left as u32));
    }

    let hit = |state: u32, packed: u64| match target {
        Target::None => false,
        Target::AnyAtState(q) => state as usize == q,
        Target::Exact(q) => state as usize == q && packed == 0,
    };

    let mut seen = PackedSet::default();
    let mut by_state: Vec<Vec<u64>> = (0..n).map(|_| Vec::new()).collect();
    let mut queue: VecDeque<(u32, u64)> = VecDeque::new();
    let mut work = 0u64;

    macro_rules! insert {
        ($state:expr, $packed:expr) => {{
            let state: u32 = $state;
            let packed: u64 = $packed;
            if seen.insert((state, packed)) {
                if seen.len() as u64 * 24 > MEMORY_LIMIT {
                    return Err(Error::CapOverflow(format!(
                        "saturation table at cap {cap} exceeds the memory ceiling"
                    )));
                }
                if hit(state, packed) {
                    return Ok(true);
                }
                by_state[state as usize].push(packed);
                queue.push_back((state, packed));
            }
        }};
    }

    macro_rules! tick {
        () => {{
            work += 1;
            if work > budget {
                return Err(Error::CapOverflow(format!(
                    "saturation budget of {budget} candidates exhausted at cap {cap}"
                )));
            }
        }};
    }

    insert!(leaf_state as u32, 0u64);
    while let Some((state, packed)) = queue.pop_front() {
        for r in &unary_by_target[state as usize] {
            tick!();
            if let Some(t) = sub_fields(packed, r.sub, spare) {
                let parent = t + r.add;
                if sub_fields(cap_packed, parent, spare).is_some() {
                    insert!(r.source, parent);
                }
            }
        }
        for &(source, sibling) in &split_by_left[state as usize] {
            for j in 0..by_state[sibling as usize].len() {
                tick!();
                let total = packed + by_state[sibling as usize][j];
                if sub_fields(cap_packed, total, spare).is_some() {
                    insert!(source, total);
                }
            }
        }
        for &(source, sibling) in &split_by_right[state as usize] {
            for j in 0..by_state[sibling as usize].len() {
                tick!();
                let total = packed + by_state[sibling as usize][j];
                if sub_fields(cap_packed, total, spare).is_some() {
                    insert!(source, total);
                }
            }
        }
        if expansive {
            for coord in 0..dim {
                let shift = FIELD_BITS * coord as u32;
                if (packed >> shift) & FIELD_VALUE_MAX >= 2 {
                    tick!();
                    insert!(state, packed - (1u64 << shift));
                }
            }
        }
    }
    Ok(false)
}

/// Computes every configuration derivable within the cap, bottom-up from
/// `(leaf_state, 0)`.
pub fn saturate(
    sys: &Bvass,
    leaf_state: usize,
    cap: u64,
    expansive: bool,
    budget: u64,
) -> Result<Saturation, Error> {
    let mut engine = Engine::new(sys, cap, expansive, budget);
    engine.run(leaf_state, Target::None)?;
    Ok(engine.sat)
}

fn resolve(sys: &Bvass, name: &str) -> Result<usize, Error> {
    sys.state_index(name)
        .ok_or_else(|| Error::ShapeMismatch(format!("state {name} is not part of the system")))
}

/// Searches for a derivation of some configuration at the root state, plain
/// reading, all coordinates within `cap`.
pub fn solve_coverability(
    inst: &CoverInstance,
    cap: u64,
    budget: u64,
) -> Result<Solved<DeductionTree>, Error> {
    let root = resolve(&inst.system, &inst.root_state)?;
    let leaf = resolve(&inst.system, &inst.leaf_state)?;
    if packable(&inst.system, cap)
        && !packed_verdict(&inst.system, leaf, cap, false, Target::AnyAtState(root), budget)?
    {
        return Ok(Solved::NotFoundWithinCap);
    }
    let mut engine = Engine::new(&inst.system, cap, false, budget);
    match engine.run(leaf, Target::AnyAtState(root))? {
        Some(hit) => Ok(Solved::Witness(
            engine.sat.materialize(&hit).expect("the hit was just inserted"),
        )),
        None => Ok(Solved::NotFoundWithinCap),
    }
}

/// Searches for a derivation of exactly `(root, 0)` under the instance's
/// reading, all coordinates within `cap`.
pub fn solve_reachability(
    inst: &ReachInstance,
    cap: u64,
    budget: u64,
) -> Result<Solved<DeductionTree>, Error> {
    match inst.mode {
        Mode::Comprehensive => {
            solve_comprehensive(&inst.system, &inst.root_state, &inst.leaf_state, cap, budget)
        }
        Mode::Plain | Mode::Expansive => {
            let root = resolve(&inst.system, &inst.root_state)?;
            let leaf = resolve(&inst.system, &inst.leaf_state)?;
            let expansive = inst.mode == Mode::Expansive;
            if packable(&inst.system, cap)
                && !packed_verdict(&inst.system, leaf, cap, expansive, Target::Exact(root), budget)?
            {
                return Ok(Solved::NotFoundWithinCap);
            }
            let mut engine = Engine::new(&inst.system, cap, expansive, budget);
            match engine.run(leaf, Target::Exact(root))? {
                Some(hit) => Ok(Solved::Witness(
                    engine.sat.materialize(&hit).expect("the hit was just inserted"),
                )),
                None => Ok(Solved::NotFoundWithinCap),
            }
        }
    }
}

type MaskedConfig = (Config, u64);

#[derive(Debug, Clone)]
enum MaskedProv {
    Leaf,
    Unary { rule: usize, child: MaskedConfig },
    Split { rule: usize, left: MaskedConfig, right: MaskedConfig },
    Expansion { coord: usize, child: MaskedConfig },
}

/// Searches for an expansive derivation of `(root, 0)` that uses every rule
/// of the system at least once (duplication steps are not rules).  Tracks a
/// per-configuration antichain of maximal used-rule masks; systems with more
/// than 64 rules are rejected.
pub fn solve_comprehensive(
    sys: &Bvass,
    root_state: &str,
    leaf_state: &str,
    cap: u64,
    budget: u64,
) -> Result<Solved<DeductionTree>, Error> {
    let nrules = sys.rule_count();
    if nrules > 64 {
        return Err(Error::StateExplosion(format!(
            "{nrules} rules exceed the 64-rule mask limit of the comprehensive solver"
        )));
    }
    let full: u64 = if nrules == 64 { u64::MAX } else { (1u64 << nrules) - 1 };
    let unary_bit = |i: usize| 1u64 << i;
    let split_bit = |i: usize| 1u64 << (sys.unary_rules.len() + i);
    let root = resolve(sys, root_state)?;
    let leaf = resolve(sys, leaf_state)?;
    let n = sys.states.len();

    let mut unary_by_target = vec![Vec::new(); n];
    for (i, r) in sys.unary_rules.iter().enumerate() {
        unary_by_target[r.target].push(i);
    }
    let mut split_by_left = vec![Vec::new(); n];
    let mut split_by_right = vec![Vec::new(); n];
    for (i, r) in sys.split_rules.iter().enumerate() {
        split_by_left[r.left].push(i);
        split_by_right[r.right].push(i);
    }

    let mut prov: HashMap<MaskedConfig, MaskedProv> = HashMap::new();
    let mut antichain: HashMap<Config, Vec<u64>> = HashMap::new();
    let mut by_state: Vec<Vec<(Vec<u64>, u64)>> = vec![Vec::new(); n];
    let mut queue: VecDeque<MaskedConfig> = VecDeque::new();
    let mut work = 0u64;

    let is_target =
        |c: &Config, m: u64| c.state == root && m == full && c.vector.iter().all(|x| *x == 0);

    // Returns true if the pair is new and not dominated.
    let insert = |c: Config,
                  m: u64,
                  p: MaskedProv,
                  prov: &mut HashMap<MaskedConfig, MaskedProv>,
                  antichain: &mut HashMap<Config, Vec<u64>>,
                  by_state: &mut Vec<Vec<(Vec<u64>, u64)>>,
                  queue: &mut VecDeque<MaskedConfig>|
     -> Result<bool, Error> {
        let masks = antichain.entry(c.clone()).or_default();
        if masks.iter().any(|e| e & m == m) {
            return Ok(false);
        }
        masks.retain(|e| e & m != *e);
        masks.push(m);
        let per_entry = (c.vector.len() as u64) * 16 + 112;
        if (prov.len() as u64 + 1) * per_entry > MEMORY_LIMIT {
            return Err(Error::CapOverflow(
                "comprehensive search table exceeds the memory ceiling".to_string(),
            ));
        }
        by_state[c.state].push((c.vector.clone(), m));
        queue.push_back((c.clone(), m));
        prov.insert((c, m), p);
        Ok(true)
    };

    let zero = Config { state: leaf, vector: vec![0; sys.dimension] };
    insert(
        zero.clone(),
        0,
        MaskedProv::Leaf,
        &mut prov,
        &mut antichain,
        &mut by_state,
        &mut queue,
    )?;
    if is_target(&zero, 0) {
        let tree = materialize_masked(&prov, &(zero, 0));
        return Ok(Solved::Witness(tree));
    }

    while let Some((c, m)) = queue.pop_front() {
        // Skip pairs whose mask has been superseded since they were queued.
        if !antichain.get(&c).map_or(false, |v| v.contains(&m)) {
            continue;
        }
        let mut candidates: Vec<(Config, u64, MaskedProv)> = Vec::new();
        for &i in &unary_by_target[c.state] {
            let rule = &sys.unary_rules[i];
            if let Some(parent) = backward_unary(&c.vector, &rule.vector, cap) {
                candidates.push((
                    Config { state: rule.source, vector: parent },
                    m | unary_bit(i),
                    MaskedProv::Unary { rule: i, child: (c.clone(), m) },
                ));
            }
        }
        for &i in &split_by_left[c.state] {
            let rule = sys.split_rules[i];
            for (w, wm) in by_state[rule.right].clone() {
                if let Some(total) = capped_sum(&c.vector, &w, cap) {
                    candidates.push((
                        Config { state: rule.source, vector: total },
                        m | wm | split_bit(i),
                        MaskedProv::Split {
                            rule: i,
                            left: (c.clone(), m),
                            right: (Config { state: rule.right, vector: w }, wm),
                        },
                    ));
                }
            }
        }
        for &i in &split_by_right[c.state] {
            let rule = sys.split_rules[i];
            for (w, wm) in by_state[rule.left].clone() {
                if let Some(total) = capped_sum(&w, &c.vector, cap) {
                    candidates.push((
                        Config { state: rule.source, vector: total },
                        m | wm | split_bit(i),
                        MaskedProv::Split {
                            rule: i,
                            left: (Config { state: rule.left, vector: w }, wm),
                            right: (c.clone(), m),
                        },
                    ));
                }
            }
        }
        for coord in 0..sys.dimension {
            if c.vector[coord] >= 2 {
                let mut parent = c.vector.clone();
                parent[coord] -= 1;
                candidates.push((
                    Config { state: c.state, vector: parent },
                    m,
                    MaskedProv::Expansion { coord, child: (c.clone(), m) },
                ));
            }
        }
        for (pc, pm, pp) in candidates {
            work += 1;
            if work > budget {
                return Err(Error::CapOverflow(format!(
                    "comprehensive budget of {budget} candidates exhausted at cap {cap}"
                )));
            }
            let fresh =
                insert(pc.clone(), pm, pp, &mut prov, &mut antichain, &mut by_state, &mut queue)?;
            if fresh && is_target(&pc, pm) {
                let tree = materialize_masked(&prov, &(pc, pm));
                return Ok(Solved::Witness(tree));
            }
        }
    }
    Ok(Solved::NotFoundWithinCap)
}

fn materialize_masked(
    prov: &HashMap<MaskedConfig, MaskedProv>,
    target: &MaskedConfig,
) -> DeductionTree {
    enum Task {
        Enter(MaskedConfig),
        Exit(MaskedConfig),
    }
    let mut stack = vec![Task::Enter(target.clone())];
    let mut out: Vec<DeductionTree> = Vec::new();
    while let Some(task) = stack.pop() {
        match task {
            Task::Enter(key) => {
                let p = prov.get(&key).expect("provenance is closed under children");
                let children: Vec<MaskedConfig> = match p {
                    MaskedProv::Leaf => vec![],
                    MaskedProv::Unary { child, .. } | MaskedProv::Expansion { child, .. } => {
                        vec![child.clone()]
                    }
                    MaskedProv::Split { left, right, .. } => vec![left.clone(), right.clone()],
                };
                stack.push(Task::Exit(key));
                for ch in children.into_iter().rev() {
                    stack.push(Task::Enter(ch));
                }
            }
            Task::Exit(key) => {
                let p = prov.get(&key).expect("provenance is closed under children");
                let (step, arity) = match p {
                    MaskedProv::Leaf => (Step::Leaf, 0),
                    MaskedProv::Unary { rule, .. } => (Step::Unary(*rule), 1),
                    MaskedProv::Split { rule, .. } => (Step::Split(*rule), 2),
                    MaskedProv::Expansion { coord, .. } => (Step::Expansion(*coord), 1),
                };
                let mut children = Vec::with_capacity(arity);
                for _ in 0..arity {
                    children.push(out.pop().expect("child trees built first"));
                }
                children.reverse();
                out.push(DeductionTree { node: key.0, step, children });
            }
        }
    }
    out.pop().expect("one root tree")
}
