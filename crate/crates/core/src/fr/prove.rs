//! Decision procedure for the focused calculus.
//!
//! Contraction makes backward search in the focused calculus nonterminating
//! if contexts are explored literally, so the engine reasons about context
//! *intervals* instead of individual contexts.  A query carries a floor
//! `man` (copies that must be consumed) and a ceiling `allow` (copies that
//! may be consumed); a solution is an interval `[lo, hi]` of contexts, every
//! member of which is provable, together with a plan from which a concrete
//! proof for any member can be rebuilt.
//!
//! For an implication goal the single invertible right rule is applied.  For
//! an atomic goal the engine picks a context formula whose spine ends in the
//! goal atom, focuses it, and solves the spine premises left to right.  The
//! floor still owed is threaded through the premises; each premise may also
//! draw one fresh copy of any available formula, which is sound because the
//! contraction steps that pay for duplicated copies are materialized below
//! the focus when the proof is rebuilt, and suffices because a premise can
//! re-duplicate internally whatever single seed copy it receives.
//!
//! Queries recurse into one another, so the engine computes their solution
//! sets as a joint least fixpoint with a worklist: evaluating a query answers
//! its subqueries from their accumulated tables and records the dependency,
//! and whenever a table gains a solution exactly the queries that consulted
//! it are re-evaluated.  Every query's floors are bounded by the initial
//! sequent and its ceilings by floors plus one seed copy per distinct
//! formula, so the query space is finite, tables only grow, and the worklist
//! drains.  A consumability filter additionally discards context formulas
//! whose spine can never end in a reachable goal atom.
//!
//! All formulas that can ever appear in a context or goal are subformulas of
//! the initial sequent, so they are interned up front and contexts are count
//! vectors over the interned space; multiset arithmetic, query hashing and
//! the consumability fixpoint then run on flat integers instead of formula
//! trees.

use super::{FocusSequent, FrProof, FrRule};
use crate::formula::Formula;
use crate::multiset::Multiset;
use crate::{Error, Proved};
use std::collections::{HashMap, VecDeque};
use std::hash::{BuildHasherDefault, Hasher};
use std::rc::Rc;

/// Work budget for [`fr_prove`]; exceeding it yields [`Error::ResourceLimit`].
pub const DEFAULT_FR_BUDGET: u64 = 5_000_000;

/// Interned formula identifier, an index into [`Space::arena`].
type Fid = u32;

/// Context as a count vector over the interned subformula space.
type Ctx = Box<[u32]>;

pub fn fr_prove(sequent: &FocusSequent) -> Result<Proved<FrProof>, Error> {
    fr_prove_with_budget(sequent, DEFAULT_FR_BUDGET)
}

pub fn fr_prove_with_budget(
    sequent: &FocusSequent,
    budget: u64,
) -> Result<Proved<FrProof>, Error> {
    let mut mentioned: Vec<&Formula> = sequent.antecedent.support().collect();
    if let Some(d) = &sequent.focus {
        mentioned.push(d);
    }
    mentioned.push(&sequent.succedent);
    for f in &mentioned {
        if !f.is_pure_implicational() {
            return Err(Error::UnsupportedConnective(format!(
                "focused search handles only implications over atoms, got {f}"
            )));
        }
    }
    let mut sp = Space::default();
    for f in &mentioned {
        sp.intern(f);
    }
    let mut eng = Engine {
        sp: &sp,
        ids: HashMap::default(),
        queries: Vec::new(),
        table: Vec::new(),
        dependents: Vec::new(),
        queued: Vec::new(),
        worklist: VecDeque::new(),
        gen: 1,
        last_gen: Vec::new(),
        budget,
        used: 0,
    };
    match &sequent.focus {
        Some(d) => {
            // A focused sequent commits to decomposing `d` to its spine end,
            // so its head atom must be the succedent and the context must be
            // split exactly over the spine premises.
            if !sequent.succedent.is_atom() || *d.head() != sequent.succedent {
                return Ok(Proved::NotProvable);
            }
            let gamma = sp.ctx_of(&sequent.antecedent);
            let goal = sp.fid(&sequent.succedent);
            let args = sp.args[sp.fid(d) as usize].clone();
            loop {
                eng.drain(None)?;
                if let Some(chosen) = eng.exact_spine(&gamma, &args)? {
                    let xs = distribute(&gamma, &chosen);
                    let proof = spine_proof(&sp, goal, &args, &xs, &chosen);
                    debug_assert!(super::check_fr_proof(&proof));
                    return Ok(Proved::Provable(proof));
                }
                // The failed attempt may have demanded queries nobody had
                // posed before; once it no longer does, the tables are final
                // and the failure is definitive.
                if eng.worklist.is_empty() {
                    return Ok(Proved::NotProvable);
                }
            }
        }
        None => {
            let ante = sp.ctx_of(&sequent.antecedent);
            let goal = sp.fid(&sequent.succedent);
            eng.demand(ante.clone(), ante.clone(), goal, None)?;
            eng.drain(Some(0))?;
            let sols = eng.demand(ante.clone(), ante.clone(), goal, None)?;
            if let Some(sol) = sols.first() {
                let proof = build(&sp, &ante, goal, &sol.plan);
                debug_assert!(super::check_fr_proof(&proof));
                return Ok(Proved::Provable(proof));
            }
            Ok(Proved::NotProvable)
        }
    }
}

/// Temporary diagnostic entry point: run the unfocused engine to fixpoint
/// and report table statistics instead of a proof.
#[doc(hidden)]
pub fn fr_debug_stats(sequent: &FocusSequent, budget: u64) -> Result<String, Error> {
    let mut sp = Space::default();
    for f in sequent.antecedent.support() {
        sp.intern(f);
    }
    sp.intern(&sequent.succedent);
    let mut eng = Engine {
        sp: &sp,
        ids: HashMap::default(),
        queries: Vec::new(),
        table: Vec::new(),
        dependents: Vec::new(),
        queued: Vec::new(),
        worklist: VecDeque::new(),
        gen: 1,
        last_gen: Vec::new(),
        budget,
        used: 0,
    };
    let ante = sp.ctx_of(&sequent.antecedent);
    let goal = sp.fid(&sequent.succedent);
    eng.demand(ante.clone(), ante.clone(), goal, None)?;
    let res = eng.drain(None);
    let max_chain = eng.table.iter().map(|t| t.len()).max().unwrap_or(0);
    let total: usize = eng.table.iter().map(|t| t.len()).sum();
    Ok(format!(
        "arena {} queries {} ticks {} max_chain {} total_sols {} drained {}",
        sp.len(),
        eng.queries.len(),
        eng.used,
        max_chain,
        total,
        res.is_ok()
    ))
}

/// The interned subformula closure of the initial sequent, with per-formula
/// spine data precomputed.
#[derive(Default)]
struct Space {
    arena: Vec<Formula>,
    index: HashMap<Formula, Fid>,
    /// Spine head atom of each formula (an atom is its own head).
    head: Vec<Fid>,
    /// Uncurried spine arguments of each formula, outermost first.
    args: Vec<Vec<Fid>>,
    /// Implication decomposition, `None` for atoms.
    imp: Vec<Option<(Fid, Fid)>>,
}

impl Space {
    fn intern(&mut self, f: &Formula) -> Fid {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let decomposed = match f {
            Formula::Atom(_) => None,
            Formula::Imp(a, b) => Some((self.intern(a), self.intern(b))),
            _ => unreachable!("interned formulas are pure implicational"),
        };
        let i = self.arena.len() as Fid;
        self.arena.push(f.clone());
        self.index.insert(f.clone(), i);
        match decomposed {
            None => {
                self.head.push(i);
                self.args.push(Vec::new());
                self.imp.push(None);
            }
            Some((ia, ib)) => {
                self.head.push(self.head[ib as usize]);
                let mut args = Vec::with_capacity(1 + self.args[ib as usize].len());
                args.push(ia);
                args.extend_from_slice(&self.args[ib as usize]);
                self.args.push(args);
                self.imp.push(Some((ia, ib)));
            }
        }
        i
    }

    fn fid(&self, f: &Formula) -> Fid {
        self.index[f]
    }

    fn len(&self) -> usize {
        self.arena.len()
    }

    fn zero(&self) -> Ctx {
        vec![0u32; self.len()].into_boxed_slice()
    }

    fn singleton(&self, i: Fid) -> Ctx {
        let mut v = self.zero();
        v[i as usize] = 1;
        v
    }

    fn ctx_of(&self, ms: &Multiset<Formula>) -> Ctx {
        let mut v = self.zero();
        for (f, m) in ms.iter() {
            v[self.index[f] as usize] = m;
        }
        v
    }

    fn multiset_of(&self, v: &Ctx) -> Multiset<Formula> {
        let mut ms = Multiset::new();
        for (i, &c) in v.iter().enumerate() {
            if c > 0 {
                ms.insert_n(self.arena[i].clone(), c);
            }
        }
        ms
    }
}

fn plus(a: &Ctx, b: &Ctx) -> Ctx {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn saturating_sub(a: &Ctx, b: &Ctx) -> Ctx {
    a.iter().zip(b.iter()).map(|(x, y)| x.saturating_sub(*y)).collect()
}

fn pointwise_max(a: &Ctx, b: &Ctx) -> Ctx {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

fn pointwise_min(a: &Ctx, b: &Ctx) -> Ctx {
    a.iter().zip(b.iter()).map(|(x, y)| *x.min(y)).collect()
}

fn support_ones(a: &Ctx) -> Ctx {
    a.iter().map(|&x| x.min(1)).collect()
}

fn is_subset(a: &Ctx, b: &Ctx) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

fn is_empty(a: &Ctx) -> bool {
    a.iter().all(|&x| x == 0)
}

fn add_one(a: &Ctx, i: Fid) -> Ctx {
    let mut v = a.clone();
    v[i as usize] += 1;
    v
}

fn sub_one(a: &Ctx, i: Fid) -> Ctx {
    debug_assert!(a[i as usize] > 0, "removed copy exists");
    let mut v = a.clone();
    v[i as usize] -= 1;
    v
}

/// An interval of provable contexts together with its rebuild plan.
#[derive(Clone)]
struct Sol {
    lo: Rc<Ctx>,
    hi: Rc<Ctx>,
    plan: Rc<PlanNode>,
    /// Monotone insertion stamp; lets a re-evaluated query skip premise
    /// combinations it has already explored.
    gen: u64,
    /// Total counts of `lo` and `hi`, a cheap pre-filter for subsumption.
    lo_w: u64,
    hi_w: u64,
}

fn weight(x: &Ctx) -> u64 {
    x.iter().map(|&c| u64::from(c)).sum()
}

enum PlanNode {
    /// Apply the right implication rule and continue.
    ImpR(Rc<PlanNode>),
    /// Focus `target` and solve its spine premises with the recorded
    /// per-premise solutions.
    Spine { target: Fid, premises: Vec<Sol> },
}

type Key = (Ctx, Ctx, Fid);

/// Shared inputs of one spine enumeration: the focused candidate, the premise
/// solution tables, freshness and ceiling summaries, and the query bounds.
struct SpineCx<'a> {
    d: Fid,
    per_premise: &'a [Vec<Sol>],
    fresh_below: &'a [bool],
    suffix_cap: &'a [Ctx],
    man: &'a Ctx,
    allow: &'a Ctx,
    seen_gen: u64,
}

/// Whether `partial + cap` reaches `man` everywhere.
fn covers(partial: &Ctx, cap: &Ctx, man: &Ctx) -> bool {
    man.iter()
        .zip(partial.iter().zip(cap.iter()))
        .all(|(&m, (&p, &c))| m <= p + c)
}

/// Multiply-and-fold hasher for interned query keys; the default hasher's
/// per-byte processing dominates profiles on wide count vectors.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u32(&mut self, x: u32) {
        self.0 = (self.0 ^ u64::from(x)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }

    fn write_usize(&mut self, x: usize) {
        self.0 = (self.0 ^ x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }

    fn finish(&self) -> u64 {
        let mut h = self.0;
        h ^= h >> 33;
        h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
        h ^= h >> 33;
        h
    }
}

struct Engine<'s> {
    sp: &'s Space,
    /// Interned query identities; all bookkeeping below is per id.
    ids: HashMap<Rc<Key>, usize, BuildHasherDefault<KeyHasher>>,
    queries: Vec<Rc<Key>>,
    /// Accumulated interval solutions, an antichain per query.
    table: Vec<Vec<Sol>>,
    /// Reverse dependencies: queries to re-evaluate when this table grows.
    dependents: Vec<Vec<usize>>,
    queued: Vec<bool>,
    worklist: VecDeque<usize>,
    /// Next insertion stamp for table solutions.
    gen: u64,
    /// Stamp horizon at each query's latest evaluation; older solutions have
    /// already been combined.
    last_gen: Vec<u64>,
    budget: u64,
    used: u64,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<(), Error> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::ResourceLimit(format!(
                "focused search exceeded its budget of {} steps",
                self.budget
            )));
        }
        Ok(())
    }

    /// Currently known interval solutions for `man <= X <= allow`,
    /// `X ⊩ goal`.  A first demand enqueues the query for evaluation; `by`
    /// registers the asking query for re-evaluation when this table grows.
    fn demand(
        &mut self,
        man: Ctx,
        allow: Ctx,
        goal: Fid,
        by: Option<usize>,
    ) -> Result<Vec<Sol>, Error> {
        self.tick()?;
        let key = (man, allow, goal);
        let id = match self.ids.get(&key) {
            Some(&id) => id,
            None => {
                let id = self.queries.len();
                let key = Rc::new(key);
                self.ids.insert(Rc::clone(&key), id);
                self.queries.push(key);
                self.table.push(Vec::new());
                self.dependents.push(Vec::new());
                self.queued.push(true);
                self.last_gen.push(0);
                self.worklist.push_back(id);
                id
            }
        };
        if let Some(asker) = by {
            if !self.dependents[id].contains(&asker) {
                self.dependents[id].push(asker);
            }
        }
        Ok(self.table[id].clone())
    }

    /// Run queued evaluations until no table grows any further, or until the
    /// `stop` query has a solution; a provable verdict needs no saturation.
    fn drain(&mut self, stop: Option<usize>) -> Result<(), Error> {
        loop {
            if let Some(r) = stop {
                if !self.table[r].is_empty() {
                    return Ok(());
                }
            }
            let Some(id) = self.worklist.pop_front() else {
                return Ok(());
            };
            self.queued[id] = false;
            let sols = self.evaluate(id)?;
            let entry = &mut self.table[id];
            let mut grew = false;
            for mut s in sols {
                s.gen = self.gen;
                self.gen += 1;
                grew |= insert_sol(entry, s);
            }
            if grew {
                for i in 0..self.dependents[id].len() {
                    let dep = self.dependents[id][i];
                    if !self.queued[dep] {
                        self.queued[dep] = true;
                        self.worklist.push_back(dep);
                    }
                }
            }
        }
    }

    /// One evaluation of a query against the current tables.  Deterministic
    /// in the table state, so re-running after a dependency grew re-derives
    /// the old solutions and possibly new ones.
    fn evaluate(&mut self, id: usize) -> Result<Vec<Sol>, Error> {
        self.tick()?;
        let sp = self.sp;
        let seen_gen = self.last_gen[id];
        self.last_gen[id] = self.gen;
        let key = Rc::clone(&self.queries[id]);
        let (man, allow, goal) = (&key.0, &key.1, key.2);
        if let Some((a, b)) = sp.imp[goal as usize] {
            let subs = self.demand(add_one(man, a), add_one(allow, a), b, Some(id))?;
            let mapped = subs
                .into_iter()
                .map(|s| {
                    debug_assert!(
                        s.lo[a as usize] > 0 && s.hi[a as usize] > 0,
                        "solution bounds contain the peeled source"
                    );
                    Sol {
                        lo: Rc::new(sub_one(&s.lo, a)),
                        hi: Rc::new(sub_one(&s.hi, a)),
                        plan: Rc::new(PlanNode::ImpR(s.plan)),
                        gen: 0,
                        lo_w: s.lo_w - 1,
                        hi_w: s.hi_w - 1,
                    }
                })
                .collect();
            return Ok(mapped);
        }
        let allow = match consumable(sp, man, allow, goal) {
            Some(filtered) => filtered,
            None => return Ok(Vec::new()),
        };
        let seeds = support_ones(&allow);
        let mut sols: Vec<Sol> = Vec::new();
        for d in 0..sp.len() as Fid {
            if allow[d as usize] == 0 || sp.head[d as usize] != goal {
                continue;
            }
            let args = &sp.args[d as usize];
            if args.is_empty() {
                // The goal atom itself: Focus plus the axiom consume exactly
                // one copy and nothing else.
                let unit = sp.singleton(d);
                let lo = pointwise_max(man, &unit);
                let hi = pointwise_min(&allow, &unit);
                if is_subset(&lo, &hi) {
                    let lo_w = weight(&lo);
                    let hi_w = weight(&hi);
                    insert_sol(
                        &mut sols,
                        Sol {
                            lo: Rc::new(lo),
                            hi: Rc::new(hi),
                            plan: Rc::new(PlanNode::Spine { target: d, premises: Vec::new() }),
                            gen: 0,
                            lo_w,
                            hi_w,
                        },
                    );
                }
            } else {
                // Every premise shares one ceiling: the floor owed beyond the
                // focused copy plus one seed copy per available formula.  The
                // final interval check rejects combinations whose ceilings
                // fail to cover the floor, so no per-premise floor threading
                // is needed and premise queries depend only on the argument
                // formula.
                let base = plus(&saturating_sub(man, &sp.singleton(d)), &seeds);
                let mut per_premise = Vec::with_capacity(args.len());
                for &arg in args {
                    let allow_j = consumable(sp, &sp.zero(), &base, arg)
                        .expect("an empty floor always passes the consumability filter");
                    per_premise.push(self.demand(sp.zero(), allow_j, arg, Some(id))?);
                }
                if per_premise.iter().any(|l| l.is_empty()) {
                    continue;
                }
                // `fresh_below[j]`: some premise at position >= j gained a
                // solution since this query's previous evaluation; purely
                // stale combinations were already explored back then.
                let mut fresh_below = vec![false; args.len() + 1];
                for j in (0..args.len()).rev() {
                    fresh_below[j] = fresh_below[j + 1]
                        || per_premise[j].iter().any(|s| s.gen >= seen_gen);
                }
                // `suffix_cap[j]`: the most the premises at positions >= j
                // could still contribute to the ceiling, for pruning floor
                // coverage failures early.
                let mut suffix_cap = vec![sp.zero(); args.len() + 1];
                for j in (0..args.len()).rev() {
                    let mut hi_max = sp.zero();
                    for s in &per_premise[j] {
                        hi_max = pointwise_max(&hi_max, &s.hi);
                    }
                    suffix_cap[j] = plus(&suffix_cap[j + 1], &hi_max);
                }
                let unit = sp.singleton(d);
                let cx = SpineCx {
                    d,
                    per_premise: &per_premise,
                    fresh_below: &fresh_below,
                    suffix_cap: &suffix_cap,
                    man,
                    allow: &allow,
                    seen_gen,
                };
                let mut chosen = Vec::new();
                self.combine(&cx, false, 0, unit.clone(), unit, &mut chosen, &mut sols)?;
            }
        }
        Ok(sols)
    }

    /// Depth-first choice of one solution per spine premise, accumulating the
    /// summed bounds; a completed choice is kept when its interval is
    /// feasible.  A partial choice whose floor support already exceeds the
    /// ceiling, or whose remaining premises can no longer cover the floor,
    /// can never recover, since the sums only grow; a choice that involves no
    /// solution newer than `seen_gen` was already completed by an earlier
    /// evaluation and is skipped wholesale.
    fn combine(
        &mut self,
        cx: &SpineCx<'_>,
        any_fresh: bool,
        j: usize,
        gamma_lo: Ctx,
        gamma_hi: Ctx,
        chosen: &mut Vec<Sol>,
        out: &mut Vec<Sol>,
    ) -> Result<(), Error> {
        if !any_fresh && !cx.fresh_below[j] {
            return Ok(());
        }
        if !covers(&gamma_hi, &cx.suffix_cap[j], cx.man) {
            return Ok(());
        }
        self.tick()?;
        if j == cx.per_premise.len() {
            let lo = pointwise_max(cx.man, &support_ones(&gamma_lo));
            let hi = pointwise_min(cx.allow, &gamma_hi);
            if is_subset(&lo, &hi) {
                let lo_w = weight(&lo);
                let hi_w = weight(&hi);
                insert_sol(
                    out,
                    Sol {
                        lo: Rc::new(lo),
                        hi: Rc::new(hi),
                        plan: Rc::new(PlanNode::Spine {
                            target: cx.d,
                            premises: chosen.clone(),
                        }),
                        gen: 0,
                        lo_w,
                        hi_w,
                    },
                );
            }
            return Ok(());
        }
        for s in &cx.per_premise[j] {
            let nlo = plus(&gamma_lo, &s.lo);
            if !is_subset(&support_ones(&nlo), cx.allow) {
                continue;
            }
            let nhi = plus(&gamma_hi, &s.hi);
            let fresh = any_fresh || s.gen >= cx.seen_gen;
            chosen.push(s.clone());
            self.combine(cx, fresh, j + 1, nlo, nhi, chosen, out)?;
            chosen.pop();
        }
        Ok(())
    }

    /// Premise solutions splitting `gamma` exactly over the spine of a
    /// focused formula; first feasible combination wins.  Premise `j` may use
    /// whatever the earlier floors have provably left over.
    fn exact_spine(&mut self, gamma: &Ctx, args: &[Fid]) -> Result<Option<Vec<Sol>>, Error> {
        let mut chosen = Vec::new();
        self.exact_rec(gamma, args, 0, &mut chosen)
    }

    fn exact_rec(
        &mut self,
        gamma: &Ctx,
        args: &[Fid],
        j: usize,
        chosen: &mut Vec<Sol>,
    ) -> Result<Option<Vec<Sol>>, Error> {
        self.tick()?;
        let sp = self.sp;
        if j == args.len() {
            let mut lo_sum = sp.zero();
            let mut hi_sum = sp.zero();
            for s in chosen.iter() {
                lo_sum = plus(&lo_sum, &s.lo);
                hi_sum = plus(&hi_sum, &s.hi);
            }
            if is_subset(&lo_sum, gamma) && is_subset(gamma, &hi_sum) {
                return Ok(Some(chosen.clone()));
            }
            return Ok(None);
        }
        let mut remaining = gamma.clone();
        for s in chosen.iter() {
            remaining = saturating_sub(&remaining, &s.lo);
        }
        let allow_j = consumable(sp, &sp.zero(), &remaining, args[j])
            .expect("an empty floor always passes the consumability filter");
        let prem_sols = self.demand(sp.zero(), allow_j, args[j], None)?;
        for s in prem_sols {
            chosen.push(s);
            if let Some(found) = self.exact_rec(gamma, args, j + 1, chosen)? {
                chosen.pop();
                return Ok(Some(found));
            }
            chosen.pop();
        }
        Ok(None)
    }
}

/// Keep only context formulas whose spine head is a reachable goal atom.
/// Reachability is the least fixpoint: the goal's head atom is reachable,
/// and when an available formula's head is reachable, each of its spine
/// arguments contributes its own head as reachable and its own spine
/// arguments as available.  A formula whose head is unreachable can never be
/// focused, hence never consumed; if the floor demands one, no solution
/// exists at all (`None`).
fn consumable(sp: &Space, man: &Ctx, allow: &Ctx, goal: Fid) -> Option<Ctx> {
    let n = sp.len();
    let mut avail = vec![false; n];
    for (i, &c) in allow.iter().enumerate() {
        if c > 0 {
            avail[i] = true;
        }
    }
    for &a in &sp.args[goal as usize] {
        avail[a as usize] = true;
    }
    let mut goals = vec![false; n];
    goals[sp.head[goal as usize] as usize] = true;
    let mut activated = vec![false; n];
    loop {
        let mut changed = false;
        for f in 0..n {
            if !avail[f] || activated[f] || !goals[sp.head[f] as usize] {
                continue;
            }
            activated[f] = true;
            changed = true;
            for &a in &sp.args[f] {
                goals[sp.head[a as usize] as usize] = true;
                for &s in &sp.args[a as usize] {
                    avail[s as usize] = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (i, &c) in man.iter().enumerate() {
        if c > 0 && !goals[sp.head[i] as usize] {
            return None;
        }
    }
    let filtered = allow
        .iter()
        .enumerate()
        .map(|(i, &c)| if goals[sp.head[i] as usize] { c } else { 0 })
        .collect();
    Some(filtered)
}

/// Keep the solution list an antichain under interval inclusion; reports
/// whether the candidate was actually added.  The scalar weights rule out
/// most comparisons before any vectors are walked.
fn insert_sol(list: &mut Vec<Sol>, sol: Sol) -> bool {
    for s in list.iter() {
        if s.lo_w <= sol.lo_w
            && sol.hi_w <= s.hi_w
            && is_subset(&s.lo, &sol.lo)
            && is_subset(&sol.hi, &s.hi)
        {
            return false;
        }
    }
    list.retain(|s| {
        !(sol.lo_w <= s.lo_w
            && s.hi_w <= sol.hi_w
            && is_subset(&sol.lo, &s.lo)
            && is_subset(&s.hi, &sol.hi))
    });
    list.push(sol);
    true
}

/// Pick one context per premise, inside its interval, summing to `target`.
fn distribute(target: &Ctx, sols: &[Sol]) -> Vec<Ctx> {
    let mut lo_sum: Ctx = vec![0u32; target.len()].into_boxed_slice();
    for s in sols {
        lo_sum = plus(&lo_sum, &s.lo);
    }
    debug_assert!(is_subset(&lo_sum, target), "target dominates the floors");
    let mut excess = saturating_sub(target, &lo_sum);
    let mut out = Vec::with_capacity(sols.len());
    for s in sols {
        let slack = saturating_sub(&s.hi, &s.lo);
        let take = pointwise_min(&excess, &slack);
        excess = saturating_sub(&excess, &take);
        out.push(plus(&s.lo, &take));
    }
    debug_assert!(is_empty(&excess), "interval feasibility guarantees exact distribution");
    out
}

/// Rebuild a proof of `X ⊩ goal` (unfocused) from a plan, for any `X` inside
/// the plan's solution interval.
fn build(sp: &Space, x: &Ctx, goal: Fid, plan: &PlanNode) -> FrProof {
    let goal_f = sp.arena[goal as usize].clone();
    match plan {
        PlanNode::ImpR(child) => {
            let (a, b) = sp.imp[goal as usize].expect("right-rule plan at a non-implication");
            let premise = build(sp, &add_one(x, a), b, child);
            FrProof {
                rule: FrRule::ImpRf,
                conclusion: FocusSequent::unfocused(sp.multiset_of(x), goal_f),
                premises: vec![premise],
            }
        }
        PlanNode::Spine { target, premises } => {
            let unit = sp.singleton(*target);
            let mut lo_sum = sp.zero();
            for s in premises {
                lo_sum = plus(&lo_sum, &s.lo);
            }
            // Pump the context so the focused copy plus the premise contexts
            // cover X exactly, keeping the support unchanged.
            let t = pointwise_max(&saturating_sub(x, &unit), &lo_sum);
            let xs = distribute(&t, premises);
            let args = &sp.args[*target as usize];
            let chain = spine_proof(sp, goal, args, &xs, premises);
            let gamma_plus = plus(&unit, &t);
            let mut proof = FrProof {
                rule: FrRule::Focus,
                conclusion: FocusSequent::unfocused(sp.multiset_of(&gamma_plus), goal_f.clone()),
                premises: vec![chain],
            };
            debug_assert!(is_subset(x, &gamma_plus), "pumped context dominates the query");
            let surplus = saturating_sub(&gamma_plus, x);
            let mut ante = gamma_plus;
            for (i, &extra) in surplus.iter().enumerate() {
                for _ in 0..extra {
                    let lower = sub_one(&ante, i as Fid);
                    proof = FrProof {
                        rule: FrRule::Cf,
                        conclusion: FocusSequent::unfocused(sp.multiset_of(&lower), goal_f.clone()),
                        premises: vec![proof],
                    };
                    ante = lower;
                }
            }
            proof
        }
    }
}

/// The focused chain decomposing a spine: left-rule nodes from the innermost
/// axiom outwards, premise `j` proving `args[j]` from context `xs[j]`.
fn spine_proof(sp: &Space, goal: Fid, args: &[Fid], xs: &[Ctx], sols: &[Sol]) -> FrProof {
    let goal_f = sp.arena[goal as usize].clone();
    let mut node = FrProof {
        rule: FrRule::AtomicId,
        conclusion: FocusSequent::focused(Multiset::new(), goal_f.clone(), goal_f.clone()),
        premises: vec![],
    };
    let mut spine_f = goal_f.clone();
    let mut ctx = sp.zero();
    for j in (0..args.len()).rev() {
        let p1 = build(sp, &xs[j], args[j], &sols[j].plan);
        spine_f = Formula::imp(sp.arena[args[j] as usize].clone(), spine_f);
        ctx = plus(&ctx, &xs[j]);
        node = FrProof {
            rule: FrRule::ImpLf,
            conclusion: FocusSequent::focused(sp.multiset_of(&ctx), spine_f.clone(), goal_f.clone()),
            premises: vec![p1, node],
        };
    }
    node
}
