//! Proof search for the contraction-bearing sequent calculus.
//!
//! Two independent implementations live here on purpose:
//!
//! * [`lr_prove_bounded`] is a deliberately naive height-bounded search that
//!   enumerates every rule instance, including explicit contraction steps and
//!   all exact context splits.  It is slow but its completeness at a given
//!   height is immediate from the rule set, which makes it the ground truth
//!   the optimized prover is tested against.
//! * [`lr_prove`] decides provability outright.  It absorbs contraction into
//!   the branching rules: a context split may send copies of a formula to
//!   both premises, and the proof assembler materializes the contraction
//!   nodes that account for the duplicated copies afterwards.  Termination
//!   comes from an ancestor-subsumption check on the branching phase.

use super::{LrProof, LrRule, Sequent};
use crate::formula::Formula;
use crate::multiset::Multiset;
use crate::{BoundedVerdict, Error, Proved};
use std::collections::{BTreeSet, HashMap};

/// Search-node budget for [`lr_prove`]; exceeding it yields
/// [`Error::ResourceLimit`] rather than a wrong verdict.
pub const DEFAULT_LR_BUDGET: u64 = 10_000_000;

/// Decide a sequent with the default budget.
pub fn lr_prove(sequent: &Sequent) -> Result<Proved<LrProof>, Error> {
    lr_prove_with_budget(sequent, DEFAULT_LR_BUDGET)
}

/// Decide a sequent; every returned proof passes [`super::check_lr_proof`].
pub fn lr_prove_with_budget(sequent: &Sequent, budget: u64) -> Result<Proved<LrProof>, Error> {
    let mut search = Search {
        memo_pos: HashMap::new(),
        memo_neg: HashMap::new(),
        path: Vec::new(),
        budget,
        used: 0,
    };
    Ok(match search.prove(sequent)? {
        Outcome::Proof(p) => {
            debug_assert!(super::check_lr_proof(&p));
            Proved::Provable(p)
        }
        Outcome::Fail(_) => Proved::NotProvable,
    })
}

/// Path frames a failure depended on, as (path index, succedent, antecedent).
type DepList = Vec<(usize, Formula, Multiset<Formula>)>;

/// Cap on recorded dependencies per failure; beyond it the failure is simply
/// not cached.
const DEP_CAP: usize = 16;

enum Outcome {
    Proof(LrProof),
    Fail(Deps),
}

/// What a failure's validity rests on.  A subsumption cut-off asserts only
/// "this subgoal is redundant relative to that ancestor frame", so a failure
/// built from cut-offs holds whenever comparable frames are on the path; a
/// failure with no cut-offs below it holds unconditionally.
enum Deps {
    Clean,
    On(DepList),
    /// Too many distinct dependencies to track; the failure is sound here but
    /// must not be reused elsewhere.
    Opaque,
}

impl Deps {
    fn absorb(&mut self, other: Deps) {
        match (&mut *self, other) {
            (_, Deps::Clean) => {}
            (Deps::Opaque, _) => {}
            (s @ Deps::Clean, o) => *s = o,
            (_, Deps::Opaque) => *self = Deps::Opaque,
            (Deps::On(mine), Deps::On(theirs)) => {
                for (i, s, a) in theirs {
                    match mine.iter_mut().find(|(_, s2, a2)| *s2 == s && *a2 == a) {
                        Some(entry) => entry.0 = entry.0.min(i),
                        None => mine.push((i, s, a)),
                    }
                }
                if mine.len() > DEP_CAP {
                    *self = Deps::Opaque;
                }
            }
        }
    }
}

struct Search {
    memo_pos: HashMap<Sequent, LrProof>,
    /// Failed sequents with the frame assumptions their failure rests on; an
    /// empty list means the failure is unconditional.
    memo_neg: HashMap<Sequent, Vec<(Formula, Multiset<Formula>)>>,
    /// Branching-phase ancestors of the current call, as (succedent, antecedent).
    path: Vec<(Formula, Multiset<Formula>)>,
    budget: u64,
    used: u64,
}

impl Search {
    fn prove(&mut self, seq: &Sequent) -> Result<Outcome, Error> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::ResourceLimit(format!(
                "sequent search exceeded its budget of {} nodes",
                self.budget
            )));
        }
        if let Some(p) = self.memo_pos.get(seq) {
            return Ok(Outcome::Proof(p.clone()));
        }
        if let Some(deps) = self.lookup_neg(seq) {
            return Ok(Outcome::Fail(deps));
        }
        let entry_len = self.path.len();
        let out = self.expand(seq)?;
        Ok(match out {
            Outcome::Proof(p) => {
                self.memo_pos.insert(seq.clone(), p.clone());
                Outcome::Proof(p)
            }
            Outcome::Fail(Deps::Clean) => {
                self.memo_neg.insert(seq.clone(), Vec::new());
                Outcome::Fail(Deps::Clean)
            }
            Outcome::Fail(Deps::On(deps)) => {
                // Frames pushed at or below this call are recreated whenever
                // the sequent is searched again, so only dependencies on
                // strictly older frames condition the cached failure.
                let external: DepList =
                    deps.into_iter().filter(|(i, _, _)| *i < entry_len).collect();
                if external.is_empty() {
                    self.memo_neg.insert(seq.clone(), Vec::new());
                    Outcome::Fail(Deps::Clean)
                } else {
                    let stored = external.iter().map(|(_, s, a)| (s.clone(), a.clone())).collect();
                    self.memo_neg.insert(seq.clone(), stored);
                    Outcome::Fail(Deps::On(external))
                }
            }
            Outcome::Fail(Deps::Opaque) => Outcome::Fail(Deps::Opaque),
        })
    }

    /// A cached failure applies when every recorded frame assumption is
    /// covered by a current frame at least as strong (same succedent, same
    /// support, componentwise smaller-or-equal).
    fn lookup_neg(&self, seq: &Sequent) -> Option<Deps> {
        let assumptions = self.memo_neg.get(seq)?;
        if assumptions.is_empty() {
            return Some(Deps::Clean);
        }
        let mut deps = Vec::new();
        for (s, a) in assumptions {
            let i = self
                .path
                .iter()
                .position(|(ps, pa)| ps == s && pa.same_support(a) && pa.is_subset(a))?;
            deps.push((i, s.clone(), a.clone()));
        }
        Some(Deps::On(deps))
    }

    /// Invertible phase: implications on the right, then fusions and truth
    /// constants on the left.  Every step strictly shrinks the total formula
    /// size, and each is invertible, so applying them eagerly loses nothing.
    fn expand(&mut self, seq: &Sequent) -> Result<Outcome, Error> {
        if let Formula::Imp(a, b) = &seq.succedent {
            let child = Sequent::new(seq.antecedent.plus_item(a), (**b).clone());
            return Ok(match self.prove(&child)? {
                Outcome::Proof(p) => Outcome::Proof(LrProof {
                    rule: LrRule::ImpR,
                    conclusion: seq.clone(),
                    principal: None,
                    premises: vec![p],
                }),
                fail => fail,
            });
        }
        let fusion = seq
            .antecedent
            .support()
            .find(|f| matches!(f, Formula::Fusion(_, _)))
            .cloned();
        if let Some(pr) = fusion {
            let (a, b) = match &pr {
                Formula::Fusion(a, b) => ((**a).clone(), (**b).clone()),
                _ => unreachable!(),
            };
            let rest = seq.antecedent.minus_item(&pr).expect("fusion came from the antecedent");
            let child = Sequent::new(rest.plus_item(&a).plus_item(&b), seq.succedent.clone());
            return Ok(match self.prove(&child)? {
                Outcome::Proof(p) => Outcome::Proof(LrProof {
                    rule: LrRule::FusL,
                    conclusion: seq.clone(),
                    principal: Some(pr),
                    premises: vec![p],
                }),
                fail => fail,
            });
        }
        if seq.antecedent.contains(&Formula::Truth) {
            let rest = seq.antecedent.minus_item(&Formula::Truth).expect("just checked");
            let child = Sequent::new(rest, seq.succedent.clone());
            return Ok(match self.prove(&child)? {
                Outcome::Proof(p) => Outcome::Proof(LrProof {
                    rule: LrRule::TruthL,
                    conclusion: seq.clone(),
                    principal: Some(Formula::Truth),
                    premises: vec![p],
                }),
                fail => fail,
            });
        }
        self.branching_phase(seq)
    }

    /// Branching phase: the antecedent holds only atoms and implications and
    /// the succedent is an atom, a truth constant, or a fusion.
    fn branching_phase(&mut self, seq: &Sequent) -> Result<Outcome, Error> {
        if seq.antecedent.total() == 1 && seq.antecedent.count(&seq.succedent) == 1 {
            return Ok(Outcome::Proof(LrProof {
                rule: LrRule::Id,
                conclusion: seq.clone(),
                principal: Some(seq.succedent.clone()),
                premises: vec![],
            }));
        }
        if seq.succedent == Formula::Truth && seq.antecedent.is_empty() {
            return Ok(Outcome::Proof(LrProof {
                rule: LrRule::TruthR,
                conclusion: seq.clone(),
                principal: None,
                premises: vec![],
            }));
        }
        // Relevance: with no weakening, every antecedent formula must be
        // consumed, which is impossible when its spine head can never become
        // a goal atom.
        if !relevance_possible(seq) {
            return Ok(Outcome::Fail(Deps::Clean));
        }
        // Ancestor subsumption: an ancestor with the same succedent, the same
        // antecedent support, and componentwise fewer-or-equal copies would be
        // provable from any proof of this subgoal by contraction alone, so a
        // height-minimal proof never visits this subgoal.
        for (i, (anc_succ, anc_ante)) in self.path.iter().enumerate() {
            if *anc_succ == seq.succedent
                && anc_ante.same_support(&seq.antecedent)
                && anc_ante.is_subset(&seq.antecedent)
            {
                return Ok(Outcome::Fail(Deps::On(vec![(
                    i,
                    anc_succ.clone(),
                    anc_ante.clone(),
                )])));
            }
        }
        self.path.push((seq.succedent.clone(), seq.antecedent.clone()));
        let out = self.branching_moves(seq);
        self.path.pop();
        out
    }

    fn branching_moves(&mut self, seq: &Sequent) -> Result<Outcome, Error> {
        let mut deps = Deps::Clean;
        let imps: Vec<Formula> = seq
            .antecedent
            .support()
            .filter(|f| matches!(f, Formula::Imp(_, _)))
            .cloned()
            .collect();
        for d in &imps {
            match self.try_imp_left(seq, d)? {
                Outcome::Proof(p) => return Ok(Outcome::Proof(p)),
                Outcome::Fail(d2) => deps.absorb(d2),
            }
        }
        if matches!(seq.succedent, Formula::Fusion(_, _)) {
            match self.try_fusion_right(seq)? {
                Outcome::Proof(p) => return Ok(Outcome::Proof(p)),
                Outcome::Fail(d2) => deps.absorb(d2),
            }
        }
        Ok(Outcome::Fail(deps))
    }

    /// Left implication with sharing: each antecedent formula with
    /// multiplicity `m` contributes `x` copies to the left premise and `y` to
    /// the right, where `x, y <= m` and `x + y >= m` (`>= m - 1` for the
    /// principal, whose consumed copy covers the slack).  Splits with
    /// `x + y > m` duplicate copies; the assembler repays the surplus with
    /// explicit contraction nodes below the branching node.
    fn try_imp_left(&mut self, seq: &Sequent, d: &Formula) -> Result<Outcome, Error> {
        let (arg, tgt) = match d {
            Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
            _ => unreachable!(),
        };
        let entries: Vec<(Formula, u32)> =
            seq.antecedent.iter().map(|(f, m)| (f.clone(), m)).collect();
        let choices = sharing_choices(&entries, Some(d));
        let mut idx = vec![0usize; choices.len()];
        let mut deps = Deps::Clean;
        loop {
            let (g1, g2) = build_split(&entries, &choices, &idx);
            let p1_seq = Sequent::new(g1, arg.clone());
            match self.prove(&p1_seq)? {
                Outcome::Proof(p1) => {
                    let p2_seq = Sequent::new(g2.plus_item(&tgt), seq.succedent.clone());
                    match self.prove(&p2_seq)? {
                        Outcome::Proof(p2) => {
                            let upper = p1_seq.antecedent.plus(&g2).plus_item(d);
                            let node = LrProof {
                                rule: LrRule::ImpL,
                                conclusion: Sequent::new(upper, seq.succedent.clone()),
                                principal: Some(d.clone()),
                                premises: vec![p1, p2],
                            };
                            return Ok(Outcome::Proof(contract_down_to(seq, node)));
                        }
                        Outcome::Fail(d2) => deps.absorb(d2),
                    }
                }
                Outcome::Fail(d2) => deps.absorb(d2),
            }
            if !advance(&mut idx, &choices) {
                return Ok(Outcome::Fail(deps));
            }
        }
    }

    /// Right fusion with the same sharing discipline (no principal slack).
    fn try_fusion_right(&mut self, seq: &Sequent) -> Result<Outcome, Error> {
        let (a, b) = match &seq.succedent {
            Formula::Fusion(a, b) => ((**a).clone(), (**b).clone()),
            _ => unreachable!(),
        };
        let entries: Vec<(Formula, u32)> =
            seq.antecedent.iter().map(|(f, m)| (f.clone(), m)).collect();
        let choices = sharing_choices(&entries, None);
        let mut idx = vec![0usize; choices.len()];
        let mut deps = Deps::Clean;
        loop {
            let (g1, g2) = build_split(&entries, &choices, &idx);
            let p1_seq = Sequent::new(g1, a.clone());
            match self.prove(&p1_seq)? {
                Outcome::Proof(p1) => {
                    let p2_seq = Sequent::new(g2.clone(), b.clone());
                    match self.prove(&p2_seq)? {
                        Outcome::Proof(p2) => {
                            let upper = p1_seq.antecedent.plus(&g2);
                            let node = LrProof {
                                rule: LrRule::FusR,
                                conclusion: Sequent::new(upper, seq.succedent.clone()),
                                principal: None,
                                premises: vec![p1, p2],
                            };
                            return Ok(Outcome::Proof(contract_down_to(seq, node)));
                        }
                        Outcome::Fail(d2) => deps.absorb(d2),
                    }
                }
                Outcome::Fail(d2) => deps.absorb(d2),
            }
            if !advance(&mut idx, &choices) {
                return Ok(Outcome::Fail(deps));
            }
        }
    }
}

/// Necessary condition for provability of a pure implicational sequent with
/// an atomic succedent: every antecedent formula's spine must be able to end
/// in a goal atom.  Goal atoms and available formulas are closed under spine
/// decomposition starting from the succedent and the antecedent.  Sequents
/// mentioning other connectives pass unexamined.
fn relevance_possible(seq: &Sequent) -> bool {
    if !seq.succedent.is_atom() {
        return true;
    }
    if seq.antecedent.support().any(|f| !f.is_pure_implicational()) {
        return true;
    }
    let mut avail: BTreeSet<Formula> = seq.antecedent.support().cloned().collect();
    let mut goals: BTreeSet<Formula> = BTreeSet::new();
    goals.insert(seq.succedent.clone());
    let mut activated: BTreeSet<Formula> = BTreeSet::new();
    loop {
        let mut changed = false;
        let snapshot: Vec<Formula> = avail.iter().cloned().collect();
        for f in snapshot {
            if activated.contains(&f) || !goals.contains(f.head()) {
                continue;
            }
            activated.insert(f.clone());
            changed = true;
            let (args, _) = f.uncurry();
            for a in args {
                goals.insert(a.head().clone());
                let (sub, _) = a.uncurry();
                for s in sub {
                    avail.insert(s);
                }
            }
        }
        if !changed {
            break;
        }
    }
    seq.antecedent.support().all(|f| goals.contains(f.head()))
}

/// Per-entry `(x, y)` allocations in lexicographic order.
fn sharing_choices(
    entries: &[(Formula, u32)],
    principal: Option<&Formula>,
) -> Vec<Vec<(u32, u32)>> {
    entries
        .iter()
        .map(|(f, m)| {
            let m = *m;
            let lo = if principal == Some(f) { m.saturating_sub(1) } else { m };
            let mut v = Vec::new();
            for x in 0..=m {
                for y in 0..=m {
                    if x + y >= lo {
                        v.push((x, y));
                    }
                }
            }
            v
        })
        .collect()
}

fn build_split(
    entries: &[(Formula, u32)],
    choices: &[Vec<(u32, u32)>],
    idx: &[usize],
) -> (Multiset<Formula>, Multiset<Formula>) {
    let mut g1 = Multiset::new();
    let mut g2 = Multiset::new();
    for (k, (f, _)) in entries.iter().enumerate() {
        let (x, y) = choices[k][idx[k]];
        if x > 0 {
            g1.insert_n(f.clone(), x);
        }
        if y > 0 {
            g2.insert_n(f.clone(), y);
        }
    }
    (g1, g2)
}

/// Odometer step; returns false once every combination has been visited.
fn advance(idx: &mut [usize], choices: &[Vec<(u32, u32)>]) -> bool {
    let mut k = idx.len();
    loop {
        if k == 0 {
            return false;
        }
        k -= 1;
        idx[k] += 1;
        if idx[k] < choices[k].len() {
            return true;
        }
        idx[k] = 0;
    }
}

/// Wrap `node` (conclusion `Γ⁺ ⊢ s`) in contraction steps down to the target
/// `Γ ⊢ s`, where `Γ⁺ ≥ Γ` with equal support.  Surplus copies are discharged
/// in formula order.
fn contract_down_to(target: &Sequent, node: LrProof) -> LrProof {
    let surplus = node
        .conclusion
        .antecedent
        .checked_sub(&target.antecedent)
        .expect("sharing split produced at least the conclusion antecedent");
    let mut occs: Vec<Formula> = surplus.occurrences().cloned().collect();
    let mut proof = node;
    let mut ante = proof.conclusion.antecedent.clone();
    while let Some(e) = occs.pop() {
        let lower = ante.minus_item(&e).expect("surplus copy exists");
        proof = LrProof {
            rule: LrRule::C,
            conclusion: Sequent::new(lower.clone(), target.succedent.clone()),
            principal: Some(e),
            premises: vec![proof],
        };
        ante = lower;
    }
    proof
}

/// Exhaustive height-bounded provability: a proof of height at most `depth`
/// exists if and only if this returns `Provable`.  At depth 0 nothing is
/// provable; a bare axiom has height 1.
pub fn lr_prove_bounded(sequent: &Sequent, depth: u32) -> BoundedVerdict {
    let mut memo: HashMap<Sequent, MemoEntry> = HashMap::new();
    if bounded(sequent, depth, &mut memo) {
        BoundedVerdict::Provable
    } else {
        BoundedVerdict::NotProvableWithinDepth
    }
}

#[derive(Default)]
struct MemoEntry {
    /// Least height at which a proof has been found so far.
    proved_at: Option<u32>,
    /// Greatest depth at which the search has exhaustively failed.
    failed_at: u32,
}

fn bounded(seq: &Sequent, depth: u32, memo: &mut HashMap<Sequent, MemoEntry>) -> bool {
    if depth == 0 {
        return false;
    }
    if let Some(e) = memo.get(seq) {
        if let Some(h) = e.proved_at {
            if h <= depth {
                return true;
            }
        }
        if e.failed_at >= depth {
            return false;
        }
    }
    let ok = bounded_expand(seq, depth, memo);
    let e = memo.entry(seq.clone()).or_default();
    if ok {
        if e.proved_at.map_or(true, |h| depth < h) {
            e.proved_at = Some(depth);
        }
    } else {
        e.failed_at = e.failed_at.max(depth);
    }
    ok
}

fn bounded_expand(seq: &Sequent, depth: u32, memo: &mut HashMap<Sequent, MemoEntry>) -> bool {
    let d = depth - 1;
    if seq.antecedent.total() == 1 && seq.antecedent.count(&seq.succedent) == 1 {
        return true;
    }
    if seq.succedent == Formula::Truth && seq.antecedent.is_empty() {
        return true;
    }
    if let Formula::Imp(a, b) = &seq.succedent {
        let child = Sequent::new(seq.antecedent.plus_item(a), (**b).clone());
        if bounded(&child, d, memo) {
            return true;
        }
    }
    if seq.antecedent.contains(&Formula::Truth) {
        let rest = seq.antecedent.minus_item(&Formula::Truth).expect("just checked");
        if bounded(&Sequent::new(rest, seq.succedent.clone()), d, memo) {
            return true;
        }
    }
    let distinct: Vec<Formula> = seq.antecedent.support().cloned().collect();
    for f in &distinct {
        if let Formula::Fusion(a, b) = f {
            let rest = seq.antecedent.minus_item(f).expect("distinct element");
            let child = Sequent::new(rest.plus_item(a).plus_item(b), seq.succedent.clone());
            if bounded(&child, d, memo) {
                return true;
            }
        }
    }
    // Explicit contraction on every distinct formula.
    for f in &distinct {
        let child = Sequent::new(seq.antecedent.plus_item(f), seq.succedent.clone());
        if bounded(&child, d, memo) {
            return true;
        }
    }
    // Left implication over every exact context split.
    for f in &distinct {
        if let Formula::Imp(a, b) = f {
            let rest = seq.antecedent.minus_item(f).expect("distinct element");
            for (g1, g2) in exact_splits(&rest) {
                if bounded(&Sequent::new(g1, (**a).clone()), d, memo)
                    && bounded(&Sequent::new(g2.plus_item(b), seq.succedent.clone()), d, memo)
                {
                    return true;
                }
            }
        }
    }
    if let Formula::Fusion(a, b) = &seq.succedent {
        for (g1, g2) in exact_splits(&seq.antecedent) {
            if bounded(&Sequent::new(g1, (**a).clone()), d, memo)
                && bounded(&Sequent::new(g2, (**b).clone()), d, memo)
            {
                return true;
            }
        }
    }
    false
}

/// Every `(Γ₁, Γ₂)` with `Γ₁ + Γ₂` equal to the input, in lexicographic order
/// of the left multiplicity vector.
fn exact_splits(ante: &Multiset<Formula>) -> Vec<(Multiset<Formula>, Multiset<Formula>)> {
    let entries: Vec<(Formula, u32)> = ante.iter().map(|(f, m)| (f.clone(), m)).collect();
    let mut out = vec![(Multiset::new(), Multiset::new())];
    for (f, m) in &entries {
        let mut next = Vec::with_capacity(out.len() * (*m as usize + 1));
        for (g1, g2) in &out {
            for x in 0..=*m {
                let mut h1 = g1.clone();
                let mut h2 = g2.clone();
                if x > 0 {
                    h1.insert_n(f.clone(), x);
                }
                if x < *m {
                    h2.insert_n(f.clone(), m - x);
                }
                next.push((h1, h2));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::lr::check_lr_proof;

    fn goal(s: &str) -> Sequent {
        Sequent::goal(parse_formula(s).unwrap())
    }

    fn prove(s: &str) -> Proved<LrProof> {
        lr_prove(&goal(s)).unwrap()
    }

    #[test]
    fn identity_is_provable() {
        let p = prove("a->a").into_proof().unwrap();
        assert!(check_lr_proof(&p));
        assert_eq!(p.node_count(), 2);
    }

    #[test]
    fn weakening_like_goals_fail() {
        assert!(!prove("b->a->b").is_provable());
        assert!(!prove("a->a->a").is_provable());
    }

    #[test]
    fn contraction_is_required_and_found() {
        let p = prove("(a->a->b)->a->b").into_proof().unwrap();
        assert!(check_lr_proof(&p));
        fn has_c(p: &LrProof) -> bool {
            p.rule == LrRule::C || p.premises.iter().any(has_c)
        }
        assert!(has_c(&p));
    }

    #[test]
    fn peirce_fails() {
        assert!(!prove("((a->b)->a)->a").is_provable());
    }

    #[test]
    fn truth_and_fusion_examples() {
        assert!(prove("T->T").is_provable());
        assert!(prove("T").is_provable());
        let p = prove("a o b->b o a").into_proof().unwrap();
        assert!(check_lr_proof(&p));
        assert!(prove("a->b->a o b").is_provable());
        assert!(prove("(a o b->c)->a->b->c").is_provable());
        assert!(prove("(a->b->c)->a o b->c").is_provable());
        assert!(!prove("a o a->a").is_provable());
        // Contraction makes the fused duplicate derivable in this direction.
        assert!(prove("a->a o a").is_provable());
    }

    #[test]
    fn prefixing_and_suffixing_are_provable() {
        assert!(prove("(a->b)->(b->c)->a->c").is_provable());
        assert!(prove("(b->c)->(a->b)->a->c").is_provable());
        assert!(prove("(a->(a->b)->b)").is_provable());
    }

    #[test]
    fn bounded_search_tracks_height_exactly() {
        assert_eq!(lr_prove_bounded(&goal("a->a"), 0), BoundedVerdict::NotProvableWithinDepth);
        assert_eq!(lr_prove_bounded(&goal("a->a"), 1), BoundedVerdict::NotProvableWithinDepth);
        assert_eq!(lr_prove_bounded(&goal("a->a"), 2), BoundedVerdict::Provable);
        assert_eq!(lr_prove_bounded(&goal("a->a"), 3), BoundedVerdict::Provable);
        assert_eq!(
            lr_prove_bounded(&goal("(a->a->b)->a->b"), 12),
            BoundedVerdict::Provable
        );
        assert_eq!(
            lr_prove_bounded(&goal("b->a->b"), 12),
            BoundedVerdict::NotProvableWithinDepth
        );
    }

    #[test]
    fn bounded_and_unbounded_agree_on_small_goals() {
        let cases = [
            "a->a",
            "b->a->b",
            "(a->a->b)->a->b",
            "((a->b)->a)->a",
            "(a->b)->(b->a)->a",
            "T->a->a",
            "a o b->b o a",
            "a->a o T",
        ];
        for s in cases {
            let exact = prove(s).is_provable();
            let bounded = lr_prove_bounded(&goal(s), 12).is_provable();
            assert_eq!(exact, bounded, "disagreement on {s}");
        }
    }

    #[test]
    fn sequents_with_antecedents_are_handled() {
        let seq = Sequent::new(
            Multiset::from_slice(&[
                parse_formula("a").unwrap(),
                parse_formula("a->b").unwrap(),
            ]),
            parse_formula("b").unwrap(),
        );
        let p = lr_prove(&seq).unwrap().into_proof().unwrap();
        assert!(check_lr_proof(&p));
        assert_eq!(p.conclusion, seq);
    }

    #[test]
    fn budget_exhaustion_reports_resource_limit() {
        let err = lr_prove_with_budget(&goal("(a->a->b)->a->b"), 3).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }
}
