//! Making every rule mandatory: coverability to comprehensive reachability.
//!
//! Two stages.  First, increases `q →(+eᵢ) q` at every state turn covering
//! into exact reachability: a covering root sheds its surplus through them.
//! Second, a fresh root and hub state, one gate coordinate, and one tag
//! coordinate per rule wrap the system in per-rule test loops: from the hub,
//! any rule can be exercised once inside a loop that restores the hub and
//! all counters.  A derivation may therefore use every rule, so requiring
//! every rule (the comprehensive reading) does not change the verdict.
//! Split-rule loops fork the derivation; the forked branch duplicates the
//! gate token through an expansion and replays a derivation of its own,
//! which is why the output keeps the expansive semantics.

use std::collections::BTreeSet;

use crate::bvass::{Bvass, CoverInstance, Mode, ReachInstance, UnaryRule};
use crate::Error;

use super::SideMap;

fn unit(dim: usize, coord: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    v[coord] = sign;
    v
}

/// Translates an ordinary coverability question into an ordinary
/// comprehensive reachability question over a system with one extra state
/// and three extra unary rules per rule, plus a gate.
pub fn coverability_to_comprehensive(
    inst: &CoverInstance,
) -> Result<(ReachInstance, SideMap), Error> {
    let sys = &inst.system;
    if !sys.is_ordinary() {
        return Err(Error::NotOrdinary(
            "the root gadget needs unit rule vectors; normalize the system first".to_string(),
        ));
    }
    let root = sys
        .state_index(&inst.root_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown root state {}", inst.root_state)))?;
    sys.state_index(&inst.leaf_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown leaf state {}", inst.leaf_state)))?;
    let d = sys.dimension;

    // Stage one: increases at every state let a covering root shed its
    // surplus, turning coverability into exact reachability.
    let existing: BTreeSet<(usize, &[i64], usize)> =
        sys.unary_rules.iter().map(|r| (r.source, r.vector.as_slice(), r.target)).collect();
    let mut stage_unary = sys.unary_rules.clone();
    for q in 0..sys.states.len() {
        for i in 0..d {
            let v = unit(d, i, 1);
            if !existing.contains(&(q, v.as_slice(), q)) {
                stage_unary.push(UnaryRule { source: q, vector: v, target: q });
            }
        }
    }

    // Stage two: the gate and one tag coordinate per rule.
    let k_unary = stage_unary.len();
    let k_total = k_unary + sys.split_rules.len();
    let d2 = d + 1 + k_total;
    let gate = d;
    let tag = |k: usize| d + 1 + k;

    let mut states = sys.states.clone();
    for fresh in
        ["@hub".to_string(), "@root".to_string()].into_iter().chain((0..k_total).map(|k| format!("@rule@{k}")))
    {
        if states.iter().any(|s| *s == fresh) {
            return Err(Error::ShapeMismatch(format!(
                "state name {fresh} is reserved by the translation"
            )));
        }
    }
    let hub = states.len();
    states.push("@hub".to_string());
    let new_root = states.len();
    states.push("@root".to_string());
    let rule_state_base = states.len();
    for k in 0..k_total {
        states.push(format!("@rule@{k}"));
    }
    let rule_state = |k: usize| rule_state_base + k;

    let wide = |v: &[i64]| {
        let mut w = v.to_vec();
        w.resize(d2, 0);
        w
    };
    let mut unary: Vec<UnaryRule> = stage_unary
        .iter()
        .map(|r| UnaryRule { source: r.source, vector: wide(&r.vector), target: r.target })
        .collect();
    // The gate is taken once at the root and returned when the derivation
    // proper starts; forked branches duplicate it by expansion.
    unary.push(UnaryRule { source: new_root, vector: unit(d2, gate, 1), target: hub });
    unary.push(UnaryRule { source: hub, vector: unit(d2, gate, -1), target: root });
    for (k, r) in stage_unary.iter().enumerate() {
        let i = r.vector.iter().position(|x| *x != 0).expect("ordinary rule");
        if r.vector[i] > 0 {
            // Tagged loop around an increment: enter at its source, run the
            // rule, undo its effect, return.
            unary.push(UnaryRule { source: hub, vector: unit(d2, tag(k), 1), target: r.source });
            unary.push(UnaryRule { source: r.target, vector: unit(d2, i, -1), target: rule_state(k) });
            unary.push(UnaryRule { source: rule_state(k), vector: unit(d2, tag(k), -1), target: hub });
        } else {
            // Tagged loop around a decrement: manufacture the consumed unit
            // on the way in.
            unary.push(UnaryRule { source: hub, vector: unit(d2, tag(k), 1), target: rule_state(k) });
            unary.push(UnaryRule { source: rule_state(k), vector: unit(d2, i, 1), target: r.source });
            unary.push(UnaryRule { source: r.target, vector: unit(d2, tag(k), -1), target: hub });
        }
    }
    for (j, r) in sys.split_rules.iter().enumerate() {
        // Tagged loop around a split: two tag units, one per branch.
        let k = k_unary + j;
        unary.push(UnaryRule { source: hub, vector: unit(d2, tag(k), 1), target: rule_state(k) });
        unary.push(UnaryRule { source: rule_state(k), vector: unit(d2, tag(k), 1), target: r.source });
        unary.push(UnaryRule { source: r.left, vector: unit(d2, tag(k), -1), target: hub });
        unary.push(UnaryRule { source: r.right, vector: unit(d2, tag(k), -1), target: hub });
    }

    let system = Bvass::new(states, d2, unary, sys.split_rules.clone())?;
    let mut map = SideMap::new();
    map.push("@root", "fresh root holding the gate token");
    map.push("@hub", "dispatch state for the per-rule test loops");
    for k in 0..k_total {
        let meaning = if k < sys.unary_rules.len() {
            format!("test loop for unary rule {k}")
        } else if k < k_unary {
            format!("test loop for an added increase ({})", k - sys.unary_rules.len())
        } else {
            format!("test loop for split rule {}", k - k_unary)
        };
        map.push(format!("@rule@{k}"), meaning);
    }
    map.push(format!("e{}", gate + 1), "gate token".to_string());
    for k in 0..k_total {
        map.push(format!("e{}", tag(k) + 1), format!("tag for test loop {k}"));
    }
    Ok((
        ReachInstance {
            system,
            root_state: "@root".to_string(),
            leaf_state: inst.leaf_state.clone(),
            mode: Mode::Comprehensive,
        },
        map,
    ))
}
