//! Absorbing duplication steps into plain coverability.
//!
//! The translation works on ordinary expansive instances.  Each product
//! state `(q, s)` pairs an original state with the set `s` of coordinates
//! that were incremented somewhere between the node and the root.  A
//! decrement of coordinate `i` is only allowed when `i ∈ s`, an increment
//! adds `i` to the child's set, and splits pass the set through.  Small
//! gadget states above the leaf let every derivation be patched so that
//! leaves sit at the full set, and a covering root at the empty set then
//! matches exact expansive reachability of the original: duplication steps
//! disappear because covering may overshoot precisely where an increment
//! occurred above.

use crate::bvass::{Bvass, CoverInstance, Mode, ReachInstance, SplitRule, UnaryRule};
use crate::Error;

use super::SideMap;

fn unit(dim: usize, coord: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    v[coord] = sign;
    v
}

/// Translates an ordinary expansive reachability question into a plain
/// coverability question over the product of states with coordinate sets.
pub fn expansive_to_coverability(inst: &ReachInstance) -> Result<(CoverInstance, SideMap), Error> {
    if inst.mode != Mode::Expansive {
        return Err(Error::ShapeMismatch(format!(
            "coverability translation needs the expansive reading, got {}",
            inst.mode.name()
        )));
    }
    let sys = &inst.system;
    if !sys.is_ordinary() {
        return Err(Error::NotOrdinary(
            "coverability translation needs unit rule vectors; normalize the system first"
                .to_string(),
        ));
    }
    for name in &sys.states {
        if name.contains('#') {
            return Err(Error::ShapeMismatch(format!(
                "state name {name} contains the reserved character #"
            )));
        }
    }
    let root = sys
        .state_index(&inst.root_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown root state {}", inst.root_state)))?;
    let leaf = sys
        .state_index(&inst.leaf_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown leaf state {}", inst.leaf_state)))?;
    let d = sys.dimension;

    let mut aug_states = sys.states.clone();
    let mut aug_unary = sys.unary_rules.clone();
    let mut cur_leaf = leaf;
    let mut map = SideMap::new();

    // The patching argument needs a leaf with no outgoing rules; reroute
    // through a vector-neutral bounce when necessary.
    let leaf_has_outgoing = sys.unary_rules.iter().any(|r| r.source == leaf)
        || sys.split_rules.iter().any(|r| r.source == leaf);
    if leaf_has_outgoing {
        if d == 0 {
            return Err(Error::ShapeMismatch(
                "cannot reroute the leaf of a zero-dimensional system".to_string(),
            ));
        }
        for fresh in ["@bounce", "@leaf2"] {
            if aug_states.iter().any(|s| s == fresh) {
                return Err(Error::ShapeMismatch(format!(
                    "state name {fresh} is reserved by the translation"
                )));
            }
        }
        let bounce = aug_states.len();
        aug_states.push("@bounce".to_string());
        let leaf2 = aug_states.len();
        aug_states.push("@leaf2".to_string());
        aug_unary.push(UnaryRule { source: cur_leaf, vector: unit(d, 0, 1), target: bounce });
        aug_unary.push(UnaryRule { source: bounce, vector: unit(d, 0, -1), target: leaf2 });
        map.push("@bounce", format!("relay between {} and the fresh leaf", sys.states[leaf]));
        map.push("@leaf2", format!("fresh leaf below {}", sys.states[leaf]));
        cur_leaf = leaf2;
    }

    // One gadget state per coordinate just above the leaf, so that every
    // coordinate can be given an increment above every leaf.
    for i in 1..=d {
        let name = format!("@top@{i}");
        if aug_states.iter().any(|s| *s == name) {
            return Err(Error::ShapeMismatch(format!(
                "state name {name} is reserved by the translation"
            )));
        }
        let top = aug_states.len();
        aug_states.push(name.clone());
        aug_unary.push(UnaryRule { source: cur_leaf, vector: unit(d, i - 1, 1), target: top });
        aug_unary.push(UnaryRule { source: top, vector: unit(d, i - 1, -1), target: cur_leaf });
        map.push(name, format!("topmost increment of coordinate {i} above a leaf"));
    }

    if d > 16 {
        return Err(Error::StateExplosion(format!(
            "{d} coordinates need 2^{d} coordinate sets per state"
        )));
    }
    let masks: usize = 1 << d;
    let total = aug_states.len() * masks;
    if total > 1_048_576 {
        return Err(Error::StateExplosion(format!("the product would have {total} states")));
    }
    let mask_name = |m: usize| {
        (0..d)
            .filter(|i| m & (1 << i) != 0)
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut states = Vec::with_capacity(total);
    for q in &aug_states {
        for m in 0..masks {
            states.push(format!("{q}#{}", mask_name(m)));
        }
    }
    let idx = |q: usize, m: usize| q * masks + m;

    let mut unary = Vec::new();
    for r in &aug_unary {
        let i = r.vector.iter().position(|x| *x != 0).expect("ordinary rule");
        if r.vector[i] > 0 {
            for m in 0..masks {
                unary.push(UnaryRule {
                    source: idx(r.source, m),
                    vector: r.vector.clone(),
                    target: idx(r.target, m | (1 << i)),
                });
            }
        } else {
            for m in 0..masks {
                if m & (1 << i) != 0 {
                    unary.push(UnaryRule {
                        source: idx(r.source, m),
                        vector: r.vector.clone(),
                        target: idx(r.target, m),
                    });
                }
            }
        }
    }
    let mut splits = Vec::new();
    for r in &sys.split_rules {
        for m in 0..masks {
            splits.push(SplitRule {
                source: idx(r.source, m),
                left: idx(r.left, m),
                right: idx(r.right, m),
            });
        }
    }

    let root_name = states[idx(root, 0)].clone();
    let leaf_name = states[idx(cur_leaf, masks - 1)].clone();
    let system = Bvass::new(states, d, unary, splits)?;
    map.push("root", root_name.clone());
    map.push("leaf", leaf_name.clone());
    map.push("#", "state suffix listing the coordinates incremented closer to the root");
    Ok((CoverInstance { system, root_state: root_name, leaf_state: leaf_name }, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvass::validate_cover_witness;
    use crate::solvers::{solve_coverability, solve_reachability};

    fn chain_system() -> ReachInstance {
        // r gains a unit moving to q; q and m each consume a unit moving
        // down; reaching (r, 0) needs the single unit duplicated.
        let system = Bvass::new(
            vec!["r".to_string(), "q".to_string(), "m".to_string(), "l".to_string()],
            1,
            vec![
                UnaryRule { source: 0, vector: vec![1], target: 1 },
                UnaryRule { source: 1, vector: vec![-1], target: 2 },
                UnaryRule { source: 2, vector: vec![-1], target: 3 },
            ],
            vec![],
        )
        .unwrap();
        ReachInstance {
            system,
            root_state: "r".to_string(),
            leaf_state: "l".to_string(),
            mode: Mode::Expansive,
        }
    }

    #[test]
    fn duplication_becomes_coverable() {
        let inst = chain_system();
        let plain = ReachInstance { mode: Mode::Plain, ..inst.clone() };
        assert!(!solve_reachability(&plain, 3, 100_000).unwrap().is_witness());
        assert!(solve_reachability(&inst, 3, 100_000).unwrap().is_witness());
        let (cover, map) = expansive_to_coverability(&inst).unwrap();
        assert_eq!(map.get("root"), Some("r#"));
        assert_eq!(map.get("leaf"), Some("l#1"));
        let solved = solve_coverability(&cover, 3, 1_000_000).unwrap();
        let tree = solved.witness().expect("the duplication is absorbed");
        validate_cover_witness(&cover, tree).unwrap();
    }

    #[test]
    fn the_product_size_and_gating_are_exact() {
        let (cover, _) = expansive_to_coverability(&chain_system()).unwrap();
        // Five augmented states (four original plus one gadget) times two
        // coordinate sets.
        assert_eq!(cover.system.states.len(), 10);
        // Increment rules exist at both sets, decrement rules only where
        // the coordinate is present: 2+1+1 for the chain, 2+1 for the
        // gadget.
        assert_eq!(cover.system.unary_rules.len(), 7);
        assert!(cover.system.split_rules.is_empty());
        assert!(cover.system.states.contains(&"@top@1#1".to_string()));
    }

    #[test]
    fn unreachable_instances_stay_uncovered() {
        let system = Bvass::new(
            vec!["r".to_string(), "m".to_string(), "l".to_string()],
            1,
            vec![
                UnaryRule { source: 0, vector: vec![-1], target: 1 },
                UnaryRule { source: 1, vector: vec![-1], target: 2 },
            ],
            vec![],
        )
        .unwrap();
        let inst = ReachInstance {
            system,
            root_state: "r".to_string(),
            leaf_state: "l".to_string(),
            mode: Mode::Expansive,
        };
        assert!(!solve_reachability(&inst, 4, 100_000).unwrap().is_witness());
        let (cover, _) = expansive_to_coverability(&inst).unwrap();
        assert!(!solve_coverability(&cover, 4, 1_000_000).unwrap().is_witness());
    }

    #[test]
    fn a_leaf_with_outgoing_rules_is_rerouted() {
        let system = Bvass::new(
            vec!["r".to_string(), "l".to_string()],
            1,
            vec![
                UnaryRule { source: 0, vector: vec![1], target: 1 },
                UnaryRule { source: 1, vector: vec![-1], target: 1 },
            ],
            vec![],
        )
        .unwrap();
        let inst = ReachInstance {
            system,
            root_state: "r".to_string(),
            leaf_state: "l".to_string(),
            mode: Mode::Expansive,
        };
        assert!(solve_reachability(&inst, 2, 100_000).unwrap().is_witness());
        let (cover, _) = expansive_to_coverability(&inst).unwrap();
        assert_eq!(cover.leaf_state, "@leaf2#1");
        let solved = solve_coverability(&cover, 2, 1_000_000).unwrap();
        let tree = solved.witness().expect("rerouted leaf still covers");
        validate_cover_witness(&cover, tree).unwrap();
    }

    #[test]
    fn unsupported_shapes_are_rejected() {
        let inst = chain_system();
        let plain = ReachInstance { mode: Mode::Plain, ..inst.clone() };
        assert!(matches!(expansive_to_coverability(&plain), Err(Error::ShapeMismatch(_))));

        let wide = ReachInstance {
            system: Bvass::new(
                vec!["q".to_string()],
                2,
                vec![UnaryRule { source: 0, vector: vec![1, 1], target: 0 }],
                vec![],
            )
            .unwrap(),
            root_state: "q".to_string(),
            leaf_state: "q".to_string(),
            mode: Mode::Expansive,
        };
        assert!(matches!(expansive_to_coverability(&wide), Err(Error::NotOrdinary(_))));

        let hashed = ReachInstance {
            system: Bvass::new(vec!["q#".to_string()], 1, vec![], vec![]).unwrap(),
            root_state: "q#".to_string(),
            leaf_state: "q#".to_string(),
            mode: Mode::Expansive,
        };
        assert!(matches!(expansive_to_coverability(&hashed), Err(Error::ShapeMismatch(_))));

        let deep = ReachInstance {
            system: Bvass::new(vec!["q".to_string()], 17, vec![], vec![]).unwrap(),
            root_state: "q".to_string(),
            leaf_state: "q".to_string(),
            mode: Mode::Expansive,
        };
        assert!(matches!(expansive_to_coverability(&deep), Err(Error::StateExplosion(_))));
    }
}
