//! Erasing states: pair encodings between stateful and stateless systems.
//!
//! A state with index i out of n is written as the pair (i, n−i).  Distinct
//! pairs are pointwise incomparable and every pair sums to n, so a vector
//! holding one pair in one of three dedicated role slots can neither fake a
//! state nor hold two at once.  Role 0 carries the state of a finished node;
//! roles 1 and 2 hold states staged for the next unary rule or for the left
//! and right branches of a split.  Covering the encoded root pair forces the
//! exact root state and leaves the payload slots free, which is precisely
//! the stateful coverability question.

use crate::bvass::{Bvas, BvasInstance, Bvass, CoverInstance, SplitRule, UnaryRule};
use crate::Error;

use super::SideMap;

/// The encoding of state `index` out of `count` states: `(index, count − index)`.
pub fn state_pair(index: usize, count: usize) -> (u64, u64) {
    debug_assert!(index < count);
    (index as u64, (count - index) as u64)
}

/// Erases the states of a coverability instance.  The output asks whether a
/// vector dominating the encoded root pair is derivable from leaves carrying
/// exactly the encoded leaf pair; six slots hold state pairs, the original
/// coordinates move to slots seven onward.
pub fn bvass_to_bvas(inst: &CoverInstance) -> Result<(BvasInstance, SideMap), Error> {
    let sys = &inst.system;
    let root = sys
        .state_index(&inst.root_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown root state {}", inst.root_state)))?;
    let leaf = sys
        .state_index(&inst.leaf_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown leaf state {}", inst.leaf_state)))?;
    let n = sys.states.len();
    let d2 = 6 + sys.dimension;
    let add_pair = |w: &mut [i64], q: usize, role: usize, sign: i64| {
        let (a, b) = state_pair(q, n);
        w[2 * role] += sign * a as i64;
        w[2 * role + 1] += sign * b as i64;
    };
    let encode = |q: usize| {
        let (a, b) = state_pair(q, n);
        let mut v = vec![0u64; d2];
        v[0] = a;
        v[1] = b;
        v
    };

    let mut unary: Vec<Vec<i64>> = Vec::new();
    for r in &sys.unary_rules {
        let mut w = vec![0i64; d2];
        add_pair(&mut w, r.source, 0, 1);
        add_pair(&mut w, r.target, 1, -1);
        for (i, x) in r.vector.iter().enumerate() {
            w[6 + i] = x
                .checked_neg()
                .ok_or_else(|| Error::ShapeMismatch(format!("rule entry {x} cannot be negated")))?;
        }
        unary.push(w);
    }
    // Staging moves: a finished node's pair drops to role 1 before a unary
    // rule or a left branch consumes it, to role 2 before a right branch.
    for q in 0..n {
        let mut w = vec![0i64; d2];
        add_pair(&mut w, q, 1, 1);
        add_pair(&mut w, q, 0, -1);
        unary.push(w);
    }
    for q in 0..n {
        let mut w = vec![0i64; d2];
        add_pair(&mut w, q, 2, 1);
        add_pair(&mut w, q, 0, -1);
        unary.push(w);
    }
    let mut splits: Vec<Vec<i64>> = Vec::new();
    for r in &sys.split_rules {
        let mut w = vec![0i64; d2];
        add_pair(&mut w, r.source, 0, 1);
        add_pair(&mut w, r.left, 1, -1);
        add_pair(&mut w, r.right, 2, -1);
        splits.push(w);
    }

    let system = Bvas::new(d2, unary, splits)?;
    let mut map = SideMap::new();
    map.push("e1,e2", "state of a finished node (role 0)");
    map.push("e3,e4", "state staged for a unary rule or a left branch (role 1)");
    map.push("e5,e6", "state staged for a right branch (role 2)");
    for i in 0..sys.dimension {
        map.push(format!("e{}", 7 + i), format!("original coordinate {}", i + 1));
    }
    for (q, name) in sys.states.iter().enumerate() {
        let (a, b) = state_pair(q, n);
        map.push(format!("({a},{b})"), name.clone());
    }
    Ok((BvasInstance { system, root: encode(root), leaf: encode(leaf) }, map))
}

/// Reads a stateless coverability question as a stateful one.  A single
/// working state `q` carries every vector; each split rule gets a staging
/// state applying its vector, a fresh root absorbs the covering slack, and a
/// fresh leaf marker pins leaves to exactly the leaf vector.
pub fn bvas_to_bvass(
    sys: &Bvas,
    root: &[u64],
    leaf: &[u64],
) -> Result<(CoverInstance, SideMap), Error> {
    if root.len() != sys.dimension || leaf.len() != sys.dimension {
        return Err(Error::ShapeMismatch(format!(
            "root and leaf vectors must have length {}",
            sys.dimension
        )));
    }
    let signed = |v: &[u64], sign: i64| -> Result<Vec<i64>, Error> {
        v.iter()
            .map(|x| {
                i64::try_from(*x)
                    .ok()
                    .and_then(|y| y.checked_mul(sign))
                    .ok_or_else(|| Error::ShapeMismatch(format!("vector entry {x} is out of range")))
            })
            .collect()
    };
    let negated = |v: &[i64]| -> Result<Vec<i64>, Error> {
        v.iter()
            .map(|x| {
                x.checked_neg()
                    .ok_or_else(|| Error::ShapeMismatch(format!("rule entry {x} cannot be negated")))
            })
            .collect()
    };

    let mut states = vec!["q".to_string()];
    let mut unary: Vec<UnaryRule> = Vec::new();
    let mut split_rules: Vec<SplitRule> = Vec::new();
    for u in &sys.unary_rules {
        unary.push(UnaryRule { source: 0, vector: negated(u)?, target: 0 });
    }
    for (k, s) in sys.split_rules.iter().enumerate() {
        let staging = states.len();
        states.push(format!("q@split@{k}"));
        unary.push(UnaryRule { source: 0, vector: negated(s)?, target: staging });
        split_rules.push(SplitRule { source: staging, left: 0, right: 0 });
    }
    let root_state = states.len();
    states.push("@root".to_string());
    unary.push(UnaryRule { source: root_state, vector: signed(root, 1)?, target: 0 });
    let leaf_state = states.len();
    states.push("@leaf".to_string());
    unary.push(UnaryRule { source: 0, vector: signed(leaf, -1)?, target: leaf_state });

    let system = Bvass::new(states, sys.dimension, unary, split_rules)?;
    let mut map = SideMap::new();
    map.push("q", "every stateless vector lives here");
    for k in 0..sys.split_rules.len() {
        map.push(format!("q@split@{k}"), format!("staging state for split rule {k}"));
    }
    map.push("@root", "entry point absorbing the covering slack");
    map.push("@leaf", "marker for leaves holding exactly the leaf vector");
    Ok((
        CoverInstance {
            system,
            root_state: "@root".to_string(),
            leaf_state: "@leaf".to_string(),
        },
        map,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvass::{enumerate_bvas_vectors, validate_cover_witness};
    use crate::solvers::solve_coverability;

    #[test]
    fn state_pairs_are_pairwise_incomparable() {
        for n in 1..=10usize {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let (a1, b1) = state_pair(i, n);
                    let (a2, b2) = state_pair(j, n);
                    assert!(!(a1 <= a2 && b1 <= b2));
                    assert!(!(a2 <= a1 && b2 <= b1));
                }
            }
        }
    }

    #[test]
    fn a_unary_chain_covers_its_encoded_root() {
        let system = Bvass::new(
            vec!["r".to_string(), "l".to_string()],
            1,
            vec![UnaryRule { source: 0, vector: vec![-1], target: 1 }],
            vec![],
        )
        .unwrap();
        let inst = CoverInstance {
            system,
            root_state: "r".to_string(),
            leaf_state: "l".to_string(),
        };
        assert!(solve_coverability(&inst, 2, 100_000).unwrap().is_witness());
        let (bvas, map) = bvass_to_bvas(&inst).unwrap();
        assert_eq!(bvas.system.dimension, 7);
        assert_eq!(bvas.system.unary_rules.len(), 5);
        assert_eq!(bvas.system.unary_rules[0], vec![0, 2, -1, -1, 0, 0, 1]);
        assert_eq!(bvas.root, vec![0, 2, 0, 0, 0, 0, 0]);
        assert_eq!(bvas.leaf, vec![1, 1, 0, 0, 0, 0, 0]);
        assert_eq!(map.get("(1,1)"), Some("l"));
        let (vectors, complete) = enumerate_bvas_vectors(&bvas.system, &bvas.leaf, 3, 4, 100_000);
        assert!(complete);
        assert!(vectors.contains(&vec![0, 2, 0, 0, 0, 0, 1]));
        assert!(vectors
            .iter()
            .any(|v| v.iter().zip(bvas.root.iter()).all(|(x, y)| x >= y)));
    }

    #[test]
    fn splits_consume_one_staged_state_per_branch() {
        let system = Bvass::new(
            vec!["r".to_string(), "l".to_string()],
            0,
            vec![],
            vec![SplitRule { source: 0, left: 1, right: 1 }],
        )
        .unwrap();
        let inst = CoverInstance {
            system,
            root_state: "r".to_string(),
            leaf_state: "l".to_string(),
        };
        let (bvas, _) = bvass_to_bvas(&inst).unwrap();
        assert_eq!(bvas.system.dimension, 6);
        assert_eq!(bvas.system.split_rules, vec![vec![0, 2, -1, -1, -1, -1]]);
        let (vectors, complete) = enumerate_bvas_vectors(&bvas.system, &bvas.leaf, 2, 3, 100_000);
        assert!(complete);
        assert!(vectors.contains(&vec![0, 2, 0, 0, 0, 0]));
    }

    #[test]
    fn an_uncoverable_instance_has_no_dominating_vector() {
        let system =
            Bvass::new(vec!["r".to_string(), "l".to_string()], 1, vec![], vec![]).unwrap();
        let inst = CoverInstance {
            system,
            root_state: "r".to_string(),
            leaf_state: "l".to_string(),
        };
        assert!(!solve_coverability(&inst, 3, 100_000).unwrap().is_witness());
        let (bvas, _) = bvass_to_bvas(&inst).unwrap();
        let (vectors, complete) = enumerate_bvas_vectors(&bvas.system, &bvas.leaf, 3, 5, 100_000);
        assert!(complete);
        assert!(!vectors
            .iter()
            .any(|v| v.iter().zip(bvas.root.iter()).all(|(x, y)| x >= y)));
    }

    #[test]
    fn stateless_growth_becomes_a_stateful_cover() {
        let bvas = Bvas::new(1, vec![vec![2]], vec![]).unwrap();
        let (inst, map) = bvas_to_bvass(&bvas, &[5], &[1]).unwrap();
        assert_eq!(inst.system.states, ["q", "@root", "@leaf"]);
        assert_eq!(map.get("@root"), Some("entry point absorbing the covering slack"));
        let solved = solve_coverability(&inst, 6, 1_000_000).unwrap();
        let tree = solved.witness().expect("1 grows past 5 in two steps");
        validate_cover_witness(&inst, tree).unwrap();
    }

    #[test]
    fn stateless_splits_get_a_staging_state() {
        let bvas = Bvas::new(1, vec![], vec![vec![0]]).unwrap();
        let (inst, _) = bvas_to_bvass(&bvas, &[2], &[1]).unwrap();
        assert_eq!(inst.system.states.len(), 4);
        assert_eq!(inst.system.split_rules.len(), 1);
        let solved = solve_coverability(&inst, 2, 1_000_000).unwrap();
        let tree = solved.witness().expect("two leaves sum past the root");
        validate_cover_witness(&inst, tree).unwrap();
    }

    #[test]
    fn a_bounded_stateless_system_cannot_cover_past_its_leaf() {
        let bvas = Bvas::new(1, vec![], vec![]).unwrap();
        let (inst, _) = bvas_to_bvass(&bvas, &[2], &[1]).unwrap();
        assert!(!solve_coverability(&inst, 4, 1_000_000).unwrap().is_witness());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let bvas = Bvas::new(2, vec![], vec![]).unwrap();
        assert!(matches!(bvas_to_bvass(&bvas, &[1], &[0, 0]), Err(Error::ShapeMismatch(_))));
        let inst = CoverInstance {
            system: Bvass::new(vec!["q".to_string()], 0, vec![], vec![]).unwrap(),
            root_state: "missing".to_string(),
            leaf_state: "q".to_string(),
        };
        assert!(matches!(bvass_to_bvas(&inst), Err(Error::ShapeMismatch(_))));
    }
}
