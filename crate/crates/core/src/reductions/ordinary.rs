//! Normalizing unary rules to unit vectors.
//!
//! A unary rule whose vector is not a signed unit is replaced by a chain of
//! unit steps through fresh intermediate states: every decrement first, in
//! coordinate order, then every increment.  Along the chain each coordinate
//! moves monotonically between its endpoint values, so the intermediate
//! vectors stay non-negative and never exceed the larger endpoint — the
//! translation is transparent to any coordinate cap.  Derivability at the
//! original states is preserved under both the plain and the expansive
//! reading; a duplication step at an intermediate state can always be pushed
//! past the rest of its chain.
//!
//! A zero-vector rule has no steps to chain and is replaced by a bounce,
//! one increment and one decrement of the first coordinate.  The bounce is
//! faithful except for derivations sitting exactly at a coordinate cap,
//! where the extra unit has no headroom.

use crate::bvass::{Bvass, UnaryRule};
use crate::Error;

use super::SideMap;

fn unit(dim: usize, coord: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    v[coord] = sign;
    v
}

/// Replaces every non-unit unary rule by a chain of unit steps through fresh
/// states.  Split rules and the original state indices are unchanged.
pub fn to_ordinary(sys: &Bvass) -> Result<(Bvass, SideMap), Error> {
    let d = sys.dimension;
    let mut states = sys.states.clone();
    let mut unary: Vec<UnaryRule> = Vec::new();
    let mut map = SideMap::new();
    for (k, r) in sys.unary_rules.iter().enumerate() {
        let nonzero = r.vector.iter().filter(|x| **x != 0).count();
        if nonzero == 1 && r.vector.iter().all(|x| x.abs() <= 1) {
            unary.push(r.clone());
            continue;
        }
        let mut steps: Vec<(usize, i64)> = Vec::new();
        for (i, x) in r.vector.iter().enumerate() {
            for _ in 0..x.unsigned_abs() {
                if *x < 0 {
                    steps.push((i, -1));
                }
            }
        }
        for (i, x) in r.vector.iter().enumerate() {
            for _ in 0..x.unsigned_abs() {
                if *x > 0 {
                    steps.push((i, 1));
                }
            }
        }
        if steps.is_empty() {
            if d == 0 {
                return Err(Error::ShapeMismatch(format!(
                    "unary rule {k} has a zero vector and there is no coordinate to bounce"
                )));
            }
            steps.push((0, 1));
            steps.push((0, -1));
        }
        let mut source = r.source;
        for (s, (coord, sign)) in steps.iter().enumerate() {
            let target = if s + 1 == steps.len() {
                r.target
            } else {
                let fresh = format!("@ord@{k}@{}", s + 1);
                if sys.states.iter().any(|q| *q == fresh) {
                    return Err(Error::ShapeMismatch(format!(
                        "state name {fresh} is reserved by the translation"
                    )));
                }
                states.push(fresh);
                states.len() - 1
            };
            unary.push(UnaryRule { source, vector: unit(d, *coord, *sign), target });
            source = target;
        }
        map.push(format!("@ord@{k}"), format!("unit chain replacing unary rule {k}"));
    }
    let out = Bvass::new(states, d, unary, sys.split_rules.clone())?;
    debug_assert!(out.is_ordinary());
    Ok((out, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvass::{enumerate_vectors, Mode};
    use std::collections::{BTreeMap, BTreeSet};

    fn tables_agree(sys: &Bvass, out: &Bvass, leaf: usize, mode: Mode, cap: u64) {
        let (orig, oc) = enumerate_vectors(sys, leaf, mode, cap, 30, 1_000_000);
        let (tran, tc) = enumerate_vectors(out, leaf, mode, cap, 90, 1_000_000);
        assert!(oc && tc);
        let filtered: BTreeMap<usize, BTreeSet<Vec<u64>>> =
            tran.into_iter().filter(|(k, _)| *k < sys.states.len()).collect();
        assert_eq!(orig, filtered);
    }

    #[test]
    fn wide_rules_become_unit_chains() {
        let sys = Bvass::new(
            vec!["r".to_string(), "m".to_string(), "l".to_string()],
            2,
            vec![
                UnaryRule { source: 0, vector: vec![-1, 2], target: 1 },
                UnaryRule { source: 1, vector: vec![0, -1], target: 1 },
                UnaryRule { source: 1, vector: vec![0, -1], target: 2 },
            ],
            vec![],
        )
        .unwrap();
        let (out, map) = to_ordinary(&sys).unwrap();
        assert!(out.is_ordinary());
        assert_eq!(out.states.len(), 5);
        assert_eq!(out.unary_rules.len(), 5);
        assert_eq!(map.get("@ord@0"), Some("unit chain replacing unary rule 0"));
        tables_agree(&sys, &out, 2, Mode::Plain, 3);
        tables_agree(&sys, &out, 2, Mode::Expansive, 3);
    }

    #[test]
    fn zero_vectors_bounce_through_one_intermediate() {
        let sys = Bvass::new(
            vec!["r".to_string(), "l".to_string()],
            1,
            vec![UnaryRule { source: 0, vector: vec![0], target: 1 }],
            vec![],
        )
        .unwrap();
        let (out, _) = to_ordinary(&sys).unwrap();
        assert_eq!(out.states.len(), 3);
        assert_eq!(out.unary_rules.len(), 2);
        assert!(out.is_ordinary());
        tables_agree(&sys, &out, 1, Mode::Plain, 2);
    }

    #[test]
    fn ordinary_systems_pass_through_unchanged() {
        let sys = Bvass::new(
            vec!["r".to_string(), "l".to_string()],
            2,
            vec![UnaryRule { source: 0, vector: vec![0, -1], target: 1 }],
            vec![],
        )
        .unwrap();
        let (out, map) = to_ordinary(&sys).unwrap();
        assert_eq!(out, sys);
        assert!(map.pairs.is_empty());
    }

    #[test]
    fn degenerate_and_colliding_inputs_are_rejected() {
        let zero_dim = Bvass::new(
            vec!["q".to_string()],
            0,
            vec![UnaryRule { source: 0, vector: vec![], target: 0 }],
            vec![],
        )
        .unwrap();
        assert!(matches!(to_ordinary(&zero_dim), Err(Error::ShapeMismatch(_))));

        let clash = Bvass::new(
            vec!["q".to_string(), "@ord@0@1".to_string()],
            1,
            vec![UnaryRule { source: 0, vector: vec![2], target: 0 }],
            vec![],
        )
        .unwrap();
        assert!(matches!(to_ordinary(&clash), Err(Error::ShapeMismatch(_))));
    }
}
