//! Compiling provability into counter systems and decoding it back.
//!
//! [`formula_to_bvass`] builds, for a goal formula `F`, a stateful system
//! whose expansive reachability question `(state of F, 0)` has the same
//! answer as `⊢ F`.  Coordinates count subformula occurrences in the
//! antecedent; states carry the succedent; sequent rules become unary and
//! split rules; contraction is covered by duplication steps.
//!
//! [`comprehensive_to_formula`] goes the other way for ordinary systems
//! under the comprehensive reading: each rule becomes an implicational
//! hypothesis, reusable thanks to contraction and required at least once
//! because antecedents cannot be discarded.

use std::collections::BTreeSet;

use crate::bvass::{Bvass, Mode, ReachInstance, SplitRule, UnaryRule};
use crate::formula::{render_formula, subformulas, Formula};
use crate::Error;

use super::SideMap;

fn unit(dim: usize, coord: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    v[coord] = sign;
    v
}

/// Compiles proof search for `goal` into an expansive reachability instance,
/// one coordinate per subformula.  The side map records, for each coordinate,
/// the subformula it counts, plus the root and leaf state names.
pub fn formula_to_bvass(goal: &Formula) -> Result<(ReachInstance, SideMap), Error> {
    let table = subformulas(goal);
    let dim = table.len();
    let rendered: Vec<String> = table.entries().iter().map(render_formula).collect();
    let coord = |f: &Formula| table.coord(f).expect("subformula is in the table");
    let has_truth = table.contains(&Formula::Truth);

    let mut states = rendered.clone();
    // Leaves stand for closed premises: the truth state when the truth
    // constant occurs (its right rule has no premise), a fresh marker
    // otherwise.
    let (leaf_name, leaf_idx) = if has_truth {
        (render_formula(&Formula::Truth), coord(&Formula::Truth) - 1)
    } else {
        states.push("@leaf".to_string());
        ("@leaf".to_string(), dim)
    };

    let mut unary: Vec<UnaryRule> = Vec::new();
    let mut splits: Vec<SplitRule> = Vec::new();
    // The identity rule for the truth constant coincides with its own
    // left-rule instance below, so exact duplicates are skipped.
    let mut seen: BTreeSet<(usize, Vec<i64>, usize)> = BTreeSet::new();
    let mut push_unary = |unary: &mut Vec<UnaryRule>, source: usize, vector: Vec<i64>, target: usize| {
        if seen.insert((source, vector.clone(), target)) {
            unary.push(UnaryRule { source, vector, target });
        }
    };

    // Identity: a sequent A ⊢ A is closed directly.
    for a in 0..dim {
        push_unary(&mut unary, a, unit(dim, a, -1), leaf_idx);
    }
    // Right implication rule: proving A→B moves the goal to B and adds A.
    for (fi, f) in table.entries().iter().enumerate() {
        if let Formula::Imp(a, b) = f {
            push_unary(&mut unary, fi, unit(dim, coord(a) - 1, 1), coord(b) - 1);
        }
    }
    // Left implication rule, for every goal C and implication A→B in the
    // antecedent: consume A→B, split the context, prove A on one side and
    // resume C with B on the other.
    for ci in 0..dim {
        for (fi, f) in table.entries().iter().enumerate() {
            if let Formula::Imp(a, b) = f {
                let m1 = states.len();
                states.push(format!("m1@{}@{}", rendered[ci], rendered[fi]));
                let m2 = states.len();
                states.push(format!("m2@{}@{}", rendered[ci], rendered[fi]));
                push_unary(&mut unary, ci, unit(dim, fi, -1), m1);
                splits.push(SplitRule { source: m1, left: coord(a) - 1, right: m2 });
                push_unary(&mut unary, m2, unit(dim, coord(b) - 1, 1), ci);
            }
        }
    }
    // Left fusion rule: consume A∘B and add A and B, under any goal C.
    for ci in 0..dim {
        for (fi, f) in table.entries().iter().enumerate() {
            if let Formula::Fusion(a, b) = f {
                let p1 = states.len();
                states.push(format!("p1@{}@{}", rendered[ci], rendered[fi]));
                let p2 = states.len();
                states.push(format!("p2@{}@{}", rendered[ci], rendered[fi]));
                push_unary(&mut unary, ci, unit(dim, fi, -1), p1);
                push_unary(&mut unary, p1, unit(dim, coord(a) - 1, 1), p2);
                push_unary(&mut unary, p2, unit(dim, coord(b) - 1, 1), ci);
            }
        }
    }
    // Right fusion rule: proving A∘B splits the context between A and B.
    for (fi, f) in table.entries().iter().enumerate() {
        if let Formula::Fusion(a, b) = f {
            splits.push(SplitRule { source: fi, left: coord(a) - 1, right: coord(b) - 1 });
        }
    }
    // Left truth rule: a truth occurrence in the antecedent may be dropped.
    if has_truth {
        let t = coord(&Formula::Truth) - 1;
        for a in 0..dim {
            push_unary(&mut unary, a, unit(dim, t, -1), a);
        }
    }

    let mut map = SideMap::new();
    for (i, r) in rendered.iter().enumerate() {
        map.push(format!("e{}", i + 1), r.clone());
    }
    map.push("root", rendered[dim - 1].clone());
    map.push("leaf", leaf_name.clone());
    let system = Bvass::new(states, dim, unary, splits)?;
    Ok((
        ReachInstance {
            system,
            root_state: rendered[dim - 1].clone(),
            leaf_state: leaf_name,
            mode: Mode::Expansive,
        },
        map,
    ))
}

/// Encodes an ordinary comprehensive reachability instance as a single
/// implicational formula: provable exactly when the instance is positive.
/// State names are sanitized into atoms; coordinates become atoms `e1…ed`.
pub fn comprehensive_to_formula(inst: &ReachInstance) -> Result<(Formula, SideMap), Error> {
    if inst.mode != Mode::Comprehensive {
        return Err(Error::ShapeMismatch(format!(
            "formula encoding needs the comprehensive reading, got {}",
            inst.mode.name()
        )));
    }
    let sys = &inst.system;
    if !sys.is_ordinary() {
        return Err(Error::NotOrdinary(
            "formula encoding needs unit rule vectors; normalize the system first".to_string(),
        ));
    }
    let root = sys
        .state_index(&inst.root_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown root state {}", inst.root_state)))?;
    let leaf = sys
        .state_index(&inst.leaf_state)
        .ok_or_else(|| Error::ShapeMismatch(format!("unknown leaf state {}", inst.leaf_state)))?;

    let atoms: Vec<String> = sys
        .states
        .iter()
        .map(|name| {
            name.chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
                .collect()
        })
        .collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (name, atom) in sys.states.iter().zip(atoms.iter()) {
        if atom == "T" || atom == "o" {
            return Err(Error::AtomCollision(format!(
                "state {name} maps to the reserved atom {atom}"
            )));
        }
        if !seen.insert(atom) {
            return Err(Error::AtomCollision(format!(
                "state {name} collides with another state as atom {atom}"
            )));
        }
    }
    for i in 1..=sys.dimension {
        if seen.contains(format!("e{i}").as_str()) {
            return Err(Error::AtomCollision(format!(
                "a state collides with the coordinate atom e{i}"
            )));
        }
    }
    let state_atom: Vec<Formula> =
        atoms.iter().map(|a| Formula::atom(a)).collect::<Result<_, _>>()?;
    let coord_atom: Vec<Formula> = (1..=sys.dimension)
        .map(|i| Formula::atom(&format!("e{i}")))
        .collect::<Result<_, _>>()?;

    let mut map = SideMap::new();
    map.push("root", atoms[root].clone());
    map.push("leaf", atoms[leaf].clone());
    map.push("h1", format!("one leaf at {}", inst.leaf_state));
    let mut hypotheses: Vec<Formula> = Vec::new();
    for (k, rule) in sys.unary_rules.iter().enumerate() {
        let i = rule.vector.iter().position(|x| *x != 0).expect("ordinary rule");
        let q = state_atom[rule.source].clone();
        let q1 = state_atom[rule.target].clone();
        let e = coord_atom[i].clone();
        let h = if rule.vector[i] > 0 {
            // An increment continues at the target with one more token.
            Formula::imp(Formula::imp(e, q1), q)
        } else {
            // A decrement consumes a token before continuing at the target.
            Formula::imp(q1, Formula::imp(e, q))
        };
        map.push(format!("h{}", hypotheses.len() + 2), format!("unary rule {k}"));
        hypotheses.push(h);
    }
    for (k, rule) in sys.split_rules.iter().enumerate() {
        let h = Formula::imp(
            state_atom[rule.left].clone(),
            Formula::imp(state_atom[rule.right].clone(), state_atom[rule.source].clone()),
        );
        map.push(format!("h{}", hypotheses.len() + 2), format!("split rule {k}"));
        hypotheses.push(h);
    }
    for (q, name) in sys.states.iter().enumerate() {
        if atoms[q] != *name {
            map.push(atoms[q].clone(), name.clone());
        }
    }
    for i in 1..=sys.dimension {
        map.push(format!("e{i}"), format!("coordinate {i}"));
    }

    let mut args = Vec::with_capacity(hypotheses.len() + 1);
    args.push(state_atom[leaf].clone());
    args.extend(hypotheses);
    Ok((Formula::curry(&args, state_atom[root].clone()), map))
}
