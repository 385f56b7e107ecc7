//! Solver-level checks for the stateful counter systems: verdicts against
//! the bottom-up enumeration oracles, witness validation, the separation
//! between the three readings, and guard behaviour on malformed input.

mod common;

use std::collections::BTreeSet;

use common::{
    converged_vectors, random_ordinary_cover, random_ordinary_expansive, random_plain_cover,
    Rng,
};
use relog_core::bvass::{
    check_deduction_tree, enumerate_trees, full_rule_set, validate_cover_witness,
    validate_reach_witness, Bvass, CoverInstance, Mode, ReachInstance, RuleId, SplitRule,
    UnaryRule,
};
use relog_core::solvers::{
    saturate, solve_comprehensive, solve_coverability, solve_reachability,
};
use relog_core::{Error, Solved};

const BUDGET: u64 = 50_000_000;
const ORACLE_BUDGET: u64 = 2_000_000;

/// One counter, four states.  The root adds a token and forks; one fork
/// branch can consume a token, the other cannot, so the exact zero target is
/// unreachable under the plain reading.  A duplication step above the fork
/// balances the two branches, so the expansive reading reaches it — and the
/// witness happens to use every rule, so the comprehensive reading does too.
fn forked_system() -> Bvass {
    Bvass::new(
        vec!["root".into(), "fork".into(), "mid".into(), "leaf".into()],
        1,
        vec![
            UnaryRule { source: 0, vector: vec![1], target: 1 },
            UnaryRule { source: 2, vector: vec![-1], target: 3 },
        ],
        vec![SplitRule { source: 1, left: 2, right: 2 }],
    )
    .expect("well-formed system")
}

#[test]
fn the_three_readings_separate_on_the_forked_system() {
    let sys = forked_system();
    let plain = ReachInstance {
        system: sys.clone(),
        root_state: "root".into(),
        leaf_state: "leaf".into(),
        mode: Mode::Plain,
    };
    let verdict = solve_reachability(&plain, 6, BUDGET).expect("within budget");
    assert!(!verdict.is_witness(), "plain reading cannot balance the fork");

    let expansive = ReachInstance { mode: Mode::Expansive, ..plain.clone() };
    let verdict = solve_reachability(&expansive, 2, BUDGET).expect("within budget");
    let tree = verdict.witness().expect("a duplication step balances the fork");
    validate_reach_witness(&expansive, tree).expect("the witness replays");

    let comprehensive = ReachInstance { mode: Mode::Comprehensive, ..plain };
    let verdict = solve_reachability(&comprehensive, 2, BUDGET).expect("within budget");
    let tree = verdict.witness().expect("the balancing derivation uses every rule");
    validate_reach_witness(&comprehensive, tree).expect("the witness replays");
}

#[test]
fn comprehensive_fails_when_a_rule_is_unusable() {
    // A second unary rule lives on an unreachable state, so plain
    // reachability holds trivially while the comprehensive reading fails.
    let sys = Bvass::new(
        vec!["q0".into(), "q1".into()],
        1,
        vec![
            UnaryRule { source: 0, vector: vec![0], target: 0 },
            UnaryRule { source: 1, vector: vec![1], target: 1 },
        ],
        vec![],
    )
    .unwrap();
    let verdict = solve_comprehensive(&sys, "q0", "q0", 4, BUDGET).expect("within budget");
    assert!(!verdict.is_witness(), "the isolated rule can never fire");

    let plain = ReachInstance {
        system: sys,
        root_state: "q0".into(),
        leaf_state: "q0".into(),
        mode: Mode::Plain,
    };
    let verdict = solve_reachability(&plain, 4, BUDGET).expect("within budget");
    assert!(verdict.is_witness(), "the self-loop suffices on its own");
}

/// The solver and the height-bounded enumeration must agree wherever the
/// enumeration provably closed.
#[test]
fn coverability_verdicts_match_the_enumeration() {
    let mut rng = Rng::new(0x8ac2_f013);
    let cap = 4u64;
    let mut compared = 0usize;
    for round in 0..100 {
        let inst = if round % 2 == 0 {
            random_ordinary_cover(&mut rng)
        } else {
            random_plain_cover(&mut rng)
        };
        let root = inst.system.state_index(&inst.root_state).unwrap();
        let leaf = inst.system.state_index(&inst.leaf_state).unwrap();
        let verdict = solve_coverability(&inst, cap, BUDGET).expect("within budget");
        if let Solved::Witness(tree) = &verdict {
            validate_cover_witness(&inst, tree).expect("the witness replays");
            assert!(tree.node.vector.iter().all(|x| *x <= cap));
        }
        let (table, closed) =
            converged_vectors(&inst.system, leaf, Mode::Plain, cap, 8, ORACLE_BUDGET);
        if !closed {
            continue;
        }
        compared += 1;
        let oracle = table.get(&root).is_some_and(|s| !s.is_empty());
        assert_eq!(verdict.is_witness(), oracle, "round {round}");
    }
    assert!(compared >= 80, "most tiny instances close at height 8, got {compared}");
}

#[test]
fn expansive_reachability_matches_the_enumeration() {
    let mut rng = Rng::new(0xd00f_41bb);
    let cap = 4u64;
    let mut compared = 0usize;
    for round in 0..100 {
        let inst = random_ordinary_expansive(&mut rng);
        let root = inst.system.state_index(&inst.root_state).unwrap();
        let leaf = inst.system.state_index(&inst.leaf_state).unwrap();
        let verdict = solve_reachability(&inst, cap, BUDGET).expect("within budget");
        if let Solved::Witness(tree) = &verdict {
            validate_reach_witness(&inst, tree).expect("the witness replays");
        }
        let (table, closed) =
            converged_vectors(&inst.system, leaf, Mode::Expansive, cap, 8, ORACLE_BUDGET);
        if !closed {
            continue;
        }
        compared += 1;
        let zero = vec![0u64; inst.system.dimension];
        let oracle = table.get(&root).is_some_and(|s| s.contains(&zero));
        assert_eq!(verdict.is_witness(), oracle, "round {round}");
    }
    assert!(compared >= 60, "enough instances close at height 8, got {compared}");
}

/// The comprehensive solver tracks used-rule masks; the tree enumeration
/// tracks used-rule sets.  Their verdicts must coincide wherever the
/// enumeration closed.
#[test]
fn comprehensive_verdicts_match_the_rule_tracking_enumeration() {
    let mut rng = Rng::new(0x33e1_90d7);
    let cap = 3u64;
    let mut compared = 0usize;
    for round in 0..60 {
        let cover = random_ordinary_cover(&mut rng);
        let inst = ReachInstance {
            system: cover.system,
            root_state: cover.root_state,
            leaf_state: cover.leaf_state,
            mode: Mode::Comprehensive,
        };
        let root = inst.system.state_index(&inst.root_state).unwrap();
        let leaf = inst.system.state_index(&inst.leaf_state).unwrap();
        let verdict = solve_reachability(&inst, cap, BUDGET).expect("within budget");
        if let Solved::Witness(tree) = &verdict {
            validate_reach_witness(&inst, tree).expect("the witness replays");
        }
        let (shallow, ok1) =
            enumerate_trees(&inst.system, leaf, Mode::Comprehensive, cap, 7, ORACLE_BUDGET);
        let (deep, ok2) =
            enumerate_trees(&inst.system, leaf, Mode::Comprehensive, cap, 8, ORACLE_BUDGET);
        if !(ok1 && ok2 && shallow == deep) {
            continue;
        }
        compared += 1;
        let zero = vec![0u64; inst.system.dimension];
        let full = full_rule_set(&inst.system);
        let oracle = deep
            .get(&root)
            .is_some_and(|set| set.iter().any(|(v, used)| *v == zero && *used == full));
        assert_eq!(verdict.is_witness(), oracle, "round {round}");
    }
    assert!(compared >= 30, "enough instances close at height 8, got {compared}");
}

#[test]
fn saturation_discovers_exactly_the_enumerable_configurations() {
    let sys = forked_system();
    let cap = 3u64;
    let sat = saturate(&sys, 3, cap, true, BUDGET).expect("within budget");
    let (table, closed) = converged_vectors(&sys, 3, Mode::Expansive, cap, 12, ORACLE_BUDGET);
    assert!(closed, "the forked system closes quickly");
    for state in 0..sys.states.len() {
        let got: BTreeSet<Vec<u64>> = sat.discovered(state).iter().cloned().collect();
        let want = table.get(&state).cloned().unwrap_or_default();
        assert_eq!(got, want, "state {}", sys.states[state]);
    }
    assert_eq!(sat.config_count(), table.values().map(|s| s.len()).sum::<usize>());
}

#[test]
fn corrupted_witnesses_are_rejected() {
    let sys = forked_system();
    let inst = ReachInstance {
        system: sys,
        root_state: "root".into(),
        leaf_state: "leaf".into(),
        mode: Mode::Expansive,
    };
    let tree = solve_reachability(&inst, 2, BUDGET)
        .expect("within budget")
        .witness()
        .expect("reachable expansively")
        .clone();
    assert!(check_deduction_tree(&inst.system, 3, Mode::Expansive, &tree));

    // Bump a vector entry somewhere below the root.
    let mut bad = tree.clone();
    let mut cursor = &mut bad;
    while !cursor.children.is_empty() {
        cursor = &mut cursor.children[0];
    }
    cursor.node.vector[0] += 1;
    let err = validate_reach_witness(&inst, &bad).unwrap_err();
    assert!(!err.path.is_empty() || !err.reason.is_empty());
    assert!(!check_deduction_tree(&inst.system, 3, Mode::Expansive, &bad));

    // A duplication step is illegal under the plain reading.
    let plain = ReachInstance { mode: Mode::Plain, ..inst };
    assert!(validate_reach_witness(&plain, &tree).is_err());
}

#[test]
fn shape_guards_reject_malformed_systems() {
    let dup = Bvass::new(
        vec!["q0".into(), "q0".into()],
        1,
        vec![],
        vec![],
    );
    assert!(matches!(dup, Err(Error::ShapeMismatch(_))));

    let wrong_len = Bvass::new(
        vec!["q0".into()],
        2,
        vec![UnaryRule { source: 0, vector: vec![1], target: 0 }],
        vec![],
    );
    assert!(matches!(wrong_len, Err(Error::ShapeMismatch(_))));

    let unknown = Bvass::new(
        vec!["q0".into()],
        1,
        vec![],
        vec![SplitRule { source: 0, left: 1, right: 0 }],
    );
    assert!(matches!(unknown, Err(Error::ShapeMismatch(_))));

    let sys = forked_system();
    let inst = CoverInstance {
        system: sys.clone(),
        root_state: "missing".into(),
        leaf_state: "leaf".into(),
    };
    assert!(matches!(solve_coverability(&inst, 2, BUDGET), Err(Error::ShapeMismatch(_))));

    // The mask-based comprehensive solver rejects systems with too many
    // rules instead of silently truncating.
    let mut many = Vec::new();
    for _ in 0..65 {
        many.push(UnaryRule { source: 0, vector: vec![0], target: 0 });
    }
    let wide = Bvass::new(vec!["q0".into()], 1, many, vec![]).unwrap();
    assert!(matches!(
        solve_comprehensive(&wide, "q0", "q0", 1, BUDGET),
        Err(Error::StateExplosion(_))
    ));
}

#[test]
fn exhausted_budgets_surface_as_errors() {
    let inst = CoverInstance {
        system: forked_system(),
        root_state: "root".into(),
        leaf_state: "leaf".into(),
    };
    assert!(matches!(solve_coverability(&inst, 8, 1), Err(Error::ResourceLimit(_))));
    let reach = ReachInstance {
        system: forked_system(),
        root_state: "root".into(),
        leaf_state: "leaf".into(),
        mode: Mode::Comprehensive,
    };
    assert!(matches!(solve_reachability(&reach, 8, 1), Err(Error::ResourceLimit(_))));
}

/// Rule ids reported by validation agree with the full rule set helper.
#[test]
fn witness_rule_usage_is_reported() {
    let sys = forked_system();
    let inst = ReachInstance {
        system: sys.clone(),
        root_state: "root".into(),
        leaf_state: "leaf".into(),
        mode: Mode::Expansive,
    };
    let tree = solve_reachability(&inst, 2, BUDGET)
        .expect("within budget")
        .witness()
        .expect("reachable expansively")
        .clone();
    let used = relog_core::bvass::validate_deduction_tree(&sys, 3, Mode::Expansive, &tree)
        .expect("valid witness");
    assert_eq!(used, full_rule_set(&sys));
    assert!(used.contains(&RuleId::Unary(0)));
    assert!(used.contains(&RuleId::Split(0)));
}
