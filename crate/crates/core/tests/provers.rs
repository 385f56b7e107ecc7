//! End-to-end checks of the two provers: fixed verdicts with independent
//! confirmation by the depth-bounded search, agreement across an exhaustive
//! formula slice, and validity of every produced proof.

mod common;

use common::{implicational_corpus, random_implicational, Rng};
use relog_core::formula::{parse_formula, Formula};
use relog_core::fr::{check_fr_proof, fr_prove, fr_prove_with_budget, FocusSequent};
use relog_core::lr::{
    check_lr_proof, lr_prove, lr_prove_bounded, lr_prove_with_budget, Sequent,
};
use relog_core::multiset::Multiset;
use relog_core::{BoundedVerdict, Error};

fn f(text: &str) -> Formula {
    parse_formula(text).expect("well-formed formula")
}

/// The fixed verdicts every refactor must preserve.  The first column is the
/// formula, the second whether it is provable.
const KNOWN: &[(&str, bool)] = &[
    ("a -> a", true),
    ("b -> (a -> b)", false),
    ("(a -> (a -> b)) -> (a -> b)", true),
    ("((a -> b) -> a) -> a", false),
    ("a -> (a -> a)", false),
];

#[test]
fn fixed_verdicts_hold_in_both_calculi() {
    for (text, expected) in KNOWN {
        let goal = f(text);
        let lr = lr_prove(&Sequent::goal(goal.clone())).expect("within budget");
        let fr = fr_prove(&FocusSequent::goal(goal.clone())).expect("within budget");
        assert_eq!(lr.is_provable(), *expected, "unfocused verdict for {text}");
        assert_eq!(fr.is_provable(), *expected, "focused verdict for {text}");
        if let Some(p) = lr.proof() {
            assert!(check_lr_proof(p), "unfocused proof of {text} must check");
            assert_eq!(p.conclusion, Sequent::goal(goal.clone()));
        }
        if let Some(p) = fr.proof() {
            assert!(check_fr_proof(p), "focused proof of {text} must check");
            assert_eq!(p.conclusion, FocusSequent::goal(goal));
        }
    }
}

/// The depth-bounded searcher explores the full rule space without the
/// pruning heuristics of the main prover, so it independently confirms the
/// non-trivial fixed verdicts at a depth comfortably past their proof sizes.
#[test]
fn bounded_search_confirms_the_hard_verdicts() {
    let cases = [
        ("(a -> (a -> b)) -> (a -> b)", true),
        ("((a -> b) -> a) -> a", false),
        ("a -> (a -> a)", false),
    ];
    for (text, expected) in cases {
        let verdict = lr_prove_bounded(&Sequent::goal(f(text)), 14).expect("within budget");
        assert_eq!(verdict.is_provable(), expected, "depth-14 verdict for {text}");
        if !expected {
            assert!(matches!(verdict, BoundedVerdict::NotProvableWithinDepth));
        }
    }
}

/// Both calculi must agree over every implicational formula on two atoms up
/// to size 7; the full size-9 sweep runs in the acceptance suite.
#[test]
fn calculi_agree_on_an_exhaustive_slice() {
    let corpus = implicational_corpus(&["a", "b"], 7);
    assert_eq!(corpus.len(), 102);
    let mut provable = 0usize;
    for goal in corpus {
        let lr = lr_prove(&Sequent::goal(goal.clone())).expect("within budget");
        let fr = fr_prove(&FocusSequent::goal(goal.clone())).expect("within budget");
        assert_eq!(lr.is_provable(), fr.is_provable(), "disagreement on {goal}");
        if lr.is_provable() {
            provable += 1;
            assert!(check_lr_proof(lr.proof().unwrap()), "unfocused proof of {goal}");
            assert!(check_fr_proof(fr.proof().unwrap()), "focused proof of {goal}");
        }
    }
    // Relevance leaves little room at this size: a -> a, the two-atom
    // variants of self-application, and permutations thereof.
    assert!(provable > 0, "the slice contains provable formulas");
}

#[test]
fn random_formulas_cannot_split_the_calculi() {
    let mut rng = Rng::new(0x51c3_9d0a);
    for _ in 0..300 {
        let size = 1 + 2 * rng.below(6) as usize;
        let goal = random_implicational(&mut rng, &["a", "b", "c"], size);
        let lr = lr_prove(&Sequent::goal(goal.clone())).expect("within budget");
        let fr = fr_prove(&FocusSequent::goal(goal.clone())).expect("within budget");
        assert_eq!(lr.is_provable(), fr.is_provable(), "disagreement on {goal}");
    }
}

#[test]
fn sequents_with_antecedents_are_supported() {
    let ante = Multiset::from_slice(&[f("a"), f("a -> b")]);
    let lr = lr_prove(&Sequent::new(ante.clone(), f("b"))).expect("within budget");
    assert!(lr.is_provable(), "modus ponens");
    let fr = fr_prove(&FocusSequent::unfocused(ante, f("b"))).expect("within budget");
    assert!(fr.is_provable(), "focused modus ponens");

    // Weakening is not admissible: an unused hypothesis blocks the proof.
    let extra = Multiset::from_slice(&[f("a"), f("a -> b"), f("c")]);
    let lr = lr_prove(&Sequent::new(extra.clone(), f("b"))).expect("within budget");
    assert!(!lr.is_provable(), "the spare hypothesis must be consumed");
    let fr = fr_prove(&FocusSequent::unfocused(extra, f("b"))).expect("within budget");
    assert!(!fr.is_provable());

    // Contraction is: two copies collapse into one use each.
    let twice = Multiset::from_slice(&[f("a"), f("a"), f("a -> (a -> b)")]);
    let lr = lr_prove(&Sequent::new(twice, f("b"))).expect("within budget");
    assert!(lr.is_provable(), "double use of the hypothesis");
}

#[test]
fn extra_connectives_stay_in_the_unfocused_calculus() {
    // The unfocused prover knows the unit and the product.
    let truth = lr_prove(&Sequent::goal(f("1"))).expect("within budget");
    assert!(truth.is_provable());
    let fusion = lr_prove(&Sequent::new(
        Multiset::from_slice(&[f("a * b")]),
        f("b * a"),
    ))
    .expect("within budget");
    assert!(fusion.is_provable(), "the product commutes");

    // The focused prover is restricted to pure implications.
    let err = fr_prove(&FocusSequent::goal(f("1"))).unwrap_err();
    assert!(matches!(err, Error::UnsupportedConnective(_)));
    let err = fr_prove(&FocusSequent::goal(f("(a * b) -> a"))).unwrap_err();
    assert!(matches!(err, Error::UnsupportedConnective(_)));
}

#[test]
fn exhausted_budgets_surface_as_errors() {
    let goal = f("(a -> (a -> b)) -> (a -> b)");
    let err = lr_prove_with_budget(&Sequent::goal(goal.clone()), 2).unwrap_err();
    assert!(matches!(err, Error::ResourceLimit(_)));
    let err = fr_prove_with_budget(&FocusSequent::goal(goal), 2).unwrap_err();
    assert!(matches!(err, Error::ResourceLimit(_)));
}
