//! Proof-level transformations between the two calculi: mapping focused
//! proofs down, reconstructing focus, the admissible identity expansion, and
//! cut elimination.  Every output is re-validated by the independent proof
//! checkers.

mod common;

use common::{implicational_corpus, random_implicational, Rng};
use relog_core::formula::{parse_formula, Formula};
use relog_core::fr::{
    admissible_identity, check_fr_proof, defocus, eliminate_mix, focalize, fr_prove,
    invert_impr, FocusSequent,
};
use relog_core::lr::{check_lr_proof, lr_prove, Sequent};
use relog_core::multiset::Multiset;

fn f(text: &str) -> Formula {
    parse_formula(text).expect("well-formed formula")
}

/// Every provable formula in the slice yields a focused proof that maps to a
/// checkable unfocused proof of the same endsequent, and an unfocused proof
/// that refocuses to a checkable focused proof of the same endsequent.
#[test]
fn both_directions_cover_the_provable_slice() {
    let corpus = implicational_corpus(&["a", "b"], 7);
    let mut mapped = 0usize;
    for goal in corpus {
        let fr = fr_prove(&FocusSequent::goal(goal.clone())).expect("within budget");
        let Some(fr_proof) = fr.proof() else { continue };
        mapped += 1;

        let down = defocus(fr_proof).expect("defocusing cannot fail on a valid proof");
        assert!(check_lr_proof(&down), "defocused proof of {goal}");
        assert_eq!(down.conclusion, Sequent::goal(goal.clone()));

        let lr = lr_prove(&Sequent::goal(goal.clone())).expect("within budget");
        let lr_proof = lr.proof().expect("the calculi agree");
        let up = focalize(lr_proof).expect("focalization cannot fail on a pure proof");
        assert!(check_fr_proof(&up), "focalized proof of {goal}");
        assert_eq!(up.conclusion, FocusSequent::goal(goal));
    }
    assert!(mapped > 0, "the slice contains provable formulas");
}

#[test]
fn round_trips_preserve_the_endsequent() {
    for text in ["a -> a", "(a -> (a -> b)) -> (a -> b)", "(a -> b) -> (a -> b)"] {
        let goal = f(text);
        let fr = fr_prove(&FocusSequent::goal(goal.clone()))
            .expect("within budget")
            .into_proof()
            .expect("provable");
        let there = defocus(&fr).unwrap();
        let back = focalize(&there).unwrap();
        assert!(check_fr_proof(&back));
        assert_eq!(back.conclusion, fr.conclusion, "round trip through {text}");

        let lr = lr_prove(&Sequent::goal(goal))
            .expect("within budget")
            .into_proof()
            .expect("provable");
        let up = focalize(&lr).unwrap();
        let down = defocus(&up).unwrap();
        assert!(check_lr_proof(&down));
        assert_eq!(down.conclusion, lr.conclusion, "round trip through {text}");
    }
}

/// The identity expansion must produce a checkable proof of `{A} ⊢ A` for
/// arbitrary pure implicational `A`, without invoking proof search.
#[test]
fn identity_expansion_checks_for_random_formulas() {
    let mut rng = Rng::new(0x7e11_0c3d);
    for _ in 0..200 {
        let size = 1 + 2 * rng.below(5) as usize;
        let a = random_implicational(&mut rng, &["a", "b", "c"], size);
        let proof = admissible_identity(&a).expect("pure input");
        assert!(check_fr_proof(&proof), "identity proof of {a}");
        assert_eq!(
            proof.conclusion,
            FocusSequent::unfocused(Multiset::singleton(a.clone()), a)
        );
    }
}

#[test]
fn inversion_recovers_the_premise() {
    let goal = f("(a -> (a -> b)) -> (a -> b)");
    let proof = fr_prove(&FocusSequent::goal(goal))
        .expect("within budget")
        .into_proof()
        .expect("provable");
    let inner = invert_impr(&proof).expect("root is a right implication");
    assert!(check_fr_proof(&inner));
    assert_eq!(
        inner.conclusion,
        FocusSequent::unfocused(Multiset::singleton(f("a -> (a -> b)")), f("a -> b"))
    );
    // A second inversion peels the next argument.
    let inner2 = invert_impr(&inner).expect("root is again a right implication");
    assert_eq!(
        inner2.conclusion,
        FocusSequent::unfocused(
            Multiset::from_slice(&[f("a -> (a -> b)"), f("a")]),
            f("b")
        )
    );
}

/// Cut elimination across generated pairs.  Two systematic families: cutting
/// `A→A` out of an application chain (unfocused, one or two copies), and
/// cutting `A` against its own focused decomposition (focused cut).
#[test]
fn mix_eliminates_generated_cuts() {
    let mut rng = Rng::new(0x1d4f_22b7);
    for round in 0..60 {
        let size = 1 + 2 * rng.below(4) as usize;
        let a = random_implicational(&mut rng, &["a", "b"], size);

        if round % 2 == 0 {
            let link = Formula::imp(a.clone(), a.clone());
            let n = 1 + rng.below(2) as u32;
            let left = fr_prove(&FocusSequent::goal(link.clone()))
                .expect("within budget")
                .into_proof()
                .expect("A -> A is provable");
            let mut ante = Multiset::singleton(a.clone());
            ante.insert_n(link.clone(), n);
            let right = fr_prove(&FocusSequent::unfocused(ante, a.clone()))
                .expect("within budget")
                .into_proof()
                .expect("chained applications are provable");
            let out = eliminate_mix(&left, &right, &link, n, false).expect("shapes line up");
            assert!(check_fr_proof(&out), "cut {n} copies of {link}");
            assert_eq!(
                out.conclusion,
                FocusSequent::unfocused(Multiset::singleton(a.clone()), a.clone())
            );
        } else {
            let left = admissible_identity(&a).expect("pure input");
            let (args, head) = a.uncurry();
            let right_seq =
                FocusSequent::focused(args.iter().cloned().collect(), a.clone(), head.clone());
            let right = fr_prove(&right_seq)
                .expect("within budget")
                .into_proof()
                .expect("the focused decomposition is provable");
            let out = eliminate_mix(&left, &right, &a, 0, true).expect("shapes line up");
            assert!(check_fr_proof(&out), "focused cut of {a}");
            let mut expected: Multiset<Formula> = args.iter().cloned().collect();
            expected.insert(a.clone());
            assert_eq!(out.conclusion, FocusSequent::unfocused(expected, head));
        }
    }
}
