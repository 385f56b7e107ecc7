//! The focused sequent calculus for the implicational fragment.
//!
//! A focus sequent `Γ [D] ⊢ a` carries an optional formula under focus.  Once
//! a formula is focused its spine of implications must be decomposed to the
//! end; contraction (`Cf`) and focusing itself apply only at unfocused
//! sequents with an atomic succedent, which is what makes proof search
//! tractable compared to the unfocused calculus.
//!
//! ```text
//! ────────── AtomicId        Γ [D] ⊢ a  (D ∈ Γ∪{D})      Γ,D [·] ⊢ a  (D ∈ Γ)
//! · [a] ⊢ a                  ──────────────────── Focus   ─────────────────── Cf
//!                            Γ,D [·] ⊢ a                  Γ [·] ⊢ a
//!
//! Γ [·] ⊢ A   Δ [B] ⊢ a          Γ,A [·] ⊢ B
//! ───────────────────── ImpLf    ──────────── ImpRf
//! Γ,Δ [A→B] ⊢ a                  Γ [·] ⊢ A→B
//! ```
//!
//! Invariant: whenever the focus is present the succedent is an atom.

mod prove;
mod transform;

pub use prove::{fr_debug_stats, fr_prove, fr_prove_with_budget, DEFAULT_FR_BUDGET};
pub use transform::{admissible_identity, defocus, eliminate_mix, focalize, invert_impr};

use crate::formula::Formula;
use crate::multiset::Multiset;
use crate::CheckFailure;
use std::fmt;

/// A sequent with an optional formula under focus.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FocusSequent {
    pub antecedent: Multiset<Formula>,
    pub focus: Option<Formula>,
    pub succedent: Formula,
}

impl FocusSequent {
    pub fn unfocused(antecedent: Multiset<Formula>, succedent: Formula) -> Self {
        FocusSequent { antecedent, focus: None, succedent }
    }

    pub fn focused(antecedent: Multiset<Formula>, focus: Formula, succedent: Formula) -> Self {
        FocusSequent { antecedent, focus: Some(focus), succedent }
    }

    pub fn goal(succedent: Formula) -> Self {
        FocusSequent { antecedent: Multiset::new(), focus: None, succedent }
    }
}

impl fmt::Debug for FocusSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::textio::render_focus_sequent(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrRule {
    AtomicId,
    Focus,
    Cf,
    ImpLf,
    ImpRf,
}

impl FrRule {
    pub fn name(self) -> &'static str {
        match self {
            FrRule::AtomicId => "AtomicId",
            FrRule::Focus => "Focus",
            FrRule::Cf => "Cf",
            FrRule::ImpLf => "ImpLf",
            FrRule::ImpRf => "ImpRf",
        }
    }

    pub fn from_name(name: &str) -> Option<FrRule> {
        Some(match name {
            "AtomicId" => FrRule::AtomicId,
            "Focus" => FrRule::Focus,
            "Cf" => FrRule::Cf,
            "ImpLf" => FrRule::ImpLf,
            "ImpRf" => FrRule::ImpRf,
            _ => return None,
        })
    }
}

/// A focused proof tree.  All rule parameters are recoverable from the
/// conclusion together with the premises, so no principal annotation is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrProof {
    pub rule: FrRule,
    pub conclusion: FocusSequent,
    pub premises: Vec<FrProof>,
}

impl FrProof {
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            n += 1;
            stack.extend(p.premises.iter());
        }
        n
    }

    /// Number of `Focus` nodes; the unfocused image of a proof is exactly
    /// this much smaller.
    pub fn focus_count(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            if p.rule == FrRule::Focus {
                n += 1;
            }
            stack.extend(p.premises.iter());
        }
        n
    }
}

pub fn validate_fr_proof(proof: &FrProof) -> Result<(), CheckFailure> {
    let mut stack: Vec<(&FrProof, Vec<usize>)> = vec![(proof, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        check_node(node).map_err(|reason| CheckFailure { path: path.clone(), reason })?;
        for (i, premise) in node.premises.iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            stack.push((premise, p));
        }
    }
    Ok(())
}

pub fn check_fr_proof(proof: &FrProof) -> bool {
    validate_fr_proof(proof).is_ok()
}

fn premise_count(rule: FrRule) -> usize {
    match rule {
        FrRule::AtomicId => 0,
        FrRule::Focus | FrRule::Cf | FrRule::ImpRf => 1,
        FrRule::ImpLf => 2,
    }
}

fn check_node(node: &FrProof) -> Result<(), String> {
    let want = premise_count(node.rule);
    if node.premises.len() != want {
        return Err(format!(
            "{} expects {} premise(s), found {}",
            node.rule.name(),
            want,
            node.premises.len()
        ));
    }
    let concl = &node.conclusion;
    if concl.focus.is_some() && !concl.succedent.is_atom() {
        return Err("focused sequents must have an atomic succedent".to_string());
    }
    match node.rule {
        FrRule::AtomicId => {
            if !concl.antecedent.is_empty() {
                return Err("AtomicId requires an empty antecedent".to_string());
            }
            match &concl.focus {
                Some(f) if f.is_atom() && *f == concl.succedent => Ok(()),
                Some(_) => Err("AtomicId focus must equal the atomic succedent".to_string()),
                None => Err("AtomicId requires a focused sequent".to_string()),
            }
        }
        FrRule::Focus => {
            if concl.focus.is_some() {
                return Err("Focus conclusion must be unfocused".to_string());
            }
            if !concl.succedent.is_atom() {
                return Err("Focus applies only at atomic succedents".to_string());
            }
            let premise = &node.premises[0].conclusion;
            let d = premise
                .focus
                .as_ref()
                .ok_or("Focus premise must carry the focused formula")?;
            if premise.succedent != concl.succedent {
                return Err("Focus must preserve the succedent".to_string());
            }
            match concl.antecedent.minus_item(d) {
                Some(rest) if rest == premise.antecedent => Ok(()),
                Some(_) => Err("Focus premise must drop exactly the focused copy".to_string()),
                None => Err("Focus formula must occur in the conclusion antecedent".to_string()),
            }
        }
        FrRule::Cf => {
            if concl.focus.is_some() {
                return Err("Cf conclusion must be unfocused".to_string());
            }
            if !concl.succedent.is_atom() {
                return Err("Cf applies only at atomic succedents".to_string());
            }
            let premise = &node.premises[0].conclusion;
            if premise.focus.is_some() {
                return Err("Cf premise must be unfocused".to_string());
            }
            if premise.succedent != concl.succedent {
                return Err("Cf must preserve the succedent".to_string());
            }
            let extra = premise
                .antecedent
                .checked_sub(&concl.antecedent)
                .ok_or("Cf premise antecedent must extend the conclusion's")?;
            if extra.total() != 1 {
                return Err("Cf duplicates exactly one formula".to_string());
            }
            let d = extra.support().next().expect("total is one");
            if !concl.antecedent.contains(d) {
                return Err("Cf duplicates a formula already in the antecedent".to_string());
            }
            Ok(())
        }
        FrRule::ImpLf => {
            let (a, b) = match &concl.focus {
                Some(Formula::Imp(a, b)) => ((**a).clone(), (**b).clone()),
                Some(_) => return Err("ImpLf focus must be an implication".to_string()),
                None => return Err("ImpLf requires a focused conclusion".to_string()),
            };
            let p1 = &node.premises[0].conclusion;
            let p2 = &node.premises[1].conclusion;
            if p1.focus.is_some() {
                return Err("ImpLf first premise must be unfocused".to_string());
            }
            if p1.succedent != a {
                return Err("ImpLf first premise must prove the implication source".to_string());
            }
            if p2.focus.as_ref() != Some(&b) {
                return Err("ImpLf second premise must focus the implication target".to_string());
            }
            if p2.succedent != concl.succedent {
                return Err("ImpLf second premise must preserve the succedent".to_string());
            }
            if p1.antecedent.plus(&p2.antecedent) != concl.antecedent {
                return Err("ImpLf context split does not add up to the conclusion".to_string());
            }
            Ok(())
        }
        FrRule::ImpRf => {
            if concl.focus.is_some() {
                return Err("ImpRf conclusion must be unfocused".to_string());
            }
            let (a, b) = match &concl.succedent {
                Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err("ImpRf conclusion succedent must be an implication".to_string()),
            };
            let premise = &node.premises[0].conclusion;
            if premise.focus.is_some() {
                return Err("ImpRf premise must be unfocused".to_string());
            }
            if premise.succedent != b {
                return Err("ImpRf premise succedent must be the implication target".to_string());
            }
            if premise.antecedent != concl.antecedent.plus_item(&a) {
                return Err("ImpRf premise antecedent must add the implication source".to_string());
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn atomic_id(a: &str) -> FrProof {
        FrProof {
            rule: FrRule::AtomicId,
            conclusion: FocusSequent::focused(Multiset::new(), f(a), f(a)),
            premises: vec![],
        }
    }

    fn focus_id(a: &str) -> FrProof {
        FrProof {
            rule: FrRule::Focus,
            conclusion: FocusSequent::unfocused(Multiset::singleton(f(a)), f(a)),
            premises: vec![atomic_id(a)],
        }
    }

    #[test]
    fn atomic_identity_checks() {
        assert!(check_fr_proof(&atomic_id("a")));
        assert!(check_fr_proof(&focus_id("a")));
    }

    #[test]
    fn contraction_proof_checks() {
        // ⊢ (a→a→b)→a→b with one Cf step.
        let p = FrProof {
            rule: FrRule::ImpRf,
            conclusion: FocusSequent::goal(f("(a->a->b)->a->b")),
            premises: vec![FrProof {
                rule: FrRule::ImpRf,
                conclusion: FocusSequent::unfocused(
                    Multiset::singleton(f("a->a->b")),
                    f("a->b"),
                ),
                premises: vec![FrProof {
                    rule: FrRule::Cf,
                    conclusion: FocusSequent::unfocused(
                        Multiset::from_slice(&[f("a->a->b"), f("a")]),
                        f("b"),
                    ),
                    premises: vec![FrProof {
                        rule: FrRule::Focus,
                        conclusion: FocusSequent::unfocused(
                            Multiset::from_slice(&[f("a->a->b"), f("a"), f("a")]),
                            f("b"),
                        ),
                        premises: vec![FrProof {
                            rule: FrRule::ImpLf,
                            conclusion: FocusSequent::focused(
                                Multiset::from_slice(&[f("a"), f("a")]),
                                f("a->a->b"),
                                f("b"),
                            ),
                            premises: vec![
                                focus_id("a"),
                                FrProof {
                                    rule: FrRule::ImpLf,
                                    conclusion: FocusSequent::focused(
                                        Multiset::singleton(f("a")),
                                        f("a->b"),
                                        f("b"),
                                    ),
                                    premises: vec![focus_id("a"), atomic_id("b")],
                                },
                            ],
                        }],
                    }],
                }],
            }],
        };
        assert!(check_fr_proof(&p));
        assert_eq!(p.node_count(), 11);
        assert_eq!(p.focus_count(), 3);
    }

    #[test]
    fn focus_with_nonatomic_succedent_is_rejected() {
        let bad = FrProof {
            rule: FrRule::Focus,
            conclusion: FocusSequent::unfocused(Multiset::singleton(f("a->b")), f("a->b")),
            premises: vec![FrProof {
                rule: FrRule::AtomicId,
                conclusion: FocusSequent::focused(Multiset::new(), f("a->b"), f("a->b")),
                premises: vec![],
            }],
        };
        let err = validate_fr_proof(&bad).unwrap_err();
        assert!(err.reason.contains("atomic"));
    }

    #[test]
    fn implication_split_arithmetic_is_enforced() {
        // ImpLf whose premises drop a context formula.
        let bad = FrProof {
            rule: FrRule::ImpLf,
            conclusion: FocusSequent::focused(
                Multiset::from_slice(&[f("a"), f("c")]),
                f("a->b"),
                f("b"),
            ),
            premises: vec![focus_id("a"), atomic_id("b")],
        };
        let err = validate_fr_proof(&bad).unwrap_err();
        assert!(err.reason.contains("does not add up"));
    }
}
