//! The sequent calculus for R→ and its multiplicative extension.
//!
//! Sequents pair a multiset antecedent with a succedent. The rule set has no
//! weakening: every antecedent occurrence must be consumed. Contraction (`C`)
//! is explicit, the left implication rule splits the antecedent exactly
//! between its premises, and the extension adds the four fusion/truth rules.
//!
//! Rules, written premise(s) over conclusion:
//!
//! ```text
//! ───── Id        Γ,A,A ⊢ B          Γ ⊢ A   Δ,B ⊢ C          Γ,A ⊢ B
//! A ⊢ A           ───────── C        ───────────────── ImpL    ──────── ImpR
//!                 Γ,A ⊢ B            Γ,Δ,A→B ⊢ C               Γ ⊢ A→B
//!
//! Γ ⊢ A                     Γ,A,B ⊢ C           Γ ⊢ A   Δ ⊢ B
//! ─────── TruthL   ──── TruthR   ─────────── FusL   ───────────── FusR
//! Γ,T ⊢ A          ⊢ T           Γ,A∘B ⊢ C          Γ,Δ ⊢ A∘B
//! ```

mod prove;

pub use prove::{lr_prove, lr_prove_bounded, lr_prove_with_budget, DEFAULT_LR_BUDGET};

use crate::formula::Formula;
use crate::multiset::Multiset;
use crate::CheckFailure;
use std::fmt;

/// A sequent `Γ ⊢ A`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: Multiset<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: Multiset<Formula>, succedent: Formula) -> Self {
        Sequent { antecedent, succedent }
    }

    /// `⊢ A`.
    pub fn goal(succedent: Formula) -> Self {
        Sequent { antecedent: Multiset::new(), succedent }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::textio::render_sequent(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LrRule {
    Id,
    C,
    ImpL,
    ImpR,
    TruthL,
    TruthR,
    FusL,
    FusR,
}

impl LrRule {
    pub fn name(self) -> &'static str {
        match self {
            LrRule::Id => "Id",
            LrRule::C => "C",
            LrRule::ImpL => "ImpL",
            LrRule::ImpR => "ImpR",
            LrRule::TruthL => "TruthL",
            LrRule::TruthR => "TruthR",
            LrRule::FusL => "FusL",
            LrRule::FusR => "FusR",
        }
    }

    pub fn from_name(name: &str) -> Option<LrRule> {
        Some(match name {
            "Id" => LrRule::Id,
            "C" => LrRule::C,
            "ImpL" => LrRule::ImpL,
            "ImpR" => LrRule::ImpR,
            "TruthL" => LrRule::TruthL,
            "TruthR" => LrRule::TruthR,
            "FusL" => LrRule::FusL,
            "FusR" => LrRule::FusR,
            _ => return None,
        })
    }
}

/// A rule-labelled proof tree. `principal` names the formula the rule acts on
/// where the conclusion alone does not determine it (contraction and the left
/// rules); it is advisory for the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrProof {
    pub rule: LrRule,
    pub conclusion: Sequent,
    pub principal: Option<Formula>,
    pub premises: Vec<LrProof>,
}

impl LrProof {
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            n += 1;
            stack.extend(p.premises.iter());
        }
        n
    }

    pub fn height(&self) -> usize {
        // Iterative to keep deep proofs off the call stack.
        let mut best = 0;
        let mut stack = vec![(self, 1usize)];
        while let Some((p, h)) = stack.pop() {
            if p.premises.is_empty() {
                best = best.max(h);
            }
            for q in &p.premises {
                stack.push((q, h + 1));
            }
        }
        best
    }
}

/// Structural validation; `Ok` means every node satisfies its rule's
/// premise/conclusion relation with exact multiset arithmetic.
pub fn validate_lr_proof(proof: &LrProof) -> Result<(), CheckFailure> {
    let mut stack: Vec<(&LrProof, Vec<usize>)> = vec![(proof, Vec::new())];
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

/// Boolean wrapper around [`validate_lr_proof`].
pub fn check_lr_proof(proof: &LrProof) -> bool {
    validate_lr_proof(proof).is_ok()
}

fn premise_count(rule: LrRule) -> usize {
    match rule {
        LrRule::Id | LrRule::TruthR => 0,
        LrRule::C | LrRule::ImpR | LrRule::TruthL | LrRule::FusL => 1,
        LrRule::ImpL | LrRule::FusR => 2,
    }
}

fn check_node(node: &LrProof) -> Result<(), String> {
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
    match node.rule {
        LrRule::Id => {
            let expected = Multiset::singleton(concl.succedent.clone());
            if concl.antecedent != expected {
                return Err("Id conclusion must be of shape A |- A".to_string());
            }
            Ok(())
        }
        LrRule::TruthR => {
            if concl.succedent != Formula::Truth || !concl.antecedent.is_empty() {
                return Err("TruthR conclusion must be |- T with empty antecedent".to_string());
            }
            Ok(())
        }
        LrRule::C => {
            let a = node.principal.as_ref().ok_or("C requires a principal formula")?;
            if !concl.antecedent.contains(a) {
                return Err("C principal must occur in the conclusion antecedent".to_string());
            }
            let premise = &node.premises[0].conclusion;
            if premise.succedent != concl.succedent {
                return Err("C must preserve the succedent".to_string());
            }
            if premise.antecedent != concl.antecedent.plus_item(a) {
                return Err("C premise antecedent must add one copy of the principal".to_string());
            }
            Ok(())
        }
        LrRule::ImpR => {
            let (a, b) = match &concl.succedent {
                Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err("ImpR conclusion succedent must be an implication".to_string()),
            };
            let premise = &node.premises[0].conclusion;
            if premise.succedent != b {
                return Err("ImpR premise succedent must be the implication target".to_string());
            }
            if premise.antecedent != concl.antecedent.plus_item(&a) {
                return Err("ImpR premise antecedent must add the implication source".to_string());
            }
            Ok(())
        }
        LrRule::ImpL => {
            let d = node.principal.as_ref().ok_or("ImpL requires a principal formula")?;
            let (a, b) = match d {
                Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err("ImpL principal must be an implication".to_string()),
            };
            if !concl.antecedent.contains(d) {
                return Err("ImpL principal must occur in the conclusion antecedent".to_string());
            }
            let p1 = &node.premises[0].conclusion;
            let p2 = &node.premises[1].conclusion;
            if p1.succedent != a {
                return Err("ImpL first premise must prove the implication source".to_string());
            }
            if p2.succedent != concl.succedent {
                return Err("ImpL second premise must preserve the succedent".to_string());
            }
            let delta = p2
                .antecedent
                .minus_item(&b)
                .ok_or("ImpL second premise antecedent must contain the implication target")?;
            let rebuilt = p1.antecedent.plus(&delta).plus_item(d);
            if rebuilt != concl.antecedent {
                return Err("ImpL context split does not add up to the conclusion".to_string());
            }
            Ok(())
        }
        LrRule::TruthL => {
            let premise = &node.premises[0].conclusion;
            if premise.succedent != concl.succedent {
                return Err("TruthL must preserve the succedent".to_string());
            }
            match concl.antecedent.minus_item(&Formula::Truth) {
                Some(rest) if rest == premise.antecedent => Ok(()),
                Some(_) => Err("TruthL premise must drop exactly one T".to_string()),
                None => Err("TruthL conclusion antecedent must contain T".to_string()),
            }
        }
        LrRule::FusL => {
            let d = node.principal.as_ref().ok_or("FusL requires a principal formula")?;
            let (a, b) = match d {
                Formula::Fusion(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err("FusL principal must be a fusion".to_string()),
            };
            let premise = &node.premises[0].conclusion;
            if premise.succedent != concl.succedent {
                return Err("FusL must preserve the succedent".to_string());
            }
            let rest = concl
                .antecedent
                .minus_item(d)
                .ok_or("FusL principal must occur in the conclusion antecedent")?;
            if premise.antecedent != rest.plus_item(&a).plus_item(&b) {
                return Err("FusL premise must replace the fusion by its components".to_string());
            }
            Ok(())
        }
        LrRule::FusR => {
            let (a, b) = match &concl.succedent {
                Formula::Fusion(a, b) => ((**a).clone(), (**b).clone()),
                _ => return Err("FusR conclusion succedent must be a fusion".to_string()),
            };
            let p1 = &node.premises[0].conclusion;
            let p2 = &node.premises[1].conclusion;
            if p1.succedent != a || p2.succedent != b {
                return Err("FusR premises must prove the fusion components".to_string());
            }
            if p1.antecedent.plus(&p2.antecedent) != concl.antecedent {
                return Err("FusR context split does not add up to the conclusion".to_string());
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

    fn id(a: &str) -> LrProof {
        LrProof {
            rule: LrRule::Id,
            conclusion: Sequent::new(Multiset::singleton(f(a)), f(a)),
            principal: Some(f(a)),
            premises: vec![],
        }
    }

    #[test]
    fn two_node_identity_proof_checks() {
        let proof = LrProof {
            rule: LrRule::ImpR,
            conclusion: Sequent::goal(f("a->a")),
            principal: None,
            premises: vec![id("a")],
        };
        assert!(check_lr_proof(&proof));
        assert_eq!(proof.node_count(), 2);
        assert_eq!(proof.height(), 2);
    }

    #[test]
    fn lost_antecedent_in_split_is_rejected() {
        // ImpL whose context split loses a formula: conclusion has an extra b.
        let concl = Sequent::new(Multiset::from_slice(&[f("a->b"), f("a"), f("b")]), f("b"));
        let bad = LrProof {
            rule: LrRule::ImpL,
            conclusion: concl,
            principal: Some(f("a->b")),
            premises: vec![id("a"), id("b")],
        };
        let err = validate_lr_proof(&bad).unwrap_err();
        assert!(err.reason.contains("does not add up"));
    }

    #[test]
    fn weakening_is_rejected() {
        // Premise antecedent strictly contained in the conclusion's with no
        // rule accounting for the extra copy.
        let bad = LrProof {
            rule: LrRule::ImpR,
            conclusion: Sequent::new(Multiset::singleton(f("b")), f("a->a")),
            principal: None,
            premises: vec![id("a")],
        };
        assert!(!check_lr_proof(&bad));
    }

    #[test]
    fn contraction_arithmetic_is_exact() {
        let premise = LrProof {
            rule: LrRule::Id,
            conclusion: Sequent::new(Multiset::from_slice(&[f("a"), f("a")]), f("a")),
            principal: Some(f("a")),
            premises: vec![],
        };
        // The premise itself is invalid as Id, but first check C's arithmetic.
        let node = LrProof {
            rule: LrRule::C,
            conclusion: Sequent::new(Multiset::singleton(f("a")), f("a")),
            principal: Some(f("a")),
            premises: vec![premise],
        };
        let err = validate_lr_proof(&node).unwrap_err();
        assert_eq!(err.path, vec![0]);
        assert!(err.reason.contains("Id"));
    }

    #[test]
    fn truth_rules_check() {
        let tr = LrProof {
            rule: LrRule::TruthR,
            conclusion: Sequent::goal(Formula::Truth),
            principal: None,
            premises: vec![],
        };
        assert!(check_lr_proof(&tr));
        let tl = LrProof {
            rule: LrRule::TruthL,
            conclusion: Sequent::new(Multiset::from_slice(&[Formula::Truth, f("a")]), f("a")),
            principal: Some(Formula::Truth),
            premises: vec![id("a")],
        };
        assert!(check_lr_proof(&tl));
    }

    #[test]
    fn fusion_rules_check() {
        let fr = LrProof {
            rule: LrRule::FusR,
            conclusion: Sequent::new(Multiset::from_slice(&[f("a"), f("b")]), f("a o b")),
            principal: None,
            premises: vec![id("a"), id("b")],
        };
        assert!(check_lr_proof(&fr));
        let fl = LrProof {
            rule: LrRule::FusL,
            conclusion: Sequent::new(Multiset::singleton(f("a o b")), f("a o b")),
            principal: Some(f("a o b")),
            premises: vec![fr],
        };
        assert!(check_lr_proof(&fl));
    }
}
