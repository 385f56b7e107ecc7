//! Proof transformations connecting the focused and unfocused calculi.
//!
//! * [`admissible_identity`] expands `A ⊢ A` into axiom-level focused steps.
//! * [`invert_impr`] strips a right-implication root.
//! * [`defocus`] maps a focused proof to an unfocused proof of the same
//!   endsequent (with the focused formula returned to the antecedent).
//! * [`eliminate_mix`] composes two focused proofs across a cut formula,
//!   eliminating the cut by structural recursion.
//! * [`focalize`] maps an unfocused proof of an implicational sequent to a
//!   focused proof of the same endsequent, using identity expansion and mix
//!   elimination for the left implication rule.

use super::{check_fr_proof, validate_fr_proof, FocusSequent, FrProof, FrRule};
use crate::formula::Formula;
use crate::lr::{validate_lr_proof, LrProof, LrRule, Sequent};
use crate::multiset::Multiset;
use crate::Error;

type Ctx = Multiset<Formula>;

fn ensure_pure(f: &Formula) -> Result<(), Error> {
    if f.is_pure_implicational() {
        Ok(())
    } else {
        Err(Error::UnsupportedConnective(format!(
            "focused transformations handle only implications over atoms, got {f}"
        )))
    }
}

/// Focused proof of `A ⊢ A` built from axioms: peel the spine of `A` on the
/// right, focus the hypothesis copy, and decompose it against the peeled
/// arguments, recursing into each argument.
pub fn admissible_identity(formula: &Formula) -> Result<FrProof, Error> {
    ensure_pure(formula)?;
    let proof = id_unfocused(formula);
    debug_assert!(check_fr_proof(&proof));
    Ok(proof)
}

/// `{A} [·] ⊢ A`, for pure implicational `A`.
fn id_unfocused(formula: &Formula) -> FrProof {
    let (args, head) = formula.uncurry();
    let arg_ctx: Ctx = args.iter().cloned().collect();
    let focused = id_focused(formula);
    let focus_node = FrProof {
        rule: FrRule::Focus,
        conclusion: FocusSequent::unfocused(arg_ctx.plus_item(formula), head.clone()),
        premises: vec![focused],
    };
    rewrap_full(focus_node, formula)
}

/// `args(A) [A] ⊢ head(A)`, for pure implicational `A`.
fn id_focused(formula: &Formula) -> FrProof {
    match formula {
        Formula::Atom(_) => FrProof {
            rule: FrRule::AtomicId,
            conclusion: FocusSequent::focused(Multiset::new(), formula.clone(), formula.clone()),
            premises: vec![],
        },
        Formula::Imp(a, b) => {
            let p1 = id_unfocused(a);
            let p2 = id_focused(b);
            let ante = p1.conclusion.antecedent.plus(&p2.conclusion.antecedent);
            let head = p2.conclusion.succedent.clone();
            FrProof {
                rule: FrRule::ImpLf,
                conclusion: FocusSequent::focused(ante, formula.clone(), head),
                premises: vec![p1, p2],
            }
        }
        _ => unreachable!("purity checked by the caller"),
    }
}

/// Strip the right-implication rule at the root: from `Γ ⊢ A→B` to `Γ,A ⊢ B`.
pub fn invert_impr(proof: &FrProof) -> Result<FrProof, Error> {
    validate_fr_proof(proof).map_err(|e| Error::InvalidProof(e.to_string()))?;
    if proof.rule != FrRule::ImpRf {
        return Err(Error::ShapeMismatch(
            "inversion expects a right-implication rule at the root".to_string(),
        ));
    }
    Ok(proof.premises[0].clone())
}

/// Map a focused proof onto the unfocused calculus.  The focused formula
/// rejoins the antecedent, focusing steps vanish, and every other rule maps
/// to its unfocused counterpart, so the image has exactly `focus_count`
/// fewer nodes.
pub fn defocus(proof: &FrProof) -> Result<LrProof, Error> {
    validate_fr_proof(proof).map_err(|e| Error::InvalidProof(e.to_string()))?;
    enum Task<'a> {
        Enter(&'a FrProof),
        Exit(&'a FrProof),
    }
    let mut stack = vec![Task::Enter(proof)];
    let mut results: Vec<LrProof> = Vec::new();
    while let Some(task) = stack.pop() {
        match task {
            Task::Enter(p) => {
                stack.push(Task::Exit(p));
                for q in p.premises.iter().rev() {
                    stack.push(Task::Enter(q));
                }
            }
            Task::Exit(p) => {
                let concl = merge_focus(&p.conclusion);
                let node = match p.rule {
                    FrRule::AtomicId => LrProof {
                        rule: LrRule::Id,
                        conclusion: concl,
                        principal: Some(p.conclusion.succedent.clone()),
                        premises: vec![],
                    },
                    FrRule::Focus => results.pop().expect("premise image available"),
                    FrRule::Cf => {
                        let premise = results.pop().expect("premise image available");
                        let dup = p.premises[0]
                            .conclusion
                            .antecedent
                            .checked_sub(&p.conclusion.antecedent)
                            .expect("validated contraction adds one copy");
                        let principal = dup.support().next().expect("one duplicate").clone();
                        LrProof {
                            rule: LrRule::C,
                            conclusion: concl,
                            principal: Some(principal),
                            premises: vec![premise],
                        }
                    }
                    FrRule::ImpLf => {
                        let p2 = results.pop().expect("premise image available");
                        let p1 = results.pop().expect("premise image available");
                        LrProof {
                            rule: LrRule::ImpL,
                            conclusion: concl,
                            principal: p.conclusion.focus.clone(),
                            premises: vec![p1, p2],
                        }
                    }
                    FrRule::ImpRf => {
                        let premise = results.pop().expect("premise image available");
                        LrProof {
                            rule: LrRule::ImpR,
                            conclusion: concl,
                            principal: None,
                            premises: vec![premise],
                        }
                    }
                };
                results.push(node);
            }
        }
    }
    let out = results.pop().expect("one root image");
    debug_assert!(crate::lr::check_lr_proof(&out));
    Ok(out)
}

fn merge_focus(fs: &FocusSequent) -> Sequent {
    let mut ante = fs.antecedent.clone();
    if let Some(d) = &fs.focus {
        ante.insert(d.clone());
    }
    Sequent::new(ante, fs.succedent.clone())
}

/// Cut elimination for the focused calculus, in multiset form: from a proof
/// of `Γ ⊢ A` and a proof whose antecedent holds `n` copies of `A` (plus,
/// optionally, `A` under focus), build a proof of the conclusion with those
/// copies replaced by a single copy of `Γ`.
///
/// The `focused_cut` flag selects whether the right proof's focused formula
/// is cut as well; in that case the result is unfocused.  A right proof that
/// keeps a focus other than the cut cannot absorb the copies of `Γ` by
/// contraction, so it is rejected.
pub fn eliminate_mix(
    left: &FrProof,
    right: &FrProof,
    cut: &Formula,
    n: u32,
    focused_cut: bool,
) -> Result<FrProof, Error> {
    validate_fr_proof(left).map_err(|e| Error::InvalidProof(format!("left proof: {e}")))?;
    validate_fr_proof(right).map_err(|e| Error::InvalidProof(format!("right proof: {e}")))?;
    if left.conclusion.focus.is_some() || left.conclusion.succedent != *cut {
        return Err(Error::ShapeMismatch(
            "left proof must be an unfocused proof of the cut formula".to_string(),
        ));
    }
    if right.conclusion.antecedent.count(cut) < n {
        return Err(Error::ShapeMismatch(format!(
            "right antecedent holds {} copies of the cut formula, {} requested",
            right.conclusion.antecedent.count(cut),
            n
        )));
    }
    if focused_cut {
        if right.conclusion.focus.as_ref() != Some(cut) {
            return Err(Error::ShapeMismatch(
                "focused cut requires the right proof to focus the cut formula".to_string(),
            ));
        }
    } else {
        if right.conclusion.focus.is_some() {
            return Err(Error::ShapeMismatch(
                "right proof must be unfocused unless the focus itself is cut".to_string(),
            ));
        }
        if n == 0 {
            return Err(Error::ShapeMismatch("no cut occurrence selected".to_string()));
        }
    }
    let (out, copies) = mix_any(left, right, n, focused_cut);
    debug_assert_eq!(copies, 1);
    debug_assert!(check_fr_proof(&out));
    Ok(out)
}

/// `antecedent − n·cut + k·gamma`.
fn mixed_ante(ante: &Ctx, cut: &Formula, n: u32, gamma: &Ctx, k: u32) -> Ctx {
    let mut out = ante.clone();
    for _ in 0..n {
        assert!(out.remove_one(cut), "cut copy available in the antecedent");
    }
    for _ in 0..k {
        out = out.plus(gamma);
    }
    out
}

/// Contract `extra` whole copies of `gamma` out of an unfocused, atomic-
/// succedent conclusion.
fn contract_copies(mut proof: FrProof, gamma: &Ctx, extra: u32) -> FrProof {
    let mut surplus = Multiset::new();
    for _ in 0..extra {
        surplus = surplus.plus(gamma);
    }
    let mut occs: Vec<Formula> = surplus.occurrences().cloned().collect();
    let succ = proof.conclusion.succedent.clone();
    let mut ante = proof.conclusion.antecedent.clone();
    while let Some(e) = occs.pop() {
        let lower = ante.minus_item(&e).expect("surplus copy exists");
        proof = FrProof {
            rule: FrRule::Cf,
            conclusion: FocusSequent::unfocused(lower.clone(), succ.clone()),
            premises: vec![proof],
        };
        ante = lower;
    }
    proof
}

/// Structural mix elimination.  `left` proves `Γ ⊢ A` unfocused; `right`'s
/// antecedent holds at least `n_ctx` copies of `A`, and `cut_focus` marks
/// that `right` additionally focuses `A` and the focus is cut too.  Returns
/// a proof of `right`'s conclusion with the selected copies replaced by `k`
/// copies of `Γ`, together with `k`.  Unfocused results are normalized to
/// `k = 1` (contraction is legal there because their succedent is atomic
/// whenever `k` could exceed one); focused results defer the contraction to
/// the enclosing focusing step.
fn mix_any(left: &FrProof, right: &FrProof, n_ctx: u32, cut_focus: bool) -> (FrProof, u32) {
    let cut = &left.conclusion.succedent;
    let gamma = &left.conclusion.antecedent;
    match right.rule {
        FrRule::AtomicId => {
            assert!(cut_focus, "mix against a bare axiom only cuts its focus");
            (left.clone(), 1)
        }
        FrRule::Cf => {
            let premise = &right.premises[0];
            let dup = premise
                .conclusion
                .antecedent
                .checked_sub(&right.conclusion.antecedent)
                .expect("validated contraction adds one copy");
            let e = dup.support().next().expect("one duplicate").clone();
            if e == *cut {
                // Contracting the cut formula and then deleting every copy is
                // the same as deleting every copy: the node vanishes.
                mix_any(left, premise, n_ctx + 1, false)
            } else {
                let (sub, _one) = mix_any(left, premise, n_ctx, false);
                let concl = FocusSequent::unfocused(
                    mixed_ante(&right.conclusion.antecedent, cut, n_ctx, gamma, 1),
                    right.conclusion.succedent.clone(),
                );
                (FrProof { rule: FrRule::Cf, conclusion: concl, premises: vec![sub] }, 1)
            }
        }
        FrRule::Focus => {
            let premise = &right.premises[0];
            let focused = premise.conclusion.focus.as_ref().expect("validated focus");
            if focused == cut {
                // One of the selected context copies moved under focus: cut it
                // there and the focusing step vanishes.
                let (sub, _one) = mix_any(left, premise, n_ctx - 1, true);
                (sub, 1)
            } else {
                let (sub, k) = mix_any(left, premise, n_ctx, false);
                let concl = FocusSequent::unfocused(
                    mixed_ante(&right.conclusion.antecedent, cut, n_ctx, gamma, k),
                    right.conclusion.succedent.clone(),
                );
                let wrapped =
                    FrProof { rule: FrRule::Focus, conclusion: concl, premises: vec![sub] };
                (contract_copies(wrapped, gamma, k - 1), 1)
            }
        }
        FrRule::ImpRf => {
            let (sub, _one) = mix_any(left, &right.premises[0], n_ctx, false);
            let concl = FocusSequent::unfocused(
                mixed_ante(&right.conclusion.antecedent, cut, n_ctx, gamma, 1),
                right.conclusion.succedent.clone(),
            );
            (FrProof { rule: FrRule::ImpRf, conclusion: concl, premises: vec![sub] }, 1)
        }
        FrRule::ImpLf => {
            let p1 = &right.premises[0];
            let p2 = &right.premises[1];
            let n1 = n_ctx.min(p1.conclusion.antecedent.count(cut));
            let n2 = n_ctx - n1;
            if cut_focus {
                // The focus is the cut `A = X→Y`.  Cut `Y` against the
                // inverted left proof, then cut the leftover `X` against the
                // left proof applied to the first premise; both cuts are on
                // strictly smaller formulas.
                let (r1, k2) = if n2 > 0 {
                    mix_any(left, p2, n2, false)
                } else {
                    (p2.clone(), 0)
                };
                let inv = invert_root(left);
                let (s, _one) = mix_any(&inv, &r1, 0, true);
                let s1 = if k2 > 0 { contract_copies(s, gamma, k2) } else { s };
                let u = if n1 > 0 { mix_any(left, p1, n1, false).0 } else { p1.clone() };
                let (fin, _one) = mix_any(&u, &s1, 1, false);
                let out = if n1 > 0 { contract_copies(fin, gamma, 1) } else { fin };
                (out, 1)
            } else {
                let (q1, c1) = if n1 > 0 {
                    (mix_any(left, p1, n1, false).0, 1)
                } else {
                    (p1.clone(), 0)
                };
                let (q2, k2) = if n2 > 0 {
                    mix_any(left, p2, n2, false)
                } else {
                    (p2.clone(), 0)
                };
                let concl = FocusSequent {
                    antecedent: q1.conclusion.antecedent.plus(&q2.conclusion.antecedent),
                    focus: right.conclusion.focus.clone(),
                    succedent: right.conclusion.succedent.clone(),
                };
                (
                    FrProof { rule: FrRule::ImpLf, conclusion: concl, premises: vec![q1, q2] },
                    c1 + k2,
                )
            }
        }
    }
}

/// The premise of a valid unfocused proof of an implication: the root can
/// only be the right implication rule.
fn invert_root(proof: &FrProof) -> FrProof {
    assert_eq!(proof.rule, FrRule::ImpRf, "implication succedents force the right rule");
    proof.premises[0].clone()
}

/// Peel the forced right-implication chain down to the atomic succedent.
fn peel_full(mut proof: FrProof) -> FrProof {
    while matches!(proof.conclusion.succedent, Formula::Imp(_, _)) {
        assert_eq!(proof.rule, FrRule::ImpRf, "implication succedents force the right rule");
        proof = proof.premises.into_iter().next().expect("right rule has one premise");
    }
    proof
}

/// Rebuild the right-implication chain for `succ` above a proof of the fully
/// peeled sequent.
fn rewrap_full(mut proof: FrProof, succ: &Formula) -> FrProof {
    let (args, _) = succ.uncurry();
    let mut spine = proof.conclusion.succedent.clone();
    for a in args.iter().rev() {
        spine = Formula::imp(a.clone(), spine);
        let ante = proof
            .conclusion
            .antecedent
            .minus_item(a)
            .expect("peeled argument present in the context");
        proof = FrProof {
            rule: FrRule::ImpRf,
            conclusion: FocusSequent::unfocused(ante, spine.clone()),
            premises: vec![proof],
        };
    }
    debug_assert_eq!(&spine, succ);
    proof
}

/// Map an unfocused proof of an implicational sequent to a focused proof of
/// the same endsequent.  Axioms expand to focused identities; contraction
/// moves to the atomic level behind the forced right-rule chain; the left
/// implication rule becomes two mix eliminations against an expanded
/// identity of its principal.
pub fn focalize(proof: &LrProof) -> Result<FrProof, Error> {
    validate_lr_proof(proof).map_err(|e| Error::InvalidProof(e.to_string()))?;
    for f in proof.conclusion.antecedent.support() {
        ensure_pure(f)?;
    }
    ensure_pure(&proof.conclusion.succedent)?;
    let out = focalize_rec(proof)?;
    debug_assert!(check_fr_proof(&out));
    debug_assert_eq!(
        out.conclusion,
        FocusSequent::unfocused(
            proof.conclusion.antecedent.clone(),
            proof.conclusion.succedent.clone()
        )
    );
    Ok(out)
}

fn focalize_rec(p: &LrProof) -> Result<FrProof, Error> {
    match p.rule {
        LrRule::Id => Ok(id_unfocused(&p.conclusion.succedent)),
        LrRule::ImpR => {
            let premise = focalize_rec(&p.premises[0])?;
            Ok(FrProof {
                rule: FrRule::ImpRf,
                conclusion: FocusSequent::unfocused(
                    p.conclusion.antecedent.clone(),
                    p.conclusion.succedent.clone(),
                ),
                premises: vec![premise],
            })
        }
        LrRule::C => {
            let a = p.principal.as_ref().expect("validated contraction principal");
            let ih = focalize_rec(&p.premises[0])?;
            let peeled = peel_full(ih);
            let target = peeled
                .conclusion
                .antecedent
                .minus_item(a)
                .expect("contracted copy present");
            let head = peeled.conclusion.succedent.clone();
            let cf = FrProof {
                rule: FrRule::Cf,
                conclusion: FocusSequent::unfocused(target, head),
                premises: vec![peeled],
            };
            Ok(rewrap_full(cf, &p.conclusion.succedent))
        }
        LrRule::ImpL => {
            let d = p.principal.as_ref().expect("validated left-rule principal");
            let (aa, bb) = match d {
                Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
                _ => unreachable!("validated left-rule principal is an implication"),
            };
            let ih1 = focalize_rec(&p.premises[0])?;
            let ih2 = focalize_rec(&p.premises[1])?;
            // {A, A→B} ⊢ B from expanded identities.
            let modus = {
                let p1 = id_unfocused(&aa);
                let p2 = id_focused(&bb);
                let head = p2.conclusion.succedent.clone();
                let inner_ante = p1.conclusion.antecedent.plus(&p2.conclusion.antecedent);
                let focused_node = FrProof {
                    rule: FrRule::ImpLf,
                    conclusion: FocusSequent::focused(inner_ante.clone(), d.clone(), head.clone()),
                    premises: vec![p1, p2],
                };
                let focus_node = FrProof {
                    rule: FrRule::Focus,
                    conclusion: FocusSequent::unfocused(inner_ante.plus_item(d), head),
                    premises: vec![focused_node],
                };
                rewrap_full(focus_node, &bb)
            };
            // Cut A: Γ₁,A→B ⊢ B.
            let (applied, _one) = mix_any(&ih1, &modus, 1, false);
            // Cut B into the second premise behind its right-rule chain.
            let ih2_peeled = peel_full(ih2);
            let (q, _one) = mix_any(&applied, &ih2_peeled, 1, false);
            Ok(rewrap_full(q, &p.conclusion.succedent))
        }
        LrRule::TruthL | LrRule::TruthR | LrRule::FusL | LrRule::FusR => {
            Err(Error::UnsupportedConnective(
                "focused transformations handle only implications over atoms".to_string(),
            ))
        }
    }
}
