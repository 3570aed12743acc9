//! Proof transformations: weakening, inversion, contraction, necessitation,
//! the Löb rule, slim orderings, local cut reduction and the translations
//! between Hilbert proofs, fGIL, GIL and cyclic proofs.

mod cut;
mod translate;

pub use cut::cut_reduce_step;
pub use translate::{
    alpha_prefix, cyclic_to_fgil, cyclic_to_fgil_with_stats, eliminate_cuts_reprove, hilbert_to_sequent,
    sequent_to_hilbert, UnfoldStats,
};

use crate::formula::Formula;
use crate::proof::{ModalTarget, Proof, ProofError};
use crate::rules::{ModalData, RuleApp};
use crate::sequent::{Multiset, Sequent, Side};

/// Adds `l` and `r` to every sequent; ⊳ rules absorb them in their
/// weakening parts, so height is unchanged.
pub fn weaken(p: &Proof, l: &Multiset, r: &Multiset) -> Proof {
    if l.is_empty() && r.is_empty() {
        return p.clone();
    }
    let sequent = p.sequent.weakened(l, r);
    match &p.rule {
        None | Some(RuleApp::Empty) | Some(RuleApp::Repeat) => Proof::assumption(sequent),
        Some(rule @ (RuleApp::Ax { .. } | RuleApp::BotL)) => Proof::node(sequent, rule.clone(), vec![]),
        Some(rule) => match rule.modal_data() {
            Some(d) => {
                let mut d = d.clone();
                d.weak_left = d.weak_left.union(l);
                d.weak_right = d.weak_right.union(r);
                Proof::node(sequent, rule.with_modal_data(d), p.children.clone())
            }
            None => Proof::node(
                sequent,
                rule.clone(),
                p.children.iter().map(|c| weaken(c, l, r)).collect(),
            ),
        },
    }
}

/// Weakens `p` up to exactly `target`.
pub fn weaken_to(p: &Proof, target: &Sequent) -> Result<Proof, ProofError> {
    let l = target.left.minus(&p.sequent.left);
    let r = target.right.minus(&p.sequent.right);
    match (l, r) {
        (Some(l), Some(r)) => Ok(weaken(p, &l, &r)),
        _ => Err(ProofError::Internal(format!(
            "cannot weaken {} to {target}",
            p.sequent
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inversion {
    /// φ→ψ,Γ⇒Δ gives Γ⇒Δ,φ
    ImpL0,
    /// φ→ψ,Γ⇒Δ gives ψ,Γ⇒Δ
    ImpL1,
    /// Γ⇒Δ,φ→ψ gives φ,Γ⇒Δ,ψ
    ImpR,
    /// Γ⇒Δ,⊥ gives Γ⇒Δ
    BotR,
}

struct InvSpec {
    side: Side,
    formula: Formula,
    add_left: Multiset,
    add_right: Multiset,
}

impl InvSpec {
    fn new(which: Inversion, principal: &Formula) -> Result<InvSpec, ProofError> {
        let bad = || ProofError::ShapeMismatch(format!("cannot invert {which:?} on `{principal}`"));
        let (side, add_left, add_right) = match which {
            Inversion::BotR => {
                if !principal.is_bot() {
                    return Err(bad());
                }
                (Side::Right, vec![], vec![])
            }
            _ => {
                let (a, b) = principal.as_imp().ok_or_else(bad)?;
                match which {
                    Inversion::ImpL0 => (Side::Left, vec![], vec![a.clone()]),
                    Inversion::ImpL1 => (Side::Left, vec![b.clone()], vec![]),
                    _ => (Side::Right, vec![a.clone()], vec![b.clone()]),
                }
            }
        };
        Ok(InvSpec {
            side,
            formula: principal.clone(),
            add_left: Multiset::from_vec(add_left),
            add_right: Multiset::from_vec(add_right),
        })
    }

    fn apply(&self, s: &Sequent) -> Option<Sequent> {
        let mut t = s.clone();
        if !t.side_mut(self.side).remove(&self.formula) {
            return None;
        }
        Some(t.weakened(&self.add_left, &self.add_right))
    }

    /// Index of the premise that the inverted rule leaves, if `rule` has
    /// `formula` as its principal formula on our side.
    fn principal_child(&self, which: Inversion, rule: &RuleApp) -> Option<usize> {
        match (which, rule) {
            (Inversion::BotR, RuleApp::BotR) => Some(0),
            (Inversion::ImpR, RuleApp::ImpR { left, right })
            | (Inversion::ImpL0, RuleApp::ImpL { left, right })
            | (Inversion::ImpL1, RuleApp::ImpL { left, right })
                if Formula::imp(left, right) == self.formula =>
            {
                Some(if which == Inversion::ImpL1 { 1 } else { 0 })
            }
            _ => None,
        }
    }
}

/// The premise of an invertible rule, without increasing local height.
pub fn invert(p: &Proof, which: Inversion, principal: &Formula) -> Result<Proof, ProofError> {
    let spec = InvSpec::new(which, principal)?;
    if spec.apply(&p.sequent).is_none() {
        return Err(ProofError::PrincipalMissing(principal.to_string()));
    }
    invert_go(p, which, &spec)
}

fn invert_go(p: &Proof, which: Inversion, spec: &InvSpec) -> Result<Proof, ProofError> {
    let target = spec
        .apply(&p.sequent)
        .ok_or_else(|| ProofError::PrincipalMissing(spec.formula.to_string()))?;
    let Some(rule) = &p.rule else {
        return Ok(Proof::assumption(target));
    };
    if let Some(i) = spec.principal_child(which, rule) {
        return Ok(p.children[i].clone());
    }
    match rule {
        RuleApp::Ax { .. } | RuleApp::BotL => Ok(Proof::node(target, rule.clone(), vec![])),
        RuleApp::InterpIL(d) | RuleApp::InterpIK4(d) | RuleApp::InterpIK4Slim(d) => {
            let mut d = d.clone();
            let part = match spec.side {
                Side::Left => &mut d.weak_left,
                Side::Right => &mut d.weak_right,
            };
            if !part.remove(&spec.formula) {
                return Err(ProofError::Internal(format!(
                    "`{}` is principal in a ⊳ rule",
                    spec.formula
                )));
            }
            d.weak_left = d.weak_left.union(&spec.add_left);
            d.weak_right = d.weak_right.union(&spec.add_right);
            Ok(Proof::node(target, rule.with_modal_data(d), p.children.clone()))
        }
        RuleApp::Wk { add_left, add_right } => {
            let mut al = add_left.clone();
            let mut ar = add_right.clone();
            let removed = match spec.side {
                Side::Left => al.remove(&spec.formula),
                Side::Right => ar.remove(&spec.formula),
            };
            if removed {
                let rule = RuleApp::Wk {
                    add_left: al.union(&spec.add_left),
                    add_right: ar.union(&spec.add_right),
                };
                Ok(Proof::node(target, rule, p.children.clone()))
            } else {
                let c = invert_go(&p.children[0], which, spec)?;
                Ok(Proof::node(target, rule.clone(), vec![c]))
            }
        }
        RuleApp::Ctr { dup_left, dup_right } => {
            let dup = match spec.side {
                Side::Left => dup_left,
                Side::Right => dup_right,
            };
            let mut c = invert_go(&p.children[0], which, spec)?;
            if dup.contains(&spec.formula) {
                c = invert_go(&c, which, spec)?;
                let mut dl = dup_left.clone();
                let mut dr = dup_right.clone();
                match spec.side {
                    Side::Left => dl.remove(&spec.formula),
                    Side::Right => dr.remove(&spec.formula),
                };
                let rule = RuleApp::Ctr {
                    dup_left: dl.union(&spec.add_left),
                    dup_right: dr.union(&spec.add_right),
                };
                return Ok(Proof::node(target, rule, vec![c]));
            }
            Ok(Proof::node(target, rule.clone(), vec![c]))
        }
        RuleApp::Equiv { to, side, .. } if *side == spec.side && *to == spec.formula => {
            let count = p.sequent.side(spec.side).count(to);
            if count < 2 {
                return Err(ProofError::Internal("cannot invert through Equiv".into()));
            }
            let c = invert_go(&p.children[0], which, spec)?;
            Ok(Proof::node(target, rule.clone(), vec![c]))
        }
        RuleApp::Empty | RuleApp::Repeat => Err(ProofError::Internal(format!("cannot invert through {}", rule.name()))),
        _ => {
            let kids = p
                .children
                .iter()
                .map(|c| invert_go(c, which, spec))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Proof::node(target, rule.clone(), kids))
        }
    }
}

/// Removes one copy of each formula of `dup_left`/`dup_right` from the
/// conclusion; every removed copy must have a twin.
pub fn contract(p: &Proof, dup_left: &Multiset, dup_right: &Multiset) -> Result<Proof, ProofError> {
    let mut cur = p.clone();
    for (side, dup) in [(Side::Left, dup_left), (Side::Right, dup_right)] {
        for f in dup.iter() {
            if cur.sequent.side(side).count(f) < 2 {
                return Err(ProofError::DuplicateMissing(f.to_string()));
            }
            cur = contract_one(&cur, side, f)?;
        }
    }
    Ok(cur)
}

pub(crate) fn contract_one(p: &Proof, side: Side, f: &Formula) -> Result<Proof, ProofError> {
    let mut target = p.sequent.clone();
    if !target.side_mut(side).remove(f) || !target.side(side).contains(f) {
        return Err(ProofError::DuplicateMissing(f.to_string()));
    }
    let Some(rule) = &p.rule else {
        return Ok(Proof::assumption(target));
    };
    match rule {
        RuleApp::Ax { .. } | RuleApp::BotL => Ok(Proof::node(target, rule.clone(), vec![])),
        RuleApp::BotR if side == Side::Right && f.is_bot() => Ok(p.children[0].clone()),
        RuleApp::ImpR { left, right } if side == Side::Right && Formula::imp(left, right) == *f => {
            let c = invert(&p.children[0], Inversion::ImpR, f)?;
            let c = contract_one(&c, Side::Left, left)?;
            let c = contract_one(&c, Side::Right, right)?;
            Ok(Proof::node(target, rule.clone(), vec![c]))
        }
        RuleApp::ImpL { left, right } if side == Side::Left && Formula::imp(left, right) == *f => {
            let c0 = invert(&p.children[0], Inversion::ImpL0, f)?;
            let c0 = contract_one(&c0, Side::Right, left)?;
            let c1 = invert(&p.children[1], Inversion::ImpL1, f)?;
            let c1 = contract_one(&c1, Side::Left, right)?;
            Ok(Proof::node(target, rule.clone(), vec![c0, c1]))
        }
        RuleApp::InterpIL(d) | RuleApp::InterpIK4(d) | RuleApp::InterpIK4Slim(d) => {
            let mut nd = d.clone();
            let dropped = match side {
                Side::Left => nd.weak_left.remove(f),
                Side::Right => nd.weak_right.remove(f),
            };
            if dropped {
                return Ok(Proof::node(target, rule.with_modal_data(nd), p.children.clone()));
            }
            if side == Side::Right {
                return Err(ProofError::Internal("two principal occurrences on the right".into()));
            }
            // both copies sit in the ordering
            let pair = f.as_interp().map(|(a, b)| (a.clone(), b.clone()));
            let idx: Vec<usize> = d
                .ordering
                .iter()
                .enumerate()
                .filter(|(_, o)| Some(*o) == pair.as_ref())
                .map(|(i, _)| i)
                .collect();
            if idx.len() < 2 {
                return Err(ProofError::DuplicateMissing(f.to_string()));
            }
            let k = idx[1];
            let (nrule, kids) = drop_ordering_index(rule, d, k, &p.children, false)?;
            Ok(Proof::node(target, nrule, kids))
        }
        RuleApp::Wk { add_left, add_right } => {
            let mut al = add_left.clone();
            let mut ar = add_right.clone();
            let removed = match side {
                Side::Left => al.remove(f),
                Side::Right => ar.remove(f),
            };
            if removed {
                if al.is_empty() && ar.is_empty() {
                    return Ok(p.children[0].clone());
                }
                return Ok(Proof::node(
                    target,
                    RuleApp::Wk {
                        add_left: al,
                        add_right: ar,
                    },
                    p.children.clone(),
                ));
            }
            let c = contract_one(&p.children[0], side, f)?;
            Ok(Proof::node(target, rule.clone(), vec![c]))
        }
        RuleApp::Empty | RuleApp::Repeat => Err(ProofError::Internal(format!("cannot contract through {}", rule.name()))),
        RuleApp::Equiv { to, side: es, .. } if *es == side && to == f => {
            Err(ProofError::Internal("cannot contract through Equiv".into()))
        }
        _ => {
            let kids = p
                .children
                .iter()
                .map(|c| contract_one(c, side, f))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Proof::node(target, rule.clone(), kids))
        }
    }
}

/// Removes ordering index `k` whose antecedent also occurs earlier:
/// premises i > k lose one copy of φₖ⊳⊥ and φₖ, premise k is dropped.
/// With `to_weak`, φₖ⊳ψₖ moves to the weakening part; otherwise it
/// disappears from the conclusion.
fn drop_ordering_index(
    rule: &RuleApp,
    d: &ModalData,
    k: usize,
    children: &[Proof],
    to_weak: bool,
) -> Result<(RuleApp, Vec<Proof>), ProofError> {
    let m = d.ordering.len();
    let (ak, bk) = d.ordering[k].clone();
    let mut kids = Vec::with_capacity(m);
    // children[pos] is premise i = m - pos
    for (pos, c) in children.iter().enumerate() {
        let i = m - pos;
        if i == k {
            continue;
        }
        if i > k {
            let c = contract_one(c, Side::Left, &ak.interp_bot())?;
            kids.push(contract_one(&c, Side::Right, &ak)?);
        } else {
            kids.push(c.clone());
        }
    }
    let mut nd = d.clone();
    nd.ordering.remove(k);
    if to_weak {
        nd.weak_left.insert(Formula::interp(&ak, &bk));
    }
    Ok((rule.with_modal_data(nd), kids))
}

/// One step towards a slim ordering: the smallest k whose antecedent
/// repeats an earlier one is removed from the ordering.
pub fn slim_step(rule: &RuleApp, premises: &[Proof]) -> Result<(RuleApp, Vec<Proof>), ProofError> {
    let d = rule
        .modal_data()
        .ok_or_else(|| ProofError::ShapeMismatch(format!("{} is not a ⊳ rule", rule.name())))?;
    if premises.len() != d.ordering.len() + 1 {
        return Err(ProofError::ShapeMismatch("premise count does not match the ordering".into()));
    }
    let k = (0..d.ordering.len())
        .find(|&k| d.ordering[..k].iter().any(|(a, _)| *a == d.ordering[k].0))
        .ok_or(ProofError::NoDuplicate)?;
    drop_ordering_index(rule, d, k, premises, true)
}

/// Applies [`slim_step`] until the ordering is duplicate-free, then marks
/// the rule slim. Returns the number of steps taken.
pub fn make_slim(p: &Proof) -> Result<(Proof, usize), ProofError> {
    let Some(rule) = &p.rule else {
        return Ok((p.clone(), 0));
    };
    if !matches!(rule, RuleApp::InterpIK4(_) | RuleApp::InterpIK4Slim(_)) {
        return Ok((p.clone(), 0));
    }
    let mut rule = rule.clone();
    let mut kids = p.children.clone();
    let mut steps = 0;
    loop {
        match slim_step(&rule, &kids) {
            Ok((r, k)) => {
                rule = r;
                kids = k;
                steps += 1;
            }
            Err(ProofError::NoDuplicate) => break,
            Err(e) => return Err(e),
        }
    }
    let d = rule.modal_data().expect("modal").clone();
    Ok((Proof::node(p.sequent.clone(), RuleApp::InterpIK4Slim(d), kids), steps))
}

/// From a proof of φ, Σ⊳⊥ ⇒ Σ, a proof of Σ⊳⊥, Γ ⇒ φ⊳⊥, Δ whose root is a
/// ⊳ rule with ordering Σ⊳⊥.
pub fn nec_admissible(p: &Proof, gamma: &Multiset, delta: &Multiset, target: ModalTarget) -> Result<Proof, ProofError> {
    let sigma = p.sequent.right.clone();
    let rest = p
        .sequent
        .left
        .minus(&sigma.interp_bot())
        .ok_or_else(|| ProofError::ShapeMismatch(format!("{} is not of the form φ, Σ⊳⊥ ⇒ Σ", p.sequent)))?;
    if rest.len() != 1 {
        return Err(ProofError::ShapeMismatch(format!(
            "{} is not of the form φ, Σ⊳⊥ ⇒ Σ",
            p.sequent
        )));
    }
    let phi = rest.as_slice()[0].clone();
    Ok(nec_with(p, &phi, &sigma, gamma, delta, target))
}

pub(crate) fn nec_with(
    p: &Proof,
    phi: &Formula,
    sigma: &Multiset,
    gamma: &Multiset,
    delta: &Multiset,
    target: ModalTarget,
) -> Proof {
    let d = ModalData {
        ordering: sigma.iter().map(|s| (s.clone(), Formula::Bot)).collect(),
        principal: (phi.clone(), Formula::Bot),
        weak_left: gamma.clone(),
        weak_right: delta.clone(),
    };
    let concl = d.conclusion();
    let rule = target.rule(d);
    let prem = rule.premises_of(&concl).expect("⊳ premises");
    let mut extra = vec![Formula::Bot.interp_bot()];
    if target == ModalTarget::Fgil {
        extra.push(phi.interp_bot());
    }
    let main = weaken(p, &Multiset::from_vec(extra), &Multiset::singleton(Formula::Bot));
    debug_assert_eq!(main.sequent, prem[0]);
    let mut kids = vec![main];
    kids.extend(
        prem[1..]
            .iter()
            .map(|s| Proof::node(s.clone(), RuleApp::BotL, vec![])),
    );
    Proof::node(concl, rule, kids)
}

/// From a proof of ψ, (ψ, Σ)⊳⊥ ⇒ Σ, a proof of ψ, Σ⊳⊥ ⇒ Σ ending in a cut
/// on ψ⊳⊥ against a trivial ⊳_IL instance.
pub fn lob(p: &Proof) -> Result<Proof, ProofError> {
    let sigma = p.sequent.right.clone();
    let rest = p
        .sequent
        .left
        .minus(&sigma.interp_bot())
        .ok_or_else(|| ProofError::ShapeMismatch(format!("{} is not of the form ψ, (ψ, Σ)⊳⊥ ⇒ Σ", p.sequent)))?;
    let psi = rest
        .distinct()
        .into_iter()
        .find(|f| rest.without(f).is_some_and(|r| r == Multiset::singleton(f.interp_bot())))
        .ok_or_else(|| ProofError::ShapeMismatch(format!("{} is not of the form ψ, (ψ, Σ)⊳⊥ ⇒ Σ", p.sequent)))?;
    Ok(lob_with(p, &psi, &sigma))
}

pub(crate) fn lob_with(p: &Proof, psi: &Formula, sigma: &Multiset) -> Proof {
    let d = ModalData {
        ordering: sigma.iter().map(|s| (s.clone(), Formula::Bot)).collect(),
        principal: (psi.clone(), Formula::Bot),
        weak_left: Multiset::singleton(psi.clone()),
        weak_right: sigma.clone(),
    };
    let concl = d.conclusion();
    let rule = RuleApp::InterpIL(d);
    let prem = rule.premises_of(&concl).expect("⊳ premises");
    let main = weaken(
        p,
        &Multiset::singleton(Formula::Bot.interp_bot()),
        &Multiset::singleton(Formula::Bot),
    );
    debug_assert_eq!(main.sequent, prem[0]);
    let mut kids = vec![main];
    kids.extend(
        prem[1..]
            .iter()
            .map(|s| Proof::node(s.clone(), RuleApp::BotL, vec![])),
    );
    let il = Proof::node(concl, rule, kids);
    let goal = Sequent::new(sigma.interp_bot().with(psi.clone()), sigma.clone());
    Proof::node(
        goal,
        RuleApp::Cut {
            formula: psi.interp_bot(),
        },
        vec![il, p.clone()],
    )
}
