//! One round of local cut reduction on GIL fragments.

use crate::formula::Formula;
use crate::proof::{ModalTarget, Proof, ProofError};
use crate::rules::{ModalData, RuleApp};
use crate::sequent::{Multiset, Sequent, Side};

use super::{contract, contract_one, invert, nec_with, weaken_to, Inversion};

/// Given locally cut-free fragments π of Γ⇒Δ,χ and τ of χ,Γ⇒Δ, a locally
/// cut-free fragment of Γ⇒Δ. Cuts may remain above the first ⊳ layer.
pub fn cut_reduce_step(pi: &Proof, tau: &Proof, chi: &Formula) -> Result<Proof, ProofError> {
    let delta = pi
        .sequent
        .right
        .without(chi)
        .ok_or_else(|| ProofError::PrincipalMissing(chi.to_string()))?;
    let gamma = tau
        .sequent
        .left
        .without(chi)
        .ok_or_else(|| ProofError::PrincipalMissing(chi.to_string()))?;
    if pi.sequent.left != gamma || tau.sequent.right != delta {
        return Err(ProofError::ShapeMismatch(format!(
            "{} and {} are not the premises of a cut on {chi}",
            pi.sequent, tau.sequent
        )));
    }
    for p in [pi, tau] {
        if !p.is_locally_cut_free() {
            return Err(ProofError::NotLocallyCutFree(p.sequent.to_string()));
        }
    }
    reduce(pi, tau, chi)
}

fn cut_node(s: &Sequent, chi: &Formula, l: Proof, r: Proof) -> Proof {
    Proof::node(s.clone(), RuleApp::Cut { formula: chi.clone() }, vec![l, r])
}

fn inversion_for(rule: &RuleApp, premise: usize) -> Option<(Inversion, Formula)> {
    match rule {
        RuleApp::BotR => Some((Inversion::BotR, Formula::Bot)),
        RuleApp::ImpR { left, right } => Some((Inversion::ImpR, Formula::imp(left, right))),
        RuleApp::ImpL { left, right } => Some((
            if premise == 0 { Inversion::ImpL0 } else { Inversion::ImpL1 },
            Formula::imp(left, right),
        )),
        _ => None,
    }
}

fn reduce(pi: &Proof, tau: &Proof, chi: &Formula) -> Result<Proof, ProofError> {
    let s = Sequent::new(pi.sequent.left.clone(), tau.sequent.right.clone());
    if s.left.contains(&Formula::Bot) {
        return Ok(Proof::node(s, RuleApp::BotL, vec![]));
    }
    if let Some(a) = s.shared_atom() {
        let atom = a.clone();
        return Ok(Proof::node(s, RuleApp::Ax { atom }, vec![]));
    }
    let (Some(pr), Some(tr)) = (&pi.rule, &tau.rule) else {
        return Err(ProofError::ShapeMismatch("cut premise is an assumption".into()));
    };
    for r in [pr, tr] {
        match r {
            RuleApp::Cut { .. } => return Err(ProofError::NotLocallyCutFree(s.to_string())),
            RuleApp::Wk { .. } | RuleApp::Ctr { .. } | RuleApp::Equiv { .. } | RuleApp::Empty | RuleApp::Repeat => {
                return Err(ProofError::ShapeMismatch(format!("rule {} in a GIL fragment", r.name())))
            }
            _ => {}
        }
    }
    // axioms that use the cut formula
    match (pr, tr) {
        (_, RuleApp::Ax { atom }) => return contract_one(pi, Side::Right, atom),
        (_, RuleApp::BotL) => return invert(pi, Inversion::BotR, &Formula::Bot),
        (RuleApp::Ax { atom }, _) => return contract_one(tau, Side::Left, atom),
        _ => {}
    }
    // the cut formula is only weakened in by a ⊳ rule
    if let Some(d) = pr.modal_data() {
        if d.weak_right.contains(chi) {
            let mut d = d.clone();
            d.weak_right.remove(chi);
            return Ok(Proof::node(s, pr.with_modal_data(d), pi.children.clone()));
        }
    }
    if let Some(d) = tr.modal_data() {
        if d.weak_left.contains(chi) {
            let mut d = d.clone();
            d.weak_left.remove(chi);
            return Ok(Proof::node(s, tr.with_modal_data(d), tau.children.clone()));
        }
    }
    let pi_principal = match pr {
        RuleApp::BotR => chi.is_bot() && !s.right.contains(chi),
        RuleApp::ImpR { left, right } => Formula::imp(left, right) == *chi && !s.right.contains(chi),
        _ => false,
    };
    if pi_principal && matches!(pr, RuleApp::BotR) {
        return Ok(pi.children[0].clone());
    }
    // π ends in a propositional rule on a context formula
    if !pi_principal && pr.modal_data().is_none() {
        let mut kids = Vec::with_capacity(pi.children.len());
        for (j, c) in pi.children.iter().enumerate() {
            let (inv, f) = inversion_for(pr, j).expect("propositional rule");
            let t = invert(tau, inv, &f)?;
            kids.push(reduce(c, &t, chi)?);
        }
        return Ok(Proof::node(s, pr.clone(), kids));
    }
    let tau_principal = match tr {
        RuleApp::ImpL { left, right } => Formula::imp(left, right) == *chi && !s.left.contains(chi),
        _ => false,
    };
    // τ ends in a propositional rule on a context formula
    if !tau_principal && tr.modal_data().is_none() {
        let mut kids = Vec::with_capacity(tau.children.len());
        for (j, c) in tau.children.iter().enumerate() {
            let (inv, f) = inversion_for(tr, j).expect("propositional rule");
            let p = invert(pi, inv, &f)?;
            kids.push(reduce(&p, c, chi)?);
        }
        return Ok(Proof::node(s, tr.clone(), kids));
    }
    if pi_principal && tau_principal {
        // χ = a→b principal on both sides: cut on a, then on b
        let (a, b) = chi.as_imp().expect("implication");
        let t0 = weaken_to(&tau.children[0], &s.add_right(b.clone()).add_right(a.clone()))?;
        let first = reduce(&t0, &pi.children[0], a)?;
        return reduce(&first, &tau.children[1], b);
    }
    match (pr.modal_data(), tr.modal_data()) {
        (Some(dp), Some(dt)) => modal_case(&s, pi, dp, tau, dt, chi),
        _ => Err(ProofError::Internal(format!(
            "no reduction for {} against {} on {chi}",
            pr.name(),
            tr.name()
        ))),
    }
}

/// Both premises end in ⊳ rules, χ = ψ_m⊳φ is principal in π and sits in
/// τ's ordering at position k. The orderings are merged at k.
fn modal_case(
    s: &Sequent,
    pi: &Proof,
    dp: &ModalData,
    tau: &Proof,
    dt: &ModalData,
    chi: &Formula,
) -> Result<Proof, ProofError> {
    if dp.principal_formula() != *chi {
        return Err(ProofError::Internal(format!("{chi} is not principal in π")));
    }
    let k = dt
        .ordering
        .iter()
        .position(|o| *o == dp.principal)
        .ok_or_else(|| ProofError::Internal(format!("{chi} is not in τ's ordering")))?;
    let m = dp.ordering.len();
    let mt = dt.ordering.len();
    let pi_prem = |i: usize| &pi.children[m - i];
    let tau_prem = |j: usize| &tau.children[mt - j];
    let (chi0, chi1) = dp.principal.clone();
    let box1 = chi1.interp_bot();
    let box0 = chi0.interp_bot();

    // τ'_k : (A'<k, φ')⊳⊥ ⇒ χ₁⊳⊥   and   π'_m : (A, χ₁)⊳⊥ ⇒ χ₀⊳⊥
    let tk = tau_prem(k);
    let tk_nec = nec_with(tk, &chi1, &tk.sequent.right, &Multiset::new(), &Multiset::new(), ModalTarget::Gil);
    let pm = pi_prem(m);
    let pm_nec = nec_with(pm, &chi0, &pm.sequent.right, &Multiset::new(), &Multiset::new(), ModalTarget::Gil);

    let mut ordering = dt.ordering[..k].to_vec();
    ordering.extend(dp.ordering.iter().cloned());
    ordering.extend(dt.ordering[k + 1..].iter().cloned());
    let merged: Multiset = ordering.iter().map(|(a, b)| Formula::interp(a, b)).collect();
    let rest_t = dt.ordering_formulas().without(chi).expect("χ in τ's ordering");
    let shared = dp.ordering_formulas().intersection(&rest_t);
    let big_left = s.left.union(&shared);
    let weak_left = big_left
        .minus(&merged)
        .ok_or_else(|| ProofError::Internal("merged ordering exceeds the antecedent".into()))?;
    let d = ModalData {
        ordering,
        principal: dt.principal.clone(),
        weak_left,
        weak_right: dt.weak_right.clone(),
    };
    let concl = d.conclusion();
    debug_assert_eq!(concl, Sequent::new(big_left.clone(), s.right.clone()));
    let rule = RuleApp::InterpIK4(d);
    let targets = rule
        .premises_of(&concl)
        .map_err(|e| ProofError::Internal(e.0))?;
    let total = m + mt;
    let mut kids = Vec::with_capacity(total);
    for (pos, t) in targets.iter().enumerate() {
        let n = total - 1 - pos;
        let kid = if n < k {
            let c = tau_prem(n);
            if c.sequent != *t {
                return Err(ProofError::Internal("τ premise below k changed".into()));
            }
            c.clone()
        } else if n < k + m {
            let i = n - k;
            let right = cut_node(
                &t.add_left(box1.clone()),
                &chi1,
                weaken_to(pi_prem(i), &t.add_left(box1.clone()).add_right(chi1.clone()))?,
                weaken_to(tk, &t.add_left(box1.clone()).add_left(chi1.clone()))?,
            );
            cut_node(
                t,
                &box1,
                weaken_to(&tk_nec, &t.add_right(box1.clone()))?,
                right,
            )
        } else {
            let j = n - m + 1;
            let t0 = t.add_right(box0.clone());
            let left = cut_node(
                &t0,
                &box1,
                weaken_to(&tk_nec, &t0.add_right(box1.clone()))?,
                weaken_to(&pm_nec, &t0.add_left(box1.clone()))?,
            );
            let t1 = t.add_left(box0.clone());
            let t2 = t1.add_left(chi0.clone());
            let t3 = t2.add_right(chi1.clone());
            let inner = cut_node(
                &t3,
                &box1,
                weaken_to(&tk_nec, &t3.add_right(box1.clone()))?,
                weaken_to(pm, &t3.add_left(box1.clone()))?,
            );
            let via_chi1 = cut_node(&t2, &chi1, inner, weaken_to(tk, &t2.add_left(chi1.clone()))?);
            let right = cut_node(
                &t1,
                &chi0,
                weaken_to(tau_prem(j), &t1.add_right(chi0.clone()))?,
                via_chi1,
            );
            cut_node(t, &box0, left, right)
        };
        kids.push(kid);
    }
    let merged_proof = Proof::node(concl, rule, kids);
    contract(&merged_proof, &shared, &Multiset::new())
}
