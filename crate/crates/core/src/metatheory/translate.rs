//! Translations: Hilbert proofs to fGIL with cut and back, fGIL with cut to
//! GIL fragments, cyclic GIL proofs to fGIL, and cut elimination by search.

use std::collections::{BTreeSet, HashMap};

use crate::cyclic::{check_cyclic, CyclicProof};
use crate::formula::Formula;
use crate::golden::appendix_proof;
use crate::hilbert::{bnec_fix, lob_premise, lob_rule, AxiomScheme, HilbertBuilder, HilbertProof, Justification};
use crate::proof::{check_proof, neg_l, prove_by_ax, ModalTarget, Proof, ProofError};
use crate::rules::{CalculusId, ModalData, RuleApp};
use crate::search::{prove, prove_propositional, with_big_stack, SearchLimits, SearchOutcome};
use crate::sequent::{Multiset, Sequent};

use super::{invert, lob_with, nec_with, weaken, weaken_to, Inversion};

/// An fGIL proof with cut of ⇒ φ for a Hilbert proof of φ in IL.
pub fn hilbert_to_sequent(h: &HilbertProof) -> Result<Proof, ProofError> {
    let mut proofs: Vec<Proof> = Vec::with_capacity(h.lines.len());
    for (n, line) in h.lines.iter().enumerate() {
        let f = &line.formula;
        let p = match &line.just {
            Justification::Taut => prove_propositional(&Sequent::goal(f.clone()), ModalTarget::Fgil)
                .ok_or_else(|| ProofError::Internal(format!("line {n} is not a tautology")))?,
            Justification::Axiom { scheme, args } => {
                if *scheme == AxiomScheme::P {
                    return Err(ProofError::ShapeMismatch(format!("line {n}: P is not an axiom of IL")));
                }
                appendix_proof(*scheme, args)
                    .map_err(|e| ProofError::ShapeMismatch(format!("line {n}: {e}")))?
                    .expect("IL scheme")
            }
            Justification::Mp { imp, ant } => {
                let (pi, pa) = (proofs.get(*imp), proofs.get(*ant));
                let (Some(pi), Some(pa)) = (pi, pa) else {
                    return Err(ProofError::ShapeMismatch(format!("line {n} cites a later line")));
                };
                let impf = &h.lines[*imp].formula;
                let (a, b) = impf
                    .as_imp()
                    .ok_or_else(|| ProofError::ShapeMismatch(format!("line {imp} is not an implication")))?;
                let inv = invert(pi, Inversion::ImpR, impf)?;
                let left = weaken(pa, &Multiset::new(), &Multiset::singleton(b.clone()));
                Proof::node(Sequent::goal(b.clone()), RuleApp::Cut { formula: a.clone() }, vec![left, inv])
            }
            Justification::Nec { line: l } => {
                let pl = proofs
                    .get(*l)
                    .ok_or_else(|| ProofError::ShapeMismatch(format!("line {n} cites a later line")))?;
                let phi = &h.lines[*l].formula;
                let neg = neg_l(phi, pl.clone())?;
                nec_with(&neg, &phi.neg(), &Multiset::new(), &Multiset::new(), &Multiset::new(), ModalTarget::Fgil)
            }
        };
        if p.sequent != Sequent::goal(f.clone()) {
            return Err(ProofError::Internal(format!("line {n} translated to {}", p.sequent)));
        }
        proofs.push(p);
    }
    proofs.pop().ok_or_else(|| ProofError::ShapeMismatch("empty Hilbert proof".into()))
}

/// A Hilbert proof in IL of ⋀Γ → ⋁Δ for an fGIL proof (with cut) of Γ ⇒ Δ.
pub fn sequent_to_hilbert(p: &Proof) -> Result<HilbertProof, ProofError> {
    let mut b = HilbertBuilder::new();
    let line = to_hilbert(&mut b, p)?;
    Ok(b.finish(line))
}

fn to_hilbert(b: &mut HilbertBuilder, p: &Proof) -> Result<usize, ProofError> {
    let target = p.sequent.to_formula();
    if let Some(l) = b.line_of(&target) {
        return Ok(l);
    }
    let Some(rule) = &p.rule else {
        return Err(ProofError::ShapeMismatch(format!("assumption {}", p.sequent)));
    };
    match rule {
        RuleApp::Ax { .. } | RuleApp::BotL => Ok(b.taut(target)),
        RuleApp::BotR | RuleApp::ImpL { .. } | RuleApp::ImpR { .. } | RuleApp::Cut { .. } | RuleApp::Wk { .. } | RuleApp::Ctr { .. } => {
            let prem = p
                .children
                .iter()
                .map(|c| to_hilbert(b, c))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(b.taut_consequence(target, &prem))
        }
        RuleApp::InterpIL(d) => {
            let prem = p
                .children
                .iter()
                .map(|c| to_hilbert(b, c))
                .collect::<Result<Vec<_>, _>>()?;
            let claim = il_claim(b, d, &prem);
            Ok(b.taut_consequence(target, &[claim]))
        }
        other => Err(ProofError::ShapeMismatch(format!("rule {} is not in fGIL with cut", other.name()))),
    }
}

/// From the premise lines of a ⊳_IL instance (in order m..0), a line of
/// ⋀ordering → ψ_m⊳φ.
fn il_claim(b: &mut HilbertBuilder, d: &ModalData, prem: &[usize]) -> usize {
    let m = d.ordering.len();
    let phi = &d.principal.1;
    let c = Formula::conj(&d.ordering.iter().map(|(a, b)| Formula::interp(a, b)).collect::<Vec<_>>());
    let refl = b.taut_interp(phi, phi);
    let cond_refl = b.taut_consequence(Formula::imp(&c, &Formula::interp(phi, phi)), &[refl]);
    let mut claims: Vec<usize> = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let psi = if i == m { &d.principal.0 } else { &d.ordering[i].1 };
        let mut sigma: Vec<Formula> = d.ordering[..i].iter().map(|(a, _)| a.clone()).collect();
        sigma.push(phi.clone());
        let big = Formula::disj(&sigma);
        // ψᵢ ⊳ ⋁Σᵢ from the premise by Löb and bnec
        let bn = psi.bnec();
        let lp = b.taut_consequence(lob_premise(&bn, &sigma), &[prem[m - i]]);
        let l1 = lob_rule(b, lp, &bn, &sigma);
        let fx = bnec_fix(b, psi);
        let ti = b.trans(fx, l1);
        // C → ⋁Σᵢ ⊳ φ, joining from the right
        let mut acc = cond_refl;
        for j in (0..i).rev() {
            let aj = &d.ordering[j].0;
            let psij = &d.ordering[j].1;
            let rest = Formula::disj(&sigma[j + 1..]);
            let j2 = b.axiom(AxiomScheme::J2, &[aj.clone(), phi.clone(), psij.clone()]);
            let c_aj = b.taut_consequence(Formula::imp(&c, &Formula::interp(aj, phi)), &[j2, claims[j]]);
            let j3 = b.axiom(AxiomScheme::J3, &[aj.clone(), phi.clone(), rest.clone()]);
            acc = b.taut_consequence(
                Formula::imp(&c, &Formula::interp(&Formula::or(aj, &rest), phi)),
                &[j3, c_aj, acc],
            );
        }
        debug_assert_eq!(b.formula(acc), &Formula::imp(&c, &Formula::interp(&big, phi)));
        let j2 = b.axiom(AxiomScheme::J2, &[psi.clone(), phi.clone(), big.clone()]);
        let claim = b.taut_consequence(Formula::imp(&c, &Formula::interp(psi, phi)), &[j2, ti, acc]);
        claims.push(claim);
    }
    claims[m]
}

/// The GIL fragment of an fGIL proof with cut: each ⊳_IL instance becomes
/// ⊳_IK4 over the Löb transforms of its premises, down to `fuel` layers;
/// ⊳_IL instances past that become assumptions.
pub fn alpha_prefix(p: &Proof, fuel: usize) -> Result<Proof, ProofError> {
    let Some(rule) = &p.rule else {
        return Ok(p.clone());
    };
    match rule {
        RuleApp::InterpIL(d) => {
            if fuel == 0 {
                return Ok(Proof::assumption(p.sequent.clone()));
            }
            let m = d.ordering.len();
            let mut kids = Vec::with_capacity(m + 1);
            for (pos, c) in p.children.iter().enumerate() {
                let i = m - pos;
                let psi = if i == m { &d.principal.0 } else { &d.ordering[i].1 };
                let l = lob_with(c, psi, &c.sequent.right);
                kids.push(alpha_prefix(&l, fuel - 1)?);
            }
            Ok(Proof::node(p.sequent.clone(), RuleApp::InterpIK4(d.clone()), kids))
        }
        RuleApp::Equiv { .. } | RuleApp::Empty | RuleApp::Repeat => {
            Err(ProofError::ShapeMismatch(format!("rule {} is not in fGIL with cut", rule.name())))
        }
        _ => {
            let kids = p
                .children
                .iter()
                .map(|c| alpha_prefix(c, fuel))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Proof::node(p.sequent.clone(), rule.clone(), kids))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UnfoldStats {
    pub calls: usize,
    pub memo_hits: usize,
    pub max_lambda: usize,
    pub max_depth: usize,
}

/// An fGIL proof of Λ⊳⊥, Γ ⇒ Δ from a cyclic GIL proof of Γ ⇒ Δ.
pub fn cyclic_to_fgil(cp: &CyclicProof, lambda: &[Formula]) -> Result<Proof, ProofError> {
    cyclic_to_fgil_with_stats(cp, lambda).map(|(p, _)| p)
}

pub fn cyclic_to_fgil_with_stats(cp: &CyclicProof, lambda: &[Formula]) -> Result<(Proof, UnfoldStats), ProofError> {
    if !matches!(cp.calculus, CalculusId::Gil | CalculusId::GilSlim | CalculusId::GilCut) {
        return Err(ProofError::ShapeMismatch(format!("calculus {} is not GIL", cp.calculus.name())));
    }
    check_cyclic(cp).map_err(|e| ProofError::ShapeMismatch(e.to_string()))?;
    let cp = cp.clone();
    let lambda: BTreeSet<Formula> = lambda.iter().cloned().collect();
    with_big_stack(move || {
        let mut u = Unfolder {
            cp: &cp,
            memo: HashMap::new(),
            stats: UnfoldStats::default(),
        };
        let p = u.go(0, &lambda, 0)?;
        Ok((p, u.stats))
    })
}

struct Unfolder<'a> {
    cp: &'a CyclicProof,
    memo: HashMap<(usize, BTreeSet<Formula>), Proof>,
    stats: UnfoldStats,
}

impl Unfolder<'_> {
    fn go(&mut self, id: usize, lambda: &BTreeSet<Formula>, depth: usize) -> Result<Proof, ProofError> {
        let node = &self.cp.nodes[id];
        if let Some(t) = node.backlink {
            return self.go(t, lambda, depth);
        }
        let key = (id, lambda.clone());
        if let Some(p) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(p.clone());
        }
        self.stats.calls += 1;
        self.stats.max_lambda = self.stats.max_lambda.max(lambda.len());
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let boxes: Multiset = lambda.iter().map(Formula::interp_bot).collect();
        let s = node.sequent.weakened(&boxes, &Multiset::new());
        let p = match &node.rule {
            RuleApp::Ax { .. } | RuleApp::BotL => Proof::node(s, node.rule.clone(), vec![]),
            RuleApp::BotR | RuleApp::ImpL { .. } | RuleApp::ImpR { .. } | RuleApp::Cut { .. } => {
                let kids = node
                    .children
                    .iter()
                    .map(|&c| self.go(c, lambda, depth + 1))
                    .collect::<Result<Vec<_>, _>>()?;
                Proof::node(s, node.rule.clone(), kids)
            }
            RuleApp::InterpIK4(d) | RuleApp::InterpIK4Slim(d) => {
                let m = d.ordering.len();
                let mut ordering: Vec<(Formula, Formula)> =
                    lambda.iter().map(|l| (l.clone(), Formula::Bot)).collect();
                ordering.extend(d.ordering.iter().cloned());
                let nd = ModalData {
                    ordering,
                    principal: d.principal.clone(),
                    weak_left: d.weak_left.clone(),
                    weak_right: d.weak_right.clone(),
                };
                let rule = RuleApp::InterpIL(nd);
                let targets = rule.premises_of(&s).map_err(|e| ProofError::Internal(e.0))?;
                let children = node.children.clone();
                let mut kids = Vec::with_capacity(targets.len());
                for (pos, t) in targets.iter().enumerate() {
                    if pos > m {
                        kids.push(Proof::node(t.clone(), RuleApp::BotL, vec![]));
                        continue;
                    }
                    let i = m - pos;
                    let psi = if i == m { &d.principal.0 } else { &d.ordering[i].1 };
                    if lambda.contains(psi) {
                        kids.push(prove_by_ax(t, psi, ModalTarget::Fgil));
                    } else {
                        let mut bigger = lambda.clone();
                        bigger.insert(psi.clone());
                        let sub = self.go(children[pos], &bigger, depth + 1)?;
                        kids.push(weaken_to(&sub, t)?);
                    }
                }
                Proof::node(s, rule, kids)
            }
            other => {
                return Err(ProofError::ShapeMismatch(format!(
                    "rule {} in a cyclic GIL proof",
                    other.name()
                )))
            }
        };
        self.memo.insert(key, p.clone());
        Ok(p)
    }
}

/// A cut-free fGIL proof of `s`, given an fGIL proof with cut as evidence
/// of provability. The proof is rebuilt by search and unfolding.
pub fn eliminate_cuts_reprove(s: &Sequent, evidence: &Proof) -> Result<Proof, ProofError> {
    if evidence.sequent != *s {
        return Err(ProofError::ShapeMismatch(format!("evidence proves {}", evidence.sequent)));
    }
    check_proof(evidence, CalculusId::FgilCut).map_err(|e| ProofError::ShapeMismatch(e.to_string()))?;
    match prove(s, SearchLimits::default()) {
        SearchOutcome::Provable { proof, .. } => cyclic_to_fgil(&proof, &[]),
        SearchOutcome::Unprovable { .. } => Err(ProofError::Internal(format!(
            "search found no proof of {s} although one with cut exists"
        ))),
        SearchOutcome::ResourceExhausted { explored } => Err(ProofError::Internal(format!(
            "search exhausted after {explored} nodes"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::golden::{appendix_proof, default_args, SCHEMES};
    use crate::hilbert::{check_hilbert, HilbertLine};
    use crate::proof::{check_proof_with, CheckOptions};
    use crate::search::{prove_default, Logic};
    use crate::sequent::parse_sequent;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn goldens_to_hilbert() {
        for s in SCHEMES {
            let p = appendix_proof(s, &default_args(s)).unwrap().unwrap();
            let h = sequent_to_hilbert(&p).unwrap();
            check_hilbert(&h, Logic::Il).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(h.theorem(), Some(&p.sequent.to_formula()));
        }
    }

    #[test]
    fn hilbert_round_trip() {
        let mut b = HilbertBuilder::new();
        let t = b.taut(f("p -> p"));
        let n = b.nec(t);
        let k = b.axiom(AxiomScheme::K, &[f("p"), f("p")]);
        let _ = b.mp(k, n);
        let j1 = b.axiom(AxiomScheme::J1, &[f("p"), f("p")]);
        let last = b.mp(j1, n);
        let h = b.finish(last);
        check_hilbert(&h, Logic::Il).unwrap();
        let p = hilbert_to_sequent(&h).unwrap();
        assert_eq!(p.sequent, Sequent::goal(f("p |> p")));
        check_proof(&p, CalculusId::FgilCut).unwrap();
        let back = sequent_to_hilbert(&p).unwrap();
        check_hilbert(&back, Logic::Il).unwrap();
    }

    #[test]
    fn p_is_rejected() {
        let h = HilbertProof {
            lines: vec![HilbertLine {
                formula: f("(p |> q) -> [](p |> q)"),
                just: Justification::Axiom {
                    scheme: AxiomScheme::P,
                    args: vec![f("p"), f("q")],
                },
            }],
        };
        assert!(hilbert_to_sequent(&h).is_err());
    }

    #[test]
    fn alpha_fragments_check_in_gil() {
        let opts = CheckOptions {
            allow_assumptions: true,
            ..Default::default()
        };
        for s in SCHEMES {
            let p = appendix_proof(s, &default_args(s)).unwrap().unwrap();
            for fuel in 0..3 {
                let a = alpha_prefix(&p, fuel).unwrap();
                assert_eq!(a.sequent, p.sequent);
                check_proof_with(&a, CalculusId::GilCut, opts).unwrap_or_else(|e| panic!("{s} fuel {fuel}: {e}"));
                if fuel > 0 {
                    assert!(!a.contains_rule("IL"));
                }
            }
        }
    }

    #[test]
    fn cyclic_to_fgil_checks() {
        for src in [
            "p |> ((p |> F) & p)",
            "[]([]p -> p) -> []p",
            "(p |> q) -> (q |> r) -> p |> r",
            "p |> q -> <>p -> <>q",
            "<>p |> p",
        ] {
            let s = Sequent::goal(f(src));
            let cp = prove_default(&s).proof().cloned().unwrap();
            let (p, st) = cyclic_to_fgil_with_stats(&cp, &[]).unwrap();
            assert_eq!(p.sequent, s);
            check_proof(&p, CalculusId::Fgil).unwrap_or_else(|e| panic!("{src}: {e}"));
            assert!(st.max_lambda <= s.subformulas().len());
        }
    }

    #[test]
    fn lambda_is_added_on_the_left() {
        let s = parse_sequent("p |> q => p |> q").unwrap();
        let cp = prove_default(&s).proof().cloned().unwrap();
        let p = cyclic_to_fgil(&cp, &[f("r")]).unwrap();
        assert_eq!(p.sequent, parse_sequent("r |> F, p |> q => p |> q").unwrap());
        check_proof(&p, CalculusId::Fgil).unwrap();
    }

    #[test]
    fn reprove_removes_cuts() {
        let p = appendix_proof(AxiomScheme::L, &default_args(AxiomScheme::L)).unwrap().unwrap();
        let a = crate::metatheory::lob(&crate::proof::ax_proof(
            &f("p"),
            &Multiset::from_vec(vec![f("p |> F"), f("p |> F")]),
            &Multiset::new(),
            ModalTarget::Fgil,
        ))
        .unwrap();
        for e in [p, a] {
            let q = eliminate_cuts_reprove(&e.sequent, &e).unwrap();
            check_proof(&q, CalculusId::Fgil).unwrap();
            assert!(!q.contains_rule("Cut"));
        }
    }
}
