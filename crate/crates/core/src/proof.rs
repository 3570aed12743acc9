//! Wellfounded proofs: construction, checking, local fragments, the
//! Ax-expansion and derived boolean rules.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cyclic::check_cyclic;
use crate::formula::Formula;
use crate::rules::{CalculusId, ModalData, RuleApp};
use crate::sequent::{Multiset, Sequent};

/// A finite proof tree. `rule == None` marks an assumption leaf.
#[derive(Clone, PartialEq, Debug)]
pub struct Proof {
    pub sequent: Sequent,
    pub rule: Option<RuleApp>,
    pub children: Vec<Proof>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckReason {
    RuleNotAdmitted(String),
    RuleMismatch(String),
    UnexpectedAssumption,
    BadTarget,
    NoProgress,
    Structure(String),
    Certificate(String),
    Subformula(String),
}

impl fmt::Display for CheckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckReason::RuleNotAdmitted(r) => write!(f, "rule {r} not admitted"),
            CheckReason::RuleMismatch(m) => write!(f, "{m}"),
            CheckReason::UnexpectedAssumption => write!(f, "assumption leaf not allowed"),
            CheckReason::BadTarget => write!(f, "backlink does not target an ancestor with the same sequent"),
            CheckReason::NoProgress => write!(f, "cycle does not cross a progressing premise"),
            CheckReason::Structure(m) => write!(f, "malformed tree: {m}"),
            CheckReason::Certificate(m) => write!(f, "bad equivalence certificate: {m}"),
            CheckReason::Subformula(m) => write!(f, "subformula property violated: {m}"),
        }
    }
}

/// Where a check failed: a child-index path for trees, a node id for
/// cyclic proofs and templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeRef {
    Path(Vec<usize>),
    Id(usize),
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Path(p) if p.is_empty() => write!(f, "root"),
            NodeRef::Path(p) => write!(
                f,
                "root/{}",
                p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("/")
            ),
            NodeRef::Id(i) => write!(f, "node {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("check failed at {node}: {reason}")]
pub struct CheckError {
    pub node: NodeRef,
    pub reason: CheckReason,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub allow_assumptions: bool,
    pub subformula_lint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("principal formula `{0}` missing")]
    PrincipalMissing(String),
    #[error("duplicate `{0}` missing")]
    DuplicateMissing(String),
    #[error("no duplicate antecedent in the ordering")]
    NoDuplicate,
    #[error("not locally cut-free: {0}")]
    NotLocallyCutFree(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Proof {
    pub fn assumption(s: Sequent) -> Proof {
        Proof {
            sequent: s,
            rule: None,
            children: vec![],
        }
    }

    /// Builds a node; the premises are checked in debug builds.
    pub fn node(s: Sequent, rule: RuleApp, children: Vec<Proof>) -> Proof {
        debug_assert!(
            {
                let prem = rule.premises_of(&s);
                match &prem {
                    Ok(ps) => {
                        ps.len() == children.len()
                            && ps.iter().zip(&children).all(|(a, c)| *a == c.sequent)
                    }
                    Err(_) => false,
                }
            },
            "ill-formed {} node at {s}: premises {:?} vs children {:?}",
            rule.name(),
            rule.premises_of(&s),
            children.iter().map(|c| c.sequent.clone()).collect::<Vec<_>>()
        );
        Proof {
            sequent: s,
            rule: Some(rule),
            children,
        }
    }

    /// Builds a node, failing when the children do not prove the premises.
    pub fn try_node(s: Sequent, rule: RuleApp, children: Vec<Proof>) -> Result<Proof, ProofError> {
        let prem = rule
            .premises_of(&s)
            .map_err(|e| ProofError::ShapeMismatch(e.0))?;
        if prem.len() != children.len() || prem.iter().zip(&children).any(|(a, c)| *a != c.sequent) {
            return Err(ProofError::ShapeMismatch(format!(
                "{} at {s}: children do not match premises",
                rule.name()
            )));
        }
        Ok(Proof {
            sequent: s,
            rule: Some(rule),
            children,
        })
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.sequent
    }

    pub fn is_assumption(&self) -> bool {
        self.rule.is_none()
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Proof::node_count).sum::<usize>()
    }

    /// Height of the main local fragment: edges into progressing premises
    /// are not counted and end the fragment.
    pub fn local_height(&self) -> usize {
        match &self.rule {
            Some(r) if !r.is_progressing() => self
                .children
                .iter()
                .map(|c| c.local_height() + 1)
                .max()
                .unwrap_or(0),
            _ => 0,
        }
    }

    pub fn rules(&self) -> Vec<&RuleApp> {
        let mut out = Vec::new();
        self.walk(&mut |p| {
            if let Some(r) = &p.rule {
                out.push(r);
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Proof)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn assumptions(&self) -> Vec<&Sequent> {
        let mut out = Vec::new();
        self.walk(&mut |p| {
            if p.rule.is_none() {
                out.push(&p.sequent);
            }
        });
        out
    }

    pub fn contains_rule(&self, name: &str) -> bool {
        self.rules().iter().any(|r| r.name() == name)
    }

    /// True when no Cut occurs in the main local fragment.
    pub fn is_locally_cut_free(&self) -> bool {
        match &self.rule {
            Some(RuleApp::Cut { .. }) => false,
            Some(r) if r.is_progressing() => true,
            _ => self.children.iter().all(Proof::is_locally_cut_free),
        }
    }
}

/// The main local fragment with progressing premises cut off as boundary
/// assumptions.
#[derive(Clone, Debug)]
pub struct MainFragment {
    pub fragment: Proof,
    pub boundary: Vec<Sequent>,
    pub local_height: usize,
}

pub fn main_fragment(p: &Proof) -> MainFragment {
    fn go(p: &Proof, boundary: &mut Vec<Sequent>) -> Proof {
        match &p.rule {
            Some(r) if r.is_progressing() => {
                boundary.extend(p.children.iter().map(|c| c.sequent.clone()));
                Proof {
                    sequent: p.sequent.clone(),
                    rule: p.rule.clone(),
                    children: p
                        .children
                        .iter()
                        .map(|c| Proof::assumption(c.sequent.clone()))
                        .collect(),
                }
            }
            _ => Proof {
                sequent: p.sequent.clone(),
                rule: p.rule.clone(),
                children: p.children.iter().map(|c| go(c, boundary)).collect(),
            },
        }
    }
    let mut boundary = Vec::new();
    let fragment = go(p, &mut boundary);
    MainFragment {
        fragment,
        boundary,
        local_height: p.local_height(),
    }
}

pub fn check_proof(p: &Proof, c: CalculusId) -> Result<(), CheckError> {
    check_proof_with(p, c, CheckOptions::default())
}

pub fn check_proof_with(p: &Proof, c: CalculusId, opts: CheckOptions) -> Result<(), CheckError> {
    let root_sub = if opts.subformula_lint && c.is_cut_free() {
        Some(p.sequent.subformulas())
    } else {
        None
    };
    let mut path = Vec::new();
    check_node(p, c, opts, root_sub.as_ref(), &mut path)
}

fn check_node(
    p: &Proof,
    c: CalculusId,
    opts: CheckOptions,
    root_sub: Option<&BTreeSet<Formula>>,
    path: &mut Vec<usize>,
) -> Result<(), CheckError> {
    let err = |path: &Vec<usize>, reason| CheckError {
        node: NodeRef::Path(path.clone()),
        reason,
    };
    if let Some(sub) = root_sub {
        if let Some(f) = p
            .sequent
            .left
            .iter()
            .chain(p.sequent.right.iter())
            .find(|f| !sub.contains(f))
        {
            return Err(err(path, CheckReason::Subformula(format!("`{f}`"))));
        }
    }
    let rule = match &p.rule {
        None => {
            if opts.allow_assumptions && p.children.is_empty() {
                return Ok(());
            }
            return Err(err(path, CheckReason::UnexpectedAssumption));
        }
        Some(r) => r,
    };
    if !c.admits(rule) {
        return Err(err(path, CheckReason::RuleNotAdmitted(rule.name().into())));
    }
    let prem = rule
        .premises_of(&p.sequent)
        .map_err(|e| err(path, CheckReason::RuleMismatch(e.0)))?;
    if prem.len() != p.children.len() {
        return Err(err(
            path,
            CheckReason::RuleMismatch(format!(
                "{} expects {} premises, found {}",
                rule.name(),
                prem.len(),
                p.children.len()
            )),
        ));
    }
    for (i, (s, child)) in prem.iter().zip(&p.children).enumerate() {
        if *s != child.sequent {
            return Err(err(
                path,
                CheckReason::RuleMismatch(format!(
                    "premise {i} of {} should be {s}, found {}",
                    rule.name(),
                    child.sequent
                )),
            ));
        }
    }
    if let RuleApp::Equiv { from, to, certificate, .. } = rule {
        let cert = certificate
            .as_ref()
            .ok_or_else(|| err(path, CheckReason::Certificate("missing".into())))?;
        let want = Sequent::goal(Formula::iff(from, to));
        if cert.root_sequent() != &want {
            return Err(err(
                path,
                CheckReason::Certificate(format!("certificate proves {}", cert.root_sequent())),
            ));
        }
        check_cyclic(cert).map_err(|e| err(path, CheckReason::Certificate(e.to_string())))?;
    }
    for (i, child) in p.children.iter().enumerate() {
        path.push(i);
        check_node(child, c, opts, root_sub, path)?;
        path.pop();
    }
    Ok(())
}

/// Target calculus for the constructions that emit ⊳ rules.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModalTarget {
    Fgil,
    Gil,
}

impl ModalTarget {
    pub fn rule(self, d: ModalData) -> RuleApp {
        match self {
            ModalTarget::Fgil => RuleApp::InterpIL(d),
            ModalTarget::Gil => RuleApp::InterpIK4(d),
        }
    }
}

/// A proof of φ, Γ ⇒ φ, Δ by the recursion on φ.
pub fn ax_proof(phi: &Formula, gamma: &Multiset, delta: &Multiset, c: ModalTarget) -> Proof {
    let s = Sequent::new(gamma.with(phi.clone()), delta.with(phi.clone()));
    match phi {
        Formula::Atom(_) => Proof::node(s, RuleApp::Ax { atom: phi.clone() }, vec![]),
        Formula::Bot => Proof::node(s, RuleApp::BotL, vec![]),
        Formula::Imp(a, b) => {
            // φ→ψ, Γ ⇒ φ→ψ, Δ  by →R over →L
            let (a, b) = (&**a, &**b);
            let inner_left = gamma.with(phi.clone()).with(a.clone());
            let inner = Sequent::new(inner_left, delta.with(b.clone()));
            let p0 = ax_proof(a, gamma, &delta.with(b.clone()), c);
            let p1 = ax_proof(b, &gamma.with(a.clone()), delta, c);
            let imp_l = Proof::node(
                inner,
                RuleApp::ImpL {
                    left: a.clone(),
                    right: b.clone(),
                },
                vec![p0, p1],
            );
            Proof::node(
                s,
                RuleApp::ImpR {
                    left: a.clone(),
                    right: b.clone(),
                },
                vec![imp_l],
            )
        }
        Formula::Interp(a, b) => {
            let d = ModalData {
                ordering: vec![((**a).clone(), (**b).clone())],
                principal: ((**a).clone(), (**b).clone()),
                weak_left: gamma.clone(),
                weak_right: delta.clone(),
            };
            let rule = c.rule(d);
            let prem = rule.premises_of(&s).expect("ax_proof premises");
            let kids = prem
                .into_iter()
                .enumerate()
                .map(|(i, ps)| {
                    let x = if i == 0 { &**a } else { &**b };
                    prove_by_ax(&ps, x, c)
                })
                .collect();
            Proof::node(s, rule, kids)
        }
    }
}

/// Closes a sequent containing `phi` on both sides by [`ax_proof`].
pub fn prove_by_ax(s: &Sequent, phi: &Formula, c: ModalTarget) -> Proof {
    let gamma = s.left.without(phi).expect("formula on the left");
    let delta = s.right.without(phi).expect("formula on the right");
    ax_proof(phi, &gamma, &delta, c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DerivedRule {
    NegL,
    NegR,
    OrL,
    OrR,
    AndL,
    AndR,
}

impl DerivedRule {
    pub fn premise_count(self) -> usize {
        match self {
            DerivedRule::OrL | DerivedRule::AndR => 2,
            _ => 1,
        }
    }

    pub fn arg_count(self) -> usize {
        match self {
            DerivedRule::NegL | DerivedRule::NegR => 1,
            _ => 2,
        }
    }
}

fn shape(msg: String) -> ProofError {
    ProofError::ShapeMismatch(msg)
}

/// Stitches the expansion of a derived boolean rule over its premises.
///
/// Premise schemas, with the conclusion after the arrow:
/// negL `Γ⇒Δ,φ` ↦ `¬φ,Γ⇒Δ`; negR `φ,Γ⇒Δ` ↦ `Γ⇒Δ,¬φ`;
/// orL `φ,Γ⇒Δ` `ψ,Γ⇒Δ` ↦ `φ∨ψ,Γ⇒Δ`; orR `Γ⇒Δ,φ,ψ` ↦ `Γ⇒Δ,φ∨ψ`;
/// andL `φ,ψ,Γ⇒Δ` ↦ `φ∧ψ,Γ⇒Δ`; andR `Γ⇒Δ,φ` `Γ⇒Δ,ψ` ↦ `Γ⇒Δ,φ∧ψ`.
pub fn derived_rule(kind: DerivedRule, args: &[Formula], premises: Vec<Proof>) -> Result<Proof, ProofError> {
    if args.len() != kind.arg_count() || premises.len() != kind.premise_count() {
        return Err(shape(format!(
            "{kind:?} takes {} formulas and {} premises",
            kind.arg_count(),
            kind.premise_count()
        )));
    }
    let mut premises = premises;
    match kind {
        DerivedRule::NegL => Ok(neg_l(&args[0], premises.remove(0))?),
        DerivedRule::NegR => Ok(neg_r(&args[0], premises.remove(0))?),
        DerivedRule::OrL => {
            let p2 = premises.remove(1);
            or_l(&args[0], &args[1], premises.remove(0), p2)
        }
        DerivedRule::OrR => or_r(&args[0], &args[1], premises.remove(0)),
        DerivedRule::AndL => and_l(&args[0], &args[1], premises.remove(0)),
        DerivedRule::AndR => {
            let p2 = premises.remove(1);
            and_r(&args[0], &args[1], premises.remove(0), p2)
        }
    }
}

pub fn neg_l(phi: &Formula, p: Proof) -> Result<Proof, ProofError> {
    let s = &p.sequent;
    let delta = s
        .right
        .without(phi)
        .ok_or_else(|| shape(format!("negL premise {s} lacks `{phi}` on the right")))?;
    let gamma = s.left.clone();
    let concl = Sequent::new(gamma.with(phi.neg()), delta.clone());
    let bot = Proof::node(
        Sequent::new(gamma.with(Formula::Bot), delta),
        RuleApp::BotL,
        vec![],
    );
    Ok(Proof::node(
        concl,
        RuleApp::ImpL {
            left: phi.clone(),
            right: Formula::Bot,
        },
        vec![p, bot],
    ))
}

pub fn neg_r(phi: &Formula, p: Proof) -> Result<Proof, ProofError> {
    let s = &p.sequent;
    let gamma = s
        .left
        .without(phi)
        .ok_or_else(|| shape(format!("negR premise {s} lacks `{phi}` on the left")))?;
    let delta = s.right.clone();
    let bot_r = Proof::node(s.add_right(Formula::Bot), RuleApp::BotR, vec![p]);
    Ok(Proof::node(
        Sequent::new(gamma, delta.with(phi.neg())),
        RuleApp::ImpR {
            left: phi.clone(),
            right: Formula::Bot,
        },
        vec![bot_r],
    ))
}

pub fn or_l(phi: &Formula, psi: &Formula, p1: Proof, p2: Proof) -> Result<Proof, ProofError> {
    let g1 = p1
        .sequent
        .left
        .without(phi)
        .ok_or_else(|| shape(format!("orL premise lacks `{phi}`")))?;
    let g2 = p2
        .sequent
        .left
        .without(psi)
        .ok_or_else(|| shape(format!("orL premise lacks `{psi}`")))?;
    if g1 != g2 || p1.sequent.right != p2.sequent.right {
        return Err(shape("orL premises disagree on context".into()));
    }
    let delta = p1.sequent.right.clone();
    let left = neg_r(phi, p1)?;
    Ok(Proof::node(
        Sequent::new(g1.with(Formula::or(phi, psi)), delta),
        RuleApp::ImpL {
            left: phi.neg(),
            right: psi.clone(),
        },
        vec![left, p2],
    ))
}

pub fn or_r(phi: &Formula, psi: &Formula, p: Proof) -> Result<Proof, ProofError> {
    let s = p.sequent.clone();
    let delta = s
        .right
        .without(phi)
        .and_then(|d| d.without(psi))
        .ok_or_else(|| shape(format!("orR premise {s} lacks `{phi}`, `{psi}`")))?;
    let inner = neg_l(phi, p)?;
    Ok(Proof::node(
        Sequent::new(s.left.clone(), delta.with(Formula::or(phi, psi))),
        RuleApp::ImpR {
            left: phi.neg(),
            right: psi.clone(),
        },
        vec![inner],
    ))
}

pub fn and_l(phi: &Formula, psi: &Formula, p: Proof) -> Result<Proof, ProofError> {
    let s = p.sequent.clone();
    let gamma = s
        .left
        .without(phi)
        .and_then(|g| g.without(psi))
        .ok_or_else(|| shape(format!("andL premise {s} lacks `{phi}`, `{psi}`")))?;
    // φ,ψ,Γ⇒Δ  ¬R  φ,Γ⇒Δ,¬ψ  →R  Γ⇒Δ,φ→¬ψ  ¬L  ¬(φ→¬ψ),Γ⇒Δ
    let step1 = neg_r(psi, p)?;
    let imp = Formula::imp(phi, &psi.neg());
    let step2 = Proof::node(
        Sequent::new(gamma.clone(), s.right.with(imp.clone())),
        RuleApp::ImpR {
            left: phi.clone(),
            right: psi.neg(),
        },
        vec![step1],
    );
    neg_l(&imp, step2)
}

pub fn and_r(phi: &Formula, psi: &Formula, p1: Proof, p2: Proof) -> Result<Proof, ProofError> {
    let d1 = p1
        .sequent
        .right
        .without(phi)
        .ok_or_else(|| shape(format!("andR premise lacks `{phi}`")))?;
    let d2 = p2
        .sequent
        .right
        .without(psi)
        .ok_or_else(|| shape(format!("andR premise lacks `{psi}`")))?;
    if d1 != d2 || p1.sequent.left != p2.sequent.left {
        return Err(shape("andR premises disagree on context".into()));
    }
    let gamma = p1.sequent.left.clone();
    let imp = Formula::imp(phi, &psi.neg());
    let right = neg_l(psi, p2)?;
    let imp_l = Proof::node(
        Sequent::new(gamma.with(imp.clone()), d1),
        RuleApp::ImpL {
            left: phi.clone(),
            right: psi.neg(),
        },
        vec![p1, right],
    );
    neg_r(&imp, imp_l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::sequent::parse_sequent;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn ax(s: &str, atom: &str) -> Proof {
        Proof::node(parse_sequent(s).unwrap(), RuleApp::Ax { atom: f(atom) }, vec![])
    }

    #[test]
    fn ax_proof_atom_and_interp() {
        let p = ax_proof(&f("p"), &Multiset::new(), &Multiset::new(), ModalTarget::Fgil);
        assert_eq!(p.node_count(), 1);
        let q = ax_proof(&f("p |> q"), &Multiset::new(), &Multiset::new(), ModalTarget::Gil);
        assert!(matches!(q.rule, Some(RuleApp::InterpIK4(_))));
        assert_eq!(q.children.len(), 2);
        assert_eq!(q.children[0].sequent, parse_sequent("p, p |> F, q |> F => p, q").unwrap());
        check_proof(&q, CalculusId::Gil).unwrap();
        let r = ax_proof(&f("(p -> q) |> ~r"), &Multiset::new(), &Multiset::singleton(f("s")), ModalTarget::Fgil);
        check_proof(&r, CalculusId::Fgil).unwrap();
        assert!(check_proof(&r, CalculusId::Gil).is_err());
    }

    #[test]
    fn derived_rules_check() {
        let negr = neg_r(&f("p"), ax("p, q => q", "q")).unwrap();
        assert_eq!(negr.sequent, parse_sequent("q => q, ~p").unwrap());
        assert!(matches!(negr.rule, Some(RuleApp::ImpR { .. })));
        assert!(matches!(negr.children[0].rule, Some(RuleApp::BotR)));
        check_proof(&negr, CalculusId::Fgil).unwrap();

        let andr = and_r(&f("p"), &f("q"), ax("p, q => p", "p"), ax("p, q => q", "q")).unwrap();
        assert_eq!(andr.sequent, parse_sequent("p, q => p & q").unwrap());
        check_proof(&andr, CalculusId::Fgil).unwrap();

        let andl = and_l(&f("p"), &f("q"), ax("p, q => p", "p")).unwrap();
        assert_eq!(andl.sequent, parse_sequent("p & q => p").unwrap());
        check_proof(&andl, CalculusId::Fgil).unwrap();

        let orl = or_l(&f("p"), &f("q"), ax("p => p, q", "p"), ax("q => p, q", "q")).unwrap();
        assert_eq!(orl.sequent, parse_sequent("p | q => p, q").unwrap());
        check_proof(&orl, CalculusId::Fgil).unwrap();

        let orr = or_r(&f("p"), &f("q"), ax("p => p, q", "p")).unwrap();
        assert_eq!(orr.sequent, parse_sequent("p => p | q").unwrap());
        check_proof(&orr, CalculusId::Fgil).unwrap();

        let negl = neg_l(&f("p"), ax("p => p", "p")).unwrap();
        assert_eq!(negl.sequent, parse_sequent("~p, p =>").unwrap());
        check_proof(&negl, CalculusId::Fgil).unwrap();

        assert!(matches!(
            derived_rule(DerivedRule::NegL, &[f("r")], vec![ax("p => p", "p")]),
            Err(ProofError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn assumptions_and_fragments() {
        let a = Proof::assumption(parse_sequent("p => q").unwrap());
        assert!(check_proof(&a, CalculusId::Fgil).is_err());
        let opts = CheckOptions {
            allow_assumptions: true,
            ..Default::default()
        };
        assert!(check_proof_with(&a, CalculusId::Fgil, opts).is_ok());
        let q = ax_proof(&f("p |> q"), &Multiset::new(), &Multiset::new(), ModalTarget::Gil);
        let mf = main_fragment(&q);
        assert_eq!(mf.local_height, 0);
        assert_eq!(mf.boundary.len(), 2);
        let prop = ax_proof(&f("p -> q"), &Multiset::new(), &Multiset::new(), ModalTarget::Gil);
        assert_eq!(main_fragment(&prop).local_height, prop.height());
        assert!(main_fragment(&prop).boundary.is_empty());
    }

    #[test]
    fn subformula_lint() {
        let q = ax_proof(&f("p |> q"), &Multiset::new(), &Multiset::new(), ModalTarget::Fgil);
        let opts = CheckOptions {
            subformula_lint: true,
            ..Default::default()
        };
        check_proof_with(&q, CalculusId::Fgil, opts).unwrap();
    }
}
