//! Interpolation templates: deterministic cyclic preproofs over the
//! propositional rules, Empty, contracting Wk and ⊳*.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{parse_with, Formula, Vocabulary};
use crate::io::{sequent_from_json, sequent_to_json, IoError, JsonSequent};
use crate::search::with_big_stack;
use crate::sequent::{Multiset, Sequent};

/// Index of a ⊳* premise ψ^ε, Φ⊳⊥ ⇒ Φ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PremiseKey {
    pub phi: Multiset,
    pub psi: Option<Formula>,
}

impl PremiseKey {
    pub fn sequent(&self) -> Sequent {
        let mut left = self.phi.interp_bot();
        if let Some(p) = &self.psi {
            left.insert(p.clone());
        }
        Sequent::new(left, self.phi.clone())
    }
}

/// Split of a ⊳* conclusion Σ, Γ ⇒ Λ, Δ and its premise index.
#[derive(Clone, PartialEq, Debug)]
pub struct StarData {
    pub sigma: Multiset,
    pub gamma: Multiset,
    pub lambda: Multiset,
    pub delta: Multiset,
    pub premises: Vec<PremiseKey>,
}

impl StarData {
    pub fn premise_index(&self, key: &PremiseKey) -> Option<usize> {
        self.premises.iter().position(|k| k == key)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum TRule {
    Ax { atom: Formula },
    BotL,
    BotR,
    ImpL { left: Formula, right: Formula },
    ImpR { left: Formula, right: Formula },
    Empty,
    Wk,
    Star(StarData),
    Repeat,
}

impl TRule {
    pub fn name(&self) -> &'static str {
        match self {
            TRule::Ax { .. } => "Ax",
            TRule::BotL => "BotL",
            TRule::BotR => "BotR",
            TRule::ImpL { .. } => "ImpL",
            TRule::ImpR { .. } => "ImpR",
            TRule::Empty => "Empty",
            TRule::Wk => "Wk",
            TRule::Star(_) => "InterpStar",
            TRule::Repeat => "Repeat",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct TNode {
    pub sequent: Sequent,
    pub rule: TRule,
    pub children: Vec<usize>,
    pub backlink: Option<usize>,
}

/// Arena of template nodes; node 0 is the root.
#[derive(Clone, PartialEq, Debug)]
pub struct Template {
    pub nodes: Vec<TNode>,
}

impl Template {
    pub fn root_sequent(&self) -> &Sequent {
        &self.nodes[0].sequent
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn repeats(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].rule == TRule::Repeat)
            .collect()
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                if c < out.len() {
                    out[c] = Some(i);
                }
            }
        }
        out
    }

    /// v ≤ w: v lies on the path from the root to w.
    pub fn is_below(&self, parents: &[Option<usize>], v: usize, w: usize) -> bool {
        let mut cur = Some(w);
        while let Some(c) = cur {
            if c == v {
                return true;
            }
            cur = parents[c];
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template exceeds {0} nodes")]
    TooLarge(usize),
    #[error("reserved atom `{0}` in the input")]
    ReservedAtom(String),
}

/// Premise keys of ⊳* for ⊳-sets Σ and Λ: Φ ranges over sub-multisets of
/// an(Σ) plus at most one succedent of Λ, ψ^ε over su(Σ) ∪ an(Λ) ∪ {ε}.
pub fn star_keys(sigma: &Multiset, lambda: &Multiset) -> Vec<PremiseKey> {
    let ants: Vec<Formula> = sigma.iter().map(|f| f.as_interp().expect("⊳").0.clone()).collect();
    let mut counts: std::collections::BTreeMap<Formula, usize> = Default::default();
    for a in ants {
        *counts.entry(a).or_default() += 1;
    }
    let mut subs: Vec<Vec<Formula>> = vec![vec![]];
    for (f, n) in &counts {
        let mut next = Vec::new();
        for s in &subs {
            for k in 0..=*n {
                let mut t = s.clone();
                t.extend(std::iter::repeat_n(f.clone(), k));
                next.push(t);
            }
        }
        subs = next;
    }
    let sus: BTreeSet<Formula> = lambda.iter().map(|f| f.as_interp().expect("⊳").1.clone()).collect();
    let mut phis: BTreeSet<Multiset> = BTreeSet::new();
    for s in &subs {
        phis.insert(Multiset::from_vec(s.clone()));
        for u in &sus {
            let mut t = s.clone();
            t.push(u.clone());
            phis.insert(Multiset::from_vec(t));
        }
    }
    let mut psis: Vec<Option<Formula>> = vec![None];
    let pset: BTreeSet<Formula> = sigma
        .iter()
        .map(|f| f.as_interp().expect("⊳").1.clone())
        .chain(lambda.iter().map(|f| f.as_interp().expect("⊳").0.clone()))
        .collect();
    psis.extend(pset.into_iter().map(Some));
    let mut out = Vec::with_capacity(phis.len() * psis.len());
    for phi in &phis {
        for psi in &psis {
            out.push(PremiseKey {
                phi: phi.clone(),
                psi: psi.clone(),
            });
        }
    }
    out
}

/// The ⊳* split of a set-sequent of atoms and ⊳-formulas.
pub fn star_data(s: &Sequent) -> Option<StarData> {
    let (sigma, gamma): (Vec<Formula>, Vec<Formula>) = s.left.iter().cloned().partition(|f| f.is_interp());
    let (lambda, delta): (Vec<Formula>, Vec<Formula>) = s.right.iter().cloned().partition(|f| f.is_interp());
    if gamma.iter().chain(&delta).any(|f| !f.is_atom()) {
        return None;
    }
    let sigma = Multiset::from_vec(sigma);
    let lambda = Multiset::from_vec(lambda);
    let premises = star_keys(&sigma, &lambda);
    Some(StarData {
        sigma,
        gamma: Multiset::from_vec(gamma),
        lambda,
        delta: Multiset::from_vec(delta),
        premises,
    })
}

/// Default cap on template size.
pub const TEMPLATE_CAP: usize = 200_000;

pub fn build_template(s: &Sequent, _v: &Vocabulary) -> Result<Template, TemplateError> {
    build_template_capped(s, TEMPLATE_CAP)
}

pub fn build_template_capped(s: &Sequent, cap: usize) -> Result<Template, TemplateError> {
    if let Some(n) = s
        .vocabulary()
        .into_iter()
        .find(|n| n.starts_with(crate::formula::RESERVED_PREFIX))
    {
        return Err(TemplateError::ReservedAtom(n));
    }
    let s = s.clone();
    with_big_stack(move || {
        let mut b = Builder {
            nodes: Vec::new(),
            path: HashMap::new(),
            cap,
        };
        b.build(s)?;
        Ok(Template { nodes: b.nodes })
    })
}

struct Builder {
    nodes: Vec<TNode>,
    path: HashMap<Sequent, usize>,
    cap: usize,
}

impl Builder {
    fn push(&mut self, sequent: Sequent, rule: TRule) -> Result<usize, TemplateError> {
        if self.nodes.len() >= self.cap {
            return Err(TemplateError::TooLarge(self.cap));
        }
        self.nodes.push(TNode {
            sequent,
            rule,
            children: vec![],
            backlink: None,
        });
        Ok(self.nodes.len() - 1)
    }

    fn build(&mut self, s: Sequent) -> Result<usize, TemplateError> {
        if !s.is_set_sequent() {
            let id = self.push(s.clone(), TRule::Wk)?;
            let c = self.build(s.to_set_sequent())?;
            self.nodes[id].children = vec![c];
            return Ok(id);
        }
        if s.left.contains(&Formula::Bot) {
            return self.push(s, TRule::BotL);
        }
        if let Some(a) = s.shared_atom() {
            let atom = a.clone();
            return self.push(s, TRule::Ax { atom });
        }
        if s.is_empty() {
            return self.push(s, TRule::Empty);
        }
        if let Some(&t) = self.path.get(&s) {
            let id = self.push(s, TRule::Repeat)?;
            self.nodes[id].backlink = Some(t);
            return Ok(id);
        }
        let (rule, premises) = template_step(&s);
        let id = self.push(s.clone(), rule)?;
        self.path.insert(s.clone(), id);
        let mut kids = Vec::with_capacity(premises.len());
        for p in premises {
            kids.push(self.build(p)?);
        }
        self.path.remove(&s);
        self.nodes[id].children = kids;
        Ok(id)
    }
}

/// Instructions ⊥R, →L, →R, ⊳* for a non-axiomatic, non-empty set-sequent
/// that is not a repeat.
fn template_step(s: &Sequent) -> (TRule, Vec<Sequent>) {
    if let Some(rest) = s.right.without(&Formula::Bot) {
        return (TRule::BotR, vec![Sequent::new(s.left.clone(), rest)]);
    }
    if let Some(f) = s.left.iter().find(|f| f.is_imp()) {
        let (a, b) = f.as_imp().expect("implication");
        let rest = s.left.without(f).expect("present");
        let p0 = Sequent::new(rest.clone(), s.right.with(a.clone()));
        let p1 = Sequent::new(rest.with(b.clone()), s.right.clone());
        return (
            TRule::ImpL {
                left: a.clone(),
                right: b.clone(),
            },
            vec![p0, p1],
        );
    }
    if let Some(f) = s.right.iter().find(|f| f.is_imp()) {
        let (a, b) = f.as_imp().expect("implication");
        let rest = s.right.without(f).expect("present");
        let p = Sequent::new(s.left.with(a.clone()), rest.with(b.clone()));
        return (
            TRule::ImpR {
                left: a.clone(),
                right: b.clone(),
            },
            vec![p],
        );
    }
    let d = star_data(s).expect("only atoms and ⊳-formulas remain");
    let prem = d.premises.iter().map(PremiseKey::sequent).collect();
    (TRule::Star(d), prem)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Structure,
    RuleMismatch,
    Determinism,
    AxiomaticTermination,
    CyclicTermination,
    Weakening,
    StarSideCondition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::Structure => "structure",
            Violation::RuleMismatch => "rule mismatch",
            Violation::Determinism => "determinism",
            Violation::AxiomaticTermination => "axiomatic termination",
            Violation::CyclicTermination => "cyclic termination",
            Violation::Weakening => "weakening condition",
            Violation::StarSideCondition => "⊳* side condition",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("template node {node}: {violation} violated: {detail}")]
pub struct TemplateCheckError {
    pub node: usize,
    pub violation: Violation,
    pub detail: String,
}

fn violation(node: usize, violation: Violation, detail: impl Into<String>) -> TemplateCheckError {
    TemplateCheckError {
        node,
        violation,
        detail: detail.into(),
    }
}

fn premises_of(rule: &TRule, s: &Sequent) -> Option<Vec<Sequent>> {
    match rule {
        TRule::Ax { atom } => (atom.is_atom() && s.left.contains(atom) && s.right.contains(atom)).then(Vec::new),
        TRule::BotL => s.left.contains(&Formula::Bot).then(Vec::new),
        TRule::Empty => s.is_empty().then(Vec::new),
        TRule::Repeat => Some(vec![]),
        TRule::BotR => Some(vec![Sequent::new(s.left.clone(), s.right.without(&Formula::Bot)?)]),
        TRule::ImpL { left, right } => {
            let rest = s.left.without(&Formula::imp(left, right))?;
            Some(vec![
                Sequent::new(rest.clone(), s.right.with(left.clone())),
                Sequent::new(rest.with(right.clone()), s.right.clone()),
            ])
        }
        TRule::ImpR { left, right } => {
            let rest = s.right.without(&Formula::imp(left, right))?;
            Some(vec![Sequent::new(s.left.with(left.clone()), rest.with(right.clone()))])
        }
        TRule::Wk => Some(vec![s.to_set_sequent()]),
        TRule::Star(d) => Some(d.premises.iter().map(PremiseKey::sequent).collect()),
    }
}

/// Validates a template independently of the builder.
pub fn check_template(t: &Template) -> Result<(), TemplateCheckError> {
    let n = t.nodes.len();
    if n == 0 {
        return Err(violation(0, Violation::Structure, "empty template"));
    }
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, node) in t.nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= n || c == 0 {
                return Err(violation(i, Violation::Structure, format!("bad child {c}")));
            }
            if parent[c].is_some() {
                return Err(violation(c, Violation::Structure, "node has two parents"));
            }
            parent[c] = Some(i);
        }
        if (node.rule == TRule::Repeat) != node.backlink.is_some() {
            return Err(violation(i, Violation::Structure, "Repeat nodes and backlinks must coincide"));
        }
    }
    // reachability and acyclicity of the tree part
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        if seen[v] {
            return Err(violation(v, Violation::Structure, "cycle in the tree"));
        }
        seen[v] = true;
        stack.extend(t.nodes[v].children.iter().copied());
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(violation(v, Violation::Structure, "unreachable node"));
    }
    let below = |v: usize, w: usize| t.is_below(&parent, v, w);
    let mut det: HashMap<&Sequent, usize> = HashMap::new();
    for (i, node) in t.nodes.iter().enumerate() {
        let s = &node.sequent;
        let set = s.is_set_sequent();
        if !set && node.rule != TRule::Wk {
            return Err(violation(i, Violation::Weakening, "non-set-sequent not concluded by contracting Wk"));
        }
        if set && node.rule == TRule::Wk {
            return Err(violation(i, Violation::Weakening, "Wk on a set-sequent"));
        }
        let prem = premises_of(&node.rule, s)
            .ok_or_else(|| violation(i, Violation::RuleMismatch, format!("{} does not apply to {s}", node.rule.name())))?;
        if prem.len() != node.children.len()
            || prem.iter().zip(&node.children).any(|(p, &c)| *p != t.nodes[c].sequent)
        {
            return Err(violation(i, Violation::RuleMismatch, format!("premises of {} do not match", node.rule.name())));
        }
        if let Some(b) = node.backlink {
            if b >= n || b == i || !below(b, i) || t.nodes[b].sequent != *s {
                return Err(violation(i, Violation::Structure, "backlink must target a strict ancestor with the same sequent"));
            }
        }
        if set && s.is_axiomatic() && !node.children.is_empty() {
            return Err(violation(i, Violation::AxiomaticTermination, "axiomatic set-sequent is not a leaf"));
        }
        if set && !s.is_axiomatic() && node.rule != TRule::Repeat {
            let mut cur = parent[i];
            while let Some(c) = cur {
                if t.nodes[c].sequent == *s {
                    return Err(violation(i, Violation::CyclicTermination, format!("node {c} below has the same sequent")));
                }
                cur = parent[c];
            }
        }
        if let TRule::Star(d) = &node.rule {
            check_star(s, d).map_err(|m| violation(i, Violation::StarSideCondition, m))?;
        }
        if node.rule != TRule::Repeat {
            match det.get(s) {
                Some(&j) if t.nodes[j].rule != node.rule => {
                    return Err(violation(i, Violation::Determinism, format!("node {j} has the same sequent and a different rule")));
                }
                Some(_) => {}
                None => {
                    det.insert(s, i);
                }
            }
        }
    }
    Ok(())
}

fn check_star(s: &Sequent, d: &StarData) -> Result<(), String> {
    if !s.is_set_sequent() {
        return Err("conclusion is not a set-sequent".into());
    }
    if d.gamma.iter().chain(d.delta.iter()).any(|f| !f.is_atom()) {
        return Err("Γ, Δ must be atoms".into());
    }
    if d.sigma.iter().chain(d.lambda.iter()).any(|f| !f.is_interp()) {
        return Err("Σ, Λ must be ⊳-formulas".into());
    }
    if s.left != d.sigma.union(&d.gamma) || s.right != d.lambda.union(&d.delta) {
        return Err("split does not match the conclusion".into());
    }
    let ants: Multiset = d.sigma.iter().map(|f| f.as_interp().expect("⊳").0.clone()).collect();
    let sus: BTreeSet<Formula> = d.lambda.iter().map(|f| f.as_interp().expect("⊳").1.clone()).collect();
    let psis: BTreeSet<Formula> = d
        .sigma
        .iter()
        .map(|f| f.as_interp().expect("⊳").1.clone())
        .chain(d.lambda.iter().map(|f| f.as_interp().expect("⊳").0.clone()))
        .collect();
    let mut keys = BTreeSet::new();
    for k in &d.premises {
        let extra = k.phi.saturating_minus(&ants);
        if extra.len() > 1 || extra.iter().any(|f| !sus.contains(f)) {
            return Err(format!("Φ = {:?} is not within an(Σ) plus one succedent of Λ", k.phi.as_slice()));
        }
        if let Some(p) = &k.psi {
            if !psis.contains(p) {
                return Err(format!("ψ = {p} is not in su(Σ) ∪ an(Λ)"));
            }
        }
        if !keys.insert(k.clone()) {
            return Err("duplicate premise key".into());
        }
    }
    if keys.len() != star_keys(&d.sigma, &d.lambda).len() {
        return Err("premise index is incomplete".into());
    }
    Ok(())
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonTemplateNode {
    pub id: usize,
    pub sequent: JsonSequent,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
    pub children: Vec<usize>,
    pub backlink: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonTemplate {
    pub kind: String,
    pub nodes: Vec<JsonTemplateNode>,
}

fn fs(f: &Formula) -> Value {
    Value::String(f.print(true))
}

fn ms(m: &Multiset) -> Value {
    Value::Array(m.iter().map(fs).collect())
}

pub fn template_to_json(t: &Template) -> JsonTemplate {
    let nodes = t
        .nodes
        .iter()
        .enumerate()
        .map(|(id, n)| {
            let params = match &n.rule {
                TRule::Ax { atom } => json!({ "atom": fs(atom) }),
                TRule::ImpL { left, right } | TRule::ImpR { left, right } => {
                    json!({ "left": fs(left), "right": fs(right) })
                }
                TRule::Star(d) => json!({
                    "sigma": ms(&d.sigma),
                    "gamma": ms(&d.gamma),
                    "lambda": ms(&d.lambda),
                    "delta": ms(&d.delta),
                    "premises": d.premises.iter().map(|k| json!({
                        "phi": ms(&k.phi),
                        "psi": k.psi.as_ref().map(fs).unwrap_or(Value::Null),
                    })).collect::<Vec<_>>(),
                }),
                _ => Value::Null,
            };
            JsonTemplateNode {
                id,
                sequent: sequent_to_json(&n.sequent),
                rule: n.rule.name().to_string(),
                params,
                children: n.children.clone(),
                backlink: n.backlink,
            }
        })
        .collect();
    JsonTemplate {
        kind: "template".into(),
        nodes,
    }
}

fn pf(v: &Value, key: &str) -> Result<Formula, IoError> {
    let s = v
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| IoError::Structure(format!("missing `{key}`")))?;
    Ok(parse_with(s, true)?)
}

fn pm(v: &Value, key: &str) -> Result<Multiset, IoError> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Structure(format!("missing `{key}`")))?;
    let mut out = Vec::with_capacity(arr.len());
    for x in arr {
        let s = x.as_str().ok_or_else(|| IoError::Structure(format!("`{key}` must hold strings")))?;
        out.push(parse_with(s, true)?);
    }
    Ok(Multiset::from_vec(out))
}

pub fn template_from_json(doc: &JsonTemplate) -> Result<Template, IoError> {
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.iter().enumerate() {
        if n.id != i {
            return Err(IoError::Structure(format!("node ids must be 0..n in order, found {}", n.id)));
        }
        let p = &n.params;
        let rule = match n.rule.as_str() {
            "Ax" => TRule::Ax { atom: pf(p, "atom")? },
            "BotL" => TRule::BotL,
            "BotR" => TRule::BotR,
            "ImpL" => TRule::ImpL {
                left: pf(p, "left")?,
                right: pf(p, "right")?,
            },
            "ImpR" => TRule::ImpR {
                left: pf(p, "left")?,
                right: pf(p, "right")?,
            },
            "Empty" => TRule::Empty,
            "Wk" => TRule::Wk,
            "Repeat" => TRule::Repeat,
            "InterpStar" => {
                let prem = p
                    .get("premises")
                    .and_then(Value::as_array)
                    .ok_or_else(|| IoError::Structure("missing `premises`".into()))?;
                let mut premises = Vec::with_capacity(prem.len());
                for k in prem {
                    let psi = match k.get("psi") {
                        None | Some(Value::Null) => None,
                        Some(_) => Some(pf(k, "psi")?),
                    };
                    premises.push(PremiseKey { phi: pm(k, "phi")?, psi });
                }
                TRule::Star(StarData {
                    sigma: pm(p, "sigma")?,
                    gamma: pm(p, "gamma")?,
                    lambda: pm(p, "lambda")?,
                    delta: pm(p, "delta")?,
                    premises,
                })
            }
            other => return Err(IoError::Structure(format!("unknown template rule `{other}`"))),
        };
        nodes.push(TNode {
            sequent: sequent_from_json(&n.sequent)?,
            rule,
            children: n.children.clone(),
            backlink: n.backlink,
        });
    }
    if nodes.is_empty() {
        return Err(IoError::Structure("template has no nodes".into()));
    }
    Ok(Template { nodes })
}
