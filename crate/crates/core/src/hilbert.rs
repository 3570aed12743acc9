//! Hilbert-style proofs in IL and ILP, with a truth-table oracle for
//! propositional tautologies and builders for derived facts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse_with, Formula, FormulaError};
use crate::search::Logic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomScheme {
    K,
    Four,
    L,
    J1,
    J2,
    J3,
    J4,
    J5,
    P,
}

impl AxiomScheme {
    pub const IL: [AxiomScheme; 8] = [
        AxiomScheme::K,
        AxiomScheme::Four,
        AxiomScheme::L,
        AxiomScheme::J1,
        AxiomScheme::J2,
        AxiomScheme::J3,
        AxiomScheme::J4,
        AxiomScheme::J5,
    ];

    pub const ALL: [AxiomScheme; 9] = [
        AxiomScheme::K,
        AxiomScheme::Four,
        AxiomScheme::L,
        AxiomScheme::J1,
        AxiomScheme::J2,
        AxiomScheme::J3,
        AxiomScheme::J4,
        AxiomScheme::J5,
        AxiomScheme::P,
    ];

    pub fn arity(self) -> usize {
        match self {
            AxiomScheme::Four | AxiomScheme::L | AxiomScheme::J5 => 1,
            AxiomScheme::K | AxiomScheme::J1 | AxiomScheme::J4 | AxiomScheme::P => 2,
            AxiomScheme::J2 | AxiomScheme::J3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomScheme::K => "K",
            AxiomScheme::Four => "4",
            AxiomScheme::L => "L",
            AxiomScheme::J1 => "J1",
            AxiomScheme::J2 => "J2",
            AxiomScheme::J3 => "J3",
            AxiomScheme::J4 => "J4",
            AxiomScheme::J5 => "J5",
            AxiomScheme::P => "P",
        }
    }

    pub fn from_name(s: &str) -> Option<AxiomScheme> {
        AxiomScheme::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("four") && *a == AxiomScheme::Four))
    }

    pub fn admitted(self, logic: Logic) -> bool {
        self != AxiomScheme::P || logic == Logic::Ilp
    }
}

impl fmt::Display for AxiomScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The scheme instantiated at `args`, in core connectives.
///
/// Argument order follows φ, ψ, χ: J2 is (φ⊳χ)∧(χ⊳ψ) → φ⊳ψ and J3 is
/// (φ⊳ψ)∧(χ⊳ψ) → (φ∨χ)⊳ψ.
pub fn axiom_instance(s: AxiomScheme, args: &[Formula]) -> Result<Formula, FormulaError> {
    if args.len() != s.arity() {
        return Err(FormulaError::Arity {
            kind: s.name().to_string(),
            expected: s.arity(),
            got: args.len(),
        });
    }
    let a = &args[0];
    let imp = Formula::imp;
    let i = Formula::interp;
    Ok(match s {
        AxiomScheme::K => {
            let b = &args[1];
            imp(&imp(a, b).boxed(), &imp(&a.boxed(), &b.boxed()))
        }
        AxiomScheme::Four => imp(&a.boxed(), &a.boxed().boxed()),
        AxiomScheme::L => imp(&imp(&a.boxed(), a).boxed(), &a.boxed()),
        AxiomScheme::J1 => imp(&imp(a, &args[1]).boxed(), &i(a, &args[1])),
        AxiomScheme::J2 => {
            let (b, c) = (&args[1], &args[2]);
            imp(&Formula::and(&i(a, c), &i(c, b)), &i(a, b))
        }
        AxiomScheme::J3 => {
            let (b, c) = (&args[1], &args[2]);
            imp(&Formula::and(&i(a, b), &i(c, b)), &i(&Formula::or(a, c), b))
        }
        AxiomScheme::J4 => {
            let b = &args[1];
            imp(&i(a, b), &imp(&a.diamond(), &b.diamond()))
        }
        AxiomScheme::J5 => i(&a.diamond(), a),
        AxiomScheme::P => {
            let ab = i(a, &args[1]);
            imp(&ab, &ab.boxed())
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Taut,
    Axiom { scheme: AxiomScheme, args: Vec<Formula> },
    Mp { imp: usize, ant: usize },
    Nec { line: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertLine {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HilbertProof {
    pub lines: Vec<HilbertLine>,
}

impl HilbertProof {
    pub fn theorem(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct HilbertError {
    pub line: usize,
    pub reason: String,
}

/// Valuation-based check on the propositional skeleton, where atoms and
/// maximal ⊳-subformulas are the variables.
pub fn is_tautology(f: &Formula) -> bool {
    let mut vars: HashMap<Formula, usize> = HashMap::new();
    collect_vars(f, &mut vars);
    let n = vars.len();
    if n > 24 {
        return prop_valid(vec![], vec![f.clone()]);
    }
    // 64 valuations per word: variable i < 6 takes a fixed bit pattern,
    // higher variables are constant within a word.
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let low = n.min(6);
    let mask = if low == 6 { u64::MAX } else { (1u64 << (1 << low)) - 1 };
    let words = 1u64 << n.saturating_sub(6);
    let mut vals = vec![0u64; n];
    for w in 0..words {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = if i < 6 {
                PATTERNS[i]
            } else if (w >> (i - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if eval_bits(f, &vars, &vals) & mask != mask {
            return false;
        }
    }
    true
}

fn collect_vars(f: &Formula, vars: &mut HashMap<Formula, usize>) {
    match f {
        Formula::Bot => {}
        Formula::Imp(a, b) => {
            collect_vars(a, vars);
            collect_vars(b, vars);
        }
        Formula::Atom(_) | Formula::Interp(..) => {
            let n = vars.len();
            vars.entry(f.clone()).or_insert(n);
        }
    }
}

fn eval_bits(f: &Formula, vars: &HashMap<Formula, usize>, vals: &[u64]) -> u64 {
    match f {
        Formula::Bot => 0,
        Formula::Imp(a, b) => !eval_bits(a, vars, vals) | eval_bits(b, vars, vals),
        _ => vals[vars[f]],
    }
}

/// Classical sequent validity with ⊳-formulas opaque.
fn prop_valid(mut left: Vec<Formula>, mut right: Vec<Formula>) -> bool {
    loop {
        if left.iter().any(|f| f.is_bot() || right.contains(f)) {
            return true;
        }
        if let Some(i) = right.iter().position(Formula::is_imp) {
            let f = right.swap_remove(i);
            let (a, b) = f.as_imp().expect("implication");
            left.push(a.clone());
            right.push(b.clone());
            continue;
        }
        if let Some(i) = left.iter().position(Formula::is_imp) {
            let f = left.swap_remove(i);
            let (a, b) = f.as_imp().expect("implication");
            let mut r0 = right.clone();
            r0.push(a.clone());
            if !prop_valid(left.clone(), r0) {
                return false;
            }
            left.push(b.clone());
            continue;
        }
        return false;
    }
}

pub fn check_hilbert(h: &HilbertProof, logic: Logic) -> Result<(), HilbertError> {
    if h.lines.is_empty() {
        return Err(HilbertError {
            line: 0,
            reason: "empty proof".into(),
        });
    }
    for (n, line) in h.lines.iter().enumerate() {
        let err = |reason: String| HilbertError { line: n, reason };
        let earlier = |i: usize| -> Result<&Formula, HilbertError> {
            if i < n {
                Ok(&h.lines[i].formula)
            } else {
                Err(err(format!("cites line {i}, which is not earlier")))
            }
        };
        match &line.just {
            Justification::Taut => {
                if !is_tautology(&line.formula) {
                    return Err(err("not a propositional tautology".into()));
                }
            }
            Justification::Axiom { scheme, args } => {
                if !scheme.admitted(logic) {
                    return Err(err(format!("axiom {scheme} not available in {}", logic.name())));
                }
                let inst = axiom_instance(*scheme, args).map_err(|e| err(e.to_string()))?;
                if inst != line.formula {
                    return Err(err(format!("not the {scheme} instance {inst}")));
                }
            }
            Justification::Mp { imp, ant } => {
                let i = earlier(*imp)?;
                let a = earlier(*ant)?;
                match i.as_imp() {
                    Some((x, y)) if x == a && *y == line.formula => {}
                    _ => return Err(err(format!("modus ponens on lines {imp}, {ant} does not give this line"))),
                }
            }
            Justification::Nec { line: l } => {
                let f = earlier(*l)?;
                if f.boxed() != line.formula {
                    return Err(err(format!("necessitation of line {l} gives {}", f.boxed())));
                }
            }
        }
    }
    Ok(())
}

/// Appends lines, reusing any earlier line with the same formula.
#[derive(Clone, Debug, Default)]
pub struct HilbertBuilder {
    lines: Vec<HilbertLine>,
    index: HashMap<Formula, usize>,
}

impl HilbertBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn formula(&self, line: usize) -> &Formula {
        &self.lines[line].formula
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        if let Some(&i) = self.index.get(&formula) {
            return i;
        }
        let i = self.lines.len();
        self.index.insert(formula.clone(), i);
        self.lines.push(HilbertLine { formula, just });
        i
    }

    pub fn taut(&mut self, f: Formula) -> usize {
        debug_assert!(is_tautology(&f), "not a tautology: {f}");
        self.push(f, Justification::Taut)
    }

    pub fn axiom(&mut self, scheme: AxiomScheme, args: &[Formula]) -> usize {
        let f = axiom_instance(scheme, args).expect("arity");
        self.push(
            f,
            Justification::Axiom {
                scheme,
                args: args.to_vec(),
            },
        )
    }

    pub fn mp(&mut self, imp: usize, ant: usize) -> usize {
        let (a, b) = self.lines[imp].formula.as_imp().expect("implication line");
        debug_assert_eq!(*a, self.lines[ant].formula);
        let b = b.clone();
        self.push(b, Justification::Mp { imp, ant })
    }

    pub fn nec(&mut self, line: usize) -> usize {
        let f = self.lines[line].formula.boxed();
        self.push(f, Justification::Nec { line })
    }

    /// Derives `target` from the premise lines by a tautology
    /// p₁ → … → pₙ → target and modus ponens.
    pub fn taut_consequence(&mut self, target: Formula, premises: &[usize]) -> usize {
        let chain = premises
            .iter()
            .rev()
            .fold(target, |acc, &p| Formula::imp(&self.lines[p].formula, &acc));
        let mut cur = self.taut(chain);
        for &p in premises {
            cur = self.mp(cur, p);
        }
        cur
    }

    /// Copies another proof in, returning the line of its theorem.
    pub fn append(&mut self, h: &HilbertProof) -> usize {
        let mut map: Vec<usize> = Vec::with_capacity(h.lines.len());
        for l in &h.lines {
            let just = match &l.just {
                Justification::Mp { imp, ant } => Justification::Mp {
                    imp: map[*imp],
                    ant: map[*ant],
                },
                Justification::Nec { line } => Justification::Nec { line: map[*line] },
                j => j.clone(),
            };
            map.push(self.push(l.formula.clone(), just));
        }
        *map.last().expect("non-empty proof")
    }

    /// From a line of φ→ψ, a line of φ⊳ψ.
    pub fn imp_to_interp(&mut self, line: usize) -> usize {
        let (a, b) = {
            let (a, b) = self.lines[line].formula.as_imp().expect("implication line");
            (a.clone(), b.clone())
        };
        let n = self.nec(line);
        let j1 = self.axiom(AxiomScheme::J1, &[a, b]);
        self.mp(j1, n)
    }

    /// From lines of φ⊳χ and χ⊳ψ, a line of φ⊳ψ.
    pub fn trans(&mut self, first: usize, second: usize) -> usize {
        let (a, c) = interp_parts(&self.lines[first].formula);
        let (c2, b) = interp_parts(&self.lines[second].formula);
        debug_assert_eq!(c, c2);
        let j2 = self.axiom(AxiomScheme::J2, &[a.clone(), b.clone(), c]);
        self.taut_consequence(Formula::interp(&a, &b), &[j2, first, second])
    }

    /// From lines of φ⊳ψ and χ⊳ψ, a line of (φ∨χ)⊳ψ.
    pub fn join(&mut self, first: usize, second: usize) -> usize {
        let (a, b) = interp_parts(&self.lines[first].formula);
        let (c, b2) = interp_parts(&self.lines[second].formula);
        debug_assert_eq!(b, b2);
        let j3 = self.axiom(AxiomScheme::J3, &[a.clone(), b.clone(), c.clone()]);
        self.taut_consequence(Formula::interp(&Formula::or(&a, &c), &b), &[j3, first, second])
    }

    /// A line of φ⊳ψ for a tautology φ→ψ.
    pub fn taut_interp(&mut self, a: &Formula, b: &Formula) -> usize {
        let t = self.taut(Formula::imp(a, b));
        self.imp_to_interp(t)
    }

    pub fn line_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// The proof ending at `line`; later lines are dropped.
    pub fn finish(self, line: usize) -> HilbertProof {
        let mut lines = self.lines;
        lines.truncate(line + 1);
        HilbertProof { lines }
    }
}

fn interp_parts(f: &Formula) -> (Formula, Formula) {
    let (a, b) = f.as_interp().expect("⊳-formula line");
    (a.clone(), b.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivedIl {
    /// Input proof of φ→ψ.
    ImpToInterp(HilbertProof),
    /// Input proof of ψ ∧ ⋀(Σ⊳⊥) → ⋁Σ, with ψ and Σ.
    LobRule {
        proof: HilbertProof,
        psi: Formula,
        sigma: Vec<Formula>,
    },
    BnecFix(Formula),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivedError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub fn lob_premise(psi: &Formula, sigma: &[Formula]) -> Formula {
    let boxes: Vec<Formula> = sigma.iter().map(Formula::interp_bot).collect();
    Formula::imp(&Formula::and(psi, &Formula::conj(&boxes)), &Formula::disj(sigma))
}

pub fn derived_il(item: DerivedIl) -> Result<HilbertProof, DerivedError> {
    let mut b = HilbertBuilder::new();
    let line = match item {
        DerivedIl::ImpToInterp(h) => {
            match h.theorem() {
                Some(f) if f.is_imp() => {}
                _ => return Err(DerivedError::ShapeMismatch("expected a proof of an implication".into())),
            }
            let l = b.append(&h);
            b.imp_to_interp(l)
        }
        DerivedIl::LobRule { proof, psi, sigma } => {
            if sigma.is_empty() {
                return Err(DerivedError::ShapeMismatch("Σ must be non-empty".into()));
            }
            let want = lob_premise(&psi, &sigma);
            if proof.theorem() != Some(&want) {
                return Err(DerivedError::ShapeMismatch(format!("expected a proof of {want}")));
            }
            let l = b.append(&proof);
            lob_rule(&mut b, l, &psi, &sigma)
        }
        DerivedIl::BnecFix(phi) => bnec_fix(&mut b, &phi),
    };
    let h = b.finish(line);
    debug_assert!(check_hilbert(&h, Logic::Il).is_ok());
    Ok(h)
}

/// From a line of ψ ∧ ⋀(Σ⊳⊥) → ⋁Σ, a line of ψ ⊳ ⋁Σ.
pub fn lob_rule(b: &mut HilbertBuilder, line: usize, psi: &Formula, sigma: &[Formula]) -> usize {
    let big = Formula::disj(sigma);
    let dias: Vec<Formula> = sigma.iter().map(Formula::diamond).collect();
    let d1 = Formula::or(&big, &Formula::disj(&dias));
    // ψ ⊳ (⋁Σ ∨ ⋁◇Σ)
    let step = b.taut_consequence(Formula::imp(psi, &d1), &[line]);
    let i1 = b.imp_to_interp(step);
    // (σⱼ ∨ ◇σⱼ) ⊳ ⋁Σ for each j, then joined
    let parts: Vec<Formula> = sigma.iter().map(|s| Formula::or(s, &s.diamond())).collect();
    let mut per_j = Vec::with_capacity(sigma.len());
    for s in sigma {
        let j5 = b.axiom(AxiomScheme::J5, &[s.clone()]);
        let refl = b.taut_interp(s, s);
        let joined = b.join(refl, j5);
        let into = b.taut_interp(s, &big);
        per_j.push(b.trans(joined, into));
    }
    let mut acc = *per_j.last().expect("Σ non-empty");
    for &l in per_j.iter().rev().skip(1) {
        acc = b.join(l, acc);
    }
    let bigpart = Formula::disj(&parts);
    debug_assert_eq!(b.formula(acc), &Formula::interp(&bigpart, &big));
    let i3 = b.taut_interp(&d1, &bigpart);
    let t = b.trans(i1, i3);
    b.trans(t, acc)
}

/// A line of φ ⊳ bnec φ.
pub fn bnec_fix(b: &mut HilbertBuilder, phi: &Formula) -> usize {
    let bot = Formula::Bot;
    let bn = phi.bnec();
    let nnphi = phi.neg().neg();
    let l = b.axiom(AxiomScheme::L, &[phi.neg()]);
    // L(¬φ) reads D⊳⊥ → ¬¬φ⊳⊥ with D = ¬(□¬φ → ¬φ)
    let d = Formula::imp(&phi.neg().boxed(), &phi.neg()).neg();
    // ¬¬φ⊳⊥ → φ⊳⊥
    let phi_nn = b.taut_interp(phi, &nnphi);
    let j2a = b.axiom(AxiomScheme::J2, &[phi.clone(), bot.clone(), nnphi.clone()]);
    let e2 = b.taut_consequence(
        Formula::imp(&nnphi.interp_bot(), &phi.interp_bot()),
        &[j2a, phi_nn],
    );
    // D → bnec φ, hence D ⊳ bnec φ, hence bnec φ⊳⊥ → D⊳⊥
    let d_bn = b.taut_consequence(Formula::imp(&d, &bn), &[e2]);
    let d_bn = b.imp_to_interp(d_bn);
    let j2b = b.axiom(AxiomScheme::J2, &[d.clone(), bot.clone(), bn.clone()]);
    let s3 = b.taut_consequence(Formula::imp(&bn.interp_bot(), &d.interp_bot()), &[j2b, d_bn]);
    let s4 = b.taut_consequence(Formula::imp(&bn.interp_bot(), &phi.interp_bot()), &[s3, l, e2]);
    let s5 = b.taut_consequence(lob_premise(phi, std::slice::from_ref(&bn)), &[s4]);
    lob_rule(b, s5, phi, &[bn])
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonHilbert {
    pub logic: String,
    pub lines: Vec<JsonHilbertLine>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonHilbertLine {
    pub formula: String,
    pub just: JsonJust,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum JsonJust {
    Taut,
    Axiom { scheme: String, args: Vec<String> },
    Mp { imp: usize, ant: usize },
    Nec { line: usize },
}

pub fn hilbert_to_json(h: &HilbertProof, logic: Logic) -> JsonHilbert {
    JsonHilbert {
        logic: logic.name().into(),
        lines: h
            .lines
            .iter()
            .map(|l| JsonHilbertLine {
                formula: l.formula.print(true),
                just: match &l.just {
                    Justification::Taut => JsonJust::Taut,
                    Justification::Axiom { scheme, args } => JsonJust::Axiom {
                        scheme: scheme.name().into(),
                        args: args.iter().map(|a| a.print(true)).collect(),
                    },
                    Justification::Mp { imp, ant } => JsonJust::Mp { imp: *imp, ant: *ant },
                    Justification::Nec { line } => JsonJust::Nec { line: *line },
                },
            })
            .collect(),
    }
}

#[derive(Debug, Error)]
pub enum HilbertIoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad formula: {0}")]
    Formula(#[from] FormulaError),
    #[error("{0}")]
    Structure(String),
}

pub fn hilbert_from_json(doc: &JsonHilbert) -> Result<(HilbertProof, Logic), HilbertIoError> {
    let logic = Logic::from_name(&doc.logic).ok_or_else(|| HilbertIoError::Structure(format!("unknown logic `{}`", doc.logic)))?;
    let mut lines = Vec::with_capacity(doc.lines.len());
    for l in &doc.lines {
        let just = match &l.just {
            JsonJust::Taut => Justification::Taut,
            JsonJust::Axiom { scheme, args } => Justification::Axiom {
                scheme: AxiomScheme::from_name(scheme)
                    .ok_or_else(|| HilbertIoError::Structure(format!("unknown scheme `{scheme}`")))?,
                args: args.iter().map(|a| parse_with(a, true)).collect::<Result<_, _>>()?,
            },
            JsonJust::Mp { imp, ant } => Justification::Mp { imp: *imp, ant: *ant },
            JsonJust::Nec { line } => Justification::Nec { line: *line },
        };
        lines.push(HilbertLine {
            formula: parse_with(&l.formula, true)?,
            just,
        });
    }
    Ok((HilbertProof { lines }, logic))
}

/// Counts of each justification kind, for reports.
pub fn summary(h: &HilbertProof) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for l in &h.lines {
        let k = match l.just {
            Justification::Taut => "taut",
            Justification::Axiom { .. } => "axiom",
            Justification::Mp { .. } => "mp",
            Justification::Nec { .. } => "nec",
        };
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn instances() {
        assert_eq!(axiom_instance(AxiomScheme::J5, &[f("p")]).unwrap(), f("<>p |> p"));
        assert_eq!(axiom_instance(AxiomScheme::L, &[f("p")]).unwrap(), f("[]([]p -> p) -> []p"));
        assert_eq!(axiom_instance(AxiomScheme::P, &[f("p"), f("q")]).unwrap(), f("p |> q -> [](p |> q)"));
        assert_eq!(
            axiom_instance(AxiomScheme::J2, &[f("p"), f("q"), f("r")]).unwrap(),
            f("(p |> r) & (r |> q) -> p |> q")
        );
        assert!(axiom_instance(AxiomScheme::K, &[f("p")]).is_err());
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&f("p -> p")));
        assert!(is_tautology(&f("(p |> q) | ~(p |> q)")));
        assert!(!is_tautology(&f("p -> q")));
        assert!(!is_tautology(&f("(p |> q) -> (q |> p)")));
        let many: Vec<Formula> = (0..8).map(|i| Formula::atom(&format!("a{i}"))).collect();
        let big = Formula::imp(&Formula::conj(&many), &many[7]);
        assert!(is_tautology(&big));
        assert!(!is_tautology(&Formula::imp(&Formula::disj(&many), &many[7])));
        assert!(prop_valid(vec![], vec![big]));
    }

    #[test]
    fn checker() {
        let ok = HilbertProof {
            lines: vec![HilbertLine {
                formula: f("<>p |> p"),
                just: Justification::Axiom {
                    scheme: AxiomScheme::J5,
                    args: vec![f("p")],
                },
            }],
        };
        check_hilbert(&ok, Logic::Il).unwrap();
        let bad = HilbertProof {
            lines: vec![
                HilbertLine {
                    formula: f("p"),
                    just: Justification::Taut,
                },
                HilbertLine {
                    formula: f("[]p"),
                    just: Justification::Nec { line: 0 },
                },
            ],
        };
        assert_eq!(check_hilbert(&bad, Logic::Il).unwrap_err().line, 0);
        let p = HilbertProof {
            lines: vec![HilbertLine {
                formula: f("p |> q -> [](p |> q)"),
                just: Justification::Axiom {
                    scheme: AxiomScheme::P,
                    args: vec![f("p"), f("q")],
                },
            }],
        };
        assert!(check_hilbert(&p, Logic::Il).is_err());
        check_hilbert(&p, Logic::Ilp).unwrap();
    }

    #[test]
    fn derived_facts() {
        let taut = HilbertProof {
            lines: vec![HilbertLine {
                formula: f("p -> p"),
                just: Justification::Taut,
            }],
        };
        let h = derived_il(DerivedIl::ImpToInterp(taut)).unwrap();
        assert_eq!(h.theorem(), Some(&f("p |> p")));
        check_hilbert(&h, Logic::Il).unwrap();

        let h = derived_il(DerivedIl::BnecFix(f("p"))).unwrap();
        assert_eq!(h.theorem(), Some(&Formula::interp(&f("p"), &f("p").bnec())));
        check_hilbert(&h, Logic::Il).unwrap();

        let prem = lob_premise(&f("q"), &[f("p")]);
        assert_eq!(prem, f("q & (p |> F) -> p"));
        assert!(!crate::search::decide_il(&prem, Default::default()).unwrap());
        let mut b = HilbertBuilder::new();
        let prem2 = lob_premise(&f("q"), &[f("q")]);
        let l = b.taut(prem2.clone());
        let proof = b.finish(l);
        let h = derived_il(DerivedIl::LobRule {
            proof,
            psi: f("q"),
            sigma: vec![f("q")],
        })
        .unwrap();
        assert_eq!(h.theorem(), Some(&f("q |> q")));
        check_hilbert(&h, Logic::Il).unwrap();
        assert!(derived_il(DerivedIl::LobRule {
            proof: h.clone(),
            psi: f("q"),
            sigma: vec![],
        })
        .is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = derived_il(DerivedIl::BnecFix(f("p"))).unwrap();
        let doc = hilbert_to_json(&h, Logic::Il);
        let text = serde_json::to_string(&doc).unwrap();
        let back: JsonHilbert = serde_json::from_str(&text).unwrap();
        assert_eq!(hilbert_from_json(&back).unwrap(), (h, Logic::Il));
    }
}
