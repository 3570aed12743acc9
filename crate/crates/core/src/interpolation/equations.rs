//! Modal equational systems, fixpoints and their solution.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

use crate::formula::{Formula, SubstitutionMap, Vocabulary};
use crate::search::{decide_il, SearchError, SearchLimits};

/// Equations x = φ_x over bound variables B and free vocabulary V.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EquationalSystem {
    pub equations: BTreeMap<String, Formula>,
    pub vocabulary: Vocabulary,
    /// Preferred enumeration, used when it witnesses orderability.
    pub hint: Vec<String>,
}

impl EquationalSystem {
    pub fn bound(&self) -> impl Iterator<Item = &String> {
        self.equations.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("equational system is not orderable: {0}")]
    NotOrderable(String),
    #[error("`{var}` is not modalized in {formula}")]
    NotModalized { var: String, formula: String },
    #[error("no fixpoint for `{var}` within {cap} iterations")]
    FixpointNotFound { var: String, cap: usize },
    #[error("solution for `{0}` does not satisfy its equation")]
    Invalid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// An enumeration x_0, …, x_n with φ_{x_j} modalized in x_i for all i ≤ j.
pub fn order_equations(e: &EquationalSystem) -> Result<Vec<String>, SolveError> {
    if e.hint.len() == e.equations.len() && check_order(e, &e.hint).is_ok() {
        return Ok(e.hint.clone());
    }
    let vars: Vec<&String> = e.equations.keys().collect();
    // x_j must precede x_i whenever x_i occurs unguarded in φ_{x_j}
    let mut before: BTreeMap<&String, BTreeSet<&String>> = BTreeMap::new();
    let mut indeg: BTreeMap<&String, usize> = vars.iter().map(|v| (*v, 0)).collect();
    for (xj, phi) in &e.equations {
        for xi in &vars {
            if !phi.is_modalized_in(xi) {
                if *xi == xj {
                    return Err(SolveError::NotOrderable(format!("{xj} occurs unguarded in its own equation")));
                }
                if before.entry(xj).or_default().insert(xi) {
                    *indeg.get_mut(xi).expect("known") += 1;
                }
            }
        }
    }
    let mut ready: BTreeSet<&String> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
    let mut order = Vec::with_capacity(vars.len());
    while let Some(v) = ready.pop_first() {
        order.push(v.clone());
        for w in before.get(v).into_iter().flatten() {
            let d = indeg.get_mut(w).expect("known");
            *d -= 1;
            if *d == 0 {
                ready.insert(w);
            }
        }
    }
    if order.len() != vars.len() {
        return Err(SolveError::NotOrderable("unguarded dependencies form a cycle".into()));
    }
    check_order(e, &order)?;
    Ok(order)
}

/// Pairwise modalization check of an enumeration.
pub fn check_order(e: &EquationalSystem, order: &[String]) -> Result<(), SolveError> {
    for (j, xj) in order.iter().enumerate() {
        let phi = e
            .equations
            .get(xj)
            .ok_or_else(|| SolveError::NotOrderable(format!("{xj} has no equation")))?;
        for xi in &order[..=j] {
            if !phi.is_modalized_in(xi) {
                return Err(SolveError::NotOrderable(format!("equation of {xj} is not modalized in {xi}")));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct FixpointLimits {
    /// Iteration cap; `None` means size(φ)+1.
    pub cap: Option<usize>,
    pub search: SearchLimits,
}

impl Default for FixpointLimits {
    fn default() -> Self {
        FixpointLimits {
            cap: None,
            search: SearchLimits::default(),
        }
    }
}

fn iff_holds(a: &Formula, b: &Formula, lim: SearchLimits) -> Result<bool, SearchError> {
    if a == b {
        return Ok(true);
    }
    decide_il(&Formula::iff(a, b), lim)
}

/// A formula ψ free of x with IL ⊢ ψ ↔ φ[x↦ψ]. Candidates are the iterates
/// φ^k(⊤) and the formula of the substitution method, tried smallest first;
/// the first one the prover certifies is returned.
pub fn fixpoint(phi: &Formula, x: &str, lim: FixpointLimits) -> Result<Formula, SolveError> {
    if !phi.is_modalized_in(x) {
        return Err(SolveError::NotModalized {
            var: x.to_string(),
            formula: phi.to_string(),
        });
    }
    if !phi.contains_atom(x) {
        return Ok(phi.clone());
    }
    let cap = lim.cap.unwrap_or(phi.size() + 1);
    let step = |psi: &Formula| normalize(&phi.substitute_one(x, psi));
    let cand = normalize(&substitution_candidate(phi, x));
    let mut psi = step(&Formula::top());
    let mut k = 1;
    while k <= cap && psi.size() < cand.size() {
        let next = step(&psi);
        if psi == next || iff_holds(&psi, &next, lim.search).unwrap_or(false) {
            return Ok(psi);
        }
        psi = next;
        k += 1;
    }
    if iff_holds(&cand, &step(&cand), lim.search)? {
        return Ok(cand);
    }
    while k <= cap {
        let next = step(&psi);
        if iff_holds(&psi, &next, lim.search)? {
            return Ok(psi);
        }
        psi = next;
        k += 1;
    }
    Err(SolveError::FixpointNotFound { var: x.to_string(), cap })
}

/// Maximal ⊳-subformulas of φ that mention x.
fn modal_atoms(phi: &Formula, x: &str, out: &mut Vec<Formula>) {
    match phi {
        Formula::Interp(..) => {
            if phi.contains_atom(x) && !out.contains(phi) {
                out.push(phi.clone());
            }
        }
        Formula::Imp(a, b) => {
            modal_atoms(a, x, out);
            modal_atoms(b, x, out);
        }
        _ => {}
    }
}

fn replace_atoms(phi: &Formula, map: &[(Formula, Formula)]) -> Formula {
    if let Some((_, to)) = map.iter().find(|(from, _)| from == phi) {
        return to.clone();
    }
    match phi {
        Formula::Imp(a, b) => Formula::imp(&replace_atoms(a, map), &replace_atoms(b, map)),
        _ => phi.clone(),
    }
}

/// Writing φ = B(M_1(x), …, M_n(x)) over its modal atoms, the candidate is
/// B(M_1(H_1), …, M_n(H_n)) where H_i is the candidate for φ with M_i ↦ ⊤.
fn substitution_candidate(phi: &Formula, x: &str) -> Formula {
    let mut atoms = Vec::new();
    modal_atoms(phi, x, &mut atoms);
    if atoms.is_empty() {
        return phi.clone();
    }
    let map: Vec<(Formula, Formula)> = atoms
        .iter()
        .map(|m| {
            let reduced = replace_atoms(phi, &[(m.clone(), Formula::top())]);
            let h = normalize(&substitution_candidate(&reduced, x));
            (m.clone(), m.substitute_one(x, &h))
        })
        .collect();
    replace_atoms(phi, &map)
}

/// Solves an orderable system along its enumeration; every equation of the
/// result is certified by the prover.
pub fn solve(e: &EquationalSystem, lim: FixpointLimits) -> Result<BTreeMap<String, Formula>, SolveError> {
    let order = order_equations(e)?;
    let mut chi: Vec<(String, Formula)> = Vec::with_capacity(order.len());
    for xj in &order {
        let sub: SubstitutionMap = chi.iter().cloned().collect();
        let f = normalize(&e.equations[xj].substitute(&sub));
        let psi = fixpoint(&f, xj, lim)?;
        for (_, c) in chi.iter_mut() {
            *c = normalize(&c.substitute_one(xj, &psi));
        }
        chi.push((xj.clone(), psi));
    }
    let sol: BTreeMap<String, Formula> = chi.into_iter().collect();
    validate_solution(e, &sol, lim.search)?;
    Ok(sol)
}

pub fn validate_solution(
    e: &EquationalSystem,
    sol: &BTreeMap<String, Formula>,
    lim: SearchLimits,
) -> Result<(), SolveError> {
    for (x, phi) in &e.equations {
        let s = sol.get(x).ok_or_else(|| SolveError::Invalid(x.clone()))?;
        if s.vocabulary().iter().any(|n| e.equations.contains_key(n)) {
            return Err(SolveError::Invalid(x.clone()));
        }
        if !iff_holds(s, &normalize(&phi.substitute(sol)), lim)? {
            return Err(SolveError::Invalid(x.clone()));
        }
    }
    Ok(())
}

/// Propositional rewrites valid in classical logic: ⊤/⊥ absorption, double
/// negation, idempotence. ⊳-formulas are left untouched.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Bot | Formula::Interp(..) => f.clone(),
        Formula::Imp(a, b) => simp_imp(simplify(a), simplify(b)),
    }
}

/// [`simplify`] extended under ⊳, with A⊳B ↦ ⊤ when A is ⊥, B is ⊤ or A = B.
/// In a→b the boolean occurrences of a inside b become ⊤, and those of c
/// become ⊥ when a is ¬c. Used while solving, where every result is
/// certified afterwards.
pub fn normalize(f: &Formula) -> Formula {
    norm(f, &mut Context::default())
}

#[derive(Default)]
struct Context {
    truths: HashMap<Formula, usize>,
    falsities: HashMap<Formula, usize>,
}

fn bump(m: &mut HashMap<Formula, usize>, f: &Formula, up: bool) {
    if up {
        *m.entry(f.clone()).or_default() += 1;
    } else if let Some(n) = m.get_mut(f) {
        *n -= 1;
        if *n == 0 {
            m.remove(f);
        }
    }
}

fn norm(f: &Formula, ctx: &mut Context) -> Formula {
    if !f.is_bot() && !ctx.truths.is_empty() && ctx.truths.contains_key(f) {
        return Formula::top();
    }
    if !ctx.falsities.is_empty() && ctx.falsities.contains_key(f) {
        return Formula::bot();
    }
    match f {
        Formula::Atom(_) | Formula::Bot => f.clone(),
        Formula::Imp(a, b) => {
            let na = norm(a, ctx);
            let neg = na.as_neg().cloned();
            let assume = !na.is_bot() && !na.is_top();
            if assume {
                bump(&mut ctx.truths, &na, true);
                if let Some(c) = &neg {
                    bump(&mut ctx.falsities, c, true);
                }
            }
            let nb = norm(b, ctx);
            if assume {
                bump(&mut ctx.truths, &na, false);
                if let Some(c) = &neg {
                    bump(&mut ctx.falsities, c, false);
                }
            }
            simp_imp(na, nb)
        }
        Formula::Interp(a, b) => {
            let (na, nb) = (normalize(a), normalize(b));
            if na.is_bot() || nb.is_top() || na == nb {
                Formula::top()
            } else if na == **a && nb == **b {
                f.clone()
            } else {
                Formula::interp(&na, &nb)
            }
        }
    }
}

fn simp_imp(a: Formula, b: Formula) -> Formula {
    let top = Formula::top();
    if a.is_bot() || b.is_top() || a == b {
        return top;
    }
    if a.is_top() {
        return b;
    }
    if b.is_bot() {
        // ¬¬c ↦ c
        if let Some(c) = a.as_neg() {
            return c.clone();
        }
        return Formula::imp(&a, &b);
    }
    // a→¬a ↦ ¬a
    if b.as_neg() == Some(&a) {
        return b;
    }
    // ¬a→a ↦ a
    if a.as_neg() == Some(&b) {
        return b;
    }
    // a→(a→c) ↦ a→c
    if let Some((a2, c)) = b.as_imp() {
        if *a2 == a {
            return simp_imp(a, c.clone());
        }
    }
    Formula::imp(&a, &b)
}
