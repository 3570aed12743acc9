//! Uniform interpolation for IL and ILP through interpolation templates and
//! modal equational systems.

mod equations;
mod template;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

pub use equations::{
    check_order, fixpoint, normalize, order_equations, simplify, solve, validate_solution, EquationalSystem, FixpointLimits,
    SolveError,
};
pub use template::{
    build_template, build_template_capped, check_template, star_data, star_keys, template_from_json, template_to_json,
    JsonTemplate, JsonTemplateNode, PremiseKey, StarData, TNode, TRule, Template, TemplateCheckError, TemplateError,
    Violation, TEMPLATE_CAP,
};

use crate::formula::{Formula, Vocabulary, RESERVED_PREFIX};
use crate::search::{Logic, SearchError, SearchLimits};
use crate::sequent::{Multiset, Sequent};

/// Bound variable of the Repeat node `w`.
pub fn bound_var(w: usize) -> String {
    format!("{RESERVED_PREFIX}w{w}")
}

fn bound_node(name: &str) -> Option<usize> {
    name.strip_prefix(RESERVED_PREFIX)?.strip_prefix('w')?.parse().ok()
}

fn post_order(t: &Template) -> Vec<usize> {
    let mut out = Vec::with_capacity(t.nodes.len());
    let mut stack = vec![(0usize, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            out.push(v);
            continue;
        }
        stack.push((v, true));
        for &c in t.nodes[v].children.iter().rev() {
            stack.push((c, false));
        }
    }
    out
}

/// Pre-interpolant at every node, bottom-up along the tree part.
pub fn pre_interpolants(t: &Template, v: &Vocabulary) -> Vec<Formula> {
    let mut rho: Vec<Option<Formula>> = vec![None; t.nodes.len()];
    for i in post_order(t) {
        let n = &t.nodes[i];
        let child = |k: usize| rho[n.children[k]].clone().expect("children first");
        let f = match &n.rule {
            TRule::Ax { .. } | TRule::BotL => Formula::bot(),
            TRule::Empty => Formula::top(),
            TRule::ImpL { .. } => Formula::or(&child(0), &child(1)),
            TRule::ImpR { .. } | TRule::BotR | TRule::Wk => child(0),
            TRule::Repeat => Formula::atom(&bound_var(i)),
            TRule::Star(d) => {
                let prem: Vec<Formula> = (0..n.children.len()).map(child).collect();
                star_rho(d, &prem, v)
            }
        };
        rho[i] = Some(f);
    }
    rho.into_iter().map(|f| f.expect("every node visited")).collect()
}

fn star_rho(d: &StarData, prem: &[Formula], v: &Vocabulary) -> Formula {
    let r = |phi: &Multiset, psi: Option<&Formula>| -> Formula {
        let key = PremiseKey {
            phi: phi.clone(),
            psi: psi.cloned(),
        };
        let k = d.premise_index(&key).expect("premise index is complete");
        prem[k].clone()
    };
    let sigma: Vec<(Formula, Formula)> = d
        .sigma
        .iter()
        .map(|f| {
            let (a, b) = f.as_interp().expect("⊳");
            (a.clone(), b.clone())
        })
        .collect();
    let lambda: Vec<(Formula, Formula)> = d
        .lambda
        .distinct()
        .iter()
        .map(|f| {
            let (a, b) = f.as_interp().expect("⊳");
            (a.clone(), b.clone())
        })
        .collect();
    let mut conj: Vec<Formula> = Vec::new();
    let mut seen: BTreeSet<Formula> = BTreeSet::new();
    let mut push = |f: Formula, conj: &mut Vec<Formula>| {
        if seen.insert(f.clone()) {
            conj.push(f);
        }
    };
    let mut seqs_seen: BTreeSet<Vec<(Formula, Formula)>> = BTreeSet::new();
    for seq in injective_sequences(sigma.len()) {
        let items: Vec<(Formula, Formula)> = seq.iter().map(|&i| sigma[i].clone()).collect();
        // equal occurrence-sequences give equal clauses
        if !seqs_seen.insert(items.clone()) {
            continue;
        }
        let m = items.len();
        let prefix = |i: usize| -> Multiset { items[..i].iter().map(|(a, _)| a.clone()).collect() };
        let disj: Vec<Formula> = (0..m).map(|i| r(&prefix(i), Some(&items[i].1))).collect();
        push(
            Formula::interp(&r(&prefix(m), None).neg(), &Formula::disj(&disj)),
            &mut conj,
        );
        for (psi_m, phi) in &lambda {
            let mut ds = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let big_phi = prefix(i).with(phi.clone());
                let psi_i = if i < m { &items[i].1 } else { psi_m };
                let a = r(&big_phi, Some(psi_i));
                let b = r(&big_phi, None).neg();
                ds.push(Formula::interp(&a, &b).neg());
            }
            push(Formula::disj(&ds), &mut conj);
        }
    }
    for g in d.gamma.iter() {
        if g.atom_name().is_some_and(|n| v.contains(n)) {
            push(g.clone(), &mut conj);
        }
    }
    for g in d.delta.iter() {
        if g.atom_name().is_some_and(|n| v.contains(n)) {
            push(g.neg(), &mut conj);
        }
    }
    Formula::conj(&conj)
}

/// All sequences of distinct indices below n, the empty one first.
fn injective_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &frontier {
            for i in 0..n {
                if !s.contains(&i) {
                    let mut t: Vec<usize> = s.clone();
                    t.push(i);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Locality: `$x_w` occurs in ρ_v only if v ≤ w.
pub fn check_locality(t: &Template, rho: &[Formula]) -> Result<(), String> {
    let parents = t.parents();
    for (v, f) in rho.iter().enumerate() {
        for name in f.vocabulary() {
            let Some(w) = bound_node(&name) else { continue };
            if w >= t.nodes.len() || t.nodes[w].rule != TRule::Repeat {
                return Err(format!("ρ at {v} mentions {name}, which is not a Repeat node"));
            }
            if !t.is_below(&parents, v, w) {
                return Err(format!("ρ at {v} mentions {name} but {v} is not below {w}"));
            }
        }
    }
    Ok(())
}

/// Modalization: if the path from v up to a Repeat node w crosses ⊳*, then
/// ρ_v is modalized in `$x_w`.
pub fn check_modalization(t: &Template, rho: &[Formula]) -> Result<(), String> {
    let parents = t.parents();
    for w in t.repeats() {
        let x = bound_var(w);
        let mut crossed = false;
        let mut cur = parents[w];
        while let Some(v) = cur {
            crossed |= matches!(t.nodes[v].rule, TRule::Star(_));
            if crossed && !rho[v].is_modalized_in(&x) {
                return Err(format!("ρ at {v} is not modalized in {x}"));
            }
            cur = parents[v];
        }
    }
    Ok(())
}

/// One equation x_w = ρ at the companion of w, per Repeat node w. The hint
/// lists the variables leaf-first by the height of their companions.
pub fn equations(t: &Template, rho: &[Formula], v: &Vocabulary) -> EquationalSystem {
    let mut height = vec![0usize; t.nodes.len()];
    for i in post_order(t) {
        height[i] = t.nodes[i].children.iter().map(|&c| height[c] + 1).max().unwrap_or(0);
    }
    let mut repeats = t.repeats();
    let companion = |w: usize| t.nodes[w].backlink.expect("Repeat nodes carry a backlink");
    repeats.sort_by_key(|&w| (height[companion(w)], companion(w), w));
    EquationalSystem {
        equations: repeats.iter().map(|&w| (bound_var(w), rho[companion(w)].clone())).collect(),
        vocabulary: v.clone(),
        hint: repeats.into_iter().map(bound_var).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpolationError {
    #[error("reserved atom `{0}` in the input")]
    ReservedAtom(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("template check failed: {0}")]
    TemplateCheck(#[from] TemplateCheckError),
    #[error("pre-interpolant lemma failed: {0}")]
    Lemma(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Clone, Copy, Debug)]
pub struct InterpolationLimits {
    pub search: SearchLimits,
    /// Fixpoint iteration cap; `None` means size(φ)+1.
    pub fixpoint_cap: Option<usize>,
    pub template_cap: usize,
    /// Size bound for the certified replacement of the result by a small
    /// equivalent V-formula; 0 disables it.
    pub simplify_cap: usize,
}

impl Default for InterpolationLimits {
    fn default() -> Self {
        InterpolationLimits {
            search: SearchLimits::default(),
            fixpoint_cap: None,
            template_cap: TEMPLATE_CAP,
            simplify_cap: 5,
        }
    }
}

impl InterpolationLimits {
    fn fixpoint(&self) -> FixpointLimits {
        FixpointLimits {
            cap: self.fixpoint_cap,
            search: self.search,
        }
    }
}

/// Every intermediate stage of an interpolant computation.
#[derive(Clone, Debug)]
pub struct Interpolation {
    pub template: Template,
    pub rho: Vec<Formula>,
    pub system: EquationalSystem,
    pub order: Vec<String>,
    pub solution: BTreeMap<String, Formula>,
    /// ρ at the root under the solution, before any simplification.
    pub raw: Formula,
    pub interpolant: Formula,
}

/// Runs the whole pipeline on (φ ⇒).
pub fn interpolate(phi: &Formula, v: &Vocabulary, lim: InterpolationLimits) -> Result<Interpolation, InterpolationError> {
    if let Some(n) = phi.vocabulary().into_iter().chain(v.iter().cloned()).find(|n| n.starts_with(RESERVED_PREFIX)) {
        return Err(InterpolationError::ReservedAtom(n));
    }
    let s = Sequent::new(Multiset::singleton(phi.clone()), Multiset::new());
    let template = build_template_capped(&s, lim.template_cap)?;
    check_template(&template)?;
    let rho = pre_interpolants(&template, v);
    check_locality(&template, &rho).map_err(InterpolationError::Lemma)?;
    check_modalization(&template, &rho).map_err(InterpolationError::Lemma)?;
    let system = equations(&template, &rho, v);
    let order = order_equations(&system)?;
    let solution = solve(&system, lim.fixpoint())?;
    let raw = rho[0].substitute(&solution);
    let mut interpolant = normalize(&raw);
    if lim.simplify_cap > 0 {
        if let Some(small) = smallest_equivalent(&interpolant, v, lim.simplify_cap, lim.search)? {
            interpolant = small;
        }
    }
    Ok(Interpolation {
        template,
        rho,
        system,
        order,
        solution,
        raw,
        interpolant,
    })
}

/// The uniform IL-interpolant of φ over V.
pub fn interpolant(phi: &Formula, v: &Vocabulary, lim: InterpolationLimits) -> Result<Formula, InterpolationError> {
    Ok(interpolate(phi, v, lim)?.interpolant)
}

/// The uniform ILP-interpolant of φ over V, through φ♯.
pub fn ilp_interpolant(phi: &Formula, v: &Vocabulary, lim: InterpolationLimits) -> Result<Formula, InterpolationError> {
    interpolant(&phi.sharp(), v, lim)
}

fn smallest_equivalent(
    f: &Formula,
    v: &Vocabulary,
    cap: usize,
    lim: SearchLimits,
) -> Result<Option<Formula>, SearchError> {
    if f.size() <= 1 {
        return Ok(None);
    }
    for size in (1..=cap.min(f.size() - 1)).step_by(2) {
        let candidates = formulas_of_size(v, size);
        let hit = candidates
            .par_iter()
            .map(|g| crate::search::decide_il(&Formula::iff(f, g), lim).map(|ok| ok.then(|| g.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(g) = hit.into_iter().flatten().next() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Formulas over V ∪ {⊥} with exactly `size` nodes, in a fixed order.
pub fn formulas_of_size(v: &Vocabulary, size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![vec![]; size + 1];
    for n in 1..=size {
        let mut out = Vec::new();
        if n == 1 {
            out.push(Formula::bot());
            out.extend(v.iter().map(|a| Formula::atom(a)));
        } else {
            for l in 1..n - 1 {
                let r = n - 1 - l;
                for a in &by_size[l] {
                    for b in &by_size[r] {
                        out.push(Formula::imp(a, b));
                        out.push(Formula::interp(a, b));
                    }
                }
            }
        }
        by_size[n] = out;
    }
    std::mem::take(&mut by_size[size])
}

/// Formulas over V ∪ {⊥} of size at most `cap`.
pub fn formulas_up_to(v: &Vocabulary, cap: usize) -> Vec<Formula> {
    (1..=cap).flat_map(|n| formulas_of_size(v, n)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessFailure {
    /// φ → ψ holds but ι → ψ does not.
    NotImplied(Formula),
    Exhausted(Formula),
}

#[derive(Clone, Debug)]
pub struct Report {
    pub vocab_ok: bool,
    /// φ → ι; `None` when the search ran out.
    pub entails: Option<bool>,
    pub checked: usize,
    pub consequences: usize,
    pub failures: Vec<WitnessFailure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.vocab_ok && self.entails == Some(true) && self.failures.is_empty()
    }
}

/// Checks that ι is over V, follows from φ, and implies every V-formula
/// up to the witness size cap that follows from φ.
pub fn verify_interpolant(
    phi: &Formula,
    v: &Vocabulary,
    iota: &Formula,
    witness_cap: usize,
    logic: Logic,
    lim: SearchLimits,
) -> Report {
    let vocab_ok = iota.vocabulary().is_subset(v);
    let entails = logic.decide(&Formula::imp(phi, iota), lim).ok();
    let witnesses = formulas_up_to(v, witness_cap);
    let results: Vec<(bool, Option<WitnessFailure>)> = witnesses
        .par_iter()
        .map(|psi| match logic.decide(&Formula::imp(phi, psi), lim) {
            Err(_) => (false, Some(WitnessFailure::Exhausted(psi.clone()))),
            Ok(false) => (false, None),
            Ok(true) => match logic.decide(&Formula::imp(iota, psi), lim) {
                Ok(true) => (true, None),
                Ok(false) => (true, Some(WitnessFailure::NotImplied(psi.clone()))),
                Err(_) => (true, Some(WitnessFailure::Exhausted(psi.clone()))),
            },
        })
        .collect();
    Report {
        vocab_ok,
        entails,
        checked: witnesses.len(),
        consequences: results.iter().filter(|(c, _)| *c).count(),
        failures: results.into_iter().filter_map(|(_, f)| f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_vocabulary};
    use crate::search::decide_il;
    use crate::sequent::parse_sequent;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn voc(s: &str) -> Vocabulary {
        parse_vocabulary(s).unwrap()
    }

    fn equiv(a: &Formula, b: &Formula) -> bool {
        decide_il(&Formula::iff(a, b), SearchLimits::default()).unwrap()
    }

    #[test]
    fn leaf_values() {
        let v = voc("p,q");
        let t = build_template(&parse_sequent("p => p").unwrap(), &v).unwrap();
        assert_eq!(pre_interpolants(&t, &v)[0], Formula::bot());
        let t = build_template(&parse_sequent("=>").unwrap(), &v).unwrap();
        assert_eq!(pre_interpolants(&t, &v)[0], Formula::top());
    }

    #[test]
    fn star_example() {
        let v = voc("p,q");
        let t = build_template(&parse_sequent("p => q").unwrap(), &v).unwrap();
        let rho = pre_interpolants(&t, &v);
        let expected = Formula::conj(&[Formula::interp(&Formula::top().neg(), &Formula::bot()), f("p"), f("~q")]);
        assert_eq!(rho[0], expected);
        assert!(equiv(&rho[0], &f("p & ~q")));
        assert!(equations(&t, &rho, &v).is_empty());
    }

    #[test]
    fn lemmas_hold_on_cyclic_templates() {
        let v = voc("p");
        for s in ["[]p =>", "p |> q =>", "<>p |> p =>", "(p |> q) -> (q |> r) =>"] {
            let t = build_template(&parse_sequent(s).unwrap(), &v).unwrap();
            let rho = pre_interpolants(&t, &v);
            check_locality(&t, &rho).unwrap();
            check_modalization(&t, &rho).unwrap();
            let e = equations(&t, &rho, &v);
            assert_eq!(e.len(), t.repeats().len());
            order_equations(&e).unwrap();
        }
    }

    #[test]
    fn anchors() {
        let lim = InterpolationLimits::default();
        let i = interpolant(&f("p & q"), &voc("p"), lim).unwrap();
        assert!(equiv(&i, &f("p")));
        let i = interpolant(&f("p"), &voc(""), lim).unwrap();
        assert!(equiv(&i, &Formula::top()));
        let i = interpolant(&Formula::bot(), &voc("p"), lim).unwrap();
        assert!(equiv(&i, &Formula::bot()));
        let i = ilp_interpolant(&f("p & q"), &voc("p"), lim).unwrap();
        assert!(equiv(&i, &f("p")));
    }

    #[test]
    fn verification() {
        let lim = SearchLimits::default();
        let r = verify_interpolant(&f("p & q"), &voc("p"), &f("p"), 5, Logic::Il, lim);
        assert!(r.passed(), "{r:?}");
        let r = verify_interpolant(&f("p"), &voc("p"), &Formula::top(), 5, Logic::Il, lim);
        assert!(!r.passed());
        assert!(r.failures.contains(&WitnessFailure::NotImplied(f("p"))));
    }

    #[test]
    fn modal_interpolants_verify() {
        let lim = InterpolationLimits::default();
        for (s, v) in [("[]p & q", "p"), ("p |> q", "q"), ("<>p", "p")] {
            let i = interpolant(&f(s), &voc(v), lim).unwrap();
            let r = verify_interpolant(&f(s), &voc(v), &i, 3, Logic::Il, lim.search);
            assert!(r.passed(), "{s} over {v}: {i} {r:?}");
        }
    }

    #[test]
    fn enumeration_counts() {
        let v = voc("p");
        assert_eq!(formulas_of_size(&v, 1).len(), 2);
        assert_eq!(formulas_of_size(&v, 3).len(), 8);
        assert!(formulas_of_size(&v, 2).is_empty());
    }
}
