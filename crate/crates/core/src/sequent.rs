//! Sequents as pairs of canonically ordered multisets.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{lex, Formula, FormulaError, Parser, Tok};

/// A multiset of formulas kept sorted, so equal multisets are equal vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset(Vec<Formula>);

impl Multiset {
    pub fn new() -> Self {
        Multiset(Vec::new())
    }

    pub fn from_vec(mut v: Vec<Formula>) -> Self {
        v.sort();
        Multiset(v)
    }

    pub fn singleton(f: Formula) -> Self {
        Multiset(vec![f])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, f: Formula) {
        let i = match self.0.binary_search(&f) {
            Ok(i) | Err(i) => i,
        };
        self.0.insert(i, f);
    }

    pub fn with(&self, f: Formula) -> Self {
        let mut m = self.clone();
        m.insert(f);
        m
    }

    /// Removes one occurrence; false if absent.
    pub fn remove(&mut self, f: &Formula) -> bool {
        match self.0.binary_search(f) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn without(&self, f: &Formula) -> Option<Self> {
        let mut m = self.clone();
        if m.remove(f) {
            Some(m)
        } else {
            None
        }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }

    pub fn count(&self, f: &Formula) -> usize {
        match self.0.binary_search(f) {
            Err(_) => 0,
            Ok(i) => {
                let mut lo = i;
                while lo > 0 && &self.0[lo - 1] == f {
                    lo -= 1;
                }
                let mut hi = i;
                while hi + 1 < self.0.len() && &self.0[hi + 1] == f {
                    hi += 1;
                }
                hi - lo + 1
            }
        }
    }

    pub fn union(&self, other: &Multiset) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Multiset::from_vec(v)
    }

    /// Multiset difference; None unless `other` is a sub-multiset.
    pub fn minus(&self, other: &Multiset) -> Option<Self> {
        let mut m = self.clone();
        for f in other.iter() {
            if !m.remove(f) {
                return None;
            }
        }
        Some(m)
    }

    /// Multiset difference that ignores missing elements.
    pub fn saturating_minus(&self, other: &Multiset) -> Self {
        let mut m = self.clone();
        for f in other.iter() {
            m.remove(f);
        }
        m
    }

    pub fn intersection(&self, other: &Multiset) -> Self {
        let mut rest = other.clone();
        let mut out = Vec::new();
        for f in self.iter() {
            if rest.remove(f) {
                out.push(f.clone());
            }
        }
        Multiset(out)
    }

    pub fn is_submultiset(&self, other: &Multiset) -> bool {
        other.minus(self).is_some()
    }

    pub fn is_set(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Removes repetitions.
    pub fn to_set(&self) -> Self {
        let mut v = self.0.clone();
        v.dedup();
        Multiset(v)
    }

    pub fn distinct(&self) -> Vec<Formula> {
        let mut v = self.0.clone();
        v.dedup();
        v
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> Self {
        Multiset::from_vec(self.0.iter().map(f).collect())
    }

    /// Φ ↦ Φ⊳⊥
    pub fn interp_bot(&self) -> Self {
        self.map(|f| f.interp_bot())
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Formula::size).sum()
    }
}

impl FromIterator<Formula> for Multiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Multiset::from_vec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Multiset {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

fn join(v: &[Formula]) -> String {
    v.iter().map(|f| f.print(true)).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequent {
    pub left: Multiset,
    pub right: Multiset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Sequent {
    pub fn new(left: Multiset, right: Multiset) -> Self {
        Sequent { left, right }
    }

    pub fn from_vecs(left: Vec<Formula>, right: Vec<Formula>) -> Self {
        Sequent::new(Multiset::from_vec(left), Multiset::from_vec(right))
    }

    /// The sequent ⇒ φ.
    pub fn goal(f: Formula) -> Self {
        Sequent::new(Multiset::new(), Multiset::singleton(f))
    }

    pub fn side(&self, s: Side) -> &Multiset {
        match s {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn side_mut(&mut self, s: Side) -> &mut Multiset {
        match s {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    pub fn add_left(&self, f: Formula) -> Self {
        Sequent::new(self.left.with(f), self.right.clone())
    }

    pub fn add_right(&self, f: Formula) -> Self {
        Sequent::new(self.left.clone(), self.right.with(f))
    }

    pub fn weakened(&self, l: &Multiset, r: &Multiset) -> Self {
        Sequent::new(self.left.union(l), self.right.union(r))
    }

    pub fn is_set_sequent(&self) -> bool {
        self.left.is_set() && self.right.is_set()
    }

    pub fn to_set_sequent(&self) -> Self {
        Sequent::new(self.left.to_set(), self.right.to_set())
    }

    /// ⊥ on the left or a shared atom.
    pub fn is_axiomatic(&self) -> bool {
        self.left.contains(&Formula::Bot) || self.shared_atom().is_some()
    }

    pub fn shared_atom(&self) -> Option<&Formula> {
        self.left
            .iter()
            .find(|f| f.is_atom() && self.right.contains(f))
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn size(&self) -> usize {
        self.left.size() + self.right.size()
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for f in self.left.iter().chain(self.right.iter()) {
            f.collect_sub(&mut out);
        }
        out
    }

    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.left
            .iter()
            .chain(self.right.iter())
            .flat_map(|f| f.vocabulary())
            .collect()
    }

    /// ⋀left → ⋁right, with ⊤ and ⊥ for empty sides.
    pub fn to_formula(&self) -> Formula {
        Formula::imp(
            &Formula::conj(self.left.as_slice()),
            &Formula::disj(self.right.as_slice()),
        )
    }

    pub fn print(&self, sugar: bool) -> String {
        let side = |m: &Multiset| {
            m.iter()
                .map(|f| f.print(sugar))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let (l, r) = (side(&self.left), side(&self.right));
        match (l.is_empty(), r.is_empty()) {
            (true, true) => "=>".to_string(),
            (true, false) => format!("=> {r}"),
            (false, true) => format!("{l} =>"),
            (false, false) => format!("{l} => {r}"),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print(true))
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print(true))
    }
}

/// Parses `Γ => Δ` with comma separated formulas on each side.
pub fn parse_sequent(text: &str) -> Result<Sequent, FormulaError> {
    parse_sequent_with(text, false)
}

pub fn parse_sequent_with(text: &str, allow_reserved: bool) -> Result<Sequent, FormulaError> {
    let mut p = Parser::new(lex(text, allow_reserved)?, text.len());
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut on_right = false;
    loop {
        match p.peek() {
            None => break,
            Some(Tok::Turnstile) => {
                if on_right {
                    return Err(p.error("second `=>`"));
                }
                p.bump();
                on_right = true;
                continue;
            }
            _ => {}
        }
        let f = p.formula()?;
        if on_right {
            right.push(f);
        } else {
            left.push(f);
        }
        match p.peek() {
            Some(Tok::Comma) => {
                p.bump();
                if matches!(p.peek(), None | Some(Tok::Turnstile)) {
                    return Err(p.error("expected a formula after `,`"));
                }
            }
            Some(Tok::Turnstile) | None => {}
            Some(_) => return Err(p.error("expected `,` or `=>`")),
        }
    }
    if !on_right {
        return Err(p.error("missing `=>`"));
    }
    Ok(Sequent::from_vecs(left, right))
}
