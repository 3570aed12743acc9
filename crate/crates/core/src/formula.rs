//! Formulas over the core connectives ⊥, → and ⊳, with parsing, printing,
//! metrics, substitution, abbreviations and the ♯-translation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Atom names starting with this prefix are bound variables of the
/// interpolation module and are rejected by the user-facing parser.
pub const RESERVED_PREFIX: &str = "$x_";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Bot,
    Imp(Arc<Formula>, Arc<Formula>),
    Interp(Arc<Formula>, Arc<Formula>),
}

pub type Vocabulary = BTreeSet<String>;
pub type SubstitutionMap = BTreeMap<String, Formula>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("reserved atom name `{name}` at {pos}")]
    ReservedName { name: String, pos: usize },
    #[error("{kind} expects {expected} argument(s), got {got}")]
    Arity {
        kind: String,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abbrev {
    Top,
    Neg,
    Or,
    And,
    Box,
    Diamond,
    Bnec,
    Dnec,
}

impl Abbrev {
    pub fn arity(self) -> usize {
        match self {
            Abbrev::Top => 0,
            Abbrev::Neg | Abbrev::Box | Abbrev::Diamond | Abbrev::Bnec | Abbrev::Dnec => 1,
            Abbrev::Or | Abbrev::And => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Abbrev::Top => "top",
            Abbrev::Neg => "neg",
            Abbrev::Or => "or",
            Abbrev::And => "and",
            Abbrev::Box => "box",
            Abbrev::Diamond => "diamond",
            Abbrev::Bnec => "bnec",
            Abbrev::Dnec => "dnec",
        }
    }
}

/// Expands an abbreviation into core connectives.
pub fn abbrev(kind: Abbrev, args: &[Formula]) -> Result<Formula, FormulaError> {
    if args.len() != kind.arity() {
        return Err(FormulaError::Arity {
            kind: kind.name().to_string(),
            expected: kind.arity(),
            got: args.len(),
        });
    }
    Ok(match kind {
        Abbrev::Top => Formula::top(),
        Abbrev::Neg => args[0].neg(),
        Abbrev::Or => Formula::or(&args[0], &args[1]),
        Abbrev::And => Formula::and(&args[0], &args[1]),
        Abbrev::Box => args[0].boxed(),
        Abbrev::Diamond => args[0].diamond(),
        Abbrev::Bnec => args[0].bnec(),
        Abbrev::Dnec => args[0].dnec(),
    })
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn bot() -> Formula {
        Formula::Bot
    }

    pub fn imp(a: &Formula, b: &Formula) -> Formula {
        Formula::Imp(Arc::new(a.clone()), Arc::new(b.clone()))
    }

    pub fn interp(a: &Formula, b: &Formula) -> Formula {
        Formula::Interp(Arc::new(a.clone()), Arc::new(b.clone()))
    }

    pub fn top() -> Formula {
        Formula::imp(&Formula::Bot, &Formula::Bot)
    }

    pub fn neg(&self) -> Formula {
        Formula::imp(self, &Formula::Bot)
    }

    pub fn or(a: &Formula, b: &Formula) -> Formula {
        Formula::imp(&a.neg(), b)
    }

    pub fn and(a: &Formula, b: &Formula) -> Formula {
        Formula::imp(a, &b.neg()).neg()
    }

    pub fn iff(a: &Formula, b: &Formula) -> Formula {
        Formula::and(&Formula::imp(a, b), &Formula::imp(b, a))
    }

    /// □φ = ¬φ ⊳ ⊥
    pub fn boxed(&self) -> Formula {
        Formula::interp(&self.neg(), &Formula::Bot)
    }

    /// ◇φ = ¬(φ ⊳ ⊥)
    pub fn diamond(&self) -> Formula {
        Formula::interp(self, &Formula::Bot).neg()
    }

    /// φ ⊳ ⊥, written Φ⊳⊥ when mapped over a multiset.
    pub fn interp_bot(&self) -> Formula {
        Formula::interp(self, &Formula::Bot)
    }

    pub fn bnec(&self) -> Formula {
        Formula::and(&self.interp_bot(), self)
    }

    pub fn dnec(&self) -> Formula {
        Formula::and(self, &self.boxed())
    }

    /// Right-associated conjunction in list order; empty gives ⊤.
    pub fn conj(items: &[Formula]) -> Formula {
        match items.split_last() {
            None => Formula::top(),
            Some((last, rest)) => rest
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::and(f, &acc)),
        }
    }

    /// Right-associated disjunction in list order; empty gives ⊥.
    pub fn disj(items: &[Formula]) -> Formula {
        match items.split_last() {
            None => Formula::Bot,
            Some((last, rest)) => rest
                .iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::or(f, &acc)),
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Bot)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn is_interp(&self) -> bool {
        matches!(self, Formula::Interp(..))
    }

    pub fn is_imp(&self) -> bool {
        matches!(self, Formula::Imp(..))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Imp(a, b) if a.is_bot() && b.is_bot())
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self {
            Formula::Atom(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_interp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Interp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The φ of a negation φ → ⊥.
    pub fn as_neg(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if b.is_bot() => Some(a),
            _ => None,
        }
    }

    fn as_and(&self) -> Option<(&Formula, &Formula)> {
        let (a, nb) = self.as_neg()?.as_imp()?;
        Some((a, nb.as_neg()?))
    }

    fn as_or(&self) -> Option<(&Formula, &Formula)> {
        let (na, b) = self.as_imp()?;
        if b.is_bot() {
            return None;
        }
        Some((na.as_neg()?, b))
    }

    fn as_box(&self) -> Option<&Formula> {
        let (na, b) = self.as_interp()?;
        if !b.is_bot() {
            return None;
        }
        na.as_neg()
    }

    fn as_diamond(&self) -> Option<&Formula> {
        let (a, b) = self.as_neg()?.as_interp()?;
        if b.is_bot() {
            Some(a)
        } else {
            None
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 1,
            Formula::Imp(a, b) | Formula::Interp(a, b) => a.size() + b.size() + 1,
        }
    }

    /// Modal depth counted in nested ⊳.
    pub fn interp_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::Imp(a, b) => a.interp_depth().max(b.interp_depth()),
            Formula::Interp(a, b) => 1 + a.interp_depth().max(b.interp_depth()),
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_sub(&mut out);
        out
    }

    pub(crate) fn collect_sub(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        out.insert(self.clone());
        match self {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::Imp(a, b) => {
                a.collect_sub(out);
                b.collect_sub(out);
            }
            Formula::Interp(a, b) => {
                out.insert(a.interp_bot());
                out.insert(b.interp_bot());
                out.insert(Formula::Bot);
                a.collect_sub(out);
                b.collect_sub(out);
            }
        }
    }

    pub fn vocabulary(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vocab(&mut out);
        out
    }

    fn collect_vocab(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(n) => {
                out.insert(n.to_string());
            }
            Formula::Bot => {}
            Formula::Imp(a, b) | Formula::Interp(a, b) => {
                a.collect_vocab(out);
                b.collect_vocab(out);
            }
        }
    }

    pub fn contains_atom(&self, name: &str) -> bool {
        match self {
            Formula::Atom(n) => &**n == name,
            Formula::Bot => false,
            Formula::Imp(a, b) | Formula::Interp(a, b) => {
                a.contains_atom(name) || b.contains_atom(name)
            }
        }
    }

    /// Simultaneous substitution.
    pub fn substitute(&self, s: &SubstitutionMap) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(n) => s.get(&**n).cloned().unwrap_or_else(|| self.clone()),
            Formula::Bot => Formula::Bot,
            Formula::Imp(a, b) => {
                let (na, nb) = (a.substitute(s), b.substitute(s));
                if na == **a && nb == **b {
                    self.clone()
                } else {
                    Formula::Imp(Arc::new(na), Arc::new(nb))
                }
            }
            Formula::Interp(a, b) => {
                let (na, nb) = (a.substitute(s), b.substitute(s));
                if na == **a && nb == **b {
                    self.clone()
                } else {
                    Formula::Interp(Arc::new(na), Arc::new(nb))
                }
            }
        }
    }

    pub fn substitute_one(&self, name: &str, by: &Formula) -> Formula {
        let mut s = SubstitutionMap::new();
        s.insert(name.to_string(), by.clone());
        self.substitute(&s)
    }

    /// True when every occurrence of the atom lies under some ⊳.
    pub fn is_modalized_in(&self, name: &str) -> bool {
        match self {
            Formula::Atom(n) => &**n != name,
            Formula::Bot | Formula::Interp(..) => true,
            Formula::Imp(a, b) => a.is_modalized_in(name) && b.is_modalized_in(name),
        }
    }

    /// The ♯-translation: (φ⊳ψ)♯ = dnec(φ♯ ⊳ ψ♯), homomorphic elsewhere.
    pub fn sharp(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Bot => self.clone(),
            Formula::Imp(a, b) => Formula::imp(&a.sharp(), &b.sharp()),
            Formula::Interp(a, b) => Formula::interp(&a.sharp(), &b.sharp()).dnec(),
        }
    }

    pub fn print(&self, sugar: bool) -> String {
        let mut out = String::new();
        if sugar {
            write_sugar(self, 0, &mut out);
        } else {
            write_plain(self, 0, &mut out);
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print(true))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print(true))
    }
}

// Precedence levels, loosest first.
const L_IMP: u8 = 0;
const L_INTERP: u8 = 1;
const L_OR: u8 = 2;
const L_AND: u8 = 3;
const L_UNARY: u8 = 4;

fn sugar_level(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Bot => L_UNARY,
        Formula::Imp(..) => {
            if f.is_top() || f.as_diamond().is_some() {
                L_UNARY
            } else if f.as_and().is_some() {
                L_AND
            } else if f.as_neg().is_some() {
                L_UNARY
            } else if f.as_or().is_some() {
                L_OR
            } else {
                L_IMP
            }
        }
        Formula::Interp(..) => {
            if f.as_box().is_some() {
                L_UNARY
            } else {
                L_INTERP
            }
        }
    }
}

fn write_sugar(f: &Formula, min: u8, out: &mut String) {
    let level = sugar_level(f);
    let paren = level < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Atom(n) => out.push_str(n),
        Formula::Bot => out.push('F'),
        Formula::Imp(a, b) => {
            if f.is_top() {
                out.push('T');
            } else if let Some(x) = f.as_diamond() {
                out.push_str("<>");
                write_sugar(x, L_UNARY, out);
            } else if let Some((x, y)) = f.as_and() {
                write_sugar(x, L_AND, out);
                out.push_str(" & ");
                write_sugar(y, L_UNARY, out);
            } else if let Some(x) = f.as_neg() {
                out.push('~');
                write_sugar(x, L_UNARY, out);
            } else if let Some((x, y)) = f.as_or() {
                write_sugar(x, L_OR, out);
                out.push_str(" | ");
                write_sugar(y, L_AND, out);
            } else {
                write_sugar(a, L_INTERP, out);
                out.push_str(" -> ");
                write_sugar(b, L_IMP, out);
            }
        }
        Formula::Interp(a, b) => {
            if let Some(x) = f.as_box() {
                out.push_str("[]");
                write_sugar(x, L_UNARY, out);
            } else {
                write_sugar(a, L_INTERP, out);
                out.push_str(" |> ");
                write_sugar(b, L_OR, out);
            }
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_plain(f: &Formula, min: u8, out: &mut String) {
    match f {
        Formula::Atom(n) => out.push_str(n),
        Formula::Bot => out.push('F'),
        Formula::Imp(a, b) => {
            let paren = min > L_IMP;
            if paren {
                out.push('(');
            }
            write_plain(a, L_INTERP, out);
            out.push_str(" -> ");
            write_plain(b, L_IMP, out);
            if paren {
                out.push(')');
            }
        }
        Formula::Interp(a, b) => {
            let paren = min > L_INTERP;
            if paren {
                out.push('(');
            }
            write_plain(a, L_INTERP, out);
            out.push_str(" |> ");
            write_plain(b, L_OR, out);
            if paren {
                out.push(')');
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Atom(String),
    False,
    True,
    Not,
    Box,
    Diamond,
    And,
    Or,
    Interp,
    Imp,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

pub(crate) fn lex(text: &str, allow_reserved: bool) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let syntax = |pos: usize, msg: &str| FormulaError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let tok = if c.is_ascii_lowercase() {
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((Tok::Atom(text[start..i].to_string()), start));
            continue;
        } else if c == b'$' {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &text[start..i];
            if !name.starts_with(RESERVED_PREFIX) || name.len() == RESERVED_PREFIX.len() {
                return Err(syntax(start, "unexpected `$`"));
            }
            if !allow_reserved {
                return Err(FormulaError::ReservedName {
                    name: name.to_string(),
                    pos: start,
                });
            }
            out.push((Tok::Atom(name.to_string()), start));
            continue;
        } else if rest.starts_with("|>") {
            i += 2;
            Tok::Interp
        } else if rest.starts_with("->") {
            i += 2;
            Tok::Imp
        } else if rest.starts_with("=>") {
            i += 2;
            Tok::Turnstile
        } else if rest.starts_with("[]") {
            i += 2;
            Tok::Box
        } else if rest.starts_with("<>") {
            i += 2;
            Tok::Diamond
        } else {
            i += 1;
            match c {
                b'F' => Tok::False,
                b'T' => Tok::True,
                b'~' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(syntax(start, &format!("unexpected character `{ch}`")));
                }
            }
        };
        if matches!(tok, Tok::False | Tok::True)
            && i < bytes.len()
            && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
        {
            return Err(syntax(start, "atoms must start with a lowercase letter"));
        }
        out.push((tok, start));
    }
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    pub(crate) fn new(toks: Vec<(Tok, usize)>, end: usize) -> Self {
        Parser { toks, pos: 0, end }
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn error(&self, msg: &str) -> FormulaError {
        FormulaError::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, FormulaError> {
        let left = self.interp_level()?;
        if self.peek() == Some(&Tok::Imp) {
            self.bump();
            let right = self.formula()?;
            return Ok(Formula::imp(&left, &right));
        }
        Ok(left)
    }

    fn interp_level(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.or_level()?;
        while self.peek() == Some(&Tok::Interp) {
            self.bump();
            let right = self.or_level()?;
            left = Formula::interp(&left, &right);
        }
        Ok(left)
    }

    fn or_level(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.and_level()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let right = self.and_level()?;
            left = Formula::or(&left, &right);
        }
        Ok(left)
    }

    fn and_level(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(&left, &right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some(Tok::Box) => {
                self.bump();
                Ok(self.unary()?.boxed())
            }
            Some(Tok::Diamond) => {
                self.bump();
                Ok(self.unary()?.diamond())
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(f)
            }
            Some(Tok::Atom(_)) => match self.bump() {
                Some(Tok::Atom(n)) => Ok(Formula::atom(&n)),
                _ => unreachable!(),
            },
            Some(Tok::False) => {
                self.bump();
                Ok(Formula::Bot)
            }
            Some(Tok::True) => {
                self.bump();
                Ok(Formula::top())
            }
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a formula, expanding all sugar into core connectives.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    parse_with(text, false)
}

/// Like [`parse`], optionally admitting reserved bound-variable atoms.
pub fn parse_with(text: &str, allow_reserved: bool) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(lex(text, allow_reserved)?, text.len());
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

/// Parses a comma separated list of atom names.
pub fn parse_vocabulary(text: &str) -> Result<Vocabulary, FormulaError> {
    let mut out = Vocabulary::new();
    for (i, part) in text.split(',').enumerate() {
        let name = part.trim();
        if name.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(FormulaError::Syntax {
                pos: i,
                msg: "empty vocabulary entry".into(),
            });
        }
        match parse(name)? {
            Formula::Atom(n) => {
                out.insert(n.to_string());
            }
            _ => {
                return Err(FormulaError::Syntax {
                    pos: 0,
                    msg: format!("`{name}` is not an atom"),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn precedence_of_interp_over_imp() {
        let f = parse("p |> q -> r").unwrap();
        assert_eq!(
            f,
            Formula::imp(&Formula::interp(&p(), &q()), &Formula::atom("r"))
        );
    }

    #[test]
    fn box_expands() {
        assert_eq!(
            parse("[]p").unwrap(),
            Formula::interp(&Formula::imp(&p(), &Formula::Bot), &Formula::Bot)
        );
    }

    #[test]
    fn associativity() {
        let f = parse("p -> q -> r").unwrap();
        assert_eq!(f, Formula::imp(&p(), &Formula::imp(&q(), &Formula::atom("r"))));
        let g = parse("p |> q |> r").unwrap();
        assert_eq!(g, Formula::interp(&Formula::interp(&p(), &q()), &Formula::atom("r")));
        let h = parse("p | q & r").unwrap();
        assert_eq!(h, Formula::or(&p(), &Formula::and(&q(), &Formula::atom("r"))));
    }

    #[test]
    fn reserved_and_syntax_errors() {
        assert!(matches!(
            parse("$x_w1 -> p"),
            Err(FormulaError::ReservedName { .. })
        ));
        assert!(parse_with("$x_w1 -> p", true).is_ok());
        assert!(matches!(parse("p |>"), Err(FormulaError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("P"), Err(FormulaError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("(p"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse("p q"), Err(FormulaError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn printing() {
        assert_eq!(Formula::interp(&p(), &q()).print(true), "p |> q");
        assert_eq!(p().neg().print(true), "~p");
        assert_eq!(p().neg().print(false), "p -> F");
        assert_eq!(Formula::top().print(true), "T");
        assert_eq!(p().boxed().print(true), "[]p");
        assert_eq!(p().diamond().print(true), "<>p");
        assert_eq!(Formula::and(&p(), &q()).print(true), "p & q");
        assert_eq!(Formula::or(&p(), &q()).print(true), "p | q");
    }

    #[test]
    fn sizes() {
        assert_eq!(Formula::Bot.size(), 1);
        assert_eq!(Formula::imp(&p(), &q()).size(), 3);
        assert_eq!(p().boxed().size(), 5);
    }

    #[test]
    fn subformula_sets() {
        let s = Formula::interp(&p(), &q()).subformulas();
        let expected: BTreeSet<Formula> = [
            Formula::interp(&p(), &q()),
            p().interp_bot(),
            q().interp_bot(),
            Formula::Bot,
            p(),
            q(),
        ]
        .into_iter()
        .collect();
        assert_eq!(s, expected);
        assert_eq!(p().subformulas().len(), 1);
        // ⊥⊳⊥ is the one formula that can escape closure.
        let inner = p().interp_bot().subformulas();
        assert!(inner.contains(&Formula::Bot.interp_bot()));
        assert!(!s.contains(&Formula::Bot.interp_bot()));
    }

    #[test]
    fn vocabulary_and_substitution() {
        let f = Formula::interp(&p(), &q().neg());
        assert_eq!(f.vocabulary(), ["p", "q"].iter().map(|s| s.to_string()).collect());
        assert!(Formula::Bot.vocabulary().is_empty());
        let x = Formula::atom("x");
        let y = Formula::atom("y");
        assert_eq!(x.interp_bot().substitute_one("x", &p()), p().interp_bot());
        assert_eq!(p().substitute_one("x", &q()), p());
        let mut s = SubstitutionMap::new();
        s.insert("x".into(), y.clone());
        s.insert("y".into(), x.clone());
        assert_eq!(Formula::imp(&x, &y).substitute(&s), Formula::imp(&y, &x));
    }

    #[test]
    fn abbreviations() {
        assert_eq!(
            abbrev(Abbrev::Box, &[p()]).unwrap(),
            Formula::interp(&p().neg(), &Formula::Bot)
        );
        assert_eq!(
            abbrev(Abbrev::Dnec, &[p()]).unwrap(),
            Formula::and(&p(), &Formula::interp(&p().neg(), &Formula::Bot))
        );
        assert_eq!(
            abbrev(Abbrev::Bnec, &[p()]).unwrap(),
            Formula::and(&p().interp_bot(), &p())
        );
        assert!(matches!(
            abbrev(Abbrev::And, &[p()]),
            Err(FormulaError::Arity { .. })
        ));
        assert_eq!(Formula::conj(&[]), Formula::top());
        assert_eq!(Formula::disj(&[]), Formula::Bot);
        assert_eq!(
            Formula::conj(&[p(), q(), p()]),
            Formula::and(&p(), &Formula::and(&q(), &p()))
        );
    }

    #[test]
    fn sharp_translation() {
        assert_eq!(p().sharp(), p());
        let pq = Formula::interp(&p(), &q());
        assert_eq!(pq.sharp(), Formula::and(&pq, &pq.neg().interp_bot()));
        assert_eq!(p().boxed().sharp(), p().boxed().dnec());
    }

    #[test]
    fn modalization() {
        let x = Formula::atom("x");
        assert!(x.boxed().is_modalized_in("x"));
        assert!(!Formula::imp(&x, &x.boxed()).is_modalized_in("x"));
        assert!(p().is_modalized_in("x"));
    }
}
