//! Rule instances, calculi, and premise computation.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cyclic::CyclicProof;
use crate::formula::Formula;
use crate::sequent::{Multiset, Sequent, Side};

/// Ordering, principal formula and weakening split of a ⊳ rule instance.
///
/// `ordering[i] = (φᵢ, ψᵢ)` stands for φᵢ⊳ψᵢ on the left and
/// `principal = (ψ_m, φ)` for ψ_m⊳φ on the right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModalData {
    pub ordering: Vec<(Formula, Formula)>,
    pub principal: (Formula, Formula),
    pub weak_left: Multiset,
    pub weak_right: Multiset,
}

impl ModalData {
    pub fn ordering_formulas(&self) -> Multiset {
        self.ordering
            .iter()
            .map(|(a, b)| Formula::interp(a, b))
            .collect()
    }

    pub fn principal_formula(&self) -> Formula {
        Formula::interp(&self.principal.0, &self.principal.1)
    }

    pub fn antecedents(&self) -> Vec<Formula> {
        self.ordering.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn conclusion(&self) -> Sequent {
        Sequent::new(
            self.ordering_formulas().union(&self.weak_left),
            self.weak_right.with(self.principal_formula()),
        )
    }

    pub fn antecedents_distinct(&self) -> bool {
        let mut a = self.antecedents();
        a.sort();
        a.windows(2).all(|w| w[0] != w[1])
    }

    /// Premises for i = m..0. With `diagonal`, premise i also carries ψᵢ⊳⊥.
    pub fn premises(&self, diagonal: bool) -> Vec<Sequent> {
        let m = self.ordering.len();
        let phi = &self.principal.1;
        let mut out = Vec::with_capacity(m + 1);
        for i in (0..=m).rev() {
            let psi = if i == m {
                &self.principal.0
            } else {
                &self.ordering[i].1
            };
            let mut prefix: Vec<Formula> = self.ordering[..i].iter().map(|(a, _)| a.clone()).collect();
            prefix.push(phi.clone());
            let mut boxed: Vec<Formula> = prefix.iter().map(|f| f.interp_bot()).collect();
            if diagonal {
                boxed.push(psi.interp_bot());
            }
            boxed.push(psi.clone());
            out.push(Sequent::from_vecs(boxed, prefix));
        }
        out
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum RuleApp {
    Ax { atom: Formula },
    BotL,
    BotR,
    ImpL { left: Formula, right: Formula },
    ImpR { left: Formula, right: Formula },
    InterpIL(ModalData),
    InterpIK4(ModalData),
    InterpIK4Slim(ModalData),
    Cut { formula: Formula },
    Wk { add_left: Multiset, add_right: Multiset },
    Ctr { dup_left: Multiset, dup_right: Multiset },
    Equiv {
        from: Formula,
        to: Formula,
        side: Side,
        certificate: Option<Arc<CyclicProof>>,
    },
    Empty,
    Repeat,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CalculusId {
    Fgil,
    FgilCut,
    Gil,
    GilCut,
    GilSlim,
    AuxGil,
}

impl CalculusId {
    pub fn name(self) -> &'static str {
        match self {
            CalculusId::Fgil => "fgil",
            CalculusId::FgilCut => "fgil-cut",
            CalculusId::Gil => "gil",
            CalculusId::GilCut => "gil-cut",
            CalculusId::GilSlim => "gil-slim",
            CalculusId::AuxGil => "aux-gil",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "fgil" => CalculusId::Fgil,
            "fgil-cut" => CalculusId::FgilCut,
            "gil" => CalculusId::Gil,
            "gil-cut" => CalculusId::GilCut,
            "gil-slim" => CalculusId::GilSlim,
            "aux-gil" => CalculusId::AuxGil,
            _ => return None,
        })
    }

    pub fn admits(self, r: &RuleApp) -> bool {
        use CalculusId::*;
        match r {
            RuleApp::Ax { .. }
            | RuleApp::BotL
            | RuleApp::BotR
            | RuleApp::ImpL { .. }
            | RuleApp::ImpR { .. } => true,
            RuleApp::InterpIL(_) => matches!(self, Fgil | FgilCut),
            RuleApp::InterpIK4(_) => matches!(self, Gil | GilCut | AuxGil),
            RuleApp::InterpIK4Slim(_) => matches!(self, Gil | GilCut | GilSlim | AuxGil),
            RuleApp::Cut { .. } => matches!(self, FgilCut | GilCut),
            RuleApp::Wk { .. } | RuleApp::Ctr { .. } | RuleApp::Equiv { .. } => self == AuxGil,
            RuleApp::Empty | RuleApp::Repeat => false,
        }
    }

    pub fn is_cut_free(self) -> bool {
        !matches!(self, CalculusId::FgilCut | CalculusId::GilCut)
    }
}

impl fmt::Display for CalculusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule mismatch: {0}")]
pub struct RuleMismatch(pub String);

impl RuleApp {
    pub fn name(&self) -> &'static str {
        match self {
            RuleApp::Ax { .. } => "Ax",
            RuleApp::BotL => "BotL",
            RuleApp::BotR => "BotR",
            RuleApp::ImpL { .. } => "ImpL",
            RuleApp::ImpR { .. } => "ImpR",
            RuleApp::InterpIL(_) => "InterpIL",
            RuleApp::InterpIK4(_) => "InterpIK4",
            RuleApp::InterpIK4Slim(_) => "InterpIK4Slim",
            RuleApp::Cut { .. } => "Cut",
            RuleApp::Wk { .. } => "Wk",
            RuleApp::Ctr { .. } => "Ctr",
            RuleApp::Equiv { .. } => "Equiv",
            RuleApp::Empty => "Empty",
            RuleApp::Repeat => "Repeat",
        }
    }

    /// All premises of ⊳_IK4 and its slim variant progress; nothing else does.
    pub fn is_progressing(&self) -> bool {
        matches!(self, RuleApp::InterpIK4(_) | RuleApp::InterpIK4Slim(_))
    }

    pub fn modal_data(&self) -> Option<&ModalData> {
        match self {
            RuleApp::InterpIL(d) | RuleApp::InterpIK4(d) | RuleApp::InterpIK4Slim(d) => Some(d),
            _ => None,
        }
    }

    /// Same rule kind with different modal data.
    pub fn with_modal_data(&self, d: ModalData) -> RuleApp {
        match self {
            RuleApp::InterpIL(_) => RuleApp::InterpIL(d),
            RuleApp::InterpIK4Slim(_) => RuleApp::InterpIK4Slim(d),
            _ => RuleApp::InterpIK4(d),
        }
    }

    pub fn premises_of(&self, s: &Sequent) -> Result<Vec<Sequent>, RuleMismatch> {
        let missing = |what: &str, f: &Formula| RuleMismatch(format!("{what} `{f}` not in {s}"));
        match self {
            RuleApp::Ax { atom } => {
                if !atom.is_atom() {
                    return Err(RuleMismatch(format!("Ax on non-atom `{atom}`")));
                }
                if !s.left.contains(atom) || !s.right.contains(atom) {
                    return Err(missing("atom", atom));
                }
                Ok(vec![])
            }
            RuleApp::BotL => {
                if !s.left.contains(&Formula::Bot) {
                    return Err(missing("left", &Formula::Bot));
                }
                Ok(vec![])
            }
            RuleApp::BotR => {
                let right = s
                    .right
                    .without(&Formula::Bot)
                    .ok_or_else(|| missing("right", &Formula::Bot))?;
                Ok(vec![Sequent::new(s.left.clone(), right)])
            }
            RuleApp::ImpL { left, right } => {
                let f = Formula::imp(left, right);
                let gamma = s.left.without(&f).ok_or_else(|| missing("left", &f))?;
                Ok(vec![
                    Sequent::new(gamma.clone(), s.right.with(left.clone())),
                    Sequent::new(gamma.with(right.clone()), s.right.clone()),
                ])
            }
            RuleApp::ImpR { left, right } => {
                let f = Formula::imp(left, right);
                let delta = s.right.without(&f).ok_or_else(|| missing("right", &f))?;
                Ok(vec![Sequent::new(
                    s.left.with(left.clone()),
                    delta.with(right.clone()),
                )])
            }
            RuleApp::InterpIL(d) | RuleApp::InterpIK4(d) | RuleApp::InterpIK4Slim(d) => {
                if d.conclusion() != *s {
                    return Err(RuleMismatch(format!(
                        "{} data concludes {} rather than {s}",
                        self.name(),
                        d.conclusion()
                    )));
                }
                if matches!(self, RuleApp::InterpIK4Slim(_)) && !d.antecedents_distinct() {
                    return Err(RuleMismatch("slim ordering repeats an antecedent".into()));
                }
                Ok(d.premises(matches!(self, RuleApp::InterpIL(_))))
            }
            RuleApp::Cut { formula } => Ok(vec![s.add_right(formula.clone()), s.add_left(formula.clone())]),
            RuleApp::Wk { add_left, add_right } => {
                let l = s.left.minus(add_left);
                let r = s.right.minus(add_right);
                match (l, r) {
                    (Some(l), Some(r)) => Ok(vec![Sequent::new(l, r)]),
                    _ => Err(RuleMismatch(format!("weakened material not in {s}"))),
                }
            }
            RuleApp::Ctr { dup_left, dup_right } => {
                if !dup_left.is_submultiset(&s.left) || !dup_right.is_submultiset(&s.right) {
                    return Err(RuleMismatch(format!("contracted material not in {s}")));
                }
                Ok(vec![s.weakened(dup_left, dup_right)])
            }
            RuleApp::Equiv { from, to, side, .. } => {
                let mut prem = s.clone();
                if !prem.side_mut(*side).remove(to) {
                    return Err(missing("equivalence target", to));
                }
                prem.side_mut(*side).insert(from.clone());
                Ok(vec![prem])
            }
            RuleApp::Empty => {
                if !s.is_empty() {
                    return Err(RuleMismatch(format!("Empty on non-empty {s}")));
                }
                Ok(vec![])
            }
            RuleApp::Repeat => Ok(vec![]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::sequent::parse_sequent;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn ik4_premises_from_axiom_lemma() {
        let d = ModalData {
            ordering: vec![(f("p"), f("q"))],
            principal: (f("p"), f("q")),
            weak_left: Multiset::new(),
            weak_right: Multiset::new(),
        };
        let s = parse_sequent("p |> q => p |> q").unwrap();
        let prem = RuleApp::InterpIK4(d.clone()).premises_of(&s).unwrap();
        assert_eq!(
            prem,
            vec![
                parse_sequent("p, p |> F, q |> F => p, q").unwrap(),
                parse_sequent("q, q |> F => q").unwrap()
            ]
        );
        let il = RuleApp::InterpIL(d).premises_of(&s).unwrap();
        assert_eq!(
            il,
            vec![
                parse_sequent("p, p |> F, p |> F, q |> F => p, q").unwrap(),
                parse_sequent("q, q |> F, q |> F => q").unwrap()
            ]
        );
    }

    #[test]
    fn propositional_premises() {
        let s = parse_sequent("=> p -> q").unwrap();
        let r = RuleApp::ImpR {
            left: f("p"),
            right: f("q"),
        };
        assert_eq!(r.premises_of(&s).unwrap(), vec![parse_sequent("p => q").unwrap()]);
        let c = RuleApp::Cut { formula: f("r") };
        let g = parse_sequent("p => q").unwrap();
        assert_eq!(
            c.premises_of(&g).unwrap(),
            vec![parse_sequent("p => q, r").unwrap(), parse_sequent("r, p => q").unwrap()]
        );
        assert!(RuleApp::BotR.premises_of(&g).is_err());
        assert!(RuleApp::Ax { atom: f("p") }.premises_of(&g).is_err());
    }

    #[test]
    fn calculus_membership() {
        let d = ModalData {
            ordering: vec![],
            principal: (f("p"), f("q")),
            weak_left: Multiset::new(),
            weak_right: Multiset::new(),
        };
        assert!(CalculusId::Fgil.admits(&RuleApp::InterpIL(d.clone())));
        assert!(!CalculusId::Gil.admits(&RuleApp::InterpIL(d.clone())));
        assert!(!CalculusId::GilSlim.admits(&RuleApp::InterpIK4(d.clone())));
        assert!(CalculusId::GilSlim.admits(&RuleApp::InterpIK4Slim(d)));
        assert!(!CalculusId::Fgil.admits(&RuleApp::Cut { formula: f("p") }));
    }
}
