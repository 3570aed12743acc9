//! Cut-free fGIL proofs of the modal axiom schemes of IL.

use crate::formula::{Formula, FormulaError};
use crate::hilbert::{axiom_instance, AxiomScheme};
use crate::proof::{and_l, neg_l, neg_r, or_l, prove_by_ax, ModalTarget, Proof};
use crate::rules::{ModalData, RuleApp};
use crate::sequent::Sequent;

fn ax(s: &Sequent, f: &Formula) -> Proof {
    prove_by_ax(s, f, ModalTarget::Fgil)
}

fn bot_l(s: &Sequent) -> Proof {
    Proof::node(s.clone(), RuleApp::BotL, vec![])
}

fn t_imp_r(s: &Sequent, k: impl FnOnce(&Sequent) -> Proof) -> Proof {
    let f = s
        .right
        .iter()
        .find(|f| f.is_imp())
        .expect("implication on the right")
        .clone();
    let (a, b) = f.as_imp().expect("implication");
    let rule = RuleApp::ImpR {
        left: a.clone(),
        right: b.clone(),
    };
    let prem = rule.premises_of(s).expect("→R applies");
    let child = k(&prem[0]);
    Proof::node(s.clone(), rule, vec![child])
}

fn t_imp_l(
    s: &Sequent,
    a: &Formula,
    b: &Formula,
    k0: impl FnOnce(&Sequent) -> Proof,
    k1: impl FnOnce(&Sequent) -> Proof,
) -> Proof {
    let rule = RuleApp::ImpL {
        left: a.clone(),
        right: b.clone(),
    };
    let prem = rule.premises_of(s).expect("→L applies");
    let kids = vec![k0(&prem[0]), k1(&prem[1])];
    Proof::node(s.clone(), rule, kids)
}

fn t_neg_l(s: &Sequent, phi: &Formula, k: impl FnOnce(&Sequent) -> Proof) -> Proof {
    let prem = Sequent::new(
        s.left.without(&phi.neg()).expect("¬φ on the left"),
        s.right.with(phi.clone()),
    );
    neg_l(phi, k(&prem)).expect("¬L shape")
}

fn t_neg_r(s: &Sequent, phi: &Formula, k: impl FnOnce(&Sequent) -> Proof) -> Proof {
    let prem = Sequent::new(
        s.left.with(phi.clone()),
        s.right.without(&phi.neg()).expect("¬φ on the right"),
    );
    neg_r(phi, k(&prem)).expect("¬R shape")
}

fn t_and_l(s: &Sequent, a: &Formula, b: &Formula, k: impl FnOnce(&Sequent) -> Proof) -> Proof {
    let prem = Sequent::new(
        s.left
            .without(&Formula::and(a, b))
            .expect("∧ on the left")
            .with(a.clone())
            .with(b.clone()),
        s.right.clone(),
    );
    and_l(a, b, k(&prem)).expect("∧L shape")
}

fn t_or_l(
    s: &Sequent,
    a: &Formula,
    b: &Formula,
    k0: impl FnOnce(&Sequent) -> Proof,
    k1: impl FnOnce(&Sequent) -> Proof,
) -> Proof {
    let rest = s.left.without(&Formula::or(a, b)).expect("∨ on the left");
    let p0 = k0(&Sequent::new(rest.with(a.clone()), s.right.clone()));
    let p1 = k1(&Sequent::new(rest.with(b.clone()), s.right.clone()));
    or_l(a, b, p0, p1).expect("∨L shape")
}

type Closer<'a> = Box<dyn FnOnce(&Sequent) -> Proof + 'a>;

/// ⊳_IL with the weakening split read off the conclusion; closers are given
/// in premise order i = m..0.
fn t_il(s: &Sequent, ordering: Vec<(Formula, Formula)>, principal: (Formula, Formula), closers: Vec<Closer<'_>>) -> Proof {
    let ord: crate::sequent::Multiset = ordering.iter().map(|(a, b)| Formula::interp(a, b)).collect();
    let d = ModalData {
        weak_left: s.left.minus(&ord).expect("ordering on the left"),
        weak_right: s
            .right
            .without(&Formula::interp(&principal.0, &principal.1))
            .expect("principal on the right"),
        ordering,
        principal,
    };
    let rule = RuleApp::InterpIL(d);
    let prem = rule.premises_of(s).expect("⊳_IL applies");
    assert_eq!(prem.len(), closers.len());
    let kids = prem.iter().zip(closers).map(|(p, k)| k(p)).collect();
    Proof::node(s.clone(), rule, kids)
}

/// The schemes with an fGIL proof here; P is not an IL theorem.
pub const SCHEMES: [AxiomScheme; 8] = AxiomScheme::IL;

/// Atoms p, q, r in the argument positions.
pub fn default_args(s: AxiomScheme) -> Vec<Formula> {
    ["p", "q", "r"][..s.arity()].iter().map(|n| Formula::atom(n)).collect()
}

/// File stem of the fixture for a scheme.
pub fn fixture_name(s: AxiomScheme) -> String {
    let n = match s {
        AxiomScheme::Four => "4".to_string(),
        other => other.name().to_ascii_lowercase(),
    };
    format!("appendix_{n}")
}

pub fn appendix_proof(s: AxiomScheme, args: &[Formula]) -> Result<Option<Proof>, FormulaError> {
    let goal = Sequent::goal(axiom_instance(s, args)?);
    let bot = Formula::Bot;
    let p = match s {
        AxiomScheme::K => {
            let (a, b) = (&args[0], &args[1]);
            let ab = Formula::imp(a, b);
            t_imp_r(&goal, |s| {
                t_imp_r(s, |s| {
                    t_il(
                        s,
                        vec![(ab.neg(), bot.clone()), (a.neg(), bot.clone())],
                        (b.neg(), bot.clone()),
                        vec![
                            Box::new(|s: &Sequent| {
                                t_neg_l(s, b, |s| {
                                    t_neg_r(s, &ab, |s| {
                                        t_neg_r(s, a, |s| t_imp_l(s, a, b, |s| ax(s, a), |s| ax(s, b)))
                                    })
                                })
                            }),
                            Box::new(bot_l),
                            Box::new(bot_l),
                        ],
                    )
                })
            })
        }
        AxiomScheme::Four => {
            let a = &args[0];
            t_imp_r(&goal, |s| {
                t_il(
                    s,
                    vec![(a.neg(), bot.clone())],
                    (a.boxed().neg(), bot.clone()),
                    vec![
                        Box::new(|s: &Sequent| t_neg_l(s, &a.boxed(), |s| ax(s, &a.boxed()))),
                        Box::new(bot_l),
                    ],
                )
            })
        }
        AxiomScheme::L => {
            let a = &args[0];
            let ba = Formula::imp(&a.boxed(), a);
            t_imp_r(&goal, |s| {
                t_il(
                    s,
                    vec![(ba.neg(), bot.clone())],
                    (a.neg(), bot.clone()),
                    vec![
                        Box::new(|s: &Sequent| {
                            t_neg_l(s, a, |s| {
                                t_neg_r(s, &ba, |s| {
                                    t_imp_l(s, &a.boxed(), a, |s| ax(s, &a.boxed()), |s| ax(s, a))
                                })
                            })
                        }),
                        Box::new(bot_l),
                    ],
                )
            })
        }
        AxiomScheme::J1 => {
            let (a, b) = (&args[0], &args[1]);
            let ab = Formula::imp(a, b);
            t_imp_r(&goal, |s| {
                t_il(
                    s,
                    vec![(ab.neg(), bot.clone())],
                    (a.clone(), b.clone()),
                    vec![
                        Box::new(|s: &Sequent| t_neg_r(s, &ab, |s| t_imp_l(s, a, b, |s| ax(s, a), |s| ax(s, b)))),
                        Box::new(bot_l),
                    ],
                )
            })
        }
        AxiomScheme::J2 => {
            let (a, b, c) = (&args[0], &args[1], &args[2]);
            let (ac, cb) = (Formula::interp(a, c), Formula::interp(c, b));
            t_imp_r(&goal, |s| {
                t_and_l(s, &ac, &cb, |s| {
                    t_il(
                        s,
                        vec![(c.clone(), b.clone()), (a.clone(), c.clone())],
                        (a.clone(), b.clone()),
                        vec![
                            Box::new(|s: &Sequent| ax(s, a)),
                            Box::new(|s: &Sequent| ax(s, c)),
                            Box::new(|s: &Sequent| ax(s, b)),
                        ],
                    )
                })
            })
        }
        AxiomScheme::J3 => {
            let (a, b, c) = (&args[0], &args[1], &args[2]);
            let (ab, cb) = (Formula::interp(a, b), Formula::interp(c, b));
            t_imp_r(&goal, |s| {
                t_and_l(s, &ab, &cb, |s| {
                    t_il(
                        s,
                        vec![(a.clone(), b.clone()), (c.clone(), b.clone())],
                        (Formula::or(a, c), b.clone()),
                        vec![
                            Box::new(|s: &Sequent| t_or_l(s, a, c, |s| ax(s, a), |s| ax(s, c))),
                            Box::new(|s: &Sequent| ax(s, b)),
                            Box::new(|s: &Sequent| ax(s, b)),
                        ],
                    )
                })
            })
        }
        AxiomScheme::J4 => {
            let (a, b) = (&args[0], &args[1]);
            t_imp_r(&goal, |s| {
                t_imp_r(s, |s| {
                    t_neg_l(s, &a.interp_bot(), |s| {
                        t_neg_r(s, &b.interp_bot(), |s| {
                            t_il(
                                s,
                                vec![(b.clone(), bot.clone()), (a.clone(), b.clone())],
                                (a.clone(), bot.clone()),
                                vec![
                                    Box::new(|s: &Sequent| ax(s, a)),
                                    Box::new(|s: &Sequent| ax(s, b)),
                                    Box::new(bot_l),
                                ],
                            )
                        })
                    })
                })
            })
        }
        AxiomScheme::J5 => {
            let a = &args[0];
            t_il(
                &goal,
                vec![],
                (a.diamond(), a.clone()),
                vec![Box::new(|s: &Sequent| t_neg_l(s, &a.interp_bot(), |s| ax(s, &a.interp_bot())))],
            )
        }
        AxiomScheme::P => return Ok(None),
    };
    Ok(Some(p))
}
