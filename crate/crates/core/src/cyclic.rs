//! Cyclic proofs: finite trees whose Repeat leaves point back to ancestors.

use crate::proof::{CheckError, CheckReason, NodeRef, Proof};
use crate::rules::{CalculusId, RuleApp};
use crate::sequent::Sequent;

#[derive(Clone, PartialEq, Debug)]
pub struct CNode {
    pub sequent: Sequent,
    pub rule: RuleApp,
    pub children: Vec<usize>,
    pub backlink: Option<usize>,
}

/// Arena of nodes; node 0 is the root.
#[derive(Clone, PartialEq, Debug)]
pub struct CyclicProof {
    pub calculus: CalculusId,
    pub nodes: Vec<CNode>,
}

impl CyclicProof {
    pub fn root_sequent(&self) -> &Sequent {
        &self.nodes[0].sequent
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Wraps a wellfounded proof without assumptions.
    pub fn from_proof(p: &Proof, calculus: CalculusId) -> Option<CyclicProof> {
        fn go(p: &Proof, nodes: &mut Vec<CNode>) -> Option<usize> {
            let id = nodes.len();
            nodes.push(CNode {
                sequent: p.sequent.clone(),
                rule: p.rule.clone()?,
                children: vec![],
                backlink: None,
            });
            let mut kids = Vec::with_capacity(p.children.len());
            for c in &p.children {
                kids.push(go(c, nodes)?);
            }
            nodes[id].children = kids;
            Some(id)
        }
        let mut nodes = Vec::new();
        go(p, &mut nodes)?;
        Some(CyclicProof { calculus, nodes })
    }

    /// Parent of every node, or None for the root and for unreachable ids.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut par = vec![None; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                if c < par.len() {
                    par[c] = Some(i);
                }
            }
        }
        par
    }

    pub fn repeat_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.backlink.is_some()).count()
    }

    pub fn is_acyclic(&self) -> bool {
        self.repeat_count() == 0
    }

    /// Height of the main local fragment of the root, ignoring backlinks.
    pub fn local_height(&self) -> usize {
        self.local_height_at(0)
    }

    pub fn local_height_at(&self, id: usize) -> usize {
        let n = &self.nodes[id];
        if n.rule.is_progressing() {
            return 0;
        }
        n.children
            .iter()
            .map(|&c| self.local_height_at(c) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Finds the node ids reachable from `id` without crossing a Repeat.
    pub fn subtree(&self, id: usize) -> Vec<usize> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.nodes[out[i]].children.iter().copied());
            i += 1;
        }
        out
    }
}

pub fn check_cyclic(p: &CyclicProof) -> Result<(), CheckError> {
    check_cyclic_in(p, p.calculus)
}

/// Checks structure, backlink targets, progress and then rule instances, in
/// that order.
pub fn check_cyclic_in(p: &CyclicProof, c: CalculusId) -> Result<(), CheckError> {
    let at = |id: usize, reason| CheckError {
        node: NodeRef::Id(id),
        reason,
    };
    let n = p.nodes.len();
    if n == 0 {
        return Err(at(0, CheckReason::Structure("empty proof".into())));
    }
    let mut parent = vec![None; n];
    for (i, node) in p.nodes.iter().enumerate() {
        for &ch in &node.children {
            if ch >= n {
                return Err(at(i, CheckReason::Structure(format!("child {ch} out of range"))));
            }
            if ch == 0 || parent[ch].is_some() {
                return Err(at(ch, CheckReason::Structure("node has several parents".into())));
            }
            parent[ch] = Some(i);
        }
        match (&node.rule, node.backlink) {
            (RuleApp::Repeat, None) => {
                return Err(at(i, CheckReason::Structure("Repeat without backlink".into())))
            }
            (RuleApp::Repeat, Some(_)) if !node.children.is_empty() => {
                return Err(at(i, CheckReason::Structure("Repeat with children".into())))
            }
            (r, Some(_)) if !matches!(r, RuleApp::Repeat) => {
                return Err(at(i, CheckReason::Structure("backlink on a non-Repeat node".into())))
            }
            _ => {}
        }
    }
    // every node reachable from the root, so the parent relation is a tree
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        if seen[i] {
            return Err(at(i, CheckReason::Structure("child relation has a cycle".into())));
        }
        seen[i] = true;
        stack.extend(p.nodes[i].children.iter().copied());
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(at(i, CheckReason::Structure("unreachable node".into())));
    }

    for (i, node) in p.nodes.iter().enumerate() {
        let Some(t) = node.backlink else { continue };
        let mut cur = parent[i];
        let mut found = false;
        let mut progress = false;
        while let Some(a) = cur {
            if p.nodes[a].rule.is_progressing() {
                progress = true;
            }
            if a == t {
                found = true;
                break;
            }
            cur = parent[a];
        }
        if !found || p.nodes[t].sequent != node.sequent {
            return Err(at(i, CheckReason::BadTarget));
        }
        if !progress {
            return Err(at(i, CheckReason::NoProgress));
        }
    }

    for (i, node) in p.nodes.iter().enumerate() {
        if matches!(node.rule, RuleApp::Repeat) {
            continue;
        }
        if !c.admits(&node.rule) {
            return Err(at(i, CheckReason::RuleNotAdmitted(node.rule.name().into())));
        }
        let prem = node
            .rule
            .premises_of(&node.sequent)
            .map_err(|e| at(i, CheckReason::RuleMismatch(e.0)))?;
        if prem.len() != node.children.len()
            || prem
                .iter()
                .zip(&node.children)
                .any(|(s, &ch)| *s != p.nodes[ch].sequent)
        {
            return Err(at(
                i,
                CheckReason::RuleMismatch(format!("children of {} do not match its premises", node.rule.name())),
            ));
        }
    }
    Ok(())
}

/// Expands backlinks by copying target subtrees, at most `fuel` times along
/// any branch; Repeat leaves left over become assumptions.
pub fn unfold(p: &CyclicProof, fuel: usize) -> Proof {
    fn go(p: &CyclicProof, id: usize, fuel: usize) -> Proof {
        let n = &p.nodes[id];
        if let Some(t) = n.backlink {
            return if fuel == 0 {
                Proof::assumption(n.sequent.clone())
            } else {
                go(p, t, fuel - 1)
            };
        }
        Proof {
            sequent: n.sequent.clone(),
            rule: Some(n.rule.clone()),
            children: n.children.iter().map(|&c| go(p, c, fuel)).collect(),
        }
    }
    go(p, 0, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::proof::{ax_proof, check_proof_with, CheckOptions, ModalTarget};
    use crate::sequent::Multiset;

    fn acyclic() -> CyclicProof {
        let p = ax_proof(
            &crate::formula::parse("p |> q").unwrap(),
            &Multiset::new(),
            &Multiset::new(),
            ModalTarget::Gil,
        );
        CyclicProof::from_proof(&p, CalculusId::Gil).unwrap()
    }

    #[test]
    fn acyclic_round_trip() {
        let c = acyclic();
        check_cyclic(&c).unwrap();
        assert_eq!(unfold(&c, 0), unfold(&c, 3));
        assert_eq!(c.local_height(), 0);
    }

    #[test]
    fn structural_errors() {
        let mut c = acyclic();
        c.nodes[0].children.push(1);
        assert!(matches!(
            check_cyclic(&c).unwrap_err().reason,
            CheckReason::Structure(_)
        ));
    }

    /// ⇒ ⊤⊳⊥ style loop: a ⊳ node whose premise repeats the root.
    #[test]
    fn backlink_targets_and_progress() {
        let root = Sequent::new(Multiset::new(), Multiset::singleton(Formula::top()));
        let inner = Sequent::new(Multiset::singleton(Formula::Bot), Multiset::singleton(Formula::Bot));
        let c = CyclicProof {
            calculus: CalculusId::Gil,
            nodes: vec![
                CNode {
                    sequent: root.clone(),
                    rule: RuleApp::ImpR {
                        left: Formula::Bot,
                        right: Formula::Bot,
                    },
                    children: vec![1],
                    backlink: None,
                },
                CNode {
                    sequent: inner.clone(),
                    rule: RuleApp::BotL,
                    children: vec![],
                    backlink: None,
                },
            ],
        };
        check_cyclic(&c).unwrap();
        let mut bad = c.clone();
        bad.nodes[1] = CNode {
            sequent: inner.clone(),
            rule: RuleApp::Repeat,
            children: vec![],
            backlink: Some(0),
        };
        assert_eq!(check_cyclic(&bad).unwrap_err().reason, CheckReason::BadTarget);
        bad.nodes[1].sequent = root.clone();
        assert_eq!(check_cyclic(&bad).unwrap_err().reason, CheckReason::NoProgress);
        let u = unfold(&bad, 0);
        assert!(u.children[0].is_assumption());
        let opts = CheckOptions {
            allow_assumptions: true,
            ..Default::default()
        };
        assert!(check_proof_with(&u, CalculusId::Gil, opts).is_err());
    }
}
