//! Backward proof search in the slim calculus, producing cyclic proofs.
//!
//! Per sequent: close by ⊥L or Ax; close by Repeat if the branch history has
//! the same sequent; apply ⊥R, →R, →L eagerly; otherwise try the slim ⊳ rule.
//! For a principal ψ⊳φ the ordering is grown greedily: the principal premise
//! is tried first, and if it fails the first unused left formula whose own
//! premise succeeds is appended. Premises only gain formulas as the ordering
//! grows, so this finds an ordering whenever one exists.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::cyclic::{CNode, CyclicProof};
use crate::formula::Formula;
use crate::proof::{ax_proof, ModalTarget, Proof};
use crate::rules::{CalculusId, ModalData, RuleApp};
use crate::sequent::{Multiset, Sequent};

const SEARCH_STACK: usize = 256 * 1024 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Safety valve on visited nodes.
    pub max_nodes: usize,
    /// Cap on ordering extensions tried per principal formula.
    pub max_orderings: Option<usize>,
    /// Cap on branch length.
    pub max_depth: Option<usize>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 1_000_000,
            max_orderings: None,
            max_depth: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub explored: usize,
    /// Distinct sequents that occurred as premises of the ⊳ rule.
    pub modal_premises: usize,
    /// |sub(root)|.
    pub k: usize,
    pub max_depth: usize,
}

impl SearchStats {
    /// 2^k·k², saturating.
    pub fn bound(&self) -> u128 {
        let k = self.k as u32;
        if k >= 100 {
            return u128::MAX;
        }
        (1u128 << k).saturating_mul((k as u128) * (k as u128))
    }

    pub fn within_bound(&self) -> bool {
        (self.modal_premises as u128) <= self.bound()
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Provable { proof: CyclicProof, stats: SearchStats },
    Unprovable { explored: usize, frontier: Vec<Sequent>, stats: SearchStats },
    ResourceExhausted { explored: usize },
}

impl SearchOutcome {
    pub fn is_provable(&self) -> bool {
        matches!(self, SearchOutcome::Provable { .. })
    }

    pub fn proof(&self) -> Option<&CyclicProof> {
        match self {
            SearchOutcome::Provable { proof, .. } => Some(proof),
            _ => None,
        }
    }

    pub fn stats(&self) -> Option<&SearchStats> {
        match self {
            SearchOutcome::Provable { stats, .. } | SearchOutcome::Unprovable { stats, .. } => Some(stats),
            SearchOutcome::ResourceExhausted { .. } => None,
        }
    }
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Provable { proof, stats } => write!(
                f,
                "provable ({} nodes, {} backlinks, {} explored)",
                proof.len(),
                proof.repeat_count(),
                stats.explored
            ),
            SearchOutcome::Unprovable { explored, frontier, .. } => {
                write!(f, "unprovable ({explored} explored")?;
                if let Some(s) = frontier.first() {
                    write!(f, ", e.g. saturated at `{s}`")?;
                }
                write!(f, ")")
            }
            SearchOutcome::ResourceExhausted { explored } => write!(f, "resource limit hit after {explored} nodes"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("proof search exhausted its limits after {0} nodes")]
    ResourceExhausted(usize),
}

struct Exhausted;

const FRONTIER_CAP: usize = 64;

/// History dependencies of an open search: lookups that missed, and
/// sequents of backlink targets, with their node ids.
#[derive(Default)]
struct Frame {
    missed: HashSet<u32>,
    hits: HashMap<u32, usize>,
}

struct Searcher {
    lim: SearchLimits,
    arena: Vec<CNode>,
    history: HashMap<Sequent, usize>,
    ids: HashMap<Sequent, u32>,
    history_ids: HashMap<u32, usize>,
    frames: Vec<Frame>,
    /// Only when no proof object is wanted: proved sequents with the
    /// backlink targets their proofs need on the branch.
    build: bool,
    memo: bool,
    proved: HashMap<(u32, bool), Rc<Vec<u32>>>,
    /// A failure stays a failure while none of the recorded misses is on
    /// the branch, since more history can only help.
    refuted: HashMap<(u32, bool), Vec<Rc<HashSet<u32>>>>,
    modal_premises: HashSet<Sequent>,
    frontier: BTreeSet<Sequent>,
    explored: usize,
    depth: usize,
    max_depth: usize,
}

impl Searcher {
    fn new(lim: SearchLimits, build: bool) -> Self {
        Searcher {
            lim,
            build,
            memo: true,
            arena: Vec::new(),
            history: HashMap::new(),
            ids: HashMap::new(),
            history_ids: HashMap::new(),
            frames: Vec::new(),
            proved: HashMap::new(),
            refuted: HashMap::new(),
            modal_premises: HashSet::new(),
            frontier: BTreeSet::new(),
            explored: 0,
            depth: 0,
            max_depth: 0,
        }
    }

    fn leaf(&mut self, id: usize, rule: RuleApp, backlink: Option<usize>) -> Option<usize> {
        self.arena[id].rule = rule;
        self.arena[id].backlink = backlink;
        Some(id)
    }

    fn search(&mut self, s: Sequent, modal_premise: bool) -> Result<Option<usize>, Exhausted> {
        self.explored += 1;
        if self.explored > self.lim.max_nodes {
            return Err(Exhausted);
        }
        if let Some(d) = self.lim.max_depth {
            if self.depth > d {
                return Err(Exhausted);
            }
        }
        self.max_depth = self.max_depth.max(self.depth);
        let id = self.arena.len();
        self.arena.push(CNode {
            sequent: s.clone(),
            rule: RuleApp::Repeat,
            children: vec![],
            backlink: None,
        });
        if s.left.contains(&Formula::Bot) {
            return Ok(self.leaf(id, RuleApp::BotL, None));
        }
        if let Some(a) = s.shared_atom() {
            let atom = a.clone();
            return Ok(self.leaf(id, RuleApp::Ax { atom }, None));
        }
        if let Some(&t) = self.history.get(&s) {
            let key = self.intern(&s);
            if let Some(top) = self.frames.last_mut() {
                top.hits.insert(key, t);
            }
            return Ok(self.leaf(id, RuleApp::Repeat, Some(t)));
        }
        let key = self.intern(&s);
        if let Some(top) = self.frames.last_mut() {
            top.missed.insert(key);
        }
        if let Some(hit) = self.reuse(id, key, modal_premise) {
            return Ok(hit);
        }
        if modal_premise {
            self.modal_premises.insert(s.clone());
            self.enter(&s, id, key);
        }
        self.depth += 1;
        self.frames.push(Frame::default());
        let res = self.expand(id, &s);
        let frame = self.frames.pop().expect("frame pushed above");
        self.depth -= 1;
        if modal_premise {
            self.leave(&s, key);
        }
        let res = res?;
        let external: HashMap<u32, usize> = frame.hits.into_iter().filter(|&(_, t)| t < id).collect();
        if res {
            if !self.build {
                self.proved
                    .insert((key, modal_premise), Rc::new(external.keys().copied().collect()));
            }
        } else {
            self.arena.truncate(id);
        }
        if let Some(top) = self.frames.last_mut() {
            top.missed.extend(frame.missed.iter().copied());
            top.hits.extend(external);
        }
        if !res {
            self.refuted.entry((key, modal_premise)).or_default().push(Rc::new(frame.missed));
        }
        Ok(res.then_some(id))
    }

    fn intern(&mut self, s: &Sequent) -> u32 {
        let n = self.ids.len() as u32;
        *self.ids.entry(s.clone()).or_insert(n)
    }

    fn enter(&mut self, s: &Sequent, id: usize, key: u32) {
        self.history.insert(s.clone(), id);
        self.history_ids.insert(key, id);
    }

    fn leave(&mut self, s: &Sequent, key: u32) {
        self.history.remove(s);
        self.history_ids.remove(&key);
    }

    /// Replays a cached result for the sequent at node `id` when it is valid
    /// on the current branch. A replayed success leaves `id` as a bare node.
    fn reuse(&mut self, id: usize, key: u32, modal_premise: bool) -> Option<Option<usize>> {
        if !self.memo {
            return None;
        }
        if let Some(needs) = self.proved.get(&(key, modal_premise)) {
            if needs.iter().all(|k| self.history_ids.contains_key(k)) {
                if let Some(top) = self.frames.last_mut() {
                    top.hits.extend(needs.iter().map(|k| (*k, self.history_ids[k])));
                }
                return Some(Some(id));
            }
        }
        let list = self.refuted.get(&(key, modal_premise))?;
        let hit = list
            .iter()
            .find(|m| self.history_ids.keys().all(|h| !m.contains(h)))
            .cloned()?;
        self.arena.truncate(id);
        if let Some(top) = self.frames.last_mut() {
            top.missed.extend(hit.iter().copied());
        }
        Some(None)
    }

    fn invertible(s: &Sequent) -> Option<RuleApp> {
        if s.right.contains(&Formula::Bot) {
            return Some(RuleApp::BotR);
        }
        if let Some((a, b)) = s.right.iter().find_map(Formula::as_imp) {
            return Some(RuleApp::ImpR {
                left: a.clone(),
                right: b.clone(),
            });
        }
        if let Some((a, b)) = s.left.iter().find_map(Formula::as_imp) {
            return Some(RuleApp::ImpL {
                left: a.clone(),
                right: b.clone(),
            });
        }
        None
    }

    fn expand(&mut self, id: usize, s: &Sequent) -> Result<bool, Exhausted> {
        if let Some(rule) = Self::invertible(s) {
            let prem = rule.premises_of(s).expect("invertible rule applies");
            let mut kids = Vec::with_capacity(prem.len());
            for p in prem {
                match self.search(p, false)? {
                    Some(c) => kids.push(c),
                    None => return Ok(false),
                }
            }
            self.arena[id].rule = rule;
            self.arena[id].children = kids;
            return Ok(true);
        }
        // only atoms and ⊳-formulas remain
        let fresh = !self.history.contains_key(s);
        let key = self.intern(s);
        if fresh {
            self.enter(s, id, key);
        }
        let res = self.modal(id, s);
        if fresh {
            self.leave(s, key);
        }
        let found = res?;
        if !found && !s.right.iter().any(Formula::is_interp) && self.frontier.len() < FRONTIER_CAP {
            self.frontier.insert(s.clone());
        }
        Ok(found)
    }

    fn modal(&mut self, id: usize, s: &Sequent) -> Result<bool, Exhausted> {
        let principals: Vec<(Formula, Formula)> = s
            .right
            .distinct()
            .iter()
            .filter_map(|f| f.as_interp().map(|(a, b)| (a.clone(), b.clone())))
            .collect();
        let lefts: Vec<(Formula, Formula)> = s
            .left
            .distinct()
            .iter()
            .filter_map(|f| f.as_interp().map(|(a, b)| (a.clone(), b.clone())))
            .collect();
        for (psi_m, phi) in principals {
            let mark = self.arena.len();
            if let Some((ordering, kids)) = self.greedy(&psi_m, &phi, &lefts)? {
                let d = ModalData {
                    weak_left: s
                        .left
                        .minus(&ordering.iter().map(|(a, b)| Formula::interp(a, b)).collect())
                        .expect("ordering formulas on the left"),
                    weak_right: s
                        .right
                        .without(&Formula::interp(&psi_m, &phi))
                        .expect("principal on the right"),
                    ordering,
                    principal: (psi_m, phi),
                };
                self.arena[id].rule = RuleApp::InterpIK4Slim(d);
                self.arena[id].children = kids;
                return Ok(true);
            }
            self.arena.truncate(mark);
        }
        Ok(false)
    }

    /// Children come back in premise order i = m..0.
    #[allow(clippy::type_complexity)]
    fn greedy(
        &mut self,
        psi_m: &Formula,
        phi: &Formula,
        lefts: &[(Formula, Formula)],
    ) -> Result<Option<(Vec<(Formula, Formula)>, Vec<usize>)>, Exhausted> {
        let mut ordering: Vec<(Formula, Formula)> = Vec::new();
        let mut kids: Vec<usize> = Vec::new();
        let mut tries = 0usize;
        loop {
            let ants: Vec<Formula> = ordering.iter().map(|(a, _)| a.clone()).collect();
            if let Some(c) = self.search(modal_premise(psi_m, &ants, phi), true)? {
                kids.push(c);
                kids.reverse();
                return Ok(Some((ordering, kids)));
            }
            let mut extended = false;
            for (a, b) in lefts {
                if ants.contains(a) {
                    continue;
                }
                tries += 1;
                if self.lim.max_orderings.is_some_and(|m| tries > m) {
                    return Ok(None);
                }
                if let Some(c) = self.search(modal_premise(b, &ants, phi), true)? {
                    kids.push(c);
                    ordering.push((a.clone(), b.clone()));
                    extended = true;
                    break;
                }
            }
            if !extended {
                return Ok(None);
            }
        }
    }
}

/// ψ, (A, φ)⊳⊥ ⇒ A, φ
fn modal_premise(psi: &Formula, ants: &[Formula], phi: &Formula) -> Sequent {
    let mut right: Vec<Formula> = ants.to_vec();
    right.push(phi.clone());
    let mut left: Vec<Formula> = right.iter().map(Formula::interp_bot).collect();
    left.push(psi.clone());
    Sequent::from_vecs(left, right)
}

/// Runs `f` on a thread with a large stack; deep searches recurse deeply.
pub(crate) fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(SEARCH_STACK)
        .spawn(f)
        .expect("spawn search thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

pub fn prove(s: &Sequent, lim: SearchLimits) -> SearchOutcome {
    let s = s.clone();
    with_big_stack(move || prove_inline(&s, lim))
}

fn prove_inline(s: &Sequent, lim: SearchLimits) -> SearchOutcome {
    run(s, lim, true)
}

fn run(s: &Sequent, lim: SearchLimits, build: bool) -> SearchOutcome {
    run_with(s, lim, build, true)
}

fn run_with(s: &Sequent, lim: SearchLimits, build: bool, memo: bool) -> SearchOutcome {
    let mut st = Searcher::new(lim, build);
    st.memo = memo;
    let res = st.search(s.clone(), false);
    let stats = SearchStats {
        explored: st.explored,
        modal_premises: st.modal_premises.len(),
        k: s.subformulas().len(),
        max_depth: st.max_depth,
    };
    debug_assert!(stats.within_bound(), "modal premise count exceeds 2^k·k²");
    match res {
        Err(Exhausted) => SearchOutcome::ResourceExhausted { explored: st.explored },
        Ok(Some(root)) => {
            debug_assert_eq!(root, 0);
            SearchOutcome::Provable {
                proof: CyclicProof {
                    calculus: CalculusId::GilSlim,
                    nodes: st.arena,
                },
                stats,
            }
        }
        Ok(None) => SearchOutcome::Unprovable {
            explored: st.explored,
            frontier: st.frontier.into_iter().collect(),
            stats,
        },
    }
}

pub fn prove_default(s: &Sequent) -> SearchOutcome {
    prove(s, SearchLimits::default())
}

/// IL ⊢ φ.
pub fn decide_il(f: &Formula, lim: SearchLimits) -> Result<bool, SearchError> {
    decide_sequent(&Sequent::goal(f.clone()), lim)
}

pub fn decide_sequent(s: &Sequent, lim: SearchLimits) -> Result<bool, SearchError> {
    let s = s.clone();
    let out = with_big_stack(move || run(&s, lim, false));
    match out {
        SearchOutcome::Provable { .. } => Ok(true),
        SearchOutcome::Unprovable { .. } => Ok(false),
        SearchOutcome::ResourceExhausted { explored } => Err(SearchError::ResourceExhausted(explored)),
    }
}

/// ILP ⊢ φ, through IL ⊢ φ♯.
pub fn decide_ilp(f: &Formula, lim: SearchLimits) -> Result<bool, SearchError> {
    decide_il(&f.sharp(), lim)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Logic {
    Il,
    Ilp,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Il => "il",
            Logic::Ilp => "ilp",
        }
    }

    pub fn from_name(s: &str) -> Option<Logic> {
        match s.to_ascii_lowercase().as_str() {
            "il" => Some(Logic::Il),
            "ilp" => Some(Logic::Ilp),
            _ => None,
        }
    }

    pub fn decide(self, f: &Formula, lim: SearchLimits) -> Result<bool, SearchError> {
        match self {
            Logic::Il => decide_il(f, lim),
            Logic::Ilp => decide_ilp(f, lim),
        }
    }
}

/// Classical propositional proof treating ⊳-formulas as atoms; a ⊳-formula on
/// both sides is closed by the Ax-expansion.
pub fn prove_propositional(s: &Sequent, target: ModalTarget) -> Option<Proof> {
    if s.left.contains(&Formula::Bot) {
        return Some(Proof::node(s.clone(), RuleApp::BotL, vec![]));
    }
    if let Some(a) = s.shared_atom() {
        let atom = a.clone();
        return Some(Proof::node(s.clone(), RuleApp::Ax { atom }, vec![]));
    }
    if let Some(f) = s.left.iter().find(|f| f.is_interp() && s.right.contains(f)) {
        let gamma = s.left.without(f).expect("present");
        let delta = s.right.without(f).expect("present");
        return Some(ax_proof(f, &gamma, &delta, target));
    }
    let rule = Searcher::invertible(s)?;
    let prem = rule.premises_of(s).expect("invertible rule applies");
    let kids = prem
        .iter()
        .map(|p| prove_propositional(p, target))
        .collect::<Option<Vec<_>>>()?;
    Some(Proof::node(s.clone(), rule, kids))
}

/// Tree node counts of a cyclic proof's ⊳ premises, for tests of the bound.
pub fn distinct_modal_premises(p: &CyclicProof) -> usize {
    let mut set: HashSet<&Sequent> = HashSet::new();
    for n in &p.nodes {
        if n.rule.is_progressing() {
            for &c in &n.children {
                set.insert(&p.nodes[c].sequent);
            }
        }
    }
    set.len()
}

/// Γ ⇒ Δ with the left and right sides given as formula lists.
pub fn sequent_of(left: &[Formula], right: &[Formula]) -> Sequent {
    Sequent::new(Multiset::from_vec(left.to_vec()), Multiset::from_vec(right.to_vec()))
}
