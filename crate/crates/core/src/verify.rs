//! Bounded checks of the correspondence between a choreography and its
//! projected network.
//!
//! Every check explores a finite part of a possibly infinite transition
//! system. A check that runs out of budget before deciding reports
//! [`Status::BoundExhausted`], never [`Status::Violation`].

use crate::eval::{step, StepResult};
use crate::name::Name;
use crate::net::{
    canon_local, net_transitions, network_geq_admin, network_is_final, LocalDefs, NetLabel, NetStep, Network,
};
use crate::parse::print_local;
use crate::project::{project_defs, project_network, ProjectionError};
use crate::syntax::{Defs, Expr};
use crate::typeck::{type_of, CheckedProgram, TypeError, TypingCtx};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("state {state} does not typecheck: {source}")]
    Type { state: usize, source: TypeError },
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Completeness,
    Soundness,
    Deadlock,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Completeness => "completeness",
            Theorem::Soundness => "soundness",
            Theorem::Deadlock => "deadlock",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    /// Some obligation was neither met nor refuted within the search bound.
    BoundExhausted,
}

/// A replayable witness: the labels from the initial network to `state`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Counterexample {
    pub reason: String,
    pub trace: Vec<String>,
    pub state: BTreeMap<Name, String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Report {
    pub program: String,
    pub theorem: Theorem,
    pub status: Status,
    pub states: usize,
    pub transitions: usize,
    /// Frame or restriction failures seen on explored transitions.
    pub lemma_violations: Vec<String>,
    pub counterexample: Option<Counterexample>,
    /// Obligations left undecided within the bound.
    pub inconclusive: Vec<String>,
}

impl Report {
    fn new(program: &str, theorem: Theorem) -> Self {
        Report {
            program: program.into(),
            theorem,
            status: Status::Pass,
            states: 0,
            transitions: 0,
            lemma_violations: Vec::new(),
            counterexample: None,
            inconclusive: Vec::new(),
        }
    }

    /// Violations win over inconclusive obligations.
    fn settle(mut self) -> Self {
        self.status = if self.counterexample.is_some() || !self.lemma_violations.is_empty() {
            Status::Violation
        } else if !self.inconclusive.is_empty() {
            Status::BoundExhausted
        } else {
            Status::Pass
        };
        self
    }
}

/// A choreography together with everything needed to project its states.
#[derive(Clone, Debug)]
pub struct Subject {
    pub name: String,
    pub universe: BTreeSet<Name>,
    pub defs: Defs,
    pub local_defs: LocalDefs,
    pub main: Expr,
}

impl Subject {
    pub fn new(name: &str, prog: &CheckedProgram) -> Result<Self, ProjectionError> {
        Ok(Subject {
            name: name.into(),
            universe: prog.universe.clone(),
            defs: prog.elaborated_defs(),
            local_defs: project_defs(prog)?,
            main: prog.main_expr(),
        })
    }

    /// `⟦m⟧` for a state `m` of this choreography.
    pub fn project(&self, m: &Expr, state: usize) -> Result<Network, VerifyError> {
        let typed = type_of(&TypingCtx::new(&self.universe), &self.defs, m)
            .map_err(|source| VerifyError::Type { state, source })?;
        Ok(project_network(&typed, &self.universe)?)
    }

    /// Steps of search allowed to match one choreography step.
    pub fn completeness_bound(&self) -> usize {
        2 * self.universe.len() + 4
    }

    /// The deterministic choreography run, at most `fuel` steps.
    pub fn states(&self, fuel: usize) -> Vec<Expr> {
        let mut out = vec![self.main.clone()];
        while out.len() <= fuel {
            match step(out.last().unwrap(), &self.defs) {
                StepResult::Stepped(s) => out.push(s.result),
                StepResult::Value | StepResult::Stuck(_) => break,
            }
        }
        out
    }
}

/// Alpha-canonical form, used to deduplicate states.
pub fn canon_network(n: &Network) -> Network {
    n.iter().map(|(p, l)| (p.clone(), canon_local(l))).collect()
}

fn show(n: &Network) -> BTreeMap<Name, String> {
    n.iter().map(|(p, l)| (p.clone(), print_local(l))).collect()
}

/// Outcome of a bounded reachability search.
enum Search {
    Found,
    Absent,
    Exhausted,
}

/// Breadth-first search from `start` for a state satisfying `goal`, taking at
/// most `bound` steps.
fn search(start: &Network, defs: &LocalDefs, bound: usize, goal: impl Fn(&Network) -> bool) -> Search {
    let mut seen = HashSet::from([canon_network(start)]);
    let mut frontier = vec![start.clone()];
    for depth in 0..=bound {
        if frontier.iter().any(&goal) {
            return Search::Found;
        }
        if depth == bound {
            break;
        }
        let mut next = Vec::new();
        for n in &frontier {
            for s in net_transitions(n, defs) {
                if seen.insert(canon_network(&s.next)) {
                    next.push(s.next);
                }
            }
        }
        if next.is_empty() {
            return Search::Absent;
        }
        frontier = next;
    }
    Search::Exhausted
}

/// Each choreography step `M_k -> M_k+1` is matched by
/// `⟦M_k⟧ ->* N ⊒ ⟦M_k+1⟧` within the completeness bound, comparing
/// administrative normal forms.
pub fn check_completeness(sub: &Subject, fuel: usize) -> Result<Report, VerifyError> {
    let mut r = Report::new(&sub.name, Theorem::Completeness);
    let states = sub.states(fuel);
    let nets = states.iter().enumerate().map(|(i, m)| sub.project(m, i)).collect::<Result<Vec<_>, _>>()?;
    r.states = nets.len();
    let bound = sub.completeness_bound();
    for (k, pair) in nets.windows(2).enumerate() {
        r.transitions += 1;
        match search(&pair[0], &sub.local_defs, bound, |n| network_geq_admin(n, &pair[1])) {
            Search::Found => {}
            Search::Absent => {
                r.counterexample = Some(Counterexample {
                    reason: format!("choreography step {k} has no matching network run"),
                    trace: Vec::new(),
                    state: show(&pair[0]),
                });
                break;
            }
            Search::Exhausted => r.inconclusive.push(format!("choreography step {k}: no match within {bound} steps")),
        }
    }
    Ok(r.settle())
}

/// Reachable states of a network, breadth first, with parent pointers.
pub struct Exploration {
    pub states: Vec<Network>,
    /// Predecessor and label for every state but the first.
    pub parent: Vec<Option<(usize, NetLabel)>>,
    pub depth: Vec<usize>,
    pub transitions: usize,
    pub lemma_violations: Vec<String>,
    /// Whether some state at the depth limit still had successors.
    pub truncated: bool,
}

impl Exploration {
    pub fn trace_to(&self, mut i: usize) -> Vec<NetLabel> {
        let mut out = Vec::new();
        while let Some((p, l)) = &self.parent[i] {
            out.push(l.clone());
            i = *p;
        }
        out.reverse();
        out
    }
}

fn restrict(n: &Network, keep: &BTreeSet<&Name>) -> Network {
    n.iter().filter(|(p, _)| keep.contains(p)).map(|(p, l)| (p.clone(), l.clone())).collect()
}

/// Frame: processes outside the label keep their programs. Restriction: the
/// step survives removing all non-participants, or any single one of them.
pub fn lemma_failures(n: &Network, s: &NetStep, defs: &LocalDefs) -> Vec<String> {
    let mut out = Vec::new();
    let movers: BTreeSet<&Name> = s.label.procs().into_iter().collect();
    for (p, l) in n {
        if !movers.contains(p) && s.next.get(p) != Some(l) {
            out.push(format!("frame: {p} changed on {}", s.label));
        }
    }
    let mut keeps = vec![movers.clone()];
    for p in n.keys().filter(|p| !movers.contains(p)) {
        keeps.push(n.keys().filter(|q| *q != p).collect());
    }
    for keep in keeps {
        let sub = restrict(n, &keep);
        let want = restrict(&s.next, &keep);
        if !net_transitions(&sub, defs).iter().any(|t| t.label == s.label && t.next == want) {
            let names: Vec<String> = keep.iter().map(|p| p.to_string()).collect();
            out.push(format!("restriction: {} lost on {{{}}}", s.label, names.join(", ")));
        }
    }
    out
}

/// All states within `depth` steps of `start`, checking the frame and
/// restriction lemmas on every transition.
pub fn explore(start: &Network, defs: &LocalDefs, depth: usize) -> Exploration {
    let mut ex = Exploration {
        states: vec![start.clone()],
        parent: vec![None],
        depth: vec![0],
        transitions: 0,
        lemma_violations: Vec::new(),
        truncated: false,
    };
    let mut index = HashMap::from([(canon_network(start), 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let steps = net_transitions(&ex.states[i], defs);
        if ex.depth[i] == depth {
            ex.truncated |= !steps.is_empty();
            continue;
        }
        for s in steps {
            ex.transitions += 1;
            ex.lemma_violations.extend(lemma_failures(&ex.states[i], &s, defs));
            let key = canon_network(&s.next);
            if !index.contains_key(&key) {
                let j = ex.states.len();
                index.insert(key, j);
                ex.states.push(s.next);
                ex.parent.push(Some((i, s.label)));
                ex.depth.push(ex.depth[i] + 1);
                queue.push_back(j);
            }
        }
    }
    ex.lemma_violations.sort();
    ex.lemma_violations.dedup();
    ex
}

fn witness(ex: &Exploration, i: usize, reason: String) -> Counterexample {
    Counterexample {
        reason,
        trace: ex.trace_to(i).iter().map(|l| l.to_string()).collect(),
        state: show(&ex.states[i]),
    }
}

/// Every network state within `depth` steps of `⟦M⟧` can continue to some
/// `N' ⊒ ⟦M_k⟧` with `M_k` on the choreography's run.
pub fn check_soundness(sub: &Subject, depth: usize, fuel: usize) -> Result<Report, VerifyError> {
    let start = sub.project(&sub.main, 0)?;
    check_soundness_from(sub, &start, depth, fuel)
}

/// [`check_soundness`] exploring from `start` instead of `⟦M⟧`; used to
/// check that a tampered network is caught.
pub fn check_soundness_from(sub: &Subject, start: &Network, depth: usize, fuel: usize) -> Result<Report, VerifyError> {
    let mut r = Report::new(&sub.name, Theorem::Soundness);
    let targets = sub
        .states(fuel)
        .iter()
        .enumerate()
        .map(|(i, m)| sub.project(m, i))
        .collect::<Result<Vec<_>, _>>()?;
    let ex = explore(start, &sub.local_defs, depth);
    r.states = ex.states.len();
    r.transitions = ex.transitions;
    r.lemma_violations = ex.lemma_violations.clone();
    let joins = |n: &Network| targets.iter().any(|t| network_geq_admin(n, t));
    let bound = 4 * sub.completeness_bound() + depth;
    for (i, n) in ex.states.iter().enumerate() {
        if joins(n) || completion_joins(n, &sub.local_defs, fuel, &joins) {
            continue;
        }
        match search(n, &sub.local_defs, bound, joins) {
            Search::Found => {}
            Search::Absent => {
                r.counterexample = Some(witness(&ex, i, "reached network never rejoins the choreography".into()));
                break;
            }
            Search::Exhausted => r.inconclusive.push(format!("state {i}: no join within {bound} steps")),
        }
    }
    Ok(r.settle())
}

/// Follows one round-robin schedule from `n`, testing every state on the way.
fn completion_joins(n: &Network, defs: &LocalDefs, fuel: usize, joins: &impl Fn(&Network) -> bool) -> bool {
    let order: Vec<Name> = n.keys().cloned().collect();
    let mut cur = n.clone();
    let mut turn = 0usize;
    for _ in 0..fuel {
        let steps = net_transitions(&cur, defs);
        let Some(s) = (0..order.len())
            .map(|i| &order[(turn + i) % order.len()])
            .find_map(|p| steps.iter().find(|s| s.label.procs()[0] == p))
        else {
            return false;
        };
        turn = order.iter().position(|p| p == s.label.procs()[0]).map_or(0, |i| i + 1);
        cur = s.next.clone();
        if joins(&cur) {
            return true;
        }
    }
    false
}

/// No state within `depth` steps of `start` is stuck short of all values.
pub fn check_network_deadlock(name: &str, start: &Network, defs: &LocalDefs, depth: usize) -> Report {
    let mut r = Report::new(name, Theorem::Deadlock);
    let ex = explore(start, defs, depth);
    r.states = ex.states.len();
    r.transitions = ex.transitions;
    r.lemma_violations = ex.lemma_violations.clone();
    let stuck = |n: &Network| !network_is_final(n) && net_transitions(n, defs).is_empty();
    if let Some(i) = ex.states.iter().position(stuck) {
        r.counterexample = Some(witness(&ex, i, "non-final network with no transition".into()));
    }
    r.settle()
}

/// Deadlock freedom for the projection of a choreography.
pub fn check_deadlock_freedom(sub: &Subject, depth: usize) -> Result<Report, VerifyError> {
    let start = sub.project(&sub.main, 0)?;
    Ok(check_network_deadlock(&sub.name, &start, &sub.local_defs, depth))
}
