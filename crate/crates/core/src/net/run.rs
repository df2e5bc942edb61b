//! Scheduled execution of a network.

use super::lts::{net_transitions, LocalDefs, NetLabel, Network};
use super::syntax::{canon_local, is_local_value};
use crate::name::Name;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scheduler {
    /// Uniform choice among enabled transitions.
    Random(u64),
    /// Favours the process after the one that moved last.
    RoundRobin,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutcome {
    AllValues,
    Deadlock,
    Timeout,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcStatus {
    Value,
    /// Not a value and unable to move.
    Blocked,
    /// Not a value when fuel ran out.
    Timeout,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub trace: Vec<NetLabel>,
    /// [`state_hash`] of the network after each step of `trace`.
    pub hashes: Vec<u64>,
    pub status: BTreeMap<Name, ProcStatus>,
    pub last: Network,
}

pub fn run_network(n: &Network, defs: &LocalDefs, sched: Scheduler, fuel: usize) -> RunResult {
    let mut rng = match sched {
        Scheduler::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Scheduler::RoundRobin => None,
    };
    let order: Vec<Name> = n.keys().cloned().collect();
    let mut turn = 0usize;
    let mut cur = n.clone();
    let mut trace = Vec::new();
    let mut hashes = Vec::new();
    for _ in 0..fuel {
        let mut steps = net_transitions(&cur, defs);
        if steps.is_empty() {
            return finish(cur, trace, hashes, false);
        }
        let chosen = match &mut rng {
            Some(rng) => {
                steps.shuffle(rng);
                steps.swap_remove(0)
            }
            None => {
                let pick = (0..order.len())
                    .map(|i| &order[(turn + i) % order.len()])
                    .find_map(|p| steps.iter().position(|s| s.label.procs().contains(&p)))
                    .unwrap_or(0);
                let s = steps.swap_remove(pick);
                let mover = s.label.procs()[0].clone();
                turn = order.iter().position(|p| *p == mover).map_or(0, |i| i + 1);
                s
            }
        };
        trace.push(chosen.label);
        cur = chosen.next;
        hashes.push(state_hash(&cur));
    }
    finish(cur, trace, hashes, true)
}

/// Hash of a network up to alpha-renaming of local binders. Stable for a given
/// build of this crate.
pub fn state_hash(n: &Network) -> u64 {
    let mut h = DefaultHasher::new();
    for (p, l) in n {
        p.hash(&mut h);
        canon_local(l).hash(&mut h);
    }
    h.finish()
}

fn finish(cur: Network, trace: Vec<NetLabel>, hashes: Vec<u64>, out_of_fuel: bool) -> RunResult {
    let status: BTreeMap<Name, ProcStatus> = cur
        .iter()
        .map(|(p, l)| {
            let s = if is_local_value(l) {
                ProcStatus::Value
            } else if out_of_fuel {
                ProcStatus::Timeout
            } else {
                ProcStatus::Blocked
            };
            (p.clone(), s)
        })
        .collect();
    let outcome = if status.values().all(|s| *s == ProcStatus::Value) {
        RunOutcome::AllValues
    } else if out_of_fuel {
        RunOutcome::Timeout
    } else {
        RunOutcome::Deadlock
    };
    RunResult { outcome, trace, hashes, status, last: cur }
}
