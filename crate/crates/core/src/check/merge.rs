//! Sequential consistency and linearizability by search over merges of the
//! per-thread projections.

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::{CheckOptions, Stats, Verdict};
use crate::budget::Meter;
use crate::error::{BudgetExceeded, CheckError, TraceError};
use crate::spec::SpecOracle;
use crate::trace::{project, Event, ThreadId, Trace};

/// Sequential consistency: is some interleaving of the thread projections of
/// `trace` in the specification? Environment events are ignored.
///
/// Equivalently, the threads do not jointly know that the trace is incorrect.
pub fn check_sc<S: SpecOracle>(
    trace: &Trace,
    spec: &S,
    options: &CheckOptions,
) -> Result<Verdict, CheckError> {
    let threads = thread_order(trace, options);
    let lanes: Vec<Vec<Event>> = threads
        .iter()
        .map(|t| project(trace, t).into_events())
        .collect();
    run(lanes, None, spec, options)
}

/// Linearizability: as [`check_sc`], but the witness must keep every return
/// that precedes an invocation in `trace` ahead of that invocation.
///
/// Combined call events are split into invocation and return first, so the
/// witness uses split events. The (split) trace must be unique.
pub fn check_lin<S: SpecOracle>(
    trace: &Trace,
    spec: &S,
    options: &CheckOptions,
) -> Result<Verdict, CheckError> {
    let trace = trace.expand_calls();
    if let Some((first, second)) = trace.first_duplicate() {
        return Err(TraceError::Duplicate { first, second }.into());
    }
    let threads = thread_order(&trace, options);
    let lane_of = |e: &Event| e.thread().and_then(|t| threads.iter().position(|x| x == t));
    let mut lanes: Vec<Vec<Event>> = vec![Vec::new(); threads.len()];
    let mut gates: Vec<Vec<Vec<usize>>> = vec![Vec::new(); threads.len()];
    // Per lane: events seen so far, and how many of them end with the last return.
    let mut seen = vec![0usize; threads.len()];
    let mut through_last_ret = vec![0usize; threads.len()];
    for e in &trace {
        let Some(k) = lane_of(e) else { continue };
        gates[k].push(if e.action().is_inv() {
            through_last_ret.clone()
        } else {
            Vec::new()
        });
        lanes[k].push(e.clone());
        seen[k] += 1;
        if e.action().is_ret() {
            through_last_ret[k] = seen[k];
        }
    }
    run(lanes, Some(gates), spec, options)
}

fn thread_order(trace: &Trace, options: &CheckOptions) -> Vec<ThreadId> {
    let mut threads = trace.threads();
    if let Some(seed) = options.shuffle_seed {
        threads.shuffle(&mut StdRng::seed_from_u64(seed));
    }
    threads
}

fn run<S: SpecOracle>(
    lanes: Vec<Vec<Event>>,
    gates: Option<Vec<Vec<Vec<usize>>>>,
    spec: &S,
    options: &CheckOptions,
) -> Result<Verdict, CheckError> {
    let mut search = Merge {
        counts: vec![0; lanes.len()],
        lanes,
        gates,
        spec,
        meter: options.budget.meter(),
        failed: HashSet::new(),
        path: Vec::new(),
        leaves: 0,
    };
    let found = search.dfs(spec.initial())?;
    let stats = Stats {
        nodes: search.meter.nodes(),
        witnesses: search.leaves,
    };
    Ok(Verdict::with_witness(
        found.then(|| Trace::new(search.path)),
        stats,
    ))
}

struct Merge<'a, S: SpecOracle> {
    lanes: Vec<Vec<Event>>,
    // For each lane event: minimum counts of every lane before it may go.
    gates: Option<Vec<Vec<Vec<usize>>>>,
    spec: &'a S,
    meter: Meter,
    // The future of a partial merge depends only on how far each lane got
    // and on the specification state.
    failed: HashSet<(Vec<usize>, S::State)>,
    counts: Vec<usize>,
    path: Vec<Event>,
    leaves: u64,
}

impl<S: SpecOracle> Merge<'_, S> {
    fn ready(&self, k: usize) -> bool {
        let Some(gates) = &self.gates else {
            return true;
        };
        let gate = &gates[k][self.counts[k]];
        gate.iter()
            .zip(&self.counts)
            .all(|(need, have)| have >= need)
    }

    fn dfs(&mut self, state: S::State) -> Result<bool, BudgetExceeded> {
        self.meter.tick()?;
        if self
            .counts
            .iter()
            .zip(&self.lanes)
            .all(|(c, l)| *c == l.len())
        {
            self.leaves += 1;
            return Ok(self.spec.accepting(&state));
        }
        let key = (self.counts.clone(), state);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        let state = &key.1;
        for k in 0..self.lanes.len() {
            if self.counts[k] == self.lanes[k].len() || !self.ready(k) {
                continue;
            }
            let event = &self.lanes[k][self.counts[k]];
            let Some(next) = self.spec.step(state, event) else {
                continue;
            };
            self.path.push(event.clone());
            self.counts[k] += 1;
            if self.dfs(next)? {
                return Ok(true);
            }
            self.counts[k] -= 1;
            self.path.pop();
        }
        self.failed.insert(key);
        Ok(false)
    }
}
