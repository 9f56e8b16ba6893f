//! Indistinguishability relations and enumeration of indistinguishable traces.
//!
//! `(E,i) ~_t (E',i')` holds when thread `t` sees the same local history in both
//! prefixes. A group combines the distinguishing power of its members, and the
//! observer additionally compares which returns happened before which
//! invocations. Distributed knowledge quantifies over all traces the group cannot
//! tell apart from the actual one; [`enumerate_witnesses`] produces a finite,
//! exhaustive stream of those traces.

use std::collections::BTreeSet;

use crate::budget::{Budget, Meter};
use crate::error::{BudgetExceeded, TraceError};
use crate::trace::{obs_view, Action, Event, ThreadId, Trace};

/// A set of threads, optionally joined by the observer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentGroup {
    threads: BTreeSet<ThreadId>,
    include_observer: bool,
}

impl AgentGroup {
    /// Fails when the group would contain no agent at all.
    pub fn new<I>(threads: I, include_observer: bool) -> Result<Self, &'static str>
    where
        I: IntoIterator<Item = ThreadId>,
    {
        let threads: BTreeSet<_> = threads.into_iter().collect();
        if threads.is_empty() && !include_observer {
            return Err("an agent group needs at least one thread or the observer");
        }
        Ok(AgentGroup {
            threads,
            include_observer,
        })
    }

    /// Group of the given thread names. Panics on an empty list.
    pub fn of(names: &[&str]) -> Self {
        Self::new(names.iter().map(|n| ThreadId::new(n)), false).expect("non-empty thread list")
    }

    /// All threads performing events in `trace`.
    pub fn threads_of(trace: &Trace) -> Self {
        AgentGroup {
            threads: trace.threads().into_iter().collect(),
            include_observer: false,
        }
    }

    pub fn with_observer(mut self) -> Self {
        self.include_observer = true;
        self
    }

    pub fn without_observer(mut self) -> Self {
        self.include_observer = false;
        self
    }

    pub fn threads(&self) -> &BTreeSet<ThreadId> {
        &self.threads
    }

    pub fn includes_observer(&self) -> bool {
        self.include_observer
    }

    pub fn contains(&self, thread: &ThreadId) -> bool {
        self.threads.contains(thread)
    }
}

fn check_index(trace: &Trace, i: usize) -> Result<(), TraceError> {
    if i > trace.len() {
        Err(TraceError::IndexOutOfRange {
            index: i,
            len: trace.len(),
        })
    } else {
        Ok(())
    }
}

/// `(E,i) ~_t (E',i')`.
pub fn thread_indist(
    e: &Trace,
    i: usize,
    e2: &Trace,
    i2: usize,
    thread: &ThreadId,
) -> Result<bool, TraceError> {
    check_index(e, i)?;
    check_index(e2, i2)?;
    let a = e.events()[..i].iter().filter(|ev| ev.is_by(thread));
    let b = e2.events()[..i2].iter().filter(|ev| ev.is_by(thread));
    Ok(a.eq(b))
}

/// `(E,i) ⪯_obs (E',i')`: every return-before-invocation pair of the first
/// prefix also appears in the second.
pub fn obs_leq(e: &Trace, i: usize, e2: &Trace, i2: usize) -> Result<bool, TraceError> {
    let small = obs_view(e, i)?;
    let large = obs_view(e2, i2)?;
    Ok(small.is_subset(&large))
}

/// Joint indistinguishability of a group: the intersection of the members'
/// relations, and `⪯_obs` when the observer belongs to the group.
pub fn group_indist(
    e: &Trace,
    i: usize,
    e2: &Trace,
    i2: usize,
    group: &AgentGroup,
) -> Result<bool, TraceError> {
    for t in &group.threads {
        if !thread_indist(e, i, e2, i2, t)? {
            return Ok(false);
        }
    }
    if group.include_observer {
        return obs_leq(e, i, e2, i2);
    }
    Ok(true)
}

/// Forwarding events the environment may insert: one per committed revision and
/// receiving thread other than its author.
pub fn fwd_candidates(source: &Trace, threads: &BTreeSet<ThreadId>) -> Vec<Event> {
    let mut out = BTreeSet::new();
    for e in source {
        if let (Some(from), Action::Com { rev }) = (e.thread(), e.action()) {
            for to in threads.iter().filter(|t| *t != from) {
                out.insert(Event::fwd(from.as_str(), to.as_str(), rev.0));
            }
        }
    }
    // Sorted by (from, to, rev) via the derived order of events.
    out.into_iter().collect()
}

/// The finite set of traces a knowledge query ranges over.
///
/// Threads of the group keep their exact projection. Threads of the source
/// outside the group are unobserved: any prefix of their projection may appear.
/// Environment events of the source are dropped; instead up to
/// `max_env_insertions` distinct events of `env_candidates` are inserted.
#[derive(Clone, Debug)]
pub struct WitnessUniverse {
    pub source: Trace,
    pub group: AgentGroup,
    pub env_candidates: Vec<Event>,
    pub max_env_insertions: usize,
    pub budget: Budget,
}

impl WitnessUniverse {
    /// Universe without environment insertions.
    pub fn new(source: Trace, group: AgentGroup) -> Self {
        WitnessUniverse {
            source,
            group,
            env_candidates: Vec::new(),
            max_env_insertions: 0,
            budget: Budget::unlimited(),
        }
    }

    /// Allows every forwarding candidate of the source to be inserted once.
    pub fn with_forwarding(mut self) -> Self {
        let mut all: BTreeSet<ThreadId> = self.source.threads().into_iter().collect();
        all.extend(self.group.threads.iter().cloned());
        self.env_candidates = fwd_candidates(&self.source, &all);
        self.max_env_insertions = self.env_candidates.len();
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }
}

/// Lazily enumerates a [`WitnessUniverse`] without duplicates.
///
/// Yields `Err` once if the budget runs out, then stops.
pub fn enumerate_witnesses(universe: &WitnessUniverse) -> Witnesses {
    Witnesses::new(universe)
}

/// Iterator returned by [`enumerate_witnesses`].
pub struct Witnesses {
    // Lane per thread: (event, source position) pairs.
    full_lanes: Vec<Vec<(Event, usize)>>,
    // Which lanes may be truncated (threads outside the group).
    truncatable: Vec<bool>,
    lane_limits: Vec<usize>,
    candidates: Vec<Event>,
    max_insert: usize,
    include_observer: bool,
    // Returns preceding each invocation, by source position.
    rets_before: Vec<Vec<usize>>,
    prune_observer: bool,
    source: Trace,

    counts: Vec<usize>,
    used: Vec<bool>,
    inserted: usize,
    emitted_source: Vec<bool>,
    current: Vec<Event>,
    stack: Vec<Frame>,
    meter: Meter,
    started: bool,
    done: bool,
    yielded: u64,
}

struct Frame {
    next_choice: usize,
    via: Option<usize>,
    visited: bool,
}

impl Witnesses {
    fn new(u: &WitnessUniverse) -> Self {
        let source = u.source.clone();
        let mut lane_threads: Vec<ThreadId> = u.group.threads.iter().cloned().collect();
        let mut truncatable = vec![false; lane_threads.len()];
        for t in source.threads() {
            if !u.group.contains(&t) {
                lane_threads.push(t);
                truncatable.push(true);
            }
        }
        let full_lanes: Vec<Vec<(Event, usize)>> = lane_threads
            .iter()
            .map(|t| {
                source
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.is_by(t))
                    .map(|(k, e)| (e.clone(), k + 1))
                    .collect()
            })
            .collect();
        let lane_limits: Vec<usize> = full_lanes
            .iter()
            .zip(&truncatable)
            .map(|(l, &tr)| if tr { 0 } else { l.len() })
            .collect();
        let mut rets_before = vec![Vec::new(); source.len() + 1];
        for (k, e) in source.iter().enumerate() {
            if e.action().is_inv() {
                rets_before[k + 1] = source.events()[..k]
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r.action().is_ret())
                    .map(|(j, _)| j + 1)
                    .collect();
            }
        }
        let any_truncatable = truncatable.iter().any(|&t| t);
        let prune_observer = u.group.include_observer && source.is_unique() && !any_truncatable;
        let mut candidates: Vec<Event> = u.env_candidates.clone();
        candidates.sort();
        candidates.dedup();
        let n_lanes = full_lanes.len();
        let n_cands = candidates.len();
        Witnesses {
            full_lanes,
            truncatable,
            lane_limits,
            max_insert: u.max_env_insertions.min(n_cands),
            candidates,
            include_observer: u.group.include_observer,
            rets_before,
            prune_observer,
            emitted_source: vec![false; source.len() + 1],
            source,
            counts: vec![0; n_lanes],
            used: vec![false; n_cands],
            inserted: 0,
            current: Vec::new(),
            stack: Vec::new(),
            meter: u.budget.meter(),
            started: false,
            done: false,
            yielded: 0,
        }
    }

    /// Number of traces yielded so far.
    pub fn yielded(&self) -> u64 {
        self.yielded
    }

    /// Number of search nodes expanded so far.
    pub fn nodes(&self) -> u64 {
        self.meter.nodes()
    }

    // Advances the truncation odometer; false when all configurations are done.
    fn next_config(&mut self) -> bool {
        for l in 0..self.full_lanes.len() {
            if !self.truncatable[l] {
                continue;
            }
            if self.lane_limits[l] < self.full_lanes[l].len() {
                self.lane_limits[l] += 1;
                return true;
            }
            self.lane_limits[l] = 0;
        }
        false
    }

    fn complete(&self) -> bool {
        self.counts
            .iter()
            .zip(&self.lane_limits)
            .all(|(c, lim)| c == lim)
    }

    fn choice_valid(&self, c: usize) -> bool {
        let n_lanes = self.full_lanes.len();
        if c < n_lanes {
            if self.counts[c] >= self.lane_limits[c] {
                return false;
            }
            let (ev, src) = &self.full_lanes[c][self.counts[c]];
            if self.prune_observer && ev.action().is_inv() {
                return self.rets_before[*src]
                    .iter()
                    .all(|&r| self.emitted_source[r]);
            }
            true
        } else {
            let k = c - n_lanes;
            !self.used[k] && self.inserted < self.max_insert
        }
    }

    fn apply(&mut self, c: usize) {
        let n_lanes = self.full_lanes.len();
        if c < n_lanes {
            let (ev, src) = self.full_lanes[c][self.counts[c]].clone();
            self.counts[c] += 1;
            self.emitted_source[src] = true;
            self.current.push(ev);
        } else {
            let k = c - n_lanes;
            self.used[k] = true;
            self.inserted += 1;
            self.current.push(self.candidates[k].clone());
        }
    }

    fn undo(&mut self, c: usize) {
        let n_lanes = self.full_lanes.len();
        self.current.pop();
        if c < n_lanes {
            self.counts[c] -= 1;
            let (_, src) = &self.full_lanes[c][self.counts[c]];
            self.emitted_source[*src] = false;
        } else {
            let k = c - n_lanes;
            self.used[k] = false;
            self.inserted -= 1;
        }
    }

    fn accept_leaf(&self) -> bool {
        if !self.include_observer || self.prune_observer {
            return true;
        }
        let w = Trace::new(self.current.clone());
        obs_leq(&self.source, self.source.len(), &w, w.len()).unwrap_or(false)
    }
}

impl Iterator for Witnesses {
    type Item = Result<Trace, BudgetExceeded>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.stack.push(Frame {
                next_choice: 0,
                via: None,
                visited: false,
            });
        }
        let n_choices = self.full_lanes.len() + self.candidates.len();
        loop {
            let Some(frame) = self.stack.last_mut() else {
                if self.next_config() {
                    self.stack.push(Frame {
                        next_choice: 0,
                        via: None,
                        visited: false,
                    });
                    continue;
                }
                self.done = true;
                return None;
            };
            if !frame.visited {
                frame.visited = true;
                if self.complete() && self.accept_leaf() {
                    self.yielded += 1;
                    return Some(Ok(Trace::new(self.current.clone())));
                }
                continue;
            }
            let start = frame.next_choice;
            let choice = (start..n_choices).find(|&c| self.choice_valid(c));
            match choice {
                None => {
                    let via = self.stack.pop().and_then(|f| f.via);
                    if let Some(c) = via {
                        self.undo(c);
                    }
                }
                Some(c) => {
                    self.stack.last_mut().expect("frame present").next_choice = c + 1;
                    if let Err(e) = self.meter.tick() {
                        self.done = true;
                        return Some(Err(e));
                    }
                    self.apply(c);
                    self.stack.push(Frame {
                        next_choice: 0,
                        via: Some(c),
                        visited: false,
                    });
                }
            }
        }
    }
}
