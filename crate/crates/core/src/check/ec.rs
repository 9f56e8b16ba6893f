//! Eventual consistency of replicated-store traces, decided twice: by
//! searching visibility and arbitration orders, and by searching for an
//! indistinguishable trace with forwarding events that is correct.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{CheckOptions, Stats, Verdict};
use crate::budget::Meter;
use crate::error::{BudgetExceeded, CheckError};
use crate::spec::{self, correct_evc, validate_revisions, Log, OrderCertificate};
use crate::trace::{Action, Event, RevisionId, State, ThreadId, Trace};

/// A store trace split into revisions. Forwarding events are dropped; the
/// remaining events keep their positions in the input.
struct Revisions {
    /// `(input position, event)` of every thread event.
    events: Vec<(usize, Event)>,
    threads: Vec<ThreadId>,
    revs: Vec<Rev>,
    /// Revision indices of each thread in program order.
    by_thread: Vec<Vec<usize>>,
    /// Revision index of each event.
    rev_of: Vec<usize>,
}

struct Rev {
    thread: usize,
    id: RevisionId,
    /// Indices into `events`, in program order.
    events: Vec<usize>,
    committed: bool,
}

impl Revisions {
    fn of(trace: &Trace) -> Result<Self, CheckError> {
        validate_revisions(trace)?;
        let events: Vec<(usize, Event)> = trace
            .iter()
            .enumerate()
            .filter(|(_, e)| e.thread().is_some())
            .map(|(k, e)| (k + 1, e.clone()))
            .collect();
        let threads: Vec<ThreadId> =
            Trace::new(events.iter().map(|(_, e)| e.clone()).collect()).threads();
        let mut revs: Vec<Rev> = Vec::new();
        let mut by_thread: Vec<Vec<usize>> = vec![Vec::new(); threads.len()];
        let mut rev_of = Vec::with_capacity(events.len());
        // Revision currently collecting events, per thread.
        let mut current: Vec<Option<usize>> = vec![None; threads.len()];
        for (k, (_, e)) in events.iter().enumerate() {
            let t = threads
                .iter()
                .position(|x| Some(x) == e.thread())
                .expect("thread of a thread event");
            let id = e.action().revision().expect("validated store action");
            let r = match current[t] {
                Some(r) => r,
                None => {
                    revs.push(Rev {
                        thread: t,
                        id,
                        events: Vec::new(),
                        committed: false,
                    });
                    by_thread[t].push(revs.len() - 1);
                    revs.len() - 1
                }
            };
            revs[r].events.push(k);
            rev_of.push(r);
            if matches!(e.action(), Action::Com { .. }) {
                revs[r].committed = true;
                current[t] = None;
            } else {
                current[t] = Some(r);
            }
        }
        Ok(Revisions {
            events,
            threads,
            revs,
            by_thread,
            rev_of,
        })
    }

    fn action(&self, k: usize) -> &Action {
        self.events[k].1.action()
    }
}

fn query_matches(updates: &[&Action], query: &Action) -> bool {
    let Action::Qu { query, result, .. } = query else {
        return true;
    };
    let mut s = State::default();
    for a in updates {
        if let Action::Up { update, .. } = a {
            update.apply(&mut s);
        }
    }
    s.query(query) == *result
}

/// Axiomatic eventual consistency: searches a visibility order and an
/// arbitration order satisfying the six conditions. Eventual visibility is
/// vacuous on finite traces.
///
/// Both orders relate whole revisions to each other and follow program order
/// inside a revision, so the search runs over revision sequences and, per
/// revision, the set of earlier revisions it sees. Revisions without queries
/// see as little as possible, which never hurts later revisions.
pub fn check_ec_axiomatic(trace: &Trace, options: &CheckOptions) -> Result<Verdict, CheckError> {
    let revs = Revisions::of(trace)?;
    let mut search = Axiomatic {
        revs: &revs,
        meter: options.budget.meter(),
        next: vec![0; revs.threads.len()],
        order: Vec::new(),
        vis: vec![None; revs.revs.len()],
        leaves: 0,
    };
    let found = search.dfs()?;
    let stats = Stats {
        nodes: search.meter.nodes(),
        witnesses: search.leaves,
    };
    let certificate = found.then(|| certificate(&revs, &search.order, &search.vis));
    Ok(Verdict::with_certificate(certificate, stats))
}

struct Axiomatic<'a> {
    revs: &'a Revisions,
    meter: Meter,
    next: Vec<usize>,
    /// Arbitration order of the revisions placed so far.
    order: Vec<usize>,
    /// Revisions visible to each placed revision.
    vis: Vec<Option<BTreeSet<usize>>>,
    leaves: u64,
}

impl Axiomatic<'_> {
    fn dfs(&mut self) -> Result<bool, BudgetExceeded> {
        self.meter.tick()?;
        if self.order.len() == self.revs.revs.len() {
            self.leaves += 1;
            return Ok(true);
        }
        for t in 0..self.revs.threads.len() {
            let Some(&r) = self.revs.by_thread[t].get(self.next[t]) else {
                continue;
            };
            for vis in self.visibility_choices(r) {
                if !self.queries_ok(r, &vis) {
                    continue;
                }
                self.vis[r] = Some(vis);
                self.order.push(r);
                self.next[t] += 1;
                if self.dfs()? {
                    return Ok(true);
                }
                self.next[t] -= 1;
                self.order.pop();
                self.vis[r] = None;
            }
        }
        Ok(false)
    }

    /// Closed sets of already arbitrated revisions that `r` may see.
    fn visibility_choices(&self, r: usize) -> Vec<BTreeSet<usize>> {
        let rev = &self.revs.revs[r];
        let own = &self.revs.by_thread[rev.thread];
        let pos = own.iter().position(|&x| x == r).expect("own revision");
        let mut base = BTreeSet::new();
        if pos > 0 {
            let prev = own[pos - 1];
            base.insert(prev);
            base.extend(self.vis[prev].as_ref().expect("placed").iter().copied());
        }
        let has_query = rev
            .events
            .iter()
            .any(|&k| matches!(self.revs.action(k), Action::Qu { .. }));
        if !has_query {
            return vec![base];
        }
        let optional: Vec<usize> = self
            .order
            .iter()
            .copied()
            .filter(|&b| {
                let br = &self.revs.revs[b];
                br.thread != rev.thread && br.committed && !base.contains(&b)
            })
            .collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << optional.len()) {
            let mut set = base.clone();
            for (j, &b) in optional.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    set.insert(b);
                    set.extend(self.vis[b].as_ref().expect("placed").iter().copied());
                }
            }
            // Closure may pull in revisions that must stay invisible.
            let allowed = set.iter().all(|&b| {
                let br = &self.revs.revs[b];
                br.thread == rev.thread || br.committed
            });
            if allowed && seen.insert(set.clone()) {
                out.push(set);
            }
        }
        out
    }

    fn queries_ok(&self, r: usize, vis: &BTreeSet<usize>) -> bool {
        let mut visible: Vec<&Action> = Vec::new();
        for &b in &self.order {
            if vis.contains(&b) {
                visible.extend(
                    self.revs.revs[b]
                        .events
                        .iter()
                        .map(|&k| self.revs.action(k)),
                );
            }
        }
        for &k in &self.revs.revs[r].events {
            let a = self.revs.action(k);
            if !query_matches(&visible, a) {
                return false;
            }
            visible.push(a);
        }
        true
    }
}

fn certificate(
    revs: &Revisions,
    order: &[usize],
    vis: &[Option<BTreeSet<usize>>],
) -> OrderCertificate {
    let pos = |k: usize| revs.events[k].0;
    let seq: Vec<usize> = order
        .iter()
        .flat_map(|&r| revs.revs[r].events.iter().copied())
        .collect();
    let mut arbitration = BTreeSet::new();
    for (x, &a) in seq.iter().enumerate() {
        for &b in &seq[x + 1..] {
            arbitration.insert((pos(a), pos(b)));
        }
    }
    let mut visibility = BTreeSet::new();
    for (r, rev) in revs.revs.iter().enumerate() {
        for (x, &b) in rev.events.iter().enumerate() {
            for &a in &rev.events[..x] {
                visibility.insert((pos(a), pos(b)));
            }
            for &v in vis[r].as_ref().expect("complete solution") {
                for &a in &revs.revs[v].events {
                    visibility.insert((pos(a), pos(b)));
                }
            }
        }
    }
    OrderCertificate {
        visibility,
        arbitration,
    }
}

/// Checks a certificate against the six conditions, event by event, with
/// positions referring to `trace`. Returns the first violated condition.
pub fn validate_certificate(trace: &Trace, cert: &OrderCertificate) -> Result<(), String> {
    validate_revisions(trace).map_err(|e| e.to_string())?;
    let nodes: Vec<usize> = (1..=trace.len())
        .filter(|&p| trace.at(p).is_some_and(|e| e.thread().is_some()))
        .collect();
    let node_set: BTreeSet<usize> = nodes.iter().copied().collect();
    let ev = |p: usize| trace.at(p).expect("node in range");
    let rev_key = |p: usize| {
        let e = ev(p);
        (e.thread().cloned(), e.action().revision())
    };
    let committed: BTreeSet<(Option<ThreadId>, Option<RevisionId>)> = nodes
        .iter()
        .filter(|&&p| matches!(ev(p).action(), Action::Com { .. }))
        .map(|&p| rev_key(p))
        .collect();
    let (a, v) = (&cert.arbitration, &cert.visibility);
    for (name, rel) in [("arbitration", a), ("visibility", v)] {
        if let Some(&(x, y)) = rel
            .iter()
            .find(|(x, y)| !node_set.contains(x) || !node_set.contains(y))
        {
            return Err(format!(
                "{name} relates ({x},{y}), which are not both thread events"
            ));
        }
        if let Some(&(x, _)) = rel.iter().find(|(x, y)| x == y) {
            return Err(format!("{name} is not irreflexive at {x}"));
        }
        for &(x, y) in rel {
            for &(y2, z) in rel.range((y, 0)..=(y, usize::MAX)) {
                debug_assert_eq!(y, y2);
                if !rel.contains(&(x, z)) {
                    return Err(format!("{name} is not transitive: ({x},{y}), ({y},{z})"));
                }
            }
        }
        // Factoring over revisions, for pairs in different revisions.
        for &(x, y) in rel {
            if rev_key(x) == rev_key(y) {
                continue;
            }
            for &x2 in nodes.iter().filter(|&&p| rev_key(p) == rev_key(x)) {
                for &y2 in nodes.iter().filter(|&&p| rev_key(p) == rev_key(y)) {
                    if !rel.contains(&(x2, y2)) {
                        return Err(format!(
                            "{name} does not factor over revisions: ({x},{y}) without ({x2},{y2})"
                        ));
                    }
                }
            }
        }
    }
    for (i, &x) in nodes.iter().enumerate() {
        for &y in &nodes[i + 1..] {
            if !a.contains(&(x, y)) && !a.contains(&(y, x)) {
                return Err(format!("arbitration does not order {x} and {y}"));
            }
        }
    }
    if let Some(&(x, y)) = v.iter().find(|p| !a.contains(p)) {
        return Err(format!("visibility ({x},{y}) is not in arbitration"));
    }
    for (i, &x) in nodes.iter().enumerate() {
        for &y in &nodes[i + 1..] {
            if ev(x).thread() == ev(y).thread() && !v.contains(&(x, y)) {
                return Err(format!("program order ({x},{y}) is not in visibility"));
            }
        }
    }
    for &(x, y) in v {
        if !committed.contains(&rev_key(x)) && ev(x).thread() != ev(y).thread() {
            return Err(format!(
                "uncommitted event {x} is visible to another thread at {y}"
            ));
        }
    }
    let rank: BTreeMap<usize, usize> = nodes
        .iter()
        .map(|&p| (p, a.iter().filter(|(_, y)| *y == p).count()))
        .collect();
    for &q in &nodes {
        if !matches!(ev(q).action(), Action::Qu { .. }) {
            continue;
        }
        let mut seen: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|&p| v.contains(&(p, q)))
            .collect();
        seen.sort_by_key(|p| rank[p]);
        let actions: Vec<&Action> = seen.iter().map(|&p| ev(p).action()).collect();
        if !query_matches(&actions, ev(q).action()) {
            return Err(format!("query at {q} does not match its visible updates"));
        }
    }
    Ok(())
}

/// Epistemic eventual consistency: searches a trace that the threads cannot
/// distinguish from `trace`, built from its thread events and forwarding
/// events, that is correct.
///
/// Forwarding events are placed only directly before the first event of a
/// revision of the receiving thread. Any correct witness can be rearranged
/// into that shape, since a thread's knowledge matters only when it acts.
pub fn check_ec_epistemic(trace: &Trace, options: &CheckOptions) -> Result<Verdict, CheckError> {
    let revs = Revisions::of(trace)?;
    let n_threads = revs.threads.len();
    let mut candidates = Vec::new();
    for (r, rev) in revs.revs.iter().enumerate() {
        if !rev.committed {
            continue;
        }
        for to in 0..n_threads {
            if to != rev.thread {
                candidates.push((r, to));
            }
        }
    }
    let lanes: Vec<Vec<usize>> = revs
        .by_thread
        .iter()
        .map(|rs| {
            rs.iter()
                .flat_map(|&r| revs.revs[r].events.iter().copied())
                .collect()
        })
        .collect();
    let mut search = Epistemic {
        revs: &revs,
        lanes,
        candidates,
        meter: options.budget.meter(),
        failed: HashSet::new(),
        leaves: 0,
    };
    let start = Node {
        counts: vec![0; n_threads],
        used: vec![false; search.candidates.len()],
        known: vec![BTreeSet::new(); n_threads],
        snapshots: BTreeMap::new(),
        committed: BTreeSet::new(),
        inside: None,
        order: Vec::new(),
        path: Vec::new(),
    };
    let found = search.dfs(start)?;
    let stats = Stats {
        nodes: search.meter.nodes(),
        witnesses: search.leaves,
    };
    Ok(Verdict::with_witness(found, stats))
}

#[derive(Clone)]
struct Node {
    counts: Vec<usize>,
    used: Vec<bool>,
    /// Events (indices into the revision table) each thread knows of.
    known: Vec<BTreeSet<usize>>,
    /// Knowledge of the author at each commit.
    snapshots: BTreeMap<usize, BTreeSet<usize>>,
    committed: BTreeSet<usize>,
    /// Thread inside a committed revision, which must finish first.
    inside: Option<usize>,
    /// Thread events in witness order.
    order: Vec<usize>,
    path: Vec<Event>,
}

type NodeKey = (
    Vec<usize>,
    Vec<bool>,
    Vec<BTreeSet<usize>>,
    BTreeMap<usize, BTreeSet<usize>>,
);

struct Epistemic<'a> {
    revs: &'a Revisions,
    lanes: Vec<Vec<usize>>,
    /// `(revision, receiving thread)` pairs that may be forwarded.
    candidates: Vec<(usize, usize)>,
    meter: Meter,
    failed: HashSet<NodeKey>,
    leaves: u64,
}

impl Epistemic<'_> {
    fn dfs(&mut self, node: Node) -> Result<Option<Trace>, BudgetExceeded> {
        self.meter.tick()?;
        if node
            .counts
            .iter()
            .zip(&self.lanes)
            .all(|(c, l)| *c == l.len())
        {
            self.leaves += 1;
            let witness = Trace::new(node.path);
            return Ok(correct_evc(&witness).then_some(witness));
        }
        let key: NodeKey = (
            node.order.clone(),
            node.used.clone(),
            node.known.clone(),
            node.snapshots.clone(),
        );
        if self.failed.contains(&key) {
            return Ok(None);
        }
        let lanes: Vec<usize> = match node.inside {
            Some(t) => vec![t],
            None => (0..self.lanes.len()).collect(),
        };
        for t in lanes {
            let Some(&k) = self.lanes[t].get(node.counts[t]) else {
                continue;
            };
            let r = self.revs.rev_of[k];
            let starts_revision = self.revs.revs[r].events[0] == k;
            let available: Vec<usize> = if starts_revision {
                (0..self.candidates.len())
                    .filter(|&c| {
                        let (from, to) = self.candidates[c];
                        to == t && !node.used[c] && node.committed.contains(&from)
                    })
                    .collect()
            } else {
                Vec::new()
            };
            let mut subsets: Vec<u64> = (0..1u64 << available.len()).collect();
            subsets.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
            for mask in subsets {
                let mut child = node.clone();
                for (j, &c) in available.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        self.forward(&mut child, c);
                    }
                }
                if !self.emit(&mut child, t, k) {
                    continue;
                }
                if let Some(w) = self.dfs(child)? {
                    return Ok(Some(w));
                }
            }
        }
        self.failed.insert(key);
        Ok(None)
    }

    fn forward(&self, node: &mut Node, c: usize) {
        let (r, to) = self.candidates[c];
        node.used[c] = true;
        let snap = node.snapshots.get(&r).cloned().unwrap_or_default();
        node.known[to].extend(snap);
        let rev = &self.revs.revs[r];
        node.path.push(Event::fwd(
            self.revs.threads[rev.thread].as_str(),
            self.revs.threads[to].as_str(),
            rev.id.0,
        ));
    }

    /// Appends thread `t`'s next event `k`; false if a query result is wrong.
    fn emit(&self, node: &mut Node, t: usize, k: usize) -> bool {
        node.counts[t] += 1;
        node.known[t].insert(k);
        node.order.push(k);
        node.path.push(self.revs.events[k].1.clone());
        let r = self.revs.rev_of[k];
        let action = self.revs.action(k);
        match action {
            Action::Com { .. } => {
                node.inside = None;
                node.committed.insert(r);
                node.snapshots.insert(r, node.known[t].clone());
            }
            _ if self.revs.revs[r].committed => node.inside = Some(t),
            _ => node.inside = None,
        }
        if let Action::Qu { query, result, .. } = action {
            let log = Log::new(
                node.order
                    .iter()
                    .filter(|j| node.known[t].contains(j))
                    .map(|&j| self.revs.action(j).clone())
                    .collect(),
            );
            return spec::result(query, &log, result);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::fixtures::*;
    use crate::indist::{group_indist, AgentGroup};

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    fn stale_single_thread() -> Trace {
        Trace::new(vec![
            Event::up("t1", 0, "x", 0),
            Event::com("t1", 0),
            Event::qu("t1", 1, "x", 5),
        ])
    }

    #[test]
    fn e4_is_eventually_consistent_axiomatically() {
        let v = check_ec_axiomatic(&e4(), &opts()).unwrap();
        assert!(v.consistent);
        let cert = v.certificate.unwrap();
        validate_certificate(&e4(), &cert).unwrap();
    }

    #[test]
    fn e4_is_eventually_consistent_epistemically() {
        let v = check_ec_epistemic(&e4(), &opts()).unwrap();
        let w = v.witness.unwrap();
        assert!(correct_evc(&w));
        assert!(w.events().contains(&Event::fwd("t1", "t2", 0)));
        assert!(w.events().contains(&Event::fwd("t1", "t2", 1)));
        let g = AgentGroup::threads_of(&e4());
        assert!(group_indist(&e4(), e4().len(), &w, w.len(), &g).unwrap());
    }

    #[test]
    fn forwarding_events_of_the_input_are_ignored() {
        assert!(check_ec_axiomatic(&e5(), &opts()).unwrap().consistent);
        assert!(check_ec_epistemic(&e5(), &opts()).unwrap().consistent);
        let cert = check_ec_axiomatic(&e5(), &opts())
            .unwrap()
            .certificate
            .unwrap();
        validate_certificate(&e5(), &cert).unwrap();
    }

    #[test]
    fn empty_trace() {
        let v = check_ec_axiomatic(&Trace::empty(), &opts()).unwrap();
        assert_eq!(v.certificate, Some(OrderCertificate::default()));
        assert!(
            check_ec_epistemic(&Trace::empty(), &opts())
                .unwrap()
                .consistent
        );
    }

    #[test]
    fn stale_query_is_inconsistent() {
        assert!(
            !check_ec_axiomatic(&stale_single_thread(), &opts())
                .unwrap()
                .consistent
        );
        assert!(
            !check_ec_epistemic(&stale_single_thread(), &opts())
                .unwrap()
                .consistent
        );
    }

    #[test]
    fn uncommitted_updates_stay_local() {
        // t1 never commits x:=1, so t2 cannot read it.
        let t = Trace::new(vec![Event::up("t1", 0, "x", 1), Event::qu("t2", 0, "x", 1)]);
        assert!(!check_ec_axiomatic(&t, &opts()).unwrap().consistent);
        assert!(!check_ec_epistemic(&t, &opts()).unwrap().consistent);
        let own = Trace::new(vec![Event::up("t1", 0, "x", 1), Event::qu("t1", 0, "x", 1)]);
        assert!(check_ec_axiomatic(&own, &opts()).unwrap().consistent);
        assert!(check_ec_epistemic(&own, &opts()).unwrap().consistent);
    }

    #[test]
    fn revisions_are_seen_whole() {
        // t2 would have to see x:=1 but not y:=1 from the same revision.
        let t = Trace::new(vec![
            Event::up("t1", 0, "x", 1),
            Event::up("t1", 0, "y", 1),
            Event::com("t1", 0),
            Event::qu("t2", 0, "x", 1),
            Event::qu("t2", 0, "y", 0),
        ]);
        assert!(!check_ec_axiomatic(&t, &opts()).unwrap().consistent);
        assert!(!check_ec_epistemic(&t, &opts()).unwrap().consistent);
    }

    #[test]
    fn invalid_input_is_rejected() {
        assert!(matches!(
            check_ec_axiomatic(&e7(), &opts()),
            Err(CheckError::Precondition(_))
        ));
        assert!(matches!(
            check_ec_epistemic(&e7(), &opts()),
            Err(CheckError::Precondition(_))
        ));
    }

    #[test]
    fn certificates_are_checked() {
        let cert = check_ec_axiomatic(&e4(), &opts())
            .unwrap()
            .certificate
            .unwrap();
        let mut broken = cert.clone();
        let first = *broken.visibility.iter().next().unwrap();
        broken.visibility.remove(&first);
        assert!(validate_certificate(&e4(), &broken).is_err());
        let mut cyclic = cert.clone();
        let (x, y) = *cert.arbitration.iter().next().unwrap();
        cyclic.arbitration.insert((y, x));
        assert!(validate_certificate(&e4(), &cyclic).is_err());
        assert!(
            validate_certificate(&stale_single_thread(), &OrderCertificate::default()).is_err()
        );
    }

    #[test]
    fn budget_gives_no_verdict() {
        let o = CheckOptions::with_budget(Budget::nodes(1));
        assert!(matches!(
            check_ec_axiomatic(&e4(), &o),
            Err(CheckError::Budget(_))
        ));
        assert!(matches!(
            check_ec_epistemic(&e4(), &o),
            Err(CheckError::Budget(_))
        ));
    }
}
