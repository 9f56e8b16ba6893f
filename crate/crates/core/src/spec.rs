//! Specifications: the oracle interface, the shared register, and the
//! correctness predicate of the replicated store (logs, knowledge of actions,
//! query results and network assumptions).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::TraceError;
use crate::trace::{
    act_seq, is_subsequence, Action, Event, RevisionId, State, ThreadId, Trace, Value, Var,
};

/// Incremental membership test for a set of finite traces.
///
/// A trace belongs to the specification when folding [`SpecOracle::step`]
/// over it from [`SpecOracle::initial`] never rejects and the final state is
/// accepting. Prefix closure is not assumed.
pub trait SpecOracle {
    type State: Clone + Eq + Hash + Debug;

    fn initial(&self) -> Self::State;

    /// `None` rejects the event.
    fn step(&self, state: &Self::State, event: &Event) -> Option<Self::State>;

    fn accepting(&self, state: &Self::State) -> bool;
}

impl<S: SpecOracle + ?Sized> SpecOracle for &S {
    type State = S::State;

    fn initial(&self) -> Self::State {
        (**self).initial()
    }

    fn step(&self, state: &Self::State, event: &Event) -> Option<Self::State> {
        (**self).step(state, event)
    }

    fn accepting(&self, state: &Self::State) -> bool {
        (**self).accepting(state)
    }
}

/// `E ∈ Spec`.
pub fn spec_member<S: SpecOracle>(spec: &S, trace: &Trace) -> bool {
    let mut state = spec.initial();
    for e in trace {
        match spec.step(&state, e) {
            Some(next) => state = next,
            None => return false,
        }
    }
    spec.accepting(&state)
}

/// Accepts every trace. Useful for experiments on the relations alone.
#[derive(Clone, Copy, Debug, Default)]
pub struct AcceptAll;

impl SpecOracle for AcceptAll {
    type State = ();

    fn initial(&self) {}

    fn step(&self, _: &(), _: &Event) -> Option<()> {
        Some(())
    }

    fn accepting(&self, _: &()) -> bool {
        true
    }
}

/// Sequential specification of a shared integer register initialised to 0.
///
/// Methods are `ld` (no argument, returns the current value) and `st` (stores
/// its argument, returns `true`). Calls are accepted either as single
/// [`Action::Call`] events or as an invocation immediately followed by the
/// matching return of the same thread. Overlapping calls are rejected. A trailing
/// pending invocation is accepted and has no effect.
#[derive(Clone, Copy, Debug, Default)]
pub struct RegisterSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum RegOp {
    Load,
    Store(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterState {
    value: i64,
    pending: Option<(ThreadId, RegOp)>,
}

impl RegisterState {
    pub fn value(&self) -> i64 {
        self.value
    }
}

fn reg_op(method: &str, arg: Value) -> Option<RegOp> {
    match (method, arg) {
        ("ld", Value::Unit) => Some(RegOp::Load),
        ("st", Value::Int(v)) => Some(RegOp::Store(v)),
        _ => None,
    }
}

impl SpecOracle for RegisterSpec {
    type State = RegisterState;

    fn initial(&self) -> RegisterState {
        RegisterState {
            value: 0,
            pending: None,
        }
    }

    fn step(&self, state: &RegisterState, event: &Event) -> Option<RegisterState> {
        let Some(thread) = event.thread() else {
            // Environment events are invisible to the register.
            return Some(state.clone());
        };
        match event.action() {
            Action::Call { method, arg, ret } => {
                if state.pending.is_some() {
                    return None;
                }
                match (reg_op(method.as_str(), *arg)?, ret) {
                    (RegOp::Load, Value::Int(v)) if *v == state.value => Some(state.clone()),
                    (RegOp::Store(v), Value::Bool(true)) => Some(RegisterState {
                        value: v,
                        pending: None,
                    }),
                    _ => None,
                }
            }
            Action::Inv { method, arg } => {
                if state.pending.is_some() {
                    return None;
                }
                let op = reg_op(method.as_str(), *arg)?;
                Some(RegisterState {
                    value: state.value,
                    pending: Some((thread.clone(), op)),
                })
            }
            Action::Ret { method, value } => {
                let (owner, op) = state.pending.as_ref()?;
                if owner != thread {
                    return None;
                }
                match (method.as_str(), op, value) {
                    ("ld", RegOp::Load, Value::Int(v)) if *v == state.value => {
                        Some(RegisterState {
                            value: state.value,
                            pending: None,
                        })
                    }
                    ("st", RegOp::Store(v), Value::Bool(true)) => Some(RegisterState {
                        value: *v,
                        pending: None,
                    }),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    fn accepting(&self, _: &RegisterState) -> bool {
        true
    }
}

/// A log: a finite sequence of actions, ordered by position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Log {
    pub actions: Vec<Action>,
}

impl Log {
    pub fn new(actions: Vec<Action>) -> Self {
        Log { actions }
    }

    /// `a <_L a'`: first occurrence of `a` strictly before that of `a'`.
    pub fn before(&self, a: &Action, b: &Action) -> bool {
        let pa = self.actions.iter().position(|x| x == a);
        let pb = self.actions.iter().position(|x| x == b);
        matches!((pa, pb), (Some(x), Some(y)) if x < y)
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.actions.contains(a)
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

/// Knowledge of thread `t` at `(E,i)`: the 1-based positions of the events
/// whose actions `t` knows of.
///
/// A thread knows its own events, and when revision `id` of `t'` is forwarded
/// to it, everything `t'` knew when committing `id`. Knowledge is tracked per
/// event occurrence, so equal actions performed by different threads (two
/// `com(0)`, say) stay distinct.
pub fn k_log(trace: &Trace, i: usize, thread: &ThreadId) -> Result<BTreeSet<usize>, TraceError> {
    check_index(trace, i)?;
    let mut scan = KnowledgeScan::default();
    for (k, e) in trace.events()[..i].iter().enumerate() {
        scan.step(k + 1, e);
    }
    Ok(scan.known(thread))
}

/// Actions at the positions returned by [`k_log`].
pub fn k_log_actions(
    trace: &Trace,
    i: usize,
    thread: &ThreadId,
) -> Result<BTreeSet<Action>, TraceError> {
    Ok(k_log(trace, i, thread)?
        .into_iter()
        .map(|p| trace.at(p).expect("known position").action().clone())
        .collect())
}

/// Forward pass computing every thread's knowledge prefix by prefix.
#[derive(Default, Clone, Debug)]
pub(crate) struct KnowledgeScan {
    known: BTreeMap<ThreadId, BTreeSet<usize>>,
    // What the author knew at each commit of a revision.
    snapshots: BTreeMap<(ThreadId, RevisionId), BTreeSet<usize>>,
}

impl KnowledgeScan {
    pub(crate) fn step(&mut self, position: usize, event: &Event) {
        match (event.thread(), event.action()) {
            (Some(t), action) => {
                let set = self.known.entry(t.clone()).or_default();
                set.insert(position);
                if let Action::Com { rev } = action {
                    let snap = set.clone();
                    self.snapshots
                        .entry((t.clone(), *rev))
                        .or_default()
                        .extend(snap);
                }
            }
            (None, Action::Fwd { from, to, rev }) => {
                if let Some(snap) = self.snapshots.get(&(from.clone(), *rev)) {
                    let snap = snap.clone();
                    self.known.entry(to.clone()).or_default().extend(snap);
                }
            }
            (None, _) => {}
        }
    }

    pub(crate) fn known(&self, thread: &ThreadId) -> BTreeSet<usize> {
        self.known.get(thread).cloned().unwrap_or_default()
    }
}

/// The canonical log `L*(E,i,t)`: the events `t` knows of, in trace order.
pub fn canonical_log(trace: &Trace, i: usize, thread: &ThreadId) -> Result<Log, TraceError> {
    let known = k_log(trace, i, thread)?;
    Ok(log_of_positions(trace, &known))
}

fn log_of_positions(trace: &Trace, positions: &BTreeSet<usize>) -> Log {
    Log::new(
        positions
            .iter()
            .map(|&p| trace.at(p).expect("position in range").action().clone())
            .collect(),
    )
}

/// `consistent(L)` at `(E,i)`: `L` is a subsequence of the actions of `E↾i`.
pub fn consistent(trace: &Trace, i: usize, log: &Log) -> Result<bool, TraceError> {
    check_index(trace, i)?;
    let acts = act_seq(&Trace::new(trace.events()[..i].to_vec()));
    Ok(is_subsequence(&log.actions, &acts))
}

/// `L validLog t` at `(E,i)`: the log holds exactly the actions `t` knows of
/// and is consistent with the trace.
pub fn valid_log(
    trace: &Trace,
    i: usize,
    thread: &ThreadId,
    log: &Log,
) -> Result<bool, TraceError> {
    let known = k_log_actions(trace, i, thread)?;
    let logged: BTreeSet<Action> = log.actions.iter().cloned().collect();
    Ok(known == logged && consistent(trace, i, log)?)
}

/// Applies the updates among `actions` to `state` in the order given by
/// `order`. Queries, commits and other actions leave the state unchanged.
pub fn apply<'a, I, F>(actions: I, mut order: F, state: State) -> State
where
    I: IntoIterator<Item = &'a Action>,
    F: FnMut(&Action, &Action) -> Ordering,
{
    let mut sorted: Vec<&Action> = actions.into_iter().collect();
    sorted.sort_by(|a, b| order(a, b));
    let mut s = state;
    for a in sorted {
        if let Action::Up { update, .. } = a {
            update.apply(&mut s);
        }
    }
    s
}

/// `result(q, L, r)`: querying `q` after applying the log's updates in log
/// order to the initial state yields `r`.
pub fn result(query: &Var, log: &Log, expected: &Value) -> bool {
    // Every entry is applied, so repeated actions keep their places.
    let mut s = State::default();
    for a in &log.actions {
        if let Action::Up { update, .. } = a {
            update.apply(&mut s);
        }
    }
    s.query(query) == *expected
}

/// Revision `(t, id)` of a replicated-store trace.
pub type Revision = (ThreadId, RevisionId);

/// Checks that every thread groups its queries and updates into revisions:
/// actions between two commits share one id, the next commit carries that id,
/// and no id is reused. Generic register actions are rejected.
pub fn validate_revisions(trace: &Trace) -> Result<(), TraceError> {
    let mut open: BTreeMap<ThreadId, RevisionId> = BTreeMap::new();
    let mut closed: BTreeSet<Revision> = BTreeSet::new();
    for (k, e) in trace.iter().enumerate() {
        let Some(t) = e.thread() else { continue };
        let fail = |reason: String| TraceError::RevisionDiscipline {
            thread: t.to_string(),
            position: k + 1,
            reason,
        };
        let Some(rev) = e.action().revision() else {
            return Err(fail(format!("{} is not a store action", e.action())));
        };
        if closed.contains(&(t.clone(), rev)) {
            return Err(fail(format!("revision {rev} was already committed")));
        }
        if let Some(cur) = open.get(t) {
            if *cur != rev {
                return Err(fail(format!(
                    "revision {rev} started before revision {cur} was committed"
                )));
            }
        }
        if matches!(e.action(), Action::Com { .. }) {
            open.remove(t);
            closed.insert((t.clone(), rev));
        } else {
            open.insert(t.clone(), rev);
        }
    }
    Ok(())
}

/// The network assumptions on a finite trace:
///
/// * atomic transactions: the events of a committed revision form one
///   contiguous block of the trace, and a thread receives no forwarded
///   revision while it has an uncommitted revision open;
/// * forwarding: `(env, fwd(t,t',id))` comes after `(t, com(id))`;
/// * liveness holds vacuously on finite traces.
pub fn network_ok(trace: &Trace) -> bool {
    atomic_transactions_ok(trace) && forwarding_ok(trace)
}

pub(crate) fn atomic_transactions_ok(trace: &Trace) -> bool {
    if validate_revisions(&trace.without_env_and_generic()).is_err() {
        return false;
    }
    let committed: BTreeSet<Revision> = trace
        .iter()
        .filter_map(|e| match (e.thread(), e.action()) {
            (Some(t), Action::Com { rev }) => Some((t.clone(), *rev)),
            _ => None,
        })
        .collect();
    // Thread currently inside a committed revision, if any.
    let mut inside: Option<Revision> = None;
    // Threads with an uncommitted revision already started.
    let mut open_uncommitted: BTreeSet<ThreadId> = BTreeSet::new();
    for e in trace {
        match (e.thread(), e.action().revision()) {
            (Some(t), Some(rev)) => {
                let r = (t.clone(), rev);
                if let Some(cur) = &inside {
                    if *cur != r {
                        return false;
                    }
                }
                if committed.contains(&r) {
                    inside = if matches!(e.action(), Action::Com { .. }) {
                        None
                    } else {
                        Some(r)
                    };
                } else {
                    open_uncommitted.insert(t.clone());
                }
            }
            _ => {
                if inside.is_some() {
                    return false;
                }
                if let Action::Fwd { to, .. } = e.action() {
                    if open_uncommitted.contains(to) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub(crate) fn forwarding_ok(trace: &Trace) -> bool {
    let mut committed: BTreeSet<Revision> = BTreeSet::new();
    for e in trace {
        match (e.thread(), e.action()) {
            (Some(t), Action::Com { rev }) => {
                committed.insert((t.clone(), *rev));
            }
            (None, Action::Fwd { from, rev, .. }) if !committed.contains(&(from.clone(), *rev)) => {
                return false;
            }
            _ => {}
        }
    }
    true
}

impl Trace {
    fn without_env_and_generic(&self) -> Trace {
        self.iter()
            .filter(|e| e.thread().is_some() && e.action().is_store_action())
            .cloned()
            .collect()
    }
}

/// Correctness of a replicated-store trace: whenever a thread posed a query,
/// its canonical log is valid and yields the recorded result; and the network
/// assumptions hold.
pub fn correct_evc(trace: &Trace) -> bool {
    if !network_ok(trace) {
        return false;
    }
    let mut scan = KnowledgeScan::default();
    for (k, e) in trace.iter().enumerate() {
        let p = k + 1;
        scan.step(p, e);
        if let (
            Some(t),
            Action::Qu {
                query, result: r, ..
            },
        ) = (e.thread(), e.action())
        {
            let log = log_of_positions(trace, &scan.known(t));
            let valid = valid_log(trace, p, t, &log).expect("position in range");
            if !valid || !result(query, &log, r) {
                return false;
            }
        }
    }
    true
}

/// Visibility and arbitration orders over the non-forwarding events of a
/// trace, as pairs of 1-based positions `(earlier, later)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderCertificate {
    pub visibility: BTreeSet<(usize, usize)>,
    pub arbitration: BTreeSet<(usize, usize)>,
}

impl OrderCertificate {
    /// The arbitration order as a sequence of positions.
    pub fn arbitration_sequence(&self) -> Vec<usize> {
        let mut nodes: BTreeSet<usize> = BTreeSet::new();
        for &(a, b) in &self.arbitration {
            nodes.insert(a);
            nodes.insert(b);
        }
        let mut seq: Vec<usize> = nodes.into_iter().collect();
        // In a strict total order, rank = number of predecessors.
        seq.sort_by_key(|n| self.arbitration.iter().filter(|(_, b)| b == n).count());
        seq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::trace::Assign;

    fn t(name: &str) -> ThreadId {
        ThreadId::new(name)
    }

    fn acts(events: &[Event]) -> Vec<Action> {
        events.iter().map(|e| e.action().clone()).collect()
    }

    #[test]
    fn register_membership_of_examples() {
        assert!(spec_member(&RegisterSpec, &e2()));
        assert!(!spec_member(&RegisterSpec, &e3()));
        assert!(!spec_member(&RegisterSpec, &e1()));
        assert!(spec_member(&RegisterSpec, &Trace::empty()));
        assert!(spec_member(&RegisterSpec, &e8()));
        assert!(spec_member(&RegisterSpec, &e2().expand_calls()));
        assert!(!spec_member(&RegisterSpec, &e7()));
        assert!(!spec_member(&RegisterSpec, &e6()));
    }

    #[test]
    fn register_rejects_mismatched_returns() {
        let other_thread = Trace::new(vec![Event::ld_inv("t1"), Event::ld_ret("t2", 0)]);
        assert!(!spec_member(&RegisterSpec, &other_thread));
        let wrong_method = Trace::new(vec![Event::ld_inv("t1"), Event::st_ret("t1")]);
        assert!(!spec_member(&RegisterSpec, &wrong_method));
        let pending = Trace::new(vec![Event::st("t1", 3), Event::ld_inv("t2")]);
        assert!(spec_member(&RegisterSpec, &pending));
        let unknown = Trace::new(vec![Event::call(
            "t1",
            "cas",
            Value::Int(1),
            Value::Bool(true),
        )]);
        assert!(!spec_member(&RegisterSpec, &unknown));
        assert!(spec_member(&AcceptAll, &e3()));
    }

    #[test]
    fn knowledge_at_first_query_of_e5() {
        let e = e5();
        let known = k_log_actions(&e, 6, &t("t2")).unwrap();
        let expected: BTreeSet<Action> = acts(&[
            Event::up("t1", 0, "x", 0),
            Event::com("t1", 0),
            Event::qu("t2", 0, "x", 0),
        ])
        .into_iter()
        .collect();
        assert_eq!(known, expected);
        assert_eq!(
            k_log(&e, 6, &t("t2")).unwrap(),
            [1, 2, 6].into_iter().collect()
        );
    }

    #[test]
    fn knowledge_at_end_of_e5_covers_all_store_events() {
        let e = e5();
        let known = k_log(&e, 9, &t("t2")).unwrap();
        assert_eq!(known, [1, 2, 4, 5, 6, 7, 9].into_iter().collect());
        assert!(k_log(&e, 0, &t("t2")).unwrap().is_empty());
        assert!(k_log(&e, 9, &t("t3")).unwrap().is_empty());
    }

    #[test]
    fn canonical_log_matches_presented_logs() {
        let e = e5();
        let first = canonical_log(&e, 6, &t("t2")).unwrap();
        assert_eq!(
            first.actions,
            acts(&[
                Event::up("t1", 0, "x", 0),
                Event::com("t1", 0),
                Event::qu("t2", 0, "x", 0)
            ])
        );
        let last = canonical_log(&e, 9, &t("t2")).unwrap();
        assert_eq!(
            last.actions,
            acts(&[
                Event::up("t1", 0, "x", 0),
                Event::com("t1", 0),
                Event::up("t1", 1, "x", 1),
                Event::com("t1", 1),
                Event::qu("t2", 0, "x", 0),
                Event::com("t2", 0),
                Event::qu("t2", 1, "x", 1),
            ])
        );
    }

    #[test]
    fn valid_logs() {
        let e = e5();
        let l = Log::new(acts(&[
            Event::up("t1", 0, "x", 0),
            Event::com("t1", 0),
            Event::qu("t2", 0, "x", 0),
        ]));
        assert!(valid_log(&e, 6, &t("t2"), &l).unwrap());
        let missing = Log::new(acts(&[
            Event::up("t1", 0, "x", 0),
            Event::qu("t2", 0, "x", 0),
        ]));
        assert!(!valid_log(&e, 6, &t("t2"), &missing).unwrap());
        assert!(valid_log(&Trace::empty(), 0, &t("t1"), &Log::default()).unwrap());
    }

    #[test]
    fn consistency_of_logs() {
        let e = e5();
        let l = Log::new(acts(&[
            Event::up("t1", 0, "x", 0),
            Event::qu("t2", 0, "x", 0),
        ]));
        assert!(consistent(&e, 9, &l).unwrap());
        assert!(consistent(&e, 9, &Log::default()).unwrap());
        let three = Trace::new(vec![
            Event::up("t1", 0, "x", 1),
            Event::up("t1", 0, "x", 2),
            Event::com("t1", 0),
        ]);
        let swapped = Log::new(acts(&[
            Event::up("t1", 0, "x", 2),
            Event::up("t1", 0, "x", 1),
        ]));
        assert!(!consistent(&three, 3, &swapped).unwrap());
        assert!(consistent(&e, 10, &l).is_err());
    }

    #[test]
    fn apply_in_given_order() {
        let a0 = Event::up("t1", 0, "x", 0).action().clone();
        let a1 = Event::up("t1", 0, "x", 1).action().clone();
        let x = Var::new("x");
        let by_list = |list: Vec<Action>| {
            move |a: &Action, b: &Action| {
                let pa = list.iter().position(|y| y == a);
                let pb = list.iter().position(|y| y == b);
                pa.cmp(&pb)
            }
        };
        let s = apply(
            [&a0, &a1],
            by_list(vec![a0.clone(), a1.clone()]),
            State::default(),
        );
        assert_eq!(s.get(&x), 1);
        let s = apply(
            [&a0, &a1],
            by_list(vec![a1.clone(), a0.clone()]),
            State::default(),
        );
        assert_eq!(s.get(&x), 0);
        let s = apply(std::iter::empty(), by_list(vec![]), State::default());
        assert_eq!(s, State::default());
        let mut start = State::default();
        Assign::new("y", 7).apply(&mut start);
        let s = apply([&a1], by_list(vec![a1.clone()]), start.clone());
        assert_eq!(s.get(&Var::new("y")), 7);
    }

    #[test]
    fn query_results() {
        let x = Var::new("x");
        let first = canonical_log(&e5(), 6, &t("t2")).unwrap();
        assert!(result(&x, &first, &Value::Int(0)));
        let last = canonical_log(&e5(), 9, &t("t2")).unwrap();
        assert!(result(&x, &last, &Value::Int(1)));
        assert!(!result(&x, &last, &Value::Int(0)));
        assert!(result(&x, &Log::default(), &Value::Int(0)));
    }

    #[test]
    fn network_assumptions() {
        assert!(network_ok(&e5()));
        assert!(network_ok(&Trace::empty()));
        let mut early = e5().into_events();
        // Move fwd(t1,t2,0) in front of (t1, com(0)).
        let f = early.remove(2);
        early.insert(1, f);
        assert!(!network_ok(&Trace::new(early)));
    }

    #[test]
    fn forwarding_into_an_open_revision_is_rejected() {
        // t2 would see a fresh revision in the middle of its own.
        let trace = Trace::new(vec![
            Event::up("t1", 0, "x", 1),
            Event::com("t1", 0),
            Event::qu("t2", 0, "x", 0),
            Event::fwd("t1", "t2", 0),
            Event::qu("t2", 0, "x", 1),
        ]);
        assert!(!network_ok(&trace));
        // Committed revisions are contiguous blocks.
        let split = Trace::new(vec![
            Event::up("t1", 0, "x", 1),
            Event::up("t2", 0, "x", 0),
            Event::com("t1", 0),
            Event::com("t2", 0),
        ]);
        assert!(!network_ok(&split));
    }

    #[test]
    fn correctness_of_store_traces() {
        assert!(correct_evc(&e5()));
        assert!(!correct_evc(&e4()));
        let no_queries = Trace::new(vec![Event::up("t1", 0, "x", 3), Event::com("t1", 0)]);
        assert!(correct_evc(&no_queries));
    }

    #[test]
    fn revision_discipline() {
        assert!(validate_revisions(&e4()).is_ok());
        let reused = Trace::new(vec![Event::com("t1", 0), Event::up("t1", 0, "x", 1)]);
        assert!(validate_revisions(&reused).is_err());
        let interleaved = Trace::new(vec![Event::up("t1", 0, "x", 1), Event::up("t1", 1, "x", 1)]);
        assert!(validate_revisions(&interleaved).is_err());
        let generic = Trace::new(vec![Event::ld_inv("t1")]);
        assert!(validate_revisions(&generic).is_err());
    }

    #[test]
    fn log_order() {
        let l = Log::new(acts(&[Event::com("t1", 0), Event::com("t1", 1)]));
        let a = Event::com("t1", 0).action().clone();
        let b = Event::com("t1", 1).action().clone();
        assert!(l.before(&a, &b));
        assert!(!l.before(&b, &a));
        assert!(!l.before(&a, &a));
    }
}
