//! Events, actions and finite traces.
//!
//! Positions are 1-based throughout: `E@1` is the first event and a trace of
//! length `n` has prefixes `prefix(E, 0) ..= prefix(E, n)`. A position that does
//! not exist is reported as `None` rather than a sentinel number.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::TraceError;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: &str) -> Self {
                Self(Arc::from(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                Self::new(name)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// Name of a thread (a participating agent).
    ThreadId
);
name_type!(
    /// Name of a method of the shared object, e.g. `ld` or `st`.
    Method
);
name_type!(
    /// A variable of the replicated store. Queries read exactly one variable.
    Var
);

/// Returns true if `name` is usable as a thread, method or variable name.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The agent performing an event.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Agent {
    Thread(ThreadId),
    /// The environment. Its events are invisible to every thread.
    Env,
}

impl Agent {
    pub fn thread(name: &str) -> Self {
        Agent::Thread(ThreadId::new(name))
    }

    pub fn as_thread(&self) -> Option<&ThreadId> {
        match self {
            Agent::Thread(t) => Some(t),
            Agent::Env => None,
        }
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agent::Thread(t) => write!(f, "{t}"),
            Agent::Env => f.write_str("env"),
        }
    }
}

/// Payload values. `Unit` is the argument of nullary invocations such as `ld()`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value {
    Unit,
    Int(i64),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Revision identifier of the replicated store.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RevisionId(pub u32);

impl fmt::Display for RevisionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An update `var := value`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Assign {
    pub var: Var,
    pub value: i64,
}

impl Assign {
    pub fn new(var: &str, value: i64) -> Self {
        Assign {
            var: Var::new(var),
            value,
        }
    }

    /// The update's interpretation on states.
    pub fn apply(&self, state: &mut State) {
        state.set(&self.var, self.value);
    }
}

impl fmt::Display for Assign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:={}", self.var, self.value)
    }
}

/// Store state: a total map from variables to integers, zero by default.
/// `State::default()` is the initial state.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct State {
    // Zero entries are never stored so that equality is extensional.
    values: BTreeMap<Var, i64>,
}

impl State {
    pub fn get(&self, var: &Var) -> i64 {
        self.values.get(var).copied().unwrap_or(0)
    }

    pub fn set(&mut self, var: &Var, value: i64) {
        if value == 0 {
            self.values.remove(var);
        } else {
            self.values.insert(var.clone(), value);
        }
    }

    /// The query interpretation: reading `var`.
    pub fn query(&self, var: &Var) -> Value {
        Value::Int(self.get(var))
    }
}

/// What an event does.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Action {
    /// Invocation of `method` with argument `arg`.
    Inv { method: Method, arg: Value },
    /// Return from `method` with result `value`.
    Ret { method: Method, value: Value },
    /// A whole call as one atomic event, e.g. `ld(0)` or `st(1)`. This is the
    /// compact notation for register traces; [`Trace::expand_calls`] splits it
    /// into an adjacent invocation/return pair.
    Call {
        method: Method,
        arg: Value,
        ret: Value,
    },
    /// Query of `query` on revision `rev`, which returned `result`.
    Qu {
        rev: RevisionId,
        query: Var,
        result: Value,
    },
    /// Update on revision `rev`.
    Up { rev: RevisionId, update: Assign },
    /// Commit of revision `rev`.
    Com { rev: RevisionId },
    /// The network delivered revision `rev` of `from` to `to`.
    Fwd {
        from: ThreadId,
        to: ThreadId,
        rev: RevisionId,
    },
}

impl Action {
    pub fn is_inv(&self) -> bool {
        matches!(self, Action::Inv { .. })
    }

    pub fn is_ret(&self) -> bool {
        matches!(self, Action::Ret { .. })
    }

    pub fn is_fwd(&self) -> bool {
        matches!(self, Action::Fwd { .. })
    }

    /// True for queries, updates and commits.
    pub fn is_store_action(&self) -> bool {
        matches!(
            self,
            Action::Qu { .. } | Action::Up { .. } | Action::Com { .. }
        )
    }

    /// Revision id carried by a query, update or commit.
    pub fn revision(&self) -> Option<RevisionId> {
        match self {
            Action::Qu { rev, .. } | Action::Up { rev, .. } | Action::Com { rev } => Some(*rev),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Inv { method, arg } => match arg {
                Value::Unit => write!(f, "inv {method}()"),
                v => write!(f, "inv {method}({v})"),
            },
            Action::Ret { method, value } => match value {
                Value::Unit => write!(f, "ret {method}()"),
                v => write!(f, "ret {method}({v})"),
            },
            Action::Call { method, arg, ret } => match (arg, ret) {
                (Value::Unit, r) => write!(f, "{method}({r})"),
                (a, _) => write!(f, "{method}({a})"),
            },
            Action::Qu { rev, query, result } => write!(f, "qu({rev},{query},{result})"),
            Action::Up { rev, update } => write!(f, "up({rev},{update})"),
            Action::Com { rev } => write!(f, "com({rev})"),
            Action::Fwd { from, to, rev } => write!(f, "fwd({from},{to},{rev})"),
        }
    }
}

/// An agent performing an action.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Event {
    agent: Agent,
    action: Action,
}

impl Event {
    /// Pairs an agent with an action. Forwarding is performed by the
    /// environment only; every other action by a thread.
    pub fn new(agent: Agent, action: Action) -> Result<Self, TraceError> {
        match (&agent, action.is_fwd()) {
            (Agent::Env, false) => Err(TraceError::AgentMismatch {
                agent: agent.to_string(),
                action: action.to_string(),
                reason: "only fwd actions may be performed by env",
            }),
            (Agent::Thread(_), true) => Err(TraceError::AgentMismatch {
                agent: agent.to_string(),
                action: action.to_string(),
                reason: "fwd requires env agent",
            }),
            _ => Ok(Event { agent, action }),
        }
    }

    fn by(thread: &str, action: Action) -> Self {
        Event {
            agent: Agent::thread(thread),
            action,
        }
    }

    pub fn agent(&self) -> &Agent {
        &self.agent
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn thread(&self) -> Option<&ThreadId> {
        self.agent.as_thread()
    }

    pub fn is_by(&self, thread: &ThreadId) -> bool {
        self.thread() == Some(thread)
    }

    pub fn inv(thread: &str, method: &str, arg: Value) -> Self {
        Self::by(
            thread,
            Action::Inv {
                method: Method::new(method),
                arg,
            },
        )
    }

    pub fn ret(thread: &str, method: &str, value: Value) -> Self {
        Self::by(
            thread,
            Action::Ret {
                method: Method::new(method),
                value,
            },
        )
    }

    pub fn call(thread: &str, method: &str, arg: Value, ret: Value) -> Self {
        Self::by(
            thread,
            Action::Call {
                method: Method::new(method),
                arg,
                ret,
            },
        )
    }

    /// `(t, ld(v))`: a load that returned `v`.
    pub fn ld(thread: &str, value: i64) -> Self {
        Self::call(thread, "ld", Value::Unit, Value::Int(value))
    }

    /// `(t, st(v))`: a store of `v`.
    pub fn st(thread: &str, value: i64) -> Self {
        Self::call(thread, "st", Value::Int(value), Value::Bool(true))
    }

    pub fn ld_inv(thread: &str) -> Self {
        Self::inv(thread, "ld", Value::Unit)
    }

    pub fn ld_ret(thread: &str, value: i64) -> Self {
        Self::ret(thread, "ld", Value::Int(value))
    }

    pub fn st_inv(thread: &str, value: i64) -> Self {
        Self::inv(thread, "st", Value::Int(value))
    }

    pub fn st_ret(thread: &str) -> Self {
        Self::ret(thread, "st", Value::Bool(true))
    }

    pub fn qu(thread: &str, rev: u32, var: &str, result: i64) -> Self {
        Self::by(
            thread,
            Action::Qu {
                rev: RevisionId(rev),
                query: Var::new(var),
                result: Value::Int(result),
            },
        )
    }

    pub fn up(thread: &str, rev: u32, var: &str, value: i64) -> Self {
        Self::by(
            thread,
            Action::Up {
                rev: RevisionId(rev),
                update: Assign::new(var, value),
            },
        )
    }

    pub fn com(thread: &str, rev: u32) -> Self {
        Self::by(
            thread,
            Action::Com {
                rev: RevisionId(rev),
            },
        )
    }

    pub fn fwd(from: &str, to: &str, rev: u32) -> Self {
        Event {
            agent: Agent::Env,
            action: Action::Fwd {
                from: ThreadId::new(from),
                to: ThreadId::new(to),
                rev: RevisionId(rev),
            },
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.agent, self.action)
    }
}

/// A finite sequence of events.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Trace {
    events: Vec<Event>,
}

impl Trace {
    pub fn new(events: Vec<Event>) -> Self {
        Trace { events }
    }

    pub fn empty() -> Self {
        Trace::default()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Event> {
        self.events.iter()
    }

    /// `E@i`, 1-based.
    pub fn at(&self, i: usize) -> Option<&Event> {
        i.checked_sub(1).and_then(|k| self.events.get(k))
    }

    pub fn push(&mut self, event: Event) {
        self.events.push(event);
    }

    /// Threads performing at least one event, in order of first appearance.
    pub fn threads(&self) -> Vec<ThreadId> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.events {
            if let Some(t) = e.thread() {
                if seen.insert(t.clone()) {
                    out.push(t.clone());
                }
            }
        }
        out
    }

    /// True iff no event value occurs twice.
    pub fn is_unique(&self) -> bool {
        self.first_duplicate().is_none()
    }

    /// Positions `(first, second)` of the earliest repeated event, if any.
    pub fn first_duplicate(&self) -> Option<(usize, usize)> {
        let mut seen = std::collections::HashMap::new();
        for (k, e) in self.events.iter().enumerate() {
            if let Some(&first) = seen.get(e) {
                return Some((first, k + 1));
            }
            seen.insert(e, k + 1);
        }
        None
    }

    /// Replaces every [`Action::Call`] by its invocation immediately followed by
    /// its return.
    pub fn expand_calls(&self) -> Trace {
        let mut out = Vec::with_capacity(self.events.len());
        for e in &self.events {
            match &e.action {
                Action::Call { method, arg, ret } => {
                    out.push(Event {
                        agent: e.agent.clone(),
                        action: Action::Inv {
                            method: method.clone(),
                            arg: *arg,
                        },
                    });
                    out.push(Event {
                        agent: e.agent.clone(),
                        action: Action::Ret {
                            method: method.clone(),
                            value: *ret,
                        },
                    });
                }
                _ => out.push(e.clone()),
            }
        }
        Trace::new(out)
    }

    /// Trace without environment events.
    pub fn without_env(&self) -> Trace {
        Trace::new(
            self.events
                .iter()
                .filter(|e| e.thread().is_some())
                .cloned()
                .collect(),
        )
    }
}

impl From<Vec<Event>> for Trace {
    fn from(events: Vec<Event>) -> Self {
        Trace::new(events)
    }
}

impl FromIterator<Event> for Trace {
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        Trace::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Trace {
    type Item = &'a Event;
    type IntoIter = std::slice::Iter<'a, Event>;

    fn into_iter(self) -> Self::IntoIter {
        self.events.iter()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.events.is_empty() {
            return f.write_str("ε");
        }
        for (k, e) in self.events.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// `E↓t`: the events of thread `t`, in order.
pub fn project(trace: &Trace, thread: &ThreadId) -> Trace {
    trace.iter().filter(|e| e.is_by(thread)).cloned().collect()
}

/// `E↾i`: the first `i` events.
pub fn prefix(trace: &Trace, i: usize) -> Result<Trace, TraceError> {
    if i > trace.len() {
        return Err(TraceError::IndexOutOfRange {
            index: i,
            len: trace.len(),
        });
    }
    Ok(Trace::new(trace.events[..i].to_vec()))
}

/// Smallest 1-based position of `event`, or `None` if it does not occur.
pub fn pos(event: &Event, trace: &Trace) -> Option<usize> {
    trace.iter().position(|e| e == event).map(|k| k + 1)
}

/// The observer's view of `E↾i`: pairs `(r, in)` of a return and an invocation
/// with `pos(r) < pos(in) <= i`.
pub fn obs_view(trace: &Trace, i: usize) -> Result<BTreeSet<(Event, Event)>, TraceError> {
    if i > trace.len() {
        return Err(TraceError::IndexOutOfRange {
            index: i,
            len: trace.len(),
        });
    }
    // First occurrences only: later duplicates have the same `pos`.
    let mut first: Vec<(usize, &Event)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, e) in trace.events[..i].iter().enumerate() {
        if seen.insert(e) {
            first.push((k + 1, e));
        }
    }
    let mut view = BTreeSet::new();
    for &(pr, r) in first.iter().filter(|(_, e)| e.action.is_ret()) {
        for &(pi, inv) in first.iter().filter(|(_, e)| e.action.is_inv()) {
            if pr < pi {
                view.insert((r.clone(), inv.clone()));
            }
        }
    }
    Ok(view)
}

/// `obs(E) = obs(E, len(E))`.
pub fn obs(trace: &Trace) -> BTreeSet<(Event, Event)> {
    obs_view(trace, trace.len()).expect("len is always in range")
}

/// The actions of the trace, in order.
pub fn act_seq(trace: &Trace) -> Vec<Action> {
    trace.iter().map(|e| e.action.clone()).collect()
}

/// True iff `a` embeds order-preservingly into `b`.
pub fn is_subsequence<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    let mut rest = b.iter();
    a.iter().all(|x| rest.any(|y| y == x))
}
