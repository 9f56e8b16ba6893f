//! Evaluation of formulas at positions `0..=len` of a finite trace.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{implies, knows, not, Datum, Formula, Sort, Term, TOP};
use crate::budget::Budget;
use crate::error::EvalError;
use crate::indist::{enumerate_witnesses, AgentGroup, WitnessUniverse};
use crate::spec::{
    self, canonical_log, consistent, correct_evc, k_log_actions, network_ok, spec_member,
    valid_log, RegisterSpec, SpecOracle,
};
use crate::trace::{prefix, Action, Assign, Event, RevisionId, ThreadId, Trace, Value, Var};

/// Reading of the until operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// `∃j ≤ i` with `ψ` at `j` and `φ` at every `1 ≤ k < j`, exactly as the
    /// clause is stated for the logic. Under it `◇` looks into the past.
    Literal,
    /// `∃j` with `i ≤ j ≤ len`, `ψ` at `j` and `φ` at every `i ≤ k < j`.
    #[default]
    FutureU,
}

/// Truth of a predicate at `(E,i)` for already evaluated arguments.
pub type AtomRule = Arc<dyn Fn(&Trace, usize, &[Datum]) -> Result<bool, EvalError> + Send + Sync>;

/// Predicate names with their signatures and evaluation rules.
#[derive(Clone, Default)]
pub struct AtomBinding {
    rules: BTreeMap<String, (Vec<Sort>, AtomRule)>,
}

impl std::fmt::Debug for AtomBinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.rules.keys()).finish()
    }
}

fn event_at(trace: &Trace, i: usize) -> Option<&Event> {
    if i == 0 {
        None
    } else {
        trace.at(i)
    }
}

fn thread_arg(d: &Datum) -> &ThreadId {
    match d {
        Datum::Thread(t) => t,
        _ => unreachable!("arguments are sort-checked before rules run"),
    }
}

fn query_arg(d: &Datum) -> &Var {
    match d {
        Datum::Query(q) => q,
        _ => unreachable!("arguments are sort-checked before rules run"),
    }
}

fn value_arg(d: &Datum) -> &Value {
    match d {
        Datum::Value(v) => v,
        _ => unreachable!("arguments are sort-checked before rules run"),
    }
}

fn rev_arg(d: &Datum) -> RevisionId {
    match d {
        Datum::Rev(r) => *r,
        _ => unreachable!("arguments are sort-checked before rules run"),
    }
}

fn action_arg(d: &Datum) -> &Action {
    match d {
        Datum::Action(a) => a,
        _ => unreachable!("arguments are sort-checked before rules run"),
    }
}

fn log_arg(d: &Datum) -> &spec::Log {
    match d {
        Datum::Log(l) => l,
        _ => unreachable!("arguments are sort-checked before rules run"),
    }
}

impl AtomBinding {
    pub fn empty() -> Self {
        AtomBinding::default()
    }

    /// `true` and the store predicates: `query(t,q,r,id)`, `update(t,q,v,id)`
    /// (for `up(id, q:=v)`), `commit(t,id)`, `forward(t,t',id)`, `in(a,L)`,
    /// `k_log(t,a)`, `consistent(L)`, `result(q,L,r)`, `validLog(L,t)`,
    /// `network` and `correctEVC`. No `correct`; see [`AtomBinding::with_spec`].
    pub fn standard() -> Self {
        use Sort as S;
        AtomBinding::empty()
            .with_rule(TOP, vec![], |_, _, _| Ok(true))
            .with_rule("query", vec![S::Thread, S::Query, S::Value, S::Rev], |e, i, a| {
                Ok(event_at(e, i).is_some_and(|ev| {
                    ev.is_by(thread_arg(&a[0]))
                        && matches!(ev.action(), Action::Qu { rev, query, result }
                            if query == query_arg(&a[1]) && result == value_arg(&a[2]) && *rev == rev_arg(&a[3]))
                }))
            })
            .with_rule("update", vec![S::Thread, S::Query, S::Value, S::Rev], |e, i, a| {
                Ok(event_at(e, i).is_some_and(|ev| {
                    let Value::Int(v) = value_arg(&a[2]) else {
                        return false;
                    };
                    let want = Assign::new(query_arg(&a[1]).as_str(), *v);
                    ev.is_by(thread_arg(&a[0]))
                        && matches!(ev.action(), Action::Up { rev, update }
                            if *update == want && *rev == rev_arg(&a[3]))
                }))
            })
            .with_rule("commit", vec![S::Thread, S::Rev], |e, i, a| {
                Ok(event_at(e, i).is_some_and(|ev| {
                    ev.is_by(thread_arg(&a[0]))
                        && matches!(ev.action(), Action::Com { rev } if *rev == rev_arg(&a[1]))
                }))
            })
            .with_rule("forward", vec![S::Thread, S::Thread, S::Rev], |e, i, a| {
                Ok(event_at(e, i).is_some_and(|ev| {
                    matches!(ev.action(), Action::Fwd { from, to, rev }
                        if from == thread_arg(&a[0]) && to == thread_arg(&a[1]) && *rev == rev_arg(&a[2]))
                }))
            })
            .with_rule("in", vec![S::Action, S::Log], |_, _, a| {
                Ok(log_arg(&a[1]).contains(action_arg(&a[0])))
            })
            .with_rule("k_log", vec![S::Thread, S::Action], |e, i, a| {
                Ok(k_log_actions(e, i, thread_arg(&a[0]))?.contains(action_arg(&a[1])))
            })
            .with_rule("consistent", vec![S::Log], |e, i, a| {
                Ok(consistent(e, i, log_arg(&a[0]))?)
            })
            .with_rule("result", vec![S::Query, S::Log, S::Value], |_, _, a| {
                Ok(spec::result(query_arg(&a[0]), log_arg(&a[1]), value_arg(&a[2])))
            })
            .with_rule("validLog", vec![S::Log, S::Thread], |e, i, a| {
                Ok(valid_log(e, i, thread_arg(&a[1]), log_arg(&a[0]))?)
            })
            .with_rule("network", vec![], |e, i, _| Ok(network_ok(&prefix(e, i)?)))
            .with_rule("correctEVC", vec![], |e, i, _| {
                Ok(correct_evc(&prefix(e, i)?))
            })
    }

    /// Standard predicates plus `correct` for the shared register.
    pub fn register() -> Self {
        AtomBinding::standard().with_spec(RegisterSpec)
    }

    /// Binds `correct` at `(E,i)` to `E↾i ∈ Spec`.
    pub fn with_spec<S>(self, spec: S) -> Self
    where
        S: SpecOracle + Send + Sync + 'static,
    {
        self.with_rule("correct", vec![], move |e, i, _| {
            Ok(spec_member(&spec, &prefix(e, i)?))
        })
    }

    pub fn with_rule<F>(mut self, name: &str, signature: Vec<Sort>, rule: F) -> Self
    where
        F: Fn(&Trace, usize, &[Datum]) -> Result<bool, EvalError> + Send + Sync + 'static,
    {
        self.rules
            .insert(name.to_string(), (signature, Arc::new(rule)));
        self
    }

    pub fn signature(&self, name: &str) -> Option<&[Sort]> {
        self.rules.get(name).map(|(s, _)| s.as_slice())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }

    fn call(&self, pred: &str, trace: &Trace, i: usize, args: &[Term]) -> Result<bool, EvalError> {
        let (sig, rule) = self
            .rules
            .get(pred)
            .ok_or_else(|| EvalError::UnboundPredicate(pred.to_string()))?;
        if sig.len() != args.len() {
            return Err(EvalError::BadArguments {
                pred: pred.to_string(),
                reason: format!("expected {} arguments, got {}", sig.len(), args.len()),
            });
        }
        let mut data = Vec::with_capacity(args.len());
        for (k, (arg, want)) in args.iter().zip(sig).enumerate() {
            match arg {
                Term::Var(v) => return Err(EvalError::OpenFormula(v.clone())),
                Term::Const(d) if d.sort() != *want => {
                    return Err(EvalError::BadArguments {
                        pred: pred.to_string(),
                        reason: format!(
                            "argument {} has sort {}, expected {want}",
                            k + 1,
                            d.sort()
                        ),
                    })
                }
                Term::Const(d) => data.push(d.clone()),
            }
        }
        rule(trace, i, &data)
    }
}

/// Elements of `sort` drawn from the trace under evaluation. Logs are the
/// canonical logs of the trace's threads at position `i`.
pub(crate) fn domain(sort: Sort, trace: &Trace, i: usize) -> Result<Vec<Datum>, EvalError> {
    let mut out: BTreeSet<Datum> = BTreeSet::new();
    match sort {
        Sort::Thread => {
            for e in trace {
                if let Some(t) = e.thread() {
                    out.insert(Datum::Thread(t.clone()));
                }
                if let Action::Fwd { from, to, .. } = e.action() {
                    out.insert(Datum::Thread(from.clone()));
                    out.insert(Datum::Thread(to.clone()));
                }
            }
        }
        Sort::Query => {
            for e in trace {
                match e.action() {
                    Action::Qu { query, .. } => {
                        out.insert(Datum::Query(query.clone()));
                    }
                    Action::Up { update, .. } => {
                        out.insert(Datum::Query(update.var.clone()));
                    }
                    _ => {}
                }
            }
        }
        Sort::Value => {
            for e in trace {
                let vals: Vec<Value> = match e.action() {
                    Action::Inv { arg, .. } => vec![*arg],
                    Action::Ret { value, .. } => vec![*value],
                    Action::Call { arg, ret, .. } => vec![*arg, *ret],
                    Action::Qu { result, .. } => vec![*result],
                    Action::Up { update, .. } => vec![Value::Int(update.value)],
                    _ => vec![],
                };
                out.extend(
                    vals.into_iter()
                        .filter(|v| *v != Value::Unit)
                        .map(Datum::Value),
                );
            }
        }
        Sort::Rev => {
            for e in trace {
                let r = match e.action() {
                    Action::Fwd { rev, .. } => Some(*rev),
                    a => a.revision(),
                };
                if let Some(r) = r {
                    out.insert(Datum::Rev(r));
                }
            }
        }
        Sort::Action => {
            out.extend(trace.iter().map(|e| Datum::Action(e.action().clone())));
        }
        Sort::Log => {
            for t in trace.threads() {
                out.insert(Datum::Log(canonical_log(trace, i, &t)?));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Formula evaluator with a predicate binding, an until reading and a budget
/// applied to every knowledge query. Knowledge results are memoized per
/// (formula, trace prefix).
pub struct Evaluator<'a> {
    atoms: &'a AtomBinding,
    semantics: Semantics,
    budget: Budget,
    forwarding: bool,
    cache: RefCell<HashMap<(Formula, Trace), bool>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(atoms: &'a AtomBinding) -> Self {
        Evaluator {
            atoms,
            semantics: Semantics::default(),
            budget: Budget::unlimited(),
            forwarding: false,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Lets knowledge queries range over traces with inserted forwarding
    /// events, as needed for store correctness.
    pub fn with_forwarding(mut self, forwarding: bool) -> Self {
        self.forwarding = forwarding;
        self
    }

    /// `(E,i) ⊨ f` for a closed formula.
    pub fn eval(&self, trace: &Trace, i: usize, f: &Formula) -> Result<bool, EvalError> {
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(EvalError::OpenFormula(v));
        }
        if i > trace.len() {
            return Err(crate::error::TraceError::IndexOutOfRange {
                index: i,
                len: trace.len(),
            }
            .into());
        }
        self.holds(trace, i, f)
    }

    /// Evaluation at the end of the trace.
    pub fn eval_final(&self, trace: &Trace, f: &Formula) -> Result<bool, EvalError> {
        self.eval(trace, trace.len(), f)
    }

    fn holds(&self, e: &Trace, i: usize, f: &Formula) -> Result<bool, EvalError> {
        match f {
            Formula::Atom { pred, args } => self.atoms.call(pred, e, i, args),
            Formula::And(a, b) => Ok(self.holds(e, i, a)? && self.holds(e, i, b)?),
            Formula::Not(a) => Ok(!self.holds(e, i, a)?),
            Formula::Since(a, b) => {
                let mut j = i;
                loop {
                    if self.holds(e, j, b)? {
                        return Ok(true);
                    }
                    if j == 0 || !self.holds(e, j, a)? {
                        return Ok(false);
                    }
                    j -= 1;
                }
            }
            Formula::Until(a, b) => match self.semantics {
                Semantics::FutureU => {
                    for j in i..=e.len() {
                        if self.holds(e, j, b)? {
                            return Ok(true);
                        }
                        if !self.holds(e, j, a)? {
                            return Ok(false);
                        }
                    }
                    Ok(false)
                }
                Semantics::Literal => {
                    for j in 0..=i {
                        if self.holds(e, j, b)? {
                            return Ok(true);
                        }
                        if j >= 1 && !self.holds(e, j, a)? {
                            return Ok(false);
                        }
                    }
                    Ok(false)
                }
            },
            Formula::Forall { var, sort, body } => {
                for d in domain(*sort, e, i)? {
                    if !self.holds(e, i, &body.substitute(var, &d))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Knows { group, body } => self.knows(e, i, group, body),
        }
    }

    fn knows(
        &self,
        e: &Trace,
        i: usize,
        group: &AgentGroup,
        body: &Formula,
    ) -> Result<bool, EvalError> {
        let source = prefix(e, i)?;
        let key = (knows(group.clone(), body.clone()), source.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let mut universe = WitnessUniverse::new(source, group.clone()).with_budget(self.budget);
        if self.forwarding {
            universe = universe.with_forwarding();
        }
        let mut verdict = true;
        for w in enumerate_witnesses(&universe) {
            let w = w?;
            if !self.holds(&w, w.len(), body)? {
                verdict = false;
                break;
            }
        }
        self.cache.borrow_mut().insert(key, verdict);
        Ok(verdict)
    }
}

/// One-shot evaluation of a closed formula at `(E,i)`.
pub fn eval(
    trace: &Trace,
    i: usize,
    f: &Formula,
    atoms: &AtomBinding,
    semantics: Semantics,
) -> Result<bool, EvalError> {
    Evaluator::new(atoms)
        .with_semantics(semantics)
        .eval(trace, i, f)
}

/// The knowledge axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// Truth: `D_G φ → φ`.
    T,
    /// Positive introspection: `D_G φ → D_G D_G φ`.
    Four,
    /// Negative introspection: `¬D_G φ → D_G ¬D_G φ`.
    Five,
}

impl Axiom {
    pub fn instance(self, group: &AgentGroup, phi: Formula) -> Formula {
        let d = knows(group.clone(), phi.clone());
        match self {
            Axiom::T => implies(d, phi),
            Axiom::Four => implies(d.clone(), knows(group.clone(), d)),
            Axiom::Five => implies(not(d.clone()), knows(group.clone(), not(d))),
        }
    }
}

/// Evaluates an axiom instance at the end of `trace`.
pub fn axiom_check(
    trace: &Trace,
    group: &AgentGroup,
    phi: &Formula,
    axiom: Axiom,
    atoms: &AtomBinding,
) -> Result<bool, EvalError> {
    Evaluator::new(atoms).eval_final(trace, &axiom.instance(group, phi.clone()))
}
