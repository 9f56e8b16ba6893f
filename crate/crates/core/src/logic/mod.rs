//! The temporal-epistemic logic: formulas, their evaluation on finite traces,
//! and a textual syntax.
//!
//! Primitive connectives are conjunction, negation, since, until, universal
//! quantification over finite sorts and distributed knowledge `D_G`. Everything
//! else is derived; the builders below desugar on construction, so
//! `once(φ)` *is* `⊤ S φ`.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use crate::indist::AgentGroup;
use crate::spec::Log;
use crate::trace::{Action, RevisionId, ThreadId, Value, Var};

pub use eval::{axiom_check, eval, AtomBinding, AtomRule, Axiom, Evaluator, Semantics};
pub use parse::parse_formula;

/// Quantifier domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Thread,
    Query,
    Value,
    Rev,
    Action,
    Log,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Thread => "thread",
            Sort::Query => "query",
            Sort::Value => "value",
            Sort::Rev => "rev",
            Sort::Action => "action",
            Sort::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Sort> {
        Some(match name {
            "thread" => Sort::Thread,
            "query" => Sort::Query,
            "value" => Sort::Value,
            "rev" => Sort::Rev,
            "action" => Sort::Action,
            "log" => Sort::Log,
            _ => return None,
        })
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An element of some sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datum {
    Thread(ThreadId),
    Query(Var),
    Value(Value),
    Rev(RevisionId),
    Action(Action),
    Log(Log),
}

impl Datum {
    pub fn sort(&self) -> Sort {
        match self {
            Datum::Thread(_) => Sort::Thread,
            Datum::Query(_) => Sort::Query,
            Datum::Value(_) => Sort::Value,
            Datum::Rev(_) => Sort::Rev,
            Datum::Action(_) => Sort::Action,
            Datum::Log(_) => Sort::Log,
        }
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Thread(t) => write!(f, "{t}"),
            Datum::Query(q) => write!(f, "{q}"),
            Datum::Value(v) => write!(f, "{v}"),
            Datum::Rev(r) => write!(f, "{r}"),
            Datum::Action(a) => write!(f, "<{a}>"),
            Datum::Log(l) => {
                f.write_str("<log")?;
                for a in &l.actions {
                    write!(f, " {a}")?;
                }
                f.write_str(">")
            }
        }
    }
}

/// Predicate argument: a bound variable or a constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(Datum),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn thread(name: &str) -> Self {
        Term::Const(Datum::Thread(ThreadId::new(name)))
    }

    pub fn query(name: &str) -> Self {
        Term::Const(Datum::Query(Var::new(name)))
    }

    pub fn int(v: i64) -> Self {
        Term::Const(Datum::Value(Value::Int(v)))
    }

    pub fn rev(id: u32) -> Self {
        Term::Const(Datum::Rev(RevisionId(id)))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(d) => write!(f, "{d}"),
        }
    }
}

/// Formula AST over the primitive connectives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom {
        pred: String,
        args: Vec<Term>,
    },
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Forall {
        var: String,
        sort: Sort,
        body: Box<Formula>,
    },
    Knows {
        group: AgentGroup,
        body: Box<Formula>,
    },
}

/// Name of the built-in nullary atom that is always true.
pub const TOP: &str = "true";

pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
    Formula::Atom {
        pred: pred.to_string(),
        args,
    }
}

pub fn top() -> Formula {
    atom(TOP, vec![])
}

pub fn bottom() -> Formula {
    not(top())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    not(and(not(a), not(b)))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    or(not(a), b)
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

pub fn since(a: Formula, b: Formula) -> Formula {
    Formula::Since(Box::new(a), Box::new(b))
}

pub fn until(a: Formula, b: Formula) -> Formula {
    Formula::Until(Box::new(a), Box::new(b))
}

/// `◇⁻φ := ⊤ S φ`
pub fn once(f: Formula) -> Formula {
    since(top(), f)
}

/// `⊟φ := ¬◇⁻¬φ`
pub fn so_far(f: Formula) -> Formula {
    not(once(not(f)))
}

/// `◇φ := ⊤ U φ`
pub fn eventually(f: Formula) -> Formula {
    until(top(), f)
}

/// `□φ := ¬◇¬φ`
pub fn always(f: Formula) -> Formula {
    not(eventually(not(f)))
}

/// `φ W ψ := (φ U ψ) ∨ □φ`
pub fn weak_until(a: Formula, b: Formula) -> Formula {
    or(until(a.clone(), b), always(a))
}

pub fn forall(var: &str, sort: Sort, body: Formula) -> Formula {
    Formula::Forall {
        var: var.to_string(),
        sort,
        body: Box::new(body),
    }
}

/// `∃x φ := ¬∀x ¬φ`
pub fn exists(var: &str, sort: Sort, body: Formula) -> Formula {
    not(forall(var, sort, not(body)))
}

pub fn knows(group: AgentGroup, body: Formula) -> Formula {
    Formula::Knows {
        group,
        body: Box::new(body),
    }
}

/// The atom `correct`, bound to a specification oracle.
pub fn correct() -> Formula {
    atom("correct", vec![])
}

/// `seqCons := ¬D_G(¬correct)`
pub fn seq_cons(threads: AgentGroup) -> Formula {
    not(knows(threads.without_observer(), not(correct())))
}

/// `Lin := ¬D_{G ⊎ {obs}}(¬correct)`
pub fn lin(threads: AgentGroup) -> Formula {
    not(knows(threads.with_observer(), not(correct())))
}

/// The query clause of store correctness as a formula:
/// `∀t∀q∀r∀id ⊟(query(t,q,r,id) → ∃L(L validLog t ∧ result(q,L,r)))`.
///
/// The network assumptions are the separate atom `network`; the atom
/// `correctEVC` evaluates the whole predicate directly.
pub fn correct_evc_queries() -> Formula {
    let clause = implies(
        atom(
            "query",
            vec![
                Term::var("t"),
                Term::var("q"),
                Term::var("r"),
                Term::var("id"),
            ],
        ),
        exists(
            "L",
            Sort::Log,
            and(
                atom("validLog", vec![Term::var("L"), Term::var("t")]),
                atom(
                    "result",
                    vec![Term::var("q"), Term::var("L"), Term::var("r")],
                ),
            ),
        ),
    );
    forall(
        "t",
        Sort::Thread,
        forall(
            "q",
            Sort::Query,
            forall("r", Sort::Value, forall("id", Sort::Rev, so_far(clause))),
        ),
    )
}

/// `correctEVC` as a formula: the query clause conjoined with `network`.
pub fn correct_evc_formula() -> Formula {
    and(correct_evc_queries(), atom("network", vec![]))
}

impl Formula {
    /// Variables occurring free.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for a in args {
                    if let Term::Var(v) = a {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::And(a, b) | Formula::Since(a, b) | Formula::Until(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(a) | Formula::Knows { body: a, .. } => a.collect_free(bound, out),
            Formula::Forall { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces free occurrences of `var` by `value`.
    pub fn substitute(&self, var: &str, value: &Datum) -> Formula {
        match self {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args
                    .iter()
                    .map(|a| match a {
                        Term::Var(v) if v == var => Term::Const(value.clone()),
                        other => other.clone(),
                    })
                    .collect(),
            },
            Formula::And(a, b) => and(a.substitute(var, value), b.substitute(var, value)),
            Formula::Since(a, b) => since(a.substitute(var, value), b.substitute(var, value)),
            Formula::Until(a, b) => until(a.substitute(var, value), b.substitute(var, value)),
            Formula::Not(a) => not(a.substitute(var, value)),
            Formula::Knows { group, body } => knows(group.clone(), body.substitute(var, value)),
            Formula::Forall { var: v, sort, body } => {
                if v == var {
                    self.clone()
                } else {
                    forall(v, *sort, body.substitute(var, value))
                }
            }
        }
    }

    /// Nesting depth of knowledge operators.
    pub fn knowledge_depth(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::And(a, b) | Formula::Since(a, b) | Formula::Until(a, b) => {
                a.knowledge_depth().max(b.knowledge_depth())
            }
            Formula::Not(a) | Formula::Forall { body: a, .. } => a.knowledge_depth(),
            Formula::Knows { body, .. } => 1 + body.knowledge_depth(),
        }
    }
}

/// Prints the syntax accepted by [`parse_formula`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { pred, args } if args.is_empty() => f.write_str(pred),
            Formula::Atom { pred, args } => {
                write!(f, "({pred}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::Since(a, b) => write!(f, "(since {a} {b})"),
            Formula::Until(a, b) => write!(f, "(until {a} {b})"),
            Formula::Forall { var, sort, body } => write!(f, "(forall ({var} {sort}) {body})"),
            Formula::Knows { group, body } => {
                f.write_str("(knows (")?;
                let mut first = true;
                for t in group.threads() {
                    if !first {
                        f.write_str(" ")?;
                    }
                    first = false;
                    write!(f, "{t}")?;
                }
                if group.includes_observer() {
                    if !first {
                        f.write_str(" ")?;
                    }
                    f.write_str("obs")?;
                }
                write!(f, ") {body})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_operators_desugar() {
        let p = atom("correct", vec![]);
        assert_eq!(once(p.clone()), since(top(), p.clone()));
        assert_eq!(always(p.clone()), not(until(top(), not(p.clone()))));
        assert_eq!(
            exists("x", Sort::Thread, p.clone()),
            not(forall("x", Sort::Thread, not(p)))
        );
    }

    #[test]
    fn free_variables_and_substitution() {
        let f = forall(
            "t",
            Sort::Thread,
            atom("commit", vec![Term::var("t"), Term::var("id")]),
        );
        assert_eq!(f.free_vars(), ["id".to_string()].into_iter().collect());
        let closed = f.substitute("id", &Datum::Rev(RevisionId(0)));
        assert!(closed.is_closed());
        // Bound occurrences are left alone.
        let same = f.substitute("t", &Datum::Thread(ThreadId::new("t1")));
        assert_eq!(same, f);
        assert!(correct_evc_formula().is_closed());
    }

    #[test]
    fn display_uses_prefix_syntax() {
        let f = knows(
            AgentGroup::of(&["t1", "t2"]).with_observer(),
            not(correct()),
        );
        assert_eq!(f.to_string(), "(knows (t1 t2 obs) (not correct))");
        assert_eq!(f.knowledge_depth(), 1);
        let q = atom("commit", vec![Term::thread("t1"), Term::rev(0)]);
        assert_eq!(q.to_string(), "(commit t1 0)");
    }
}
