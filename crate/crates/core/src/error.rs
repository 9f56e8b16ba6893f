use std::fmt;

use thiserror::Error;

/// Violations of trace-level preconditions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("index {index} out of range for trace of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("event ({agent}, {action}) rejected: {reason}")]
    AgentMismatch {
        agent: String,
        action: String,
        reason: &'static str,
    },
    #[error(
        "event at position {second} duplicates position {first}, but the trace must be unique"
    )]
    Duplicate { first: usize, second: usize },
    #[error("revision discipline violated by {thread} at position {position}: {reason}")]
    RevisionDiscipline {
        thread: String,
        position: usize,
        reason: String,
    },
}

/// Which search limit was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    Nodes,
    Millis,
    Witnesses,
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetKind::Nodes => "node",
            BudgetKind::Millis => "time (ms)",
            BudgetKind::Witnesses => "witness",
        })
    }
}

/// A search stopped before reaching a verdict. Never a wrong answer, only no answer.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("search budget exhausted: {kind} limit {limit} reached")]
pub struct BudgetExceeded {
    pub kind: BudgetKind,
    pub limit: u64,
}

/// Errors of formula evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no evaluation rule bound for predicate `{0}`")]
    UnboundPredicate(String),
    #[error("formula is not closed: variable `{0}` is free")]
    OpenFormula(String),
    #[error("predicate `{pred}`: {reason}")]
    BadArguments { pred: String, reason: String },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Errors of the consistency deciders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("precondition violated: {0}")]
    Precondition(#[from] TraceError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Eval(EvalError),
}

impl From<EvalError> for CheckError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Budget(b) => CheckError::Budget(b),
            EvalError::Trace(t) => CheckError::Precondition(t),
            other => CheckError::Eval(other),
        }
    }
}

/// A syntax error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
