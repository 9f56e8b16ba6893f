//! Consistency conditions for concurrent objects as statements about what
//! threads can know.
//!
//! Traces, indistinguishability relations and distributed knowledge live in
//! [`trace`] and [`indist`]; specifications and the replicated store model in
//! [`spec`]; the epistemic formula language in [`logic`]; decision procedures
//! in [`check`].

pub mod budget;
pub mod check;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod indist;
pub mod logic;
pub mod oracle;
pub mod spec;
pub mod theorems;
pub mod trace;

pub use budget::{Budget, Meter};
pub use error::{BudgetExceeded, BudgetKind, CheckError, EvalError, TraceError};
pub use indist::{AgentGroup, WitnessUniverse};
pub use spec::{RegisterSpec, SpecOracle};
pub use trace::{Action, Agent, Event, ThreadId, Trace, Value};

// The book's code listings, run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/knowledge.md")]
    mod knowledge {}
    #[doc = include_str!("../../../book/src/logic.md")]
    mod logic {}
    #[doc = include_str!("../../../book/src/checkers.md")]
    mod checkers {}
    #[doc = include_str!("../../../book/src/eventual.md")]
    mod eventual {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
