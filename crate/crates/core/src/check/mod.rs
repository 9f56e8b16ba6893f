//! Decision procedures for sequential consistency, linearizability and
//! eventual consistency, and the detection reports built from the logic.

mod detect;
mod ec;
mod merge;

use crate::budget::Budget;
use crate::spec::OrderCertificate;
use crate::trace::Trace;

pub use detect::{detect_lin, detect_sc, Detection};
pub use ec::{check_ec_axiomatic, check_ec_epistemic, validate_certificate};
pub use merge::{check_lin, check_sc};

/// Search effort spent on a verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Search nodes expanded.
    pub nodes: u64,
    /// Complete candidate traces or order pairs examined.
    pub witnesses: u64,
}

/// Outcome of a checker. A positive verdict carries a witness trace or an
/// order certificate that can be re-checked independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub consistent: bool,
    pub witness: Option<Trace>,
    pub certificate: Option<OrderCertificate>,
    pub stats: Stats,
}

impl Verdict {
    fn with_witness(witness: Option<Trace>, stats: Stats) -> Self {
        Verdict {
            consistent: witness.is_some(),
            witness,
            certificate: None,
            stats,
        }
    }

    fn with_certificate(certificate: Option<OrderCertificate>, stats: Stats) -> Self {
        Verdict {
            consistent: certificate.is_some(),
            witness: None,
            certificate,
            stats,
        }
    }
}

/// Options shared by the checkers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub budget: Budget,
    /// Shuffles the order in which threads are tried. Verdicts do not depend
    /// on it; witnesses may.
    pub shuffle_seed: Option<u64>,
}

impl CheckOptions {
    pub fn with_budget(budget: Budget) -> Self {
        CheckOptions {
            budget,
            shuffle_seed: None,
        }
    }

    pub fn shuffled(mut self, seed: u64) -> Self {
        self.shuffle_seed = Some(seed);
        self
    }
}
