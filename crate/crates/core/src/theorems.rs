//! Exhaustive cross-checks: each decider against an independent formulation
//! on every trace up to a size bound.

use std::thread;

use crate::check::{check_ec_axiomatic, check_ec_epistemic, check_lin, check_sc, CheckOptions};
use crate::error::CheckError;
use crate::gen::{all_sequences, all_store_traces, combined_alphabet, split_alphabet};
use crate::oracle::{lin_brute_force, sc_brute_force};
use crate::spec::RegisterSpec;
use crate::trace::Trace;

/// Outcome of comparing two deciders on a corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Agreement {
    pub instances: u64,
    /// Instances both sides judged consistent.
    pub consistent: u64,
    /// Instances where the sides disagree (at most [`MAX_REPORTED`] kept).
    pub mismatches: Vec<Trace>,
    pub mismatch_count: u64,
}

/// Mismatching traces kept in an [`Agreement`].
pub const MAX_REPORTED: usize = 10;

impl Agreement {
    pub fn all_agree(&self) -> bool {
        self.mismatch_count == 0
    }

    fn merge(&mut self, other: Agreement) {
        self.instances += other.instances;
        self.consistent += other.consistent;
        self.mismatch_count += other.mismatch_count;
        for m in other.mismatches {
            if self.mismatches.len() < MAX_REPORTED {
                self.mismatches.push(m);
            }
        }
    }
}

/// Which equivalence to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// `check_sc` against the permutation definition, combined register events.
    SequentialConsistency,
    /// `check_lin` against the bijection definition, unique split register events.
    Linearizability,
    /// `check_ec_axiomatic` against `check_ec_epistemic`, store traces on one variable.
    EventualConsistency,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::SequentialConsistency => "sc",
            Suite::Linearizability => "lin",
            Suite::EventualConsistency => "ec",
        }
    }

    /// Corpus of the suite: two threads, values {0,1}, at most `max_events`.
    pub fn corpus(self, max_events: usize) -> Box<dyn Iterator<Item = Trace>> {
        const THREADS: [&str; 2] = ["t1", "t2"];
        const VALUES: [i64; 2] = [0, 1];
        match self {
            Suite::SequentialConsistency => {
                let a = combined_alphabet(&THREADS, &VALUES);
                Box::new(all_sequences(a, max_events))
            }
            Suite::Linearizability => {
                let a = split_alphabet(&THREADS, &VALUES);
                Box::new(all_sequences(a, max_events).filter(Trace::is_unique))
            }
            Suite::EventualConsistency => Box::new(all_store_traces(&THREADS, &VALUES, max_events)),
        }
    }

    /// Verdicts of both sides on one trace.
    pub fn judge(self, trace: &Trace) -> Result<(bool, bool), CheckError> {
        let o = CheckOptions::default();
        Ok(match self {
            Suite::SequentialConsistency => (
                check_sc(trace, &RegisterSpec, &o)?.consistent,
                sc_brute_force(trace, &RegisterSpec).is_some(),
            ),
            Suite::Linearizability => (
                check_lin(trace, &RegisterSpec, &o)?.consistent,
                lin_brute_force(trace, &RegisterSpec).is_some(),
            ),
            Suite::EventualConsistency => (
                check_ec_axiomatic(trace, &o)?.consistent,
                check_ec_epistemic(trace, &o)?.consistent,
            ),
        })
    }

    /// Runs the suite on `jobs` worker threads (at least one). Each worker
    /// streams the corpus and takes every `jobs`-th trace.
    pub fn run(self, max_events: usize, jobs: usize) -> Result<Agreement, CheckError> {
        let jobs = jobs.max(1);
        thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    s.spawn(move || {
                        let part = self.corpus(max_events).skip(w).step_by(jobs);
                        self.run_part(part)
                    })
                })
                .collect();
            let mut total = Agreement::default();
            for h in handles {
                total.merge(h.join().expect("worker panicked")?);
            }
            Ok(total)
        })
    }

    fn run_part(self, part: impl Iterator<Item = Trace>) -> Result<Agreement, CheckError> {
        let mut out = Agreement::default();
        for t in part {
            let (a, b) = self.judge(&t)?;
            out.instances += 1;
            if a && b {
                out.consistent += 1;
            }
            if a != b {
                out.mismatch_count += 1;
                if out.mismatches.len() < MAX_REPORTED {
                    out.mismatches.push(t);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds_agree() {
        for suite in [
            Suite::SequentialConsistency,
            Suite::Linearizability,
            Suite::EventualConsistency,
        ] {
            let r = suite.run(3, 2).unwrap();
            assert!(r.all_agree(), "{}: {:?}", suite.name(), r.mismatches);
            assert!(r.consistent > 0);
        }
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(Suite::SequentialConsistency.corpus(2).count(), 1 + 8 + 64);
        assert_eq!(Suite::Linearizability.corpus(2).count(), 1 + 12 + 132);
        assert_eq!(Suite::EventualConsistency.corpus(2).count(), 1 + 10 + 100);
    }
}
