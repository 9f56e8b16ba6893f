//! Literal, exponential implementations of the classical definitions, used to
//! cross-check the checkers on small traces.

use itertools::Itertools;

use crate::spec::SpecOracle;
use crate::trace::{project, Event, Trace};

fn member<S: SpecOracle>(spec: &S, events: &[&Event]) -> bool {
    let mut s = spec.initial();
    for e in events {
        match spec.step(&s, e) {
            Some(n) => s = n,
            None => return false,
        }
    }
    spec.accepting(&s)
}

fn same_projections(trace: &Trace, candidate: &[&Event]) -> bool {
    let threads = trace.threads();
    threads.iter().all(|t| {
        let own = project(trace, t);
        let theirs: Vec<&Event> = candidate.iter().copied().filter(|e| e.is_by(t)).collect();
        own.len() == theirs.len() && own.iter().zip(theirs).all(|(a, b)| a == b)
    })
}

/// Sequential consistency by definition: some trace with the same thread
/// projections lies in the specification. Candidates are all orderings of
/// the thread events of `trace`.
pub fn sc_brute_force<S: SpecOracle>(trace: &Trace, spec: &S) -> Option<Trace> {
    let events: Vec<&Event> = trace.iter().filter(|e| e.thread().is_some()).collect();
    let n = events.len();
    events
        .iter()
        .copied()
        .permutations(n)
        .find(|cand| same_projections(trace, cand) && member(spec, cand))
        .map(|cand| cand.into_iter().cloned().collect())
}

/// Linearizability by definition: a bijection `π` on positions such that the
/// permuted trace has the same thread projections, never moves an invocation
/// before a return that preceded it, and lies in the specification.
pub fn lin_brute_force<S: SpecOracle>(trace: &Trace, spec: &S) -> Option<Trace> {
    let n = trace.len();
    let events = trace.events();
    // `pi[j]` is the new position of old position `j`.
    for pi in (0..n).permutations(n) {
        let real_time = (0..n).all(|j| {
            (j + 1..n).all(|k| {
                !(events[j].action().is_ret() && events[k].action().is_inv()) || pi[j] < pi[k]
            })
        });
        if !real_time {
            continue;
        }
        let mut permuted: Vec<Option<&Event>> = vec![None; n];
        for (j, e) in events.iter().enumerate() {
            permuted[pi[j]] = Some(e);
        }
        let permuted: Vec<&Event> = permuted
            .into_iter()
            .map(|e| e.expect("bijection"))
            .collect();
        if same_projections(trace, &permuted) && member(spec, &permuted) {
            return Some(permuted.into_iter().cloned().collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::spec::RegisterSpec;

    #[test]
    fn examples() {
        assert!(sc_brute_force(&e1(), &RegisterSpec).is_some());
        assert!(sc_brute_force(&e3(), &RegisterSpec).is_none());
        assert!(sc_brute_force(&e6(), &RegisterSpec).is_some());
        assert!(lin_brute_force(&e6(), &RegisterSpec).is_none());
        assert_eq!(lin_brute_force(&e7(), &RegisterSpec), Some(e8()));
        assert_eq!(
            sc_brute_force(&Trace::empty(), &RegisterSpec),
            Some(Trace::empty())
        );
        assert_eq!(
            lin_brute_force(&Trace::empty(), &RegisterSpec),
            Some(Trace::empty())
        );
    }
}
