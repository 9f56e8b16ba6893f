//! Whether threads can tell, from their own views, that a trace is (not)
//! sequentially consistent or linearizable.

use crate::error::EvalError;
use crate::indist::AgentGroup;
use crate::logic::{knows, lin, not, seq_cons, AtomBinding, Evaluator, Formula};
use crate::spec::SpecOracle;
use crate::trace::Trace;

/// Truth values of a property `P` and of the knowledge statements about it
/// at the end of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Detection {
    pub holds: bool,
    /// `D(P)`
    pub known: bool,
    /// `D(¬P)`
    pub known_false: bool,
}

impl Detection {
    /// `P ↔ D(P)`
    pub fn positive_detected(&self) -> bool {
        self.holds == self.known
    }

    /// `¬P ↔ D(¬P)`
    pub fn negative_detected(&self) -> bool {
        !self.holds == self.known_false
    }
}

fn detect(
    trace: &Trace,
    property: Formula,
    group: AgentGroup,
    atoms: &AtomBinding,
) -> Result<Detection, EvalError> {
    let ev = Evaluator::new(atoms);
    Ok(Detection {
        holds: ev.eval_final(trace, &property)?,
        known: ev.eval_final(trace, &knows(group.clone(), property.clone()))?,
        known_false: ev.eval_final(trace, &knows(group, not(property)))?,
    })
}

/// Evaluates `seqCons`, `D_Threads(seqCons)` and `D_Threads(¬seqCons)`.
/// Threads always know whether a trace is sequentially consistent, so both
/// [`Detection::positive_detected`] and [`Detection::negative_detected`] hold.
pub fn detect_sc<S>(trace: &Trace, spec: S) -> Result<Detection, EvalError>
where
    S: SpecOracle + Send + Sync + 'static,
{
    let threads = AgentGroup::threads_of(trace);
    let atoms = AtomBinding::standard().with_spec(spec);
    detect(trace, seq_cons(threads.clone()), threads, &atoms)
}

/// Evaluates `Lin`, `D(Lin)` and `D(¬Lin)` for the threads together with the
/// observer. Non-linearizability is always detected; linearizability need
/// not be.
pub fn detect_lin<S>(trace: &Trace, spec: S) -> Result<Detection, EvalError>
where
    S: SpecOracle + Send + Sync + 'static,
{
    let threads = AgentGroup::threads_of(trace);
    let atoms = AtomBinding::standard().with_spec(spec);
    detect(trace, lin(threads.clone()), threads.with_observer(), &atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::spec::RegisterSpec;

    #[test]
    fn sequential_consistency_is_detected() {
        let d = detect_sc(&e1(), RegisterSpec).unwrap();
        assert!(d.holds && d.known && !d.known_false);
        let d = detect_sc(&e3(), RegisterSpec).unwrap();
        assert!(!d.holds && !d.known && d.known_false);
        let d = detect_sc(&Trace::empty(), RegisterSpec).unwrap();
        assert!(d.holds && d.known);
        assert!(d.positive_detected() && d.negative_detected());
    }

    #[test]
    fn linearizability_of_e7_is_not_known() {
        let d = detect_lin(&e7(), RegisterSpec).unwrap();
        assert!(d.holds && !d.known);
        assert!(!d.positive_detected());
        assert!(d.negative_detected());
    }

    #[test]
    fn non_linearizability_of_e6_is_known() {
        let d = detect_lin(&e6(), RegisterSpec).unwrap();
        assert!(!d.holds && d.known_false);
        let d = detect_lin(&Trace::empty(), RegisterSpec).unwrap();
        assert!(d.holds && d.known);
    }
}
