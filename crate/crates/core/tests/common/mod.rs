//! Generators and property checks shared by the integration tests and the
//! acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use epistemic_consistency::check::{
    check_ec_axiomatic, check_ec_epistemic, check_lin, check_sc, validate_certificate, CheckOptions,
};
use epistemic_consistency::gen::{
    interleave, random_register_history, random_store_trace, random_unique_sequence, split_alphabet,
};
use epistemic_consistency::indist::{enumerate_witnesses, group_indist, obs_leq};
use epistemic_consistency::spec::{
    canonical_log, correct_evc, k_log, spec_member, valid_log, validate_revisions, Log,
};
use epistemic_consistency::trace::{act_seq, obs_view, prefix, project, Action};
use epistemic_consistency::{AgentGroup, Event, RegisterSpec, ThreadId, Trace, WitnessUniverse};

pub const THREADS: [&str; 3] = ["t1", "t2", "t3"];

/// A runner with a fixed seed, so failures reproduce.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Per-thread lanes of distinct split register events, `threads` lanes of at
/// most `per_lane` events each. Every interleaving is a unique trace.
pub fn lanes(threads: usize, per_lane: usize) -> impl Strategy<Value = Vec<Vec<Event>>> {
    let per_thread: Vec<_> = THREADS[..threads]
        .iter()
        .map(|t| {
            let alphabet = split_alphabet(&[t], &[0, 1]);
            proptest::sample::subsequence(alphabet, 0..=per_lane).prop_shuffle()
        })
        .collect();
    per_thread
}

fn mix(lanes: &[Vec<Event>], seed: u64) -> Trace {
    interleave(&mut rng(seed), lanes.to_vec())
}

/// Three interleavings of the same lanes, each cut at a position that is the
/// full length half of the time.
#[derive(Clone, Debug)]
pub struct Triple {
    pub points: [(Trace, usize); 3],
    pub group: AgentGroup,
}

pub fn triple() -> impl Strategy<Value = Triple> {
    (1..=3usize)
        .prop_flat_map(|n| {
            (
                lanes(n, 3),
                any::<[u64; 3]>(),
                any::<[u8; 3]>(),
                any::<u8>(),
                any::<bool>(),
            )
        })
        .prop_map(|(lanes, seeds, cuts, mask, observer)| {
            let points = [0, 1, 2].map(|k| {
                let e = mix(&lanes, seeds[k]);
                let i = if cuts[k] % 2 == 0 {
                    e.len()
                } else {
                    cuts[k] as usize % (e.len() + 1)
                };
                (e, i)
            });
            Triple {
                points,
                group: group_from_mask(lanes.len(), mask, observer),
            }
        })
}

/// The threads among the first `n` selected by `mask`, never empty.
fn group_from_mask(n: usize, mask: u8, observer: bool) -> AgentGroup {
    let mut members: Vec<ThreadId> = (0..n)
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| ThreadId::new(THREADS[k]))
        .collect();
    if members.is_empty() {
        members.push(ThreadId::new(THREADS[0]));
    }
    AgentGroup::new(members, observer).expect("non-empty group")
}

fn rel(group: &AgentGroup, a: &(Trace, usize), b: &(Trace, usize)) -> bool {
    group_indist(&a.0, a.1, &b.0, b.1, group).expect("cut in range")
}

/// `∼_G` is an equivalence relation; it agrees with comparing projections.
pub fn indist_laws(t: Triple) -> Result<(), TestCaseError> {
    let g = t.group.clone().without_observer();
    let [a, b, c] = &t.points;
    for p in &t.points {
        prop_assert!(rel(&g, p, p), "reflexivity");
    }
    prop_assert_eq!(rel(&g, a, b), rel(&g, b, a), "symmetry");
    if rel(&g, a, b) && rel(&g, b, c) {
        prop_assert!(rel(&g, a, c), "transitivity");
    }
    let oracle = g.threads().iter().all(|th| {
        project(&prefix(&a.0, a.1).unwrap(), th) == project(&prefix(&b.0, b.1).unwrap(), th)
    });
    prop_assert_eq!(rel(&g, a, b), oracle);
    Ok(())
}

/// Return-before-invocation pairs of the first `i` events, over all positions.
fn obs_pairs(e: &Trace, i: usize) -> BTreeSet<(Event, Event)> {
    let ev = &e.events()[..i];
    let mut out = BTreeSet::new();
    for (j, r) in ev.iter().enumerate() {
        for inv in &ev[j + 1..] {
            if r.action().is_ret() && inv.action().is_inv() {
                out.insert((r.clone(), inv.clone()));
            }
        }
    }
    out
}

/// `⪯_obs` and `∼_{G+obs}` are preorders; `⪯_obs` is inclusion of views.
pub fn obs_laws(t: Triple) -> Result<(), TestCaseError> {
    let g = t.group.clone().with_observer();
    let [a, b, c] = &t.points;
    let leq = |x: &(Trace, usize), y: &(Trace, usize)| obs_leq(&x.0, x.1, &y.0, y.1).unwrap();
    for p in &t.points {
        prop_assert!(leq(p, p) && rel(&g, p, p), "reflexivity");
        prop_assert_eq!(obs_view(&p.0, p.1).unwrap(), obs_pairs(&p.0, p.1));
    }
    if leq(a, b) && leq(b, c) {
        prop_assert!(leq(a, c), "transitivity of obs");
    }
    if rel(&g, a, b) && rel(&g, b, c) {
        prop_assert!(rel(&g, a, c), "transitivity of the group relation");
    }
    prop_assert_eq!(
        leq(a, b),
        obs_pairs(&a.0, a.1).is_subset(&obs_pairs(&b.0, b.1))
    );
    Ok(())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn universe(trace: &Trace, group: AgentGroup) -> BTreeSet<Trace> {
    enumerate_witnesses(&WitnessUniverse::new(trace.clone(), group))
        .map(|w| w.expect("unlimited budget"))
        .collect()
}

/// Lanes and a seed; at most six events in total.
pub fn small_lanes() -> impl Strategy<Value = (Vec<Vec<Event>>, u64)> {
    (1..=3usize).prop_flat_map(|n| (lanes(n, 6 / n), any::<u64>()))
}

/// With the whole thread set as the group, the universe holds exactly the
/// multinomial number of interleavings, and matches a filter over all
/// permutations; with the observer, the filter keeps `obs`-extensions.
pub fn witness_counts((lanes, seed): (Vec<Vec<Event>>, u64)) -> Result<(), TestCaseError> {
    let e = mix(&lanes, seed);
    let group = AgentGroup::threads_of(&e);
    let plain: Vec<Trace> = enumerate_witnesses(&WitnessUniverse::new(e.clone(), group.clone()))
        .map(|w| w.unwrap())
        .collect();
    let expected = factorial(e.len()) / lanes.iter().map(|l| factorial(l.len())).product::<u64>();
    prop_assert_eq!(plain.len() as u64, expected, "multinomial count");
    let distinct: BTreeSet<Trace> = plain.iter().cloned().collect();
    prop_assert_eq!(distinct.len(), plain.len(), "no duplicates");

    let perms: BTreeSet<Trace> = e
        .iter()
        .cloned()
        .permutations(e.len())
        .map(Trace::new)
        .filter(|p| same_projections(&e, p))
        .collect();
    prop_assert_eq!(&distinct, &perms);
    let with_obs: BTreeSet<Trace> = perms
        .into_iter()
        .filter(|p| obs_pairs(&e, e.len()).is_subset(&obs_pairs(p, p.len())))
        .collect();
    prop_assert_eq!(universe(&e, group.with_observer()), with_obs);
    Ok(())
}

/// Store trace on three threads with forwarding events inserted after the
/// commits they forward.
pub fn store_with_fwds(seed: u64, max_len: usize) -> Trace {
    let mut r = rng(seed);
    let base = random_store_trace(&mut r, &THREADS, &[0, 1], max_len);
    let mut events = base.into_events();
    let mut k = 0;
    while k < events.len() {
        if let (Some(from), Action::Com { rev }) =
            (events[k].thread().cloned(), events[k].action().clone())
        {
            if r.gen_bool(0.6) {
                let to = *THREADS
                    .iter()
                    .filter(|t| **t != from.as_str())
                    .collect::<Vec<_>>()
                    .choose(&mut r)
                    .unwrap();
                let at = r.gen_range(k + 1..=events.len());
                events.insert(at, Event::fwd(from.as_str(), to, rev.0));
            }
        }
        k += 1;
    }
    Trace::new(events)
}

/// Shifts the revision ids of the `k`-th thread by `100 k`, so that commits
/// of different threads are different actions.
pub fn offset_revisions(trace: &Trace) -> Trace {
    let shift = |t: &ThreadId| 100 * THREADS.iter().position(|n| *n == t.as_str()).unwrap() as u32;
    trace
        .iter()
        .map(|e| match (e.thread(), e.action()) {
            (Some(t), Action::Qu { rev, query, result }) => {
                let v = match result {
                    epistemic_consistency::Value::Int(v) => *v,
                    _ => unreachable!(),
                };
                Event::qu(t.as_str(), rev.0 + shift(t), query.as_str(), v)
            }
            (Some(t), Action::Up { rev, update }) => Event::up(
                t.as_str(),
                rev.0 + shift(t),
                update.var.as_str(),
                update.value,
            ),
            (Some(t), Action::Com { rev }) => Event::com(t.as_str(), rev.0 + shift(t)),
            (None, Action::Fwd { from, to, rev }) => {
                Event::fwd(from.as_str(), to.as_str(), rev.0 + shift(from))
            }
            _ => e.clone(),
        })
        .collect()
}

/// Knowledge grows with the prefix, includes the thread's own events and
/// only mentions positions of the prefix.
pub fn k_log_monotone(seed: u64) -> Result<(), TestCaseError> {
    let e = store_with_fwds(seed, 8);
    prop_assert!(validate_revisions(&e).is_ok());
    for t in THREADS.map(ThreadId::new) {
        let mut before = BTreeSet::new();
        for i in 0..=e.len() {
            let now = k_log(&e, i, &t).unwrap();
            prop_assert!(before.is_subset(&now), "monotone at {}", i);
            prop_assert!(now.iter().all(|&p| p >= 1 && p <= i));
            for p in 1..=i {
                if e.at(p).unwrap().is_by(&t) {
                    prop_assert!(now.contains(&p), "own event {} known", p);
                }
            }
            before = now;
        }
    }
    Ok(())
}

/// When actions are unique, the canonical log is the only valid log;
/// otherwise it is still valid.
pub fn log_uniqueness((seed, cut, who): (u64, u8, u8)) -> Result<(), TestCaseError> {
    let e = offset_revisions(&store_with_fwds(seed, 7));
    let i = cut as usize % (e.len() + 1);
    let t = ThreadId::new(THREADS[who as usize % 3]);
    let canonical = canonical_log(&e, i, &t).unwrap();
    prop_assert!(
        valid_log(&e, i, &t, &canonical).unwrap(),
        "canonical log is valid"
    );
    let acts = act_seq(&prefix(&e, i).unwrap());
    let unique = acts.iter().collect::<BTreeSet<_>>().len() == acts.len();
    if unique && canonical.actions.len() <= 6 {
        let n = canonical.actions.len();
        let valid: Vec<Log> = canonical
            .actions
            .iter()
            .cloned()
            .permutations(n)
            .map(Log::new)
            .filter(|l| valid_log(&e, i, &t, l).unwrap())
            .collect();
        prop_assert_eq!(valid, vec![canonical.clone()]);
        if let Some(first) = canonical.actions.first() {
            let mut doubled = canonical.actions.clone();
            doubled.push(first.clone());
            prop_assert!(!valid_log(&e, i, &t, &Log::new(doubled)).unwrap());
        }
    }
    Ok(())
}

/// A register trace: a well-formed random history or a random unique
/// sequence of split events.
pub fn register_trace(seed: u64) -> Trace {
    let mut r = rng(seed);
    if r.gen_bool(0.7) {
        let n = r.gen_range(2..=3);
        random_register_history(&mut r, &THREADS[..n], &[0, 1], 6)
    } else {
        random_unique_sequence(&mut r, &split_alphabet(&THREADS[..2], &[0, 1]), 6)
    }
}

pub fn lin_implies_sc(seed: u64) -> Result<(), TestCaseError> {
    let e = register_trace(seed);
    let o = CheckOptions::default();
    let lin = check_lin(&e, &RegisterSpec, &o).unwrap().consistent;
    let sc = check_sc(&e, &RegisterSpec, &o).unwrap().consistent;
    prop_assert!(
        !lin || sc,
        "linearizable but not sequentially consistent: {}",
        e
    );
    Ok(())
}

fn same_projections(a: &Trace, b: &Trace) -> bool {
    let threads: BTreeSet<ThreadId> = a.threads().into_iter().chain(b.threads()).collect();
    threads.iter().all(|t| project(a, t) == project(b, t))
}

/// Witnesses and certificates re-check without the checker's help.
pub fn witnesses_revalidate(seed: u64) -> Result<(), TestCaseError> {
    let o = CheckOptions::default();
    let e = register_trace(seed);
    if let Some(w) = check_sc(&e, &RegisterSpec, &o).unwrap().witness {
        prop_assert!(spec_member(&RegisterSpec, &w) && same_projections(&e, &w));
    }
    if let Some(w) = check_lin(&e, &RegisterSpec, &o).unwrap().witness {
        prop_assert!(spec_member(&RegisterSpec, &w) && same_projections(&e, &w));
        prop_assert!(
            obs_pairs(&e, e.len()).is_subset(&obs_pairs(&w, w.len())),
            "real-time order kept"
        );
    }
    let s = random_store_trace(&mut rng(seed), &THREADS[..2], &[0, 1], 6);
    let ax = check_ec_axiomatic(&s, &o).unwrap();
    if let Some(cert) = &ax.certificate {
        prop_assert_eq!(validate_certificate(&s, cert), Ok(()));
    }
    let ep = check_ec_epistemic(&s, &o).unwrap();
    if let Some(w) = &ep.witness {
        prop_assert!(correct_evc(w));
        prop_assert!(same_projections(&s, &w.without_env()));
    }
    prop_assert_eq!(ax.consistent, ep.consistent);
    Ok(())
}

/// Verdicts do not depend on the search order, and the universe depends on
/// the source only through the group's projections.
pub fn order_independence(
    (lanes, seeds, mask): (Vec<Vec<Event>>, [u64; 3], u8),
) -> Result<(), TestCaseError> {
    let e = mix(&lanes, seeds[0]);
    let base = CheckOptions::default();
    let shuffled = CheckOptions::default().shuffled(seeds[1]);
    prop_assert_eq!(
        check_sc(&e, &RegisterSpec, &base).unwrap().consistent,
        check_sc(&e, &RegisterSpec, &shuffled).unwrap().consistent
    );
    prop_assert_eq!(
        check_lin(&e, &RegisterSpec, &base).unwrap().consistent,
        check_lin(&e, &RegisterSpec, &shuffled).unwrap().consistent
    );
    let s = random_store_trace(&mut rng(seeds[2]), &THREADS[..2], &[0, 1], 5);
    prop_assert_eq!(
        check_ec_axiomatic(&s, &base).unwrap().consistent,
        check_ec_axiomatic(&s, &shuffled).unwrap().consistent
    );
    prop_assert_eq!(
        check_ec_epistemic(&s, &base).unwrap().consistent,
        check_ec_epistemic(&s, &shuffled).unwrap().consistent
    );
    let e2 = mix(&lanes, seeds[1]);
    let group = group_from_mask(lanes.len(), mask, false);
    prop_assert_eq!(universe(&e, group.clone()), universe(&e2, group));
    Ok(())
}

/// A named property and a driver that runs it for a number of cases.
/// `run` returns the number of cases executed.
pub struct Property {
    pub name: &'static str,
    pub run: fn(&mut TestRunner) -> Result<u64, String>,
}

fn drive<S: Strategy>(
    runner: &mut TestRunner,
    strategy: S,
    test: fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u64, String> {
    let count = std::cell::Cell::new(0u64);
    runner
        .run(&strategy, |v| {
            count.set(count.get() + 1);
            test(v)
        })
        .map_err(|e| e.to_string())?;
    Ok(count.get())
}

pub fn properties() -> Vec<Property> {
    vec![
        Property {
            name: "indist equivalence laws",
            run: |r| drive(r, triple(), indist_laws),
        },
        Property {
            name: "obs preorder laws",
            run: |r| drive(r, triple(), obs_laws),
        },
        Property {
            name: "multinomial witness counts",
            run: |r| drive(r, small_lanes(), witness_counts),
        },
        Property {
            name: "k_log monotonicity",
            run: |r| drive(r, any::<u64>(), k_log_monotone),
        },
        Property {
            name: "log uniqueness",
            run: |r| drive(r, any::<(u64, u8, u8)>(), log_uniqueness),
        },
        Property {
            name: "Lin implies SC",
            run: |r| drive(r, any::<u64>(), lin_implies_sc),
        },
        Property {
            name: "witness re-validation",
            run: |r| drive(r, any::<u64>(), witnesses_revalidate),
        },
        Property {
            name: "enumeration-order independence",
            run: |r| {
                let s = (1..=3usize)
                    .prop_flat_map(|n| (lanes(n, 6 / n), any::<[u64; 3]>(), any::<u8>()));
                drive(r, s, order_independence)
            },
        },
    ]
}

/// The trace sample for the axiom and detection checks: 70% well-formed
/// histories on two or three threads, 30% unique split sequences.
pub fn theorem_sample(n: usize, seed: u64) -> Vec<Trace> {
    let mut r = rng(seed);
    let alphabet = split_alphabet(&THREADS[..2], &[0, 1]);
    (0..n)
        .map(|k| {
            if k * 10 < n * 7 {
                let threads = r.gen_range(2..=3);
                random_register_history(&mut r, &THREADS[..threads], &[0, 1], 6)
            } else {
                random_unique_sequence(&mut r, &alphabet, 6)
            }
        })
        .collect()
}

/// The worked examples, each as a named check.
pub fn worked_examples() -> Vec<(&'static str, Result<(), String>)> {
    use epistemic_consistency::fixtures::*;
    use epistemic_consistency::logic::{correct, eval, knows, not, AtomBinding, Semantics};
    use epistemic_consistency::trace::obs;

    fn ensure(ok: bool, msg: &str) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(msg.to_string())
        }
    }
    let o = CheckOptions::default();
    let atoms = AtomBinding::register();
    let threads = AgentGroup::of(&["t1", "t2"]);
    let pair = |r: Event, i: Event| BTreeSet::from([(r, i)]);
    vec![
        (
            "E1 sequentially consistent, witness E2",
            (|| {
                let v = check_sc(&e1(), &RegisterSpec, &o).map_err(|e| e.to_string())?;
                let w = v.witness.ok_or("no witness")?;
                ensure(
                    spec_member(&RegisterSpec, &w) && same_projections(&e1(), &w),
                    "witness does not re-validate",
                )?;
                ensure(w == e2(), "witness differs from E2")
            })(),
        ),
        (
            "E2 in the register specification",
            ensure(spec_member(&RegisterSpec, &e2()), "E2 rejected"),
        ),
        (
            "E3 not sequentially consistent",
            (|| {
                let v = check_sc(&e3(), &RegisterSpec, &o).map_err(|e| e.to_string())?;
                ensure(!v.consistent, "E3 accepted")
            })(),
        ),
        (
            "E6 sequentially consistent, not linearizable",
            (|| {
                ensure(
                    check_sc(&e6(), &RegisterSpec, &o)
                        .map_err(|e| e.to_string())?
                        .consistent,
                    "E6 not SC",
                )?;
                ensure(
                    !check_lin(&e6(), &RegisterSpec, &o)
                        .map_err(|e| e.to_string())?
                        .consistent,
                    "E6 linearizable",
                )?;
                let hidden = eval(
                    &e6(),
                    e6().len(),
                    &not(knows(threads.clone(), not(correct()))),
                    &atoms,
                    Semantics::FutureU,
                )
                .map_err(|e| e.to_string())?;
                ensure(hidden, "threads alone detect the violation in E6")
            })(),
        ),
        (
            "E7 linearizable with witness E8",
            (|| {
                let v = check_lin(&e7(), &RegisterSpec, &o).map_err(|e| e.to_string())?;
                ensure(v.witness == Some(e8()), "witness is not E8")
            })(),
        ),
        (
            "E8 in the register specification",
            ensure(spec_member(&RegisterSpec, &e8()), "E8 rejected"),
        ),
        (
            "observer views of E6, E7, E8",
            (|| {
                ensure(
                    obs(&e6()) == pair(Event::ld_ret("t2", 1), Event::st_inv("t1", 1)),
                    "obs(E6)",
                )?;
                ensure(obs(&e7()).is_empty(), "obs(E7)")?;
                ensure(
                    obs(&e8()) == pair(Event::st_ret("t1"), Event::ld_inv("t2")),
                    "obs(E8)",
                )?;
                let (a, b) = (e6(), e7());
                ensure(!obs_leq(&a, a.len(), &b, b.len()).unwrap(), "E6 below E7")?;
                ensure(
                    obs_leq(&b, b.len(), &a, a.len()).unwrap(),
                    "E7 not below E6",
                )
            })(),
        ),
        (
            "E4 eventually consistent by both checkers",
            (|| {
                let ax = check_ec_axiomatic(&e4(), &o).map_err(|e| e.to_string())?;
                let ep = check_ec_epistemic(&e4(), &o).map_err(|e| e.to_string())?;
                ensure(ax.consistent && ep.consistent, "E4 rejected")?;
                validate_certificate(&e4(), ax.certificate.as_ref().ok_or("no certificate")?)?;
                let w = ep.witness.ok_or("no witness")?;
                ensure(
                    correct_evc(&w) && w.iter().any(|e| e.action().is_fwd()),
                    "witness lacks forwarding",
                )
            })(),
        ),
        (
            "E5 satisfies correctEVC",
            ensure(correct_evc(&e5()), "E5 rejected"),
        ),
    ]
}

/// Axioms T and 4 for `φ = ¬correct` with and without the observer, and
/// axiom 5 without it, on every trace. Returns the number of instances.
pub fn knowledge_axioms(traces: &[Trace]) -> Result<usize, String> {
    use epistemic_consistency::logic::{axiom_check, correct, not, AtomBinding, Axiom};
    let atoms = AtomBinding::register();
    let phi = not(correct());
    let mut instances = 0;
    for e in traces {
        let threads = AgentGroup::threads_of(e);
        let cases = [
            (threads.clone(), Axiom::T),
            (threads.clone(), Axiom::Four),
            (threads.clone(), Axiom::Five),
            (threads.clone().with_observer(), Axiom::T),
            (threads.clone().with_observer(), Axiom::Four),
        ];
        for (g, ax) in cases {
            instances += 1;
            match axiom_check(e, &g, &phi, ax, &atoms) {
                Ok(true) => {}
                Ok(false) => return Err(format!("axiom {ax:?} fails for {g:?} on {e}")),
                Err(err) => return Err(format!("{e}: {err}")),
            }
        }
    }
    Ok(instances)
}

/// Axiom 5 with the observer fails on E7, where `Lin ∧ ¬D(Lin)` holds.
pub fn observer_breaks_axiom_five() -> Result<(), String> {
    use epistemic_consistency::check::detect_lin;
    use epistemic_consistency::fixtures::e7;
    use epistemic_consistency::logic::{axiom_check, correct, not, AtomBinding, Axiom};
    let d = detect_lin(&e7(), RegisterSpec).map_err(|e| e.to_string())?;
    if !(d.holds && !d.known) {
        return Err(format!("detect_lin(E7) = {d:?}"));
    }
    let g = AgentGroup::threads_of(&e7()).with_observer();
    match axiom_check(
        &e7(),
        &g,
        &not(correct()),
        Axiom::Five,
        &AtomBinding::register(),
    ) {
        Ok(false) => Ok(()),
        other => Err(format!("axiom 5 with observer on E7: {other:?}")),
    }
}

/// Both detection biconditionals for sequential consistency and the
/// negative one for linearizability, on every trace.
pub fn detection_biconditionals(traces: &[Trace]) -> Result<(), String> {
    use epistemic_consistency::check::{detect_lin, detect_sc};
    for e in traces {
        let sc = detect_sc(e, RegisterSpec).map_err(|err| err.to_string())?;
        if !(sc.positive_detected() && sc.negative_detected()) {
            return Err(format!("detect_sc on {e}: {sc:?}"));
        }
        let lin = detect_lin(e, RegisterSpec).map_err(|err| err.to_string())?;
        if !lin.negative_detected() {
            return Err(format!("detect_lin on {e}: {lin:?}"));
        }
    }
    Ok(())
}
