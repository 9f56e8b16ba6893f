//! Exhaustive and random trace generators for the register and the store.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::trace::{Event, Trace};

/// Combined `ld(v)` and `st(v)` events for every thread and value.
pub fn combined_alphabet(threads: &[&str], values: &[i64]) -> Vec<Event> {
    let mut out = Vec::new();
    for t in threads {
        for &v in values {
            out.push(Event::ld(t, v));
        }
        for &v in values {
            out.push(Event::st(t, v));
        }
    }
    out
}

/// Split register events for every thread and value: `ld-inv`, `ld-ret v`,
/// `st-inv v`, `st-ret`.
pub fn split_alphabet(threads: &[&str], values: &[i64]) -> Vec<Event> {
    let mut out = Vec::new();
    for t in threads {
        out.push(Event::ld_inv(t));
        for &v in values {
            out.push(Event::ld_ret(t, v));
        }
        for &v in values {
            out.push(Event::st_inv(t, v));
        }
        out.push(Event::st_ret(t));
    }
    out
}

/// Every sequence over `alphabet` of length at most `max_len`, shortest first.
pub fn all_sequences(alphabet: Vec<Event>, max_len: usize) -> impl Iterator<Item = Trace> {
    (0..=max_len).flat_map(move |n| {
        // `multi_cartesian_product` of nothing yields nothing, so handle ε apart.
        let words: Box<dyn Iterator<Item = Vec<Event>>> = if n == 0 {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(std::iter::repeat_n(alphabet.clone().into_iter(), n).multi_cartesian_product())
        };
        words.map(Trace::new)
    })
}

/// Per-thread store step before revision ids are assigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StoreStep {
    Update(i64),
    Query(i64),
    Commit,
}

/// All store steps on variable `x` over `values`.
pub fn store_steps(values: &[i64]) -> Vec<StoreStep> {
    let mut out: Vec<StoreStep> = values.iter().map(|&v| StoreStep::Update(v)).collect();
    out.extend(values.iter().map(|&v| StoreStep::Query(v)));
    out.push(StoreStep::Commit);
    out
}

/// Builds a store trace from `(thread, step)` pairs. Each thread numbers its
/// revisions from 0 and moves to the next id after every commit.
pub fn store_trace(steps: &[(&str, StoreStep)]) -> Trace {
    let mut revs: Vec<(&str, u32)> = Vec::new();
    let mut out = Vec::with_capacity(steps.len());
    for &(t, step) in steps {
        let slot = match revs.iter().position(|(n, _)| *n == t) {
            Some(k) => k,
            None => {
                revs.push((t, 0));
                revs.len() - 1
            }
        };
        let rev = revs[slot].1;
        out.push(match step {
            StoreStep::Update(v) => Event::up(t, rev, "x", v),
            StoreStep::Query(v) => Event::qu(t, rev, "x", v),
            StoreStep::Commit => {
                revs[slot].1 += 1;
                Event::com(t, rev)
            }
        });
    }
    Trace::new(out)
}

/// Every store trace of `threads` on one variable with at most `max_len`
/// events, values from `values`.
pub fn all_store_traces<'a>(
    threads: &'a [&'a str],
    values: &'a [i64],
    max_len: usize,
) -> impl Iterator<Item = Trace> + 'a {
    let symbols: Vec<(&str, StoreStep)> = threads
        .iter()
        .flat_map(|t| store_steps(values).into_iter().map(move |s| (*t, s)))
        .collect();
    (0..=max_len).flat_map(move |n| {
        let words: Box<dyn Iterator<Item = Vec<(&str, StoreStep)>>> = if n == 0 {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(std::iter::repeat_n(symbols.clone(), n).multi_cartesian_product())
        };
        words.map(|w| store_trace(&w))
    })
}

/// A random unique register history with split events.
///
/// Each thread issues at most one load and one store (so the split events
/// are unique), possibly leaving its last call pending; the threads are then
/// interleaved at random. The total length is at most `max_len`.
pub fn random_register_history<R: Rng + ?Sized>(
    rng: &mut R,
    threads: &[&str],
    values: &[i64],
    max_len: usize,
) -> Trace {
    let mut lanes: Vec<Vec<Event>> = Vec::new();
    let mut budget = max_len;
    for t in threads {
        let mut ops: Vec<bool> = vec![true, false]; // true: load
        ops.shuffle(rng);
        ops.truncate(rng.gen_range(0..=2));
        let mut lane = Vec::new();
        for (k, load) in ops.iter().enumerate() {
            let pending = k + 1 == ops.len() && rng.gen_bool(0.2);
            let v = *values.choose(rng).expect("non-empty values");
            let call = if *load {
                let mut c = vec![Event::ld_inv(t)];
                if !pending {
                    c.push(Event::ld_ret(t, v));
                }
                c
            } else {
                let mut c = vec![Event::st_inv(t, v)];
                if !pending {
                    c.push(Event::st_ret(t));
                }
                c
            };
            if call.len() > budget {
                break;
            }
            budget -= call.len();
            lane.extend(call);
        }
        lanes.push(lane);
    }
    interleave(rng, lanes)
}

/// A random unique sequence over `alphabet` of length at most `max_len`,
/// not necessarily a well-formed history.
pub fn random_unique_sequence<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &[Event],
    max_len: usize,
) -> Trace {
    let n = rng.gen_range(0..=max_len.min(alphabet.len()));
    alphabet.choose_multiple(rng, n).cloned().collect()
}

/// A random store trace of `threads` on variable `x`.
pub fn random_store_trace<R: Rng + ?Sized>(
    rng: &mut R,
    threads: &[&str],
    values: &[i64],
    max_len: usize,
) -> Trace {
    let steps = store_steps(values);
    let n = rng.gen_range(0..=max_len);
    let word: Vec<(&str, StoreStep)> = (0..n)
        .map(|_| {
            (
                *threads.choose(rng).expect("threads"),
                *steps.choose(rng).expect("steps"),
            )
        })
        .collect();
    store_trace(&word)
}

/// Merges the lanes in a uniformly random interleaving.
pub fn interleave<R: Rng + ?Sized>(rng: &mut R, lanes: Vec<Vec<Event>>) -> Trace {
    let mut slots: Vec<usize> = lanes
        .iter()
        .enumerate()
        .flat_map(|(k, l)| std::iter::repeat_n(k, l.len()))
        .collect();
    slots.shuffle(rng);
    let mut iters: Vec<_> = lanes.into_iter().map(|l| l.into_iter()).collect();
    slots
        .into_iter()
        .map(|k| iters[k].next().expect("slot per event"))
        .collect()
}
