//! The worked example traces `E1`–`E8`.
//!
//! `E1`–`E3` use the compact call notation (`ld(v)`, `st(v)`), `E4`/`E5` are
//! replicated-store traces and `E6`–`E8` split calls into invocations and
//! returns.

use crate::trace::{Event, Trace};

/// `(t2,ld(0)) (t2,ld(1)) (t1,st(1))`: sequentially consistent.
pub fn e1() -> Trace {
    Trace::new(vec![
        Event::ld("t2", 0),
        Event::ld("t2", 1),
        Event::st("t1", 1),
    ])
}

/// `(t2,ld(0)) (t1,st(1)) (t2,ld(1))`: a correct register history.
pub fn e2() -> Trace {
    Trace::new(vec![
        Event::ld("t2", 0),
        Event::st("t1", 1),
        Event::ld("t2", 1),
    ])
}

/// `(t2,ld(0)) (t1,st(1)) (t2,ld(2))`: nobody stored 2.
pub fn e3() -> Trace {
    Trace::new(vec![
        Event::ld("t2", 0),
        Event::st("t1", 1),
        Event::ld("t2", 2),
    ])
}

/// Store trace without forwarding events; eventually consistent.
pub fn e4() -> Trace {
    Trace::new(vec![
        Event::up("t1", 0, "x", 0),
        Event::com("t1", 0),
        Event::up("t1", 1, "x", 1),
        Event::com("t1", 1),
        Event::qu("t2", 0, "x", 0),
        Event::com("t2", 0),
        Event::qu("t2", 1, "x", 1),
    ])
}

/// `E4` with the two forwarding events that make it correct.
pub fn e5() -> Trace {
    Trace::new(vec![
        Event::up("t1", 0, "x", 0),
        Event::com("t1", 0),
        Event::fwd("t1", "t2", 0),
        Event::up("t1", 1, "x", 1),
        Event::com("t1", 1),
        Event::qu("t2", 0, "x", 0),
        Event::com("t2", 0),
        Event::fwd("t1", "t2", 1),
        Event::qu("t2", 1, "x", 1),
    ])
}

/// The load returns 1 before the store is invoked: not linearizable.
pub fn e6() -> Trace {
    Trace::new(vec![
        Event::ld_inv("t2"),
        Event::ld_ret("t2", 1),
        Event::st_inv("t1", 1),
        Event::st_ret("t1"),
    ])
}

/// Overlapping load and store: linearizable.
pub fn e7() -> Trace {
    Trace::new(vec![
        Event::ld_inv("t2"),
        Event::st_inv("t1", 1),
        Event::ld_ret("t2", 1),
        Event::st_ret("t1"),
    ])
}

/// The sequential witness for `E7`.
pub fn e8() -> Trace {
    Trace::new(vec![
        Event::st_inv("t1", 1),
        Event::st_ret("t1"),
        Event::ld_inv("t2"),
        Event::ld_ret("t2", 1),
    ])
}
