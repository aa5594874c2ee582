//! Thread-local counters for dimension bookkeeping and power evaluation.
//!
//! Every dimension operation (vector combine, packed-code combine, pack,
//! unpack, counted equality) bumps `dim_ops` on the current thread. The
//! benchmark harness resets the counters, runs an evaluation loop, and reads
//! them back to demonstrate that the stripped evaluator performs no dimension
//! work at all. Power evaluations are split into the fast root paths and the
//! general exp/log path so the two can be told apart in tests.

use std::cell::Cell;

thread_local! {
    static DIM_OPS: Cell<u64> = const { Cell::new(0) };
    static POW_FAST: Cell<u64> = const { Cell::new(0) };
    static POW_GENERAL: Cell<u64> = const { Cell::new(0) };
}

/// Snapshot of the per-thread counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    /// Dimension algebra operations (vector or packed, including counted
    /// equality tests, packing, and unpacking).
    pub dim_ops: u64,
    /// Power evaluations that took a fast root path (integer power, sqrt,
    /// cbrt).
    pub pow_fast: u64,
    /// Power evaluations that took the general exp/log path.
    pub pow_general: u64,
}

pub(crate) fn count_dim_op() {
    DIM_OPS.with(|c| c.set(c.get() + 1));
}

pub(crate) fn count_pow_fast() {
    POW_FAST.with(|c| c.set(c.get() + 1));
}

pub(crate) fn count_pow_general() {
    POW_GENERAL.with(|c| c.set(c.get() + 1));
}

/// Returns the current thread's counter values.
pub fn snapshot() -> Counters {
    Counters {
        dim_ops: DIM_OPS.with(Cell::get),
        pow_fast: POW_FAST.with(Cell::get),
        pow_general: POW_GENERAL.with(Cell::get),
    }
}

/// Resets the current thread's counters to zero.
pub fn reset() {
    DIM_OPS.with(|c| c.set(0));
    POW_FAST.with(|c| c.set(0));
    POW_GENERAL.with(|c| c.set(0));
}
