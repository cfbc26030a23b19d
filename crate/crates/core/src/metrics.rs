//! Data-structure touch counters.
//!
//! Every sum-tree operation reports how many tree nodes it read or wrote. The
//! counter is thread-local, so [`count_touches`] only sees work done on the
//! calling thread; run the measured closure with [`Execution::Sequential`]
//! when the workload would otherwise fan out.
//!
//! [`Execution::Sequential`]: crate::Execution::Sequential

use std::cell::Cell;

thread_local! {
    static TOUCHES: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn record(n: u64) {
    TOUCHES.with(|t| t.set(t.get().wrapping_add(n)));
}

/// Current value of this thread's touch counter.
pub fn touches() -> u64 {
    TOUCHES.with(Cell::get)
}

/// Runs `f` and returns its result together with the number of node touches
/// it performed on this thread.
pub fn count_touches<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let before = touches();
    let out = f();
    (out, touches().wrapping_sub(before))
}
