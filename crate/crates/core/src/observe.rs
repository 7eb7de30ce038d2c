//! Operation-counting hooks.
//!
//! The schemes route their arithmetic through an [`OpObserver`] so the cost
//! benchmark can count operations without the hot path paying for it: with
//! [`NoObserver`] every hook is an empty inline function and monomorphization
//! erases the calls entirely.

use std::cell::Cell;

/// Receives a callback for each significant operation a scheme performs.
///
/// All methods default to no-ops so implementors only override what they
/// care about. Counted operations are modular exponentiations, modular
/// multiplications, modular inversions, and hash invocations (plain or
/// keyed). Symmetric cipher work is not counted here; it is dominated by
/// the hash calls it makes and is reported separately by the benchmark's
/// wall-clock timings.
pub trait OpObserver {
    fn on_mod_exp(&self) {}
    fn on_mod_mul(&self) {}
    fn on_mod_inv(&self) {}
    fn on_hash_call(&self) {}
}

/// Observer that ignores everything. Zero-cost.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoObserver;

impl OpObserver for NoObserver {}

/// Operation totals recorded by a [`CountingObserver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhaseCounts {
    pub mod_exps: u64,
    pub mod_muls: u64,
    pub mod_invs: u64,
    pub hash_calls: u64,
}

/// Observer that tallies operations. Single-threaded by design (`Cell`).
#[derive(Debug, Default)]
pub struct CountingObserver {
    mod_exps: Cell<u64>,
    mod_muls: Cell<u64>,
    mod_invs: Cell<u64>,
    hash_calls: Cell<u64>,
}

impl CountingObserver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> PhaseCounts {
        PhaseCounts {
            mod_exps: self.mod_exps.get(),
            mod_muls: self.mod_muls.get(),
            mod_invs: self.mod_invs.get(),
            hash_calls: self.hash_calls.get(),
        }
    }

    pub fn reset(&self) {
        self.mod_exps.set(0);
        self.mod_muls.set(0);
        self.mod_invs.set(0);
        self.hash_calls.set(0);
    }
}

impl OpObserver for CountingObserver {
    fn on_mod_exp(&self) {
        self.mod_exps.set(self.mod_exps.get() + 1);
    }

    fn on_mod_mul(&self) {
        self.mod_muls.set(self.mod_muls.get() + 1);
    }

    fn on_mod_inv(&self) {
        self.mod_invs.set(self.mod_invs.get() + 1);
    }

    fn on_hash_call(&self) {
        self.hash_calls.set(self.hash_calls.get() + 1);
    }
}
