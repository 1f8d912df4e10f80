//! Planted-defect switches for the mutation-sensitivity harness.
//!
//! A mutation is active only inside [`with_mutation`] and only on the
//! calling thread, so concurrently running tests never observe each
//! other's defects.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// `[A, B]` computes `BA - AB`.
    BracketSign,
    /// The diagonal cocycle correction is skipped (`c ≡ 0`).
    DropCorrection,
    /// Derivation validation omits the antisymmetry check.
    SkipAntisymmetry,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::BracketSign,
        Mutation::DropCorrection,
        Mutation::SkipAntisymmetry,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::BracketSign => "bracket-sign-flip",
            Mutation::DropCorrection => "dropped-correction",
            Mutation::SkipAntisymmetry => "skipped-antisymmetry",
        }
    }
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

pub(crate) fn active(m: Mutation) -> bool {
    ACTIVE.with(|a| a.get() == Some(m))
}

pub(crate) fn current() -> Option<Mutation> {
    ACTIVE.with(|a| a.get())
}

/// Runs `f` with exactly `state` planted; used to carry the caller's
/// mutation into worker threads.
pub(crate) fn with_state<T>(state: Option<Mutation>, f: impl FnOnce() -> T) -> T {
    match state {
        Some(m) => with_mutation(m, f),
        None => f(),
    }
}

/// Runs `f` with `m` planted on this thread.
pub fn with_mutation<T>(m: Mutation, f: impl FnOnce() -> T) -> T {
    struct Reset(Option<Mutation>);
    impl Drop for Reset {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _reset = Reset(ACTIVE.with(|a| a.replace(Some(m))));
    f()
}
