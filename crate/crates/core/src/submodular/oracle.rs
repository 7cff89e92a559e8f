use crate::error::Result;
use crate::scalar::Scalar;
use crate::solver::{log_utility, waterfill, ChannelId, NoiseProfile};

use super::subset::Subset;

/// A set function over the ground set `{0, .., ground_size() - 1}`.
///
/// `evaluate` must be deterministic and re-entrant; the checkers tabulate it
/// from several threads.
pub trait SetFunctionOracle<T>: Sync {
    fn ground_size(&self) -> usize;
    fn evaluate(&self, set: Subset) -> T;
}

/// Wraps a closure as a [`SetFunctionOracle`].
pub struct FnOracle<F> {
    size: usize,
    f: F,
}

impl<F> FnOracle<F> {
    pub fn new(size: usize, f: F) -> Self {
        Self { size, f }
    }
}

impl<T, F> SetFunctionOracle<T> for FnOracle<F>
where
    F: Fn(Subset) -> T + Sync,
{
    fn ground_size(&self) -> usize {
        self.size
    }

    fn evaluate(&self, set: Subset) -> T {
        (self.f)(set)
    }
}

/// The waterfilling rate `S ↦ R*(S)` over a profile's channels. Element `k`
/// of the ground set is the profile's `k`-th channel.
pub struct WaterfillOracle<T> {
    profile: NoiseProfile<T>,
}

impl<T: Scalar> WaterfillOracle<T> {
    pub fn new(profile: NoiseProfile<T>) -> Self {
        Self { profile }
    }

    pub fn channel(&self, element: usize) -> ChannelId {
        self.profile.channels()[element].0
    }

    pub fn profile(&self) -> &NoiseProfile<T> {
        &self.profile
    }
}

impl<T: Scalar> SetFunctionOracle<T> for WaterfillOracle<T> {
    fn ground_size(&self) -> usize {
        self.profile.len()
    }

    fn evaluate(&self, set: Subset) -> T {
        let sub = self
            .profile
            .restrict(set.elements().map(|e| self.channel(e)))
            .expect("subset elements index profile channels");
        waterfill(&sub).rate
    }
}

/// A basestation's log utility `M ↦ L(M)` over a fixed list of user SNRs.
pub struct LogUtilityOracle<T> {
    snrs: Vec<T>,
    budget: T,
}

impl<T: Scalar> LogUtilityOracle<T> {
    pub fn new(snrs: Vec<T>, budget: T) -> Result<Self> {
        // Validates every SNR and the budget once, up front.
        log_utility(&snrs, budget)?;
        Ok(Self { snrs, budget })
    }
}

impl<T: Scalar> SetFunctionOracle<T> for LogUtilityOracle<T> {
    fn ground_size(&self) -> usize {
        self.snrs.len()
    }

    fn evaluate(&self, set: Subset) -> T {
        let picked: Vec<T> = set.elements().map(|e| self.snrs[e]).collect();
        log_utility(&picked, self.budget).expect("SNRs validated at construction")
    }
}
