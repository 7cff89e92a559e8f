//! Waterfilling over parallel Gaussian channels with a sum-power budget.
//!
//! The solver is the exact sort-and-scan form: noises are sorted ascending and
//! the largest prefix `k` whose candidate level `(P + N_1 + ... + N_k) / k`
//! strictly exceeds `N_k` is the active set. Every quantity is accumulated in
//! that sorted order, so two profiles that share their active prefix produce
//! bit-identical levels and rates.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Identifier of one parallel channel within a [`NoiseProfile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelId(pub usize);

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Noise variances of a set of channels together with the total power budget.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseProfile<T> {
    channels: Vec<(ChannelId, T)>,
    budget: T,
}

impl<T: Scalar> NoiseProfile<T> {
    /// Channels get ids `0..noises.len()` in the given order.
    pub fn new(noises: Vec<T>, budget: T) -> Result<Self> {
        Self::from_channels(
            noises.into_iter().enumerate().map(|(k, n)| (ChannelId(k), n)),
            budget,
        )
    }

    pub fn from_channels(
        channels: impl IntoIterator<Item = (ChannelId, T)>,
        budget: T,
    ) -> Result<Self> {
        if !(budget.is_finite() && budget >= T::zero()) {
            return Err(Error::InvalidBudget(budget.as_f64()));
        }
        let channels: Vec<(ChannelId, T)> = channels.into_iter().collect();
        let mut seen = BTreeSet::new();
        for &(id, noise) in &channels {
            if !(noise.is_finite() && noise > T::zero()) {
                return Err(Error::NonPositiveNoise {
                    id: id.0,
                    value: noise.as_f64(),
                });
            }
            if !seen.insert(id) {
                return Err(Error::DuplicateChannel(id.0));
            }
        }
        Ok(Self { channels, budget })
    }

    pub fn empty(budget: T) -> Result<Self> {
        Self::from_channels(std::iter::empty(), budget)
    }

    pub fn budget(&self) -> T {
        self.budget
    }

    pub fn channels(&self) -> &[(ChannelId, T)] {
        &self.channels
    }

    pub fn ids(&self) -> impl Iterator<Item = ChannelId> + '_ {
        self.channels.iter().map(|&(id, _)| id)
    }

    pub fn noise(&self, id: ChannelId) -> Option<T> {
        self.channels
            .iter()
            .find(|&&(c, _)| c == id)
            .map(|&(_, n)| n)
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Same channels, different budget.
    pub fn with_budget(&self, budget: T) -> Result<Self> {
        Self::from_channels(self.channels.iter().copied(), budget)
    }

    /// The sub-profile holding only `subset`, in this profile's channel order.
    pub fn restrict(&self, subset: impl IntoIterator<Item = ChannelId>) -> Result<Self> {
        let wanted: BTreeSet<ChannelId> = subset.into_iter().collect();
        if let Some(&missing) = wanted.iter().find(|id| self.noise(**id).is_none()) {
            return Err(Error::UnknownChannel(missing.0));
        }
        Ok(Self {
            channels: self
                .channels
                .iter()
                .filter(|(id, _)| wanted.contains(id))
                .copied()
                .collect(),
            budget: self.budget,
        })
    }

    /// Every noise and the budget multiplied by `factor > 0`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::from_channels(
            self.channels.iter().map(|&(id, n)| (id, n * factor)),
            self.budget * factor,
        )
    }

    /// Channel indices sorted by (noise, id).
    fn sorted_indices(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.channels.len()).collect();
        order.sort_by(|&a, &b| {
            let (ia, na) = self.channels[a];
            let (ib, nb) = self.channels[b];
            na.partial_cmp(&nb)
                .expect("noises are finite")
                .then(ia.cmp(&ib))
        });
        order
    }
}

/// Optimal power split for one [`NoiseProfile`].
#[derive(Clone, Debug, PartialEq)]
pub struct WaterfillSolution<T> {
    /// Absent for an empty channel set or a zero budget.
    pub water_level: Option<T>,
    /// Per-channel power, in the profile's channel order.
    pub powers: Vec<(ChannelId, T)>,
    /// Channels that receive strictly positive power.
    pub active_set: BTreeSet<ChannelId>,
    /// Optimal sum rate in nats.
    pub rate: T,
}

impl<T: Scalar> WaterfillSolution<T> {
    pub fn power(&self, id: ChannelId) -> Option<T> {
        self.powers.iter().find(|(c, _)| *c == id).map(|&(_, p)| p)
    }

    pub fn total_power(&self) -> T {
        self.powers.iter().map(|&(_, p)| p).sum()
    }

    pub fn is_active(&self, id: ChannelId) -> bool {
        self.active_set.contains(&id)
    }
}

/// Water level and active-prefix length over ascending noises.
fn scan_level<T: Scalar>(sorted_noises: &[T], budget: T) -> (T, usize) {
    let mut prefix = Vec::with_capacity(sorted_noises.len());
    let mut acc = T::zero();
    for &n in sorted_noises {
        acc += n;
        prefix.push(acc);
    }
    for k in (1..=sorted_noises.len()).rev() {
        let level = (budget + prefix[k - 1]) / T::of_usize(k);
        if level > sorted_noises[k - 1] {
            return (level, k);
        }
    }
    // k = 1 always passes when budget > 0; only reachable through rounding.
    (budget + sorted_noises[0], 1)
}

/// The water level `ν` with `Σ (ν - N_i)^+ = P`.
pub fn water_level<T: Scalar>(profile: &NoiseProfile<T>) -> Result<T> {
    if profile.is_empty() {
        return Err(Error::EmptySet);
    }
    if profile.budget() <= T::zero() {
        return Err(Error::ZeroBudget);
    }
    let sorted: Vec<T> = profile
        .sorted_indices()
        .into_iter()
        .map(|k| profile.channels[k].1)
        .collect();
    Ok(scan_level(&sorted, profile.budget()).0)
}

/// Solve the waterfilling problem. An empty profile or zero budget yields
/// rate 0 with all powers 0 and no water level.
pub fn waterfill<T: Scalar>(profile: &NoiseProfile<T>) -> WaterfillSolution<T> {
    let mut powers: Vec<(ChannelId, T)> = profile.ids().map(|id| (id, T::zero())).collect();
    if profile.is_empty() || profile.budget() <= T::zero() {
        return WaterfillSolution {
            water_level: None,
            powers,
            active_set: BTreeSet::new(),
            rate: T::zero(),
        };
    }

    let order = profile.sorted_indices();
    let sorted: Vec<T> = order.iter().map(|&k| profile.channels[k].1).collect();
    let (level, active) = scan_level(&sorted, profile.budget());

    let mut active_set = BTreeSet::new();
    let mut rate = T::zero();
    for &k in &order[..active] {
        let (id, noise) = profile.channels[k];
        let p = level - noise;
        powers[k].1 = p;
        active_set.insert(id);
        rate += (p / noise).ln_1p();
    }

    WaterfillSolution {
        water_level: Some(level),
        powers,
        active_set,
        rate,
    }
}

/// `R*(subset)`: the optimal rate when only `subset` of the profile's channels
/// are available.
pub fn rate_of_subset<T: Scalar>(
    profile: &NoiseProfile<T>,
    subset: impl IntoIterator<Item = ChannelId>,
) -> Result<T> {
    Ok(waterfill(&profile.restrict(subset)?).rate)
}

/// Log utility of one basestation serving users with the given SNRs:
/// `max Σ log(1 + α_i w_i)` subject to `Σ α_i ≤ budget`.
///
/// Users with zero SNR can never receive power and are dropped before solving.
pub fn log_utility<T: Scalar>(snrs: &[T], budget: T) -> Result<T> {
    let mut noises = Vec::with_capacity(snrs.len());
    for &w in snrs {
        if !(w.is_finite() && w >= T::zero()) {
            return Err(Error::InvalidSnr(w.as_f64()));
        }
        if w > T::zero() {
            noises.push(w.recip());
        }
    }
    Ok(waterfill(&NoiseProfile::new(noises, budget)?).rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(noises: &[f64], budget: f64) -> NoiseProfile<f64> {
        NoiseProfile::new(noises.to_vec(), budget).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(matches!(
            NoiseProfile::new(vec![1.0, 0.0], 1.0),
            Err(Error::NonPositiveNoise { id: 1, .. })
        ));
        assert!(NoiseProfile::new(vec![-2.0], 1.0).is_err());
        assert!(NoiseProfile::new(vec![f64::NAN], 1.0).is_err());
        assert!(matches!(
            NoiseProfile::new(vec![1.0], -1.0),
            Err(Error::InvalidBudget(_))
        ));
        assert!(matches!(
            NoiseProfile::from_channels([(ChannelId(3), 1.0), (ChannelId(3), 2.0)], 1.0),
            Err(Error::DuplicateChannel(3))
        ));
    }

    #[test]
    fn water_level_examples() {
        assert_eq!(water_level(&profile(&[1.0], 1.0)).unwrap(), 2.0);
        assert_eq!(water_level(&profile(&[1.0, 1.0], 2.0)).unwrap(), 2.0);
        // ν_2 = 2.5 does not exceed N = 3, so only the first channel is active.
        assert_eq!(water_level(&profile(&[1.0, 3.0], 1.0)).unwrap(), 2.0);
        assert_eq!(water_level(&profile(&[1.0, 2.0], 3.0)).unwrap(), 3.0);
    }

    #[test]
    fn water_level_errors() {
        assert!(matches!(
            water_level(&NoiseProfile::<f64>::empty(1.0).unwrap()),
            Err(Error::EmptySet)
        ));
        assert!(matches!(
            water_level(&profile(&[1.0], 0.0)),
            Err(Error::ZeroBudget)
        ));
    }

    #[test]
    fn waterfill_examples() {
        let sol = waterfill(&profile(&[1.0, 2.0], 3.0));
        assert_eq!(sol.water_level, Some(3.0));
        assert_eq!(sol.powers, vec![(ChannelId(0), 2.0), (ChannelId(1), 1.0)]);
        assert!(close(sol.rate, 1.504_077_396_776_274, 1e-9));

        let sol = waterfill(&profile(&[1.0, 3.0], 1.0));
        assert_eq!(sol.powers, vec![(ChannelId(0), 1.0), (ChannelId(1), 0.0)]);
        assert_eq!(sol.active_set.len(), 1);
        assert!(close(sol.rate, std::f64::consts::LN_2, 1e-9));

        let sol = waterfill(&NoiseProfile::<f64>::empty(1.0).unwrap());
        assert_eq!(sol.rate, 0.0);
        assert!(sol.powers.is_empty());
        assert_eq!(sol.water_level, None);
    }

    #[test]
    fn zero_budget_gives_zero_rate() {
        let sol = waterfill(&profile(&[1.0, 2.0], 0.0));
        assert_eq!(sol.rate, 0.0);
        assert_eq!(sol.water_level, None);
        assert!(sol.powers.iter().all(|&(_, p)| p == 0.0));
    }

    #[test]
    fn tie_at_water_level_is_inactive() {
        // ν = 2 exactly equals the second noise.
        let sol = waterfill(&profile(&[1.0, 2.0], 1.0));
        assert_eq!(sol.water_level, Some(2.0));
        assert!(!sol.is_active(ChannelId(1)));
        assert_eq!(sol.power(ChannelId(1)), Some(0.0));
    }

    #[test]
    fn rate_of_subset_examples() {
        let p = profile(&[1.0, 2.0], 3.0);
        assert_eq!(rate_of_subset(&p, []).unwrap(), 0.0);
        assert!(close(
            rate_of_subset(&p, [ChannelId(0), ChannelId(1)]).unwrap(),
            1.504_077_396_776_274,
            1e-9
        ));
        assert!(close(
            rate_of_subset(&p, [ChannelId(0)]).unwrap(),
            4f64.ln(),
            1e-12
        ));
        assert!(matches!(
            rate_of_subset(&p, [ChannelId(7)]),
            Err(Error::UnknownChannel(7))
        ));
    }

    #[test]
    fn log_utility_examples() {
        assert!(close(log_utility(&[10.0], 1.0).unwrap(), 11f64.ln(), 1e-12));
        assert!(close(
            log_utility(&[10.0, 10.0], 1.0).unwrap(),
            2.0 * 6f64.ln(),
            1e-12
        ));
        assert!(close(log_utility(&[5.0, 0.0], 1.0).unwrap(), 6f64.ln(), 1e-12));
        assert_eq!(log_utility::<f64>(&[], 1.0).unwrap(), 0.0);
        assert!(matches!(
            log_utility(&[1.0, -0.5], 1.0),
            Err(Error::InvalidSnr(_))
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let p = NoiseProfile::<f32>::new(vec![1.0, 2.0], 3.0).unwrap();
        let sol = waterfill(&p);
        assert_eq!(sol.water_level, Some(3.0f32));
        assert!((sol.rate - 1.504_077_4f32).abs() < 1e-5);
    }
}
