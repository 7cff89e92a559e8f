use std::fmt;

use crate::error::Result;
use crate::scalar::Scalar;

use super::greedy::{max_weight, online_greedy, GreedyMode};
use super::matrix::{Allocation, WeightMatrix};
use super::offline::{offline_bruteforce, offline_upper_bound, system_utility};

/// An online allocation rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Greedy,
    GreedyAbsolute,
    MaxWeight,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Greedy, Strategy::GreedyAbsolute, Strategy::MaxWeight];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::GreedyAbsolute => "greedy-absolute",
            Strategy::MaxWeight => "max-weight",
        }
    }

    /// Allocate `w`'s users in row order.
    pub fn allocate<T: Scalar>(self, w: &WeightMatrix<T>) -> Result<Allocation> {
        match self {
            Strategy::Greedy => online_greedy(w.rows(), w.basestations(), GreedyMode::MarginalGain),
            Strategy::GreedyAbsolute => {
                online_greedy(w.rows(), w.basestations(), GreedyMode::AbsoluteValue)
            }
            Strategy::MaxWeight => Ok(max_weight(w)),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// What the online utility is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    /// Exact offline optimum by exhaustive search.
    BruteForceOptimum,
    /// Closed-form upper bound on the offline optimum.
    AnalyticUpperBound,
}

impl ReferenceKind {
    pub fn name(self) -> &'static str {
        match self {
            ReferenceKind::BruteForceOptimum => "brute_force_optimum",
            ReferenceKind::AnalyticUpperBound => "analytic_upper_bound",
        }
    }

    pub fn reference<T: Scalar>(self, w: &WeightMatrix<T>) -> Result<T> {
        match self {
            ReferenceKind::BruteForceOptimum => Ok(offline_bruteforce(w)?.1),
            ReferenceKind::AnalyticUpperBound => Ok(offline_upper_bound(w)),
        }
    }
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport<T> {
    pub online_utility: T,
    pub offline_reference: T,
    pub reference_kind: ReferenceKind,
    pub ratio: T,
}

/// `reference / online`; 1 when both are zero and `+∞` when only the online
/// utility is zero.
pub fn ratio_of<T: Scalar>(online: T, reference: T) -> T {
    if online > T::zero() {
        reference / online
    } else if reference > T::zero() {
        T::infinity()
    } else {
        T::one()
    }
}

pub fn competitive_ratio<T: Scalar>(
    w: &WeightMatrix<T>,
    strategy: Strategy,
    reference_kind: ReferenceKind,
) -> Result<RatioReport<T>> {
    let reference = reference_kind.reference(w)?;
    ratio_against(w, strategy, reference_kind, reference)
}

/// As [`competitive_ratio`] with a precomputed reference, so several
/// strategies can share one offline solve.
pub fn ratio_against<T: Scalar>(
    w: &WeightMatrix<T>,
    strategy: Strategy,
    reference_kind: ReferenceKind,
    reference: T,
) -> Result<RatioReport<T>> {
    let online = system_utility(&strategy.allocate(w)?, w)?;
    Ok(RatioReport {
        online_utility: online,
        offline_reference: reference,
        reference_kind,
        ratio: ratio_of(online, reference),
    })
}
