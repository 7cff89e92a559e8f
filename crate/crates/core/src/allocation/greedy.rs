//! Online allocation: each arriving user is assigned immediately and
//! irrevocably, using only the users seen so far.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::log_utility;

use super::matrix::{check_row, Allocation, WeightMatrix};

/// How the greedy rule scores basestation `j` for an arriving user `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GreedyMode {
    /// `L(M_j ∪ {i}) - L(M_j)`
    #[default]
    MarginalGain,
    /// `L(M_j ∪ {i})`
    AbsoluteValue,
}

/// Stateful greedy allocator. Users can only be added; there is no way to
/// move or remove an assigned user.
#[derive(Clone, Debug)]
pub struct OnlineGreedy<T> {
    mode: GreedyMode,
    budget: T,
    allocation: Allocation,
    /// SNRs of the users served by each basestation, toward that basestation.
    served: Vec<Vec<T>>,
    utilities: Vec<T>,
    arrived: usize,
}

impl<T: Scalar> OnlineGreedy<T> {
    /// Unit transmit power per basestation.
    pub fn new(basestations: usize, mode: GreedyMode) -> Result<Self> {
        Self::with_budget(basestations, mode, T::one())
    }

    pub fn with_budget(basestations: usize, mode: GreedyMode, budget: T) -> Result<Self> {
        if basestations == 0 {
            return Err(Error::NoBasestations);
        }
        if !(budget.is_finite() && budget > T::zero()) {
            return Err(Error::InvalidBudget(budget.as_f64()));
        }
        Ok(Self {
            mode,
            budget,
            allocation: Allocation::empty(basestations),
            served: vec![Vec::new(); basestations],
            utilities: vec![T::zero(); basestations],
            arrived: 0,
        })
    }

    /// Assign the next user and return the chosen basestation. Ties go to
    /// the lowest index.
    pub fn arrive(&mut self, snrs: &[T]) -> Result<usize> {
        check_row(self.arrived, snrs, self.served.len())?;
        let mut best: Option<(usize, T, T)> = None;
        for (bs, &w) in snrs.iter().enumerate() {
            self.served[bs].push(w);
            let value = log_utility(&self.served[bs], self.budget);
            self.served[bs].pop();
            let value = value?;
            let score = match self.mode {
                GreedyMode::MarginalGain => value - self.utilities[bs],
                GreedyMode::AbsoluteValue => value,
            };
            if best.is_none_or(|(_, s, _)| score > s) {
                best = Some((bs, score, value));
            }
        }
        let (bs, _, value) = best.expect("at least one basestation");
        self.served[bs].push(snrs[bs]);
        self.utilities[bs] = value;
        self.allocation.assign(self.arrived, bs);
        self.arrived += 1;
        Ok(bs)
    }

    pub fn allocation(&self) -> &Allocation {
        &self.allocation
    }

    pub fn into_allocation(self) -> Allocation {
        self.allocation
    }

    /// Current `L(M_j)` per basestation.
    pub fn utilities(&self) -> &[T] {
        &self.utilities
    }

    pub fn total_utility(&self) -> T {
        self.utilities.iter().copied().sum()
    }

    pub fn arrived(&self) -> usize {
        self.arrived
    }
}

/// Run the greedy rule over `arrivals` in order.
pub fn online_greedy<T, I, R>(arrivals: I, basestations: usize, mode: GreedyMode) -> Result<Allocation>
where
    T: Scalar,
    I: IntoIterator<Item = R>,
    R: AsRef<[T]>,
{
    let mut engine = OnlineGreedy::new(basestations, mode)?;
    for snrs in arrivals {
        engine.arrive(snrs.as_ref())?;
    }
    Ok(engine.into_allocation())
}

/// Each user to its highest-SNR basestation, ties to the lowest index.
pub fn max_weight<T: Scalar>(w: &WeightMatrix<T>) -> Allocation {
    let mut alloc = Allocation::empty(w.basestations());
    for (user, row) in w.rows().iter().enumerate() {
        let mut best = 0;
        for (bs, &snr) in row.iter().enumerate() {
            if snr > row[best] {
                best = bs;
            }
        }
        alloc.assign(user, best);
    }
    alloc
}
