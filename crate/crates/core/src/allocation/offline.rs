//! Sum-rate utility of an allocation and offline references for it.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::log_utility;

use super::matrix::{Allocation, WeightMatrix};

/// Largest number of assignments `m^n` the exhaustive search will visit.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// `Σ_j L(M_j)` with unit power per basestation.
pub fn system_utility<T: Scalar>(alloc: &Allocation, w: &WeightMatrix<T>) -> Result<T> {
    if alloc.basestations() != w.basestations() {
        return Err(Error::NotAPartition(format!(
            "{} parts for {} basestations",
            alloc.basestations(),
            w.basestations()
        )));
    }
    alloc.check_partition(w.users())?;
    let mut total = T::zero();
    for (bs, part) in alloc.parts().iter().enumerate() {
        total += log_utility(&w.column_of(bs, part.iter().copied()), T::one())?;
    }
    Ok(total)
}

/// Number of assignments, or `None` past [`BRUTE_FORCE_LIMIT`].
fn assignment_count(users: usize, basestations: usize) -> Option<u64> {
    let mut count: u64 = 1;
    for _ in 0..users {
        count = count.checked_mul(basestations as u64)?;
        if count > BRUTE_FORCE_LIMIT {
            return None;
        }
    }
    Some(count)
}

pub fn check_brute_force_size(users: usize, basestations: usize) -> Result<()> {
    match assignment_count(users, basestations) {
        Some(_) => Ok(()),
        None => Err(Error::InstanceTooLarge(format!(
            "{basestations}^{users} assignments exceed {BRUTE_FORCE_LIMIT}"
        ))),
    }
}

/// Exact offline optimum by enumerating all `m^n` assignments.
///
/// Per-basestation utilities are tabulated over all `2^n` user subsets first,
/// so each assignment costs `n` lookups. The first maximizer in enumeration
/// order (user 0 varying fastest) is returned.
pub fn offline_bruteforce<T: Scalar>(w: &WeightMatrix<T>) -> Result<(Allocation, T)> {
    let (n, m) = (w.users(), w.basestations());
    check_brute_force_size(n, m)?;
    if m == 1 {
        let alloc = Allocation::from_assignment(&vec![0; n], 1)?;
        let value = system_utility(&alloc, w)?;
        return Ok((alloc, value));
    }

    let subsets = 1usize << n;
    let mut table = vec![T::zero(); m * subsets];
    for bs in 0..m {
        for mask in 1..subsets {
            let snrs: Vec<T> = (0..n).filter(|u| mask >> u & 1 == 1).map(|u| w.get(u, bs)).collect();
            table[bs * subsets + mask] = log_utility(&snrs, T::one())?;
        }
    }

    let mut digits = vec![0usize; n];
    let mut masks = vec![0usize; m];
    let mut best_value = T::neg_infinity();
    let mut best = digits.clone();
    loop {
        masks.iter_mut().for_each(|x| *x = 0);
        for (u, &bs) in digits.iter().enumerate() {
            masks[bs] |= 1 << u;
        }
        let value: T = masks
            .iter()
            .enumerate()
            .map(|(bs, &mask)| table[bs * subsets + mask])
            .sum();
        if value > best_value {
            best_value = value;
            best.copy_from_slice(&digits);
        }
        // odometer step
        let mut u = 0;
        while u < n {
            digits[u] += 1;
            if digits[u] < m {
                break;
            }
            digits[u] = 0;
            u += 1;
        }
        if u == n {
            break;
        }
    }
    Ok((Allocation::from_assignment(&best, m)?, best_value))
}

/// Upper bound on the offline optimum: every SNR raised to the largest entry
/// `ŵ`, users split as evenly as possible, giving `Σ_groups k·log(1 + ŵ/k)`.
pub fn offline_upper_bound<T: Scalar>(w: &WeightMatrix<T>) -> T {
    let (n, m) = (w.users(), w.basestations());
    let peak = w.max_entry();
    let group = |k: usize| {
        if k == 0 {
            T::zero()
        } else {
            let k = T::of_usize(k);
            k * (peak / k).ln_1p()
        }
    };
    let (small, large) = (n / m, n / m + 1);
    let n_large = n % m;
    T::of_usize(n_large) * group(large) + T::of_usize(m - n_large) * group(small)
}
