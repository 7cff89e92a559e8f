//! Independent oracles shared by the integration tests. Nothing here calls
//! the solver under test.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Water level by bisection on `Σ (ν - N_i)^+ = P`.
pub fn level_by_bisection(noises: &[f64], budget: f64) -> f64 {
    let filled = |nu: f64| noises.iter().map(|&n| (nu - n).max(0.0)).sum::<f64>();
    let mut lo = noises.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = noises.iter().copied().fold(0.0, f64::max) + budget;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if filled(mid) > budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Optimal rate via the bisection level; 0 for an empty set or zero budget.
pub fn rate_by_bisection(noises: &[f64], budget: f64) -> f64 {
    if noises.is_empty() || budget == 0.0 {
        return 0.0;
    }
    let nu = level_by_bisection(noises, budget);
    noises.iter().filter(|&&n| nu > n).map(|&n| (nu / n).ln()).sum()
}

fn objective(noises: &[f64], powers: &[f64]) -> f64 {
    noises.iter().zip(powers).map(|(&n, &p)| (p / n).ln_1p()).sum()
}

/// Numerical maximizer of `Σ log(1 + P_i/N_i)` over the power simplex:
/// repeated exact ternary-search transfers between every pair of channels,
/// starting from an equal split. Returns (rate, powers).
pub fn maximize_on_simplex(noises: &[f64], budget: f64, sweeps: usize) -> (f64, Vec<f64>) {
    let k = noises.len();
    if k == 0 {
        return (0.0, vec![]);
    }
    let mut p = vec![budget / k as f64; k];
    for _ in 0..sweeps {
        for a in 0..k {
            for b in a + 1..k {
                let total = p[a] + p[b];
                let f = |x: f64| (x / noises[a]).ln_1p() + ((total - x) / noises[b]).ln_1p();
                let (mut lo, mut hi) = (0.0, total);
                for _ in 0..100 {
                    let m1 = lo + (hi - lo) / 3.0;
                    let m2 = hi - (hi - lo) / 3.0;
                    if f(m1) < f(m2) {
                        lo = m1;
                    } else {
                        hi = m2;
                    }
                }
                p[a] = 0.5 * (lo + hi);
                p[b] = total - p[a];
            }
        }
    }
    (objective(noises, &p), p)
}

/// Log utility of one basestation through the bisection oracle.
pub fn log_utility_oracle(snrs: &[f64]) -> f64 {
    let noises: Vec<f64> = snrs.iter().filter(|&&w| w > 0.0).map(|&w| 1.0 / w).collect();
    rate_by_bisection(&noises, 1.0)
}

/// Offline optimum by direct enumeration of every assignment, evaluated with
/// the bisection oracle.
pub fn offline_optimum_oracle(rows: &[Vec<f64>], m: usize) -> f64 {
    let n = rows.len();
    let total = m.pow(n as u32);
    let mut best = f64::NEG_INFINITY;
    for code in 0..total {
        let mut c = code;
        let mut per_bs = vec![Vec::new(); m];
        for row in rows {
            per_bs[c % m].push(row[c % m]);
            c /= m;
        }
        let value: f64 = per_bs.iter().map(|s| log_utility_oracle(s)).sum();
        best = best.max(value);
    }
    best
}

/// Noises uniform on (lo, hi] and budget uniform on (plo, phi].
pub fn random_profile(
    rng: &mut ChaCha8Rng,
    size: usize,
    noise: (f64, f64),
    budget: (f64, f64),
) -> (Vec<f64>, f64) {
    let noises = (0..size).map(|_| uniform_open_closed(rng, noise)).collect();
    (noises, uniform_open_closed(rng, budget))
}

pub fn uniform_open_closed(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    hi - rng.gen::<f64>() * (hi - lo)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, top: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0.0..=top)).collect())
        .collect()
}
