//! Witnesses for the structure behind submodularity of the waterfilling rate.
//!
//! For a base set `S` and two extra channels `i`, `j`, a [`LemmaWitness`]
//! solves the four problems on `S`, `S ∪ {i}`, `S ∪ {j}` and `S ∪ {i, j}`,
//! decomposes their active sets, and records whether each structural relation
//! holds: nesting of water levels and rates, the ordering chain between levels
//! and the noises of the channels that enter or leave the active sets, the sum
//! and count identities, and the reduced product inequality.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::{waterfill, ChannelId, NoiseProfile, WaterfillSolution};

use super::majorization::{interlaces, karamata_holds, majorizes};

/// One value per problem: `S`, `S ∪ {i}`, `S ∪ {j}`, `S ∪ {i, j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quartet<V> {
    pub base: V,
    pub with_i: V,
    pub with_j: V,
    pub with_both: V,
}

impl<V> Quartet<V> {
    fn map<U>(&self, f: impl Fn(&V) -> U) -> Quartet<U> {
        Quartet {
            base: f(&self.base),
            with_i: f(&self.with_i),
            with_j: f(&self.with_j),
            with_both: f(&self.with_both),
        }
    }
}

/// Which branch of the argument an `(S, i, j)` draw falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// Both `i` and `j` are active in `S ∪ {i, j}`.
    Main,
    /// `i` is inactive in `S ∪ {i, j}`, so `R*(S ∪ {i, j}) = R*(S ∪ {j})`.
    IInactive,
    /// `j` is inactive in `S ∪ {i, j}`, so `R*(S ∪ {i, j}) = R*(S ∪ {i})`.
    JInactive,
}

/// Disjoint pieces of the four active sets (main case only).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Decomposition {
    /// `T_ij \ {i, j}`
    pub both_rest: BTreeSet<ChannelId>,
    /// `T_i \ {i}`
    pub i_rest: BTreeSet<ChannelId>,
    /// `T_j \ {j}`
    pub j_rest: BTreeSet<ChannelId>,
    /// Channels active with `i` alone but not with both: `(T_i \ {i}) \ (T_ij \ {i, j})`.
    pub gained_with_i: BTreeSet<ChannelId>,
    /// Channels of `T` that `j` pushes out: `T \ (T_j \ {j})`.
    pub dropped_by_j: BTreeSet<ChannelId>,
}

/// Outcome of every relation evaluated on a witness. Main-case-only relations
/// are `None` in the easy cases and vice versa.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LemmaChecks {
    /// `ν_ij ≤ ν_i ≤ ν` and `ν_ij ≤ ν_j ≤ ν`.
    pub levels_nested: bool,
    /// `R*_ij ≥ R*_i ≥ R*` and `R*_ij ≥ R*_j ≥ R*`.
    pub rates_nested: bool,
    /// `R*_i + R*_j ≥ R* + R*_ij`.
    pub pairwise_inequality: bool,
    /// Every disjoint-union decomposition is disjoint and reassembles its set.
    pub decomposition_disjoint: Option<bool>,
    /// `ν_ij ≤ N_m ≤ ν_i ≤ ν_j ≤ N_l ≤ ν` for all gained `m` and dropped `l`.
    pub ordering_chain: Option<bool>,
    /// `|T_i|ν_i + |T_j|ν_j + Σ_l N_l = |T|ν + |T_ij|ν_ij + Σ_m N_m`.
    pub sum_equality: Option<bool>,
    /// `|T_i| + |T_j| + |dropped| = |T| + |T_ij| + |gained|`, exactly.
    pub count_equality: Option<bool>,
    /// `ν_i^|T_i| ν_j^|T_j| ∏_l N_l ≥ ν^|T| ν_ij^|T_ij| ∏_m N_m`.
    pub product_inequality: Option<bool>,
    /// Easy case: the rate with both equals the rate with the active one, bit for bit.
    pub easy_case_rate_match: Option<bool>,
}

impl LemmaChecks {
    pub fn all_hold(&self) -> bool {
        self.levels_nested
            && self.rates_nested
            && self.pairwise_inequality
            && [
                self.decomposition_disjoint,
                self.ordering_chain,
                self.sum_equality,
                self.count_equality,
                self.product_inequality,
                self.easy_case_rate_match,
            ]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaWitness<T> {
    pub base_set: BTreeSet<ChannelId>,
    /// In the main case, relabelled so that `ν_j ≥ ν_i`.
    pub i: ChannelId,
    pub j: ChannelId,
    /// Whether the caller's `i` and `j` were swapped.
    pub swapped: bool,
    pub levels: Quartet<T>,
    pub rates: Quartet<T>,
    pub active: Quartet<BTreeSet<ChannelId>>,
    pub case: WitnessCase,
    pub decomposition: Option<Decomposition>,
    pub checks: LemmaChecks,
    noises: Vec<(ChannelId, T)>,
}

impl<T: Scalar> LemmaWitness<T> {
    pub fn noise(&self, id: ChannelId) -> T {
        self.noises
            .iter()
            .find(|(c, _)| *c == id)
            .map(|&(_, n)| n)
            .expect("witness channel")
    }

    /// `(ν_i^|T_i| ν_j^|T_j| ∏_l N_l, ν^|T| ν_ij^|T_ij| ∏_m N_m)`, main case only.
    pub fn product_sides(&self) -> Option<(T, T)> {
        let d = self.decomposition.as_ref()?;
        let pow = |x: T, k: usize| x.powi(k as i32);
        let lhs = pow(self.levels.with_i, self.active.with_i.len())
            * pow(self.levels.with_j, self.active.with_j.len())
            * d.dropped_by_j.iter().fold(T::one(), |acc, &l| acc * self.noise(l));
        let rhs = pow(self.levels.base, self.active.base.len())
            * pow(self.levels.with_both, self.active.with_both.len())
            * d.gained_with_i.iter().fold(T::one(), |acc, &m| acc * self.noise(m));
        Some((lhs, rhs))
    }

    /// Split index `k` for the interlacing condition: the count of `a`
    /// entries strictly below the block of `ν` entries.
    pub fn interlacing_split(&self) -> Option<usize> {
        let d = self.decomposition.as_ref()?;
        Some(self.active.with_both.len() + d.gained_with_i.len())
    }
}

fn le_tol<T: Scalar>(a: T, b: T) -> bool {
    a <= b + T::tolerance_at(b)
}

/// Union of `parts`, or `None` if any two overlap.
fn disjoint_union(parts: &[&BTreeSet<ChannelId>]) -> Option<BTreeSet<ChannelId>> {
    let mut out = BTreeSet::new();
    for part in parts {
        for &id in *part {
            if !out.insert(id) {
                return None;
            }
        }
    }
    Some(out)
}

fn without(set: &BTreeSet<ChannelId>, drop: &[ChannelId]) -> BTreeSet<ChannelId> {
    set.iter().copied().filter(|id| !drop.contains(id)).collect()
}

/// Build the witness for `(S, i, j)`.
///
/// Requires `i ≠ j`, neither in `S`, `S` nonempty, every channel present in
/// `profile`, and a positive budget. The easy cases are classified under the
/// caller's labels; in the main case labels are swapped if needed so that the
/// recorded witness has `ν_j ≥ ν_i`.
pub fn lemma_witness<T: Scalar>(
    profile: &NoiseProfile<T>,
    base: &BTreeSet<ChannelId>,
    i: ChannelId,
    j: ChannelId,
) -> Result<LemmaWitness<T>> {
    if i == j {
        return Err(Error::Precondition(format!("i and j must differ, both are {i}")));
    }
    if base.contains(&i) || base.contains(&j) {
        return Err(Error::Precondition("i and j must lie outside the base set".into()));
    }
    if base.is_empty() {
        return Err(Error::Precondition(
            "base set must be nonempty so its active set carries the budget".into(),
        ));
    }
    if profile.budget() <= T::zero() {
        return Err(Error::Precondition("budget must be positive".into()));
    }
    let with = |extra: &[ChannelId]| -> Result<WaterfillSolution<T>> {
        let sub = profile.restrict(base.iter().copied().chain(extra.iter().copied()))?;
        Ok(waterfill(&sub))
    };
    let mut solutions = Quartet {
        base: with(&[])?,
        with_i: with(&[i])?,
        with_j: with(&[j])?,
        with_both: with(&[i, j])?,
    };
    let noises = profile.restrict(base.iter().copied().chain([i, j]))?.channels().to_vec();

    let level = |s: &WaterfillSolution<T>| s.water_level.expect("positive budget, nonempty set");
    let (mut i, mut j) = (i, j);
    let case = if !solutions.with_both.is_active(i) {
        WitnessCase::IInactive
    } else if !solutions.with_both.is_active(j) {
        WitnessCase::JInactive
    } else {
        WitnessCase::Main
    };
    let swapped =
        case == WitnessCase::Main && level(&solutions.with_j) < level(&solutions.with_i);
    if swapped {
        std::mem::swap(&mut i, &mut j);
        std::mem::swap(&mut solutions.with_i, &mut solutions.with_j);
    }

    let levels = solutions.map(level);
    let rates = solutions.map(|s| s.rate);
    let active = solutions.map(|s| s.active_set.clone());

    let mut checks = LemmaChecks {
        levels_nested: le_tol(levels.with_both, levels.with_i)
            && le_tol(levels.with_i, levels.base)
            && le_tol(levels.with_both, levels.with_j)
            && le_tol(levels.with_j, levels.base),
        rates_nested: le_tol(rates.base, rates.with_i)
            && le_tol(rates.with_i, rates.with_both)
            && le_tol(rates.base, rates.with_j)
            && le_tol(rates.with_j, rates.with_both),
        pairwise_inequality: le_tol(rates.base + rates.with_both, rates.with_i + rates.with_j),
        ..LemmaChecks::default()
    };

    let mut witness = LemmaWitness {
        base_set: base.clone(),
        i,
        j,
        swapped,
        levels,
        rates,
        active,
        case,
        decomposition: None,
        checks: LemmaChecks::default(),
        noises,
    };

    match case {
        WitnessCase::IInactive => {
            checks.easy_case_rate_match = Some(witness.rates.with_both == witness.rates.with_j);
        }
        WitnessCase::JInactive => {
            checks.easy_case_rate_match = Some(witness.rates.with_both == witness.rates.with_i);
        }
        WitnessCase::Main => main_case_checks(&mut witness, &mut checks),
    }
    witness.checks = checks;
    Ok(witness)
}

fn main_case_checks<T: Scalar>(w: &mut LemmaWitness<T>, checks: &mut LemmaChecks) {
    let (i, j) = (w.i, w.j);
    let both_rest = without(&w.active.with_both, &[i, j]);
    let i_rest = without(&w.active.with_i, &[i]);
    let j_rest = without(&w.active.with_j, &[j]);
    let gained_with_i: BTreeSet<_> = i_rest.difference(&both_rest).copied().collect();
    let dropped_by_j: BTreeSet<_> = w.active.base.difference(&j_rest).copied().collect();

    let single_i = BTreeSet::from([i]);
    let single_j = BTreeSet::from([j]);
    let pair = BTreeSet::from([i, j]);
    let reassembles = |parts: &[&BTreeSet<ChannelId>], whole: &BTreeSet<ChannelId>| {
        disjoint_union(parts).as_ref() == Some(whole)
    };
    checks.decomposition_disjoint = Some(
        both_rest.is_subset(&i_rest)
            && j_rest.is_subset(&w.active.base)
            && reassembles(&[&single_i, &both_rest, &gained_with_i], &w.active.with_i)
            && reassembles(&[&single_j, &j_rest], &w.active.with_j)
            && reassembles(&[&j_rest, &dropped_by_j], &w.active.base)
            && reassembles(&[&pair, &both_rest], &w.active.with_both),
    );

    let lv = w.levels.clone();
    let gained_ok = gained_with_i.iter().all(|&m| {
        let n = w.noise(m);
        le_tol(lv.with_both, n) && le_tol(n, lv.with_i)
    });
    let dropped_ok = dropped_by_j.iter().all(|&l| {
        let n = w.noise(l);
        le_tol(lv.with_j, n) && le_tol(n, lv.base)
    });
    checks.ordering_chain = Some(
        gained_ok
            && dropped_ok
            && le_tol(lv.with_i, lv.with_j)
            && le_tol(lv.with_both, lv.with_i)
            && le_tol(lv.with_j, lv.base),
    );

    let count = |s: &BTreeSet<ChannelId>| T::of_usize(s.len());
    let noise_sum = |s: &BTreeSet<ChannelId>| s.iter().map(|&c| w.noise(c)).sum::<T>();
    let lhs = count(&w.active.with_i) * lv.with_i
        + count(&w.active.with_j) * lv.with_j
        + noise_sum(&dropped_by_j);
    let rhs = count(&w.active.base) * lv.base
        + count(&w.active.with_both) * lv.with_both
        + noise_sum(&gained_with_i);
    checks.sum_equality = Some((lhs - rhs).abs() <= T::tolerance_at(lhs.abs().max(rhs.abs())));
    checks.count_equality = Some(
        w.active.with_i.len() + w.active.with_j.len() + dropped_by_j.len()
            == w.active.base.len() + w.active.with_both.len() + gained_with_i.len(),
    );

    w.decomposition = Some(Decomposition {
        both_rest,
        i_rest,
        j_rest,
        gained_with_i,
        dropped_by_j,
    });
    let (prod_lhs, prod_rhs) = w.product_sides().expect("decomposition just set");
    checks.product_inequality =
        Some(prod_lhs >= prod_rhs - T::tolerance() * prod_lhs.abs().max(prod_rhs.abs()));
}

/// The vectors `a` and `b` in non-increasing order:
/// `a = [ν ×|T|, N_m (m gained, desc), ν_ij ×|T_ij|]` and
/// `b = [N_l (l dropped, desc), ν_j ×|T_j|, ν_i ×|T_i|]`.
pub fn build_majorization_vectors<T: Scalar>(w: &LemmaWitness<T>) -> Result<(Vec<T>, Vec<T>)> {
    let d = w.decomposition.as_ref().ok_or_else(|| {
        Error::Precondition("majorization vectors exist only in the main case".into())
    })?;
    let desc_noises = |s: &BTreeSet<ChannelId>| {
        let mut v: Vec<T> = s.iter().map(|&c| w.noise(c)).collect();
        v.sort_by(|x, y| y.partial_cmp(x).expect("finite noise"));
        v
    };
    let repeat = |x: T, k: usize| std::iter::repeat_n(x, k);

    let a: Vec<T> = repeat(w.levels.base, w.active.base.len())
        .chain(desc_noises(&d.gained_with_i))
        .chain(repeat(w.levels.with_both, w.active.with_both.len()))
        .collect();
    let b: Vec<T> = desc_noises(&d.dropped_by_j)
        .into_iter()
        .chain(repeat(w.levels.with_j, w.active.with_j.len()))
        .chain(repeat(w.levels.with_i, w.active.with_i.len()))
        .collect();
    Ok((a, b))
}

/// Majorization, interlacing and the `-log` Karamata bound for a main-case
/// witness, in that order.
pub fn majorization_checks<T: Scalar>(w: &LemmaWitness<T>) -> Result<(bool, bool, bool)> {
    let (a, b) = build_majorization_vectors(w)?;
    let k = w.interlacing_split().expect("main case");
    Ok((
        majorizes(&a, &b)?,
        interlaces(&a, &b, k)?,
        karamata_holds(&a, &b, |x: T| -x.ln())?,
    ))
}
