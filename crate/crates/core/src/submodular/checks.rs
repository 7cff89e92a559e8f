//! Exhaustive checks of submodularity and monotonicity on small ground sets.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::oracle::SetFunctionOracle;
use super::subset::{Subset, MAX_GROUND_SET};

/// Default cap for [`check_submodular_pairwise`]: `2^12 · 12²` comparisons.
pub const PAIRWISE_CAP: usize = 12;
/// Cap for [`check_setpair_submodular`] and [`check_monotone`].
pub const SETPAIR_CAP: usize = 8;

/// A triple `(S, i, j)` where `f(S ∪ {i}) + f(S ∪ {j}) < f(S) + f(S ∪ {i, j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmodularityViolation<T> {
    pub base_set: Subset,
    pub elem_i: usize,
    pub elem_j: usize,
    /// `f(S ∪ {i}) + f(S ∪ {j})`
    pub lhs: T,
    /// `f(S) + f(S ∪ {i, j})`
    pub rhs: T,
    pub gap: T,
}

/// A pair `(S, T)` where `f(S) + f(T) < f(S ∩ T) + f(S ∪ T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SetPairViolation<T> {
    pub first: Subset,
    pub second: Subset,
    pub lhs: T,
    pub rhs: T,
    pub gap: T,
}

/// A pair `S ⊆ T` where `f(S) > f(T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityViolation<T> {
    pub smaller: Subset,
    pub larger: Subset,
    pub value_smaller: T,
    pub value_larger: T,
    pub gap: T,
}

/// Evaluates `f` on every subset of its ground set, indexed by mask.
fn tabulate<T: Scalar, F: SetFunctionOracle<T> + ?Sized>(f: &F, cap: usize) -> Result<Vec<T>> {
    let size = f.ground_size();
    if size > cap.min(MAX_GROUND_SET) {
        return Err(Error::GroundSetTooLarge { size, cap });
    }
    Ok((0..1u32 << size)
        .into_par_iter()
        .map(|mask| f.evaluate(Subset(mask)))
        .collect())
}

pub fn check_submodular_pairwise<T: Scalar, F: SetFunctionOracle<T> + ?Sized>(
    f: &F,
    tolerance: T,
) -> Result<Vec<SubmodularityViolation<T>>> {
    check_submodular_pairwise_capped(f, tolerance, PAIRWISE_CAP)
}

/// Checks `f(S ∪ {i}) + f(S ∪ {j}) ≥ f(S) + f(S ∪ {i, j})` for every `S` and
/// every pair `i < j` outside `S`. Returns each triple whose gap exceeds
/// `tolerance`; an empty result certifies submodularity.
pub fn check_submodular_pairwise_capped<T: Scalar, F: SetFunctionOracle<T> + ?Sized>(
    f: &F,
    tolerance: T,
    cap: usize,
) -> Result<Vec<SubmodularityViolation<T>>> {
    let values = tabulate(f, cap)?;
    let size = f.ground_size();
    let mut out = Vec::new();
    for mask in 0..values.len() as u32 {
        let base = Subset(mask);
        for i in (0..size).filter(|&e| !base.contains(e)) {
            for j in (i + 1..size).filter(|&e| !base.contains(e)) {
                let lhs = values[base.with(i).0 as usize] + values[base.with(j).0 as usize];
                let rhs = values[mask as usize] + values[base.with(i).with(j).0 as usize];
                let gap = rhs - lhs;
                if gap > tolerance {
                    out.push(SubmodularityViolation {
                        base_set: base,
                        elem_i: i,
                        elem_j: j,
                        lhs,
                        rhs,
                        gap,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Checks `f(S) + f(T) ≥ f(S ∩ T) + f(S ∪ T)` over all unordered pairs.
pub fn check_setpair_submodular<T: Scalar, F: SetFunctionOracle<T> + ?Sized>(
    f: &F,
    tolerance: T,
) -> Result<Vec<SetPairViolation<T>>> {
    let values = tabulate(f, SETPAIR_CAP)?;
    let count = values.len() as u32;
    let mut out = Vec::new();
    for s in 0..count {
        for t in s..count {
            let (a, b) = (Subset(s), Subset(t));
            let lhs = values[s as usize] + values[t as usize];
            let rhs = values[a.intersection(b).0 as usize] + values[a.union(b).0 as usize];
            let gap = rhs - lhs;
            if gap > tolerance {
                out.push(SetPairViolation {
                    first: a,
                    second: b,
                    lhs,
                    rhs,
                    gap,
                });
            }
        }
    }
    Ok(out)
}

/// Checks `f(S) ≤ f(T) + tolerance` for every `S ⊆ T`.
pub fn check_monotone<T: Scalar, F: SetFunctionOracle<T> + ?Sized>(
    f: &F,
    tolerance: T,
) -> Result<Vec<MonotonicityViolation<T>>> {
    let values = tabulate(f, SETPAIR_CAP)?;
    let mut out = Vec::new();
    for t in 0..values.len() as u32 {
        let larger = Subset(t);
        for smaller in larger.subsets() {
            let gap = values[smaller.0 as usize] - values[t as usize];
            if gap > tolerance {
                out.push(MonotonicityViolation {
                    smaller,
                    larger,
                    value_smaller: values[smaller.0 as usize],
                    value_larger: values[t as usize],
                    gap,
                });
            }
        }
    }
    Ok(out)
}

/// Debug dump of pairwise violations with columns `base_set,i,j,lhs,rhs,gap`.
pub fn write_violations_csv<T: Scalar, W: Write>(
    violations: &[SubmodularityViolation<T>],
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["base_set", "i", "j", "lhs", "rhs", "gap"])?;
    for v in violations {
        w.write_record([
            v.base_set.to_string(),
            v.elem_i.to_string(),
            v.elem_j.to_string(),
            v.lhs.to_string(),
            v.rhs.to_string(),
            v.gap.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::oracle::{FnOracle, WaterfillOracle};
    use crate::solver::NoiseProfile;

    fn cardinality(n: usize) -> FnOracle<impl Fn(Subset) -> f64 + Sync> {
        FnOracle::new(n, |s: Subset| s.len() as f64)
    }

    #[test]
    fn modular_function_has_no_violations() {
        assert!(check_submodular_pairwise(&cardinality(4), 1e-9).unwrap().is_empty());
        assert!(check_setpair_submodular(&cardinality(3), 1e-9).unwrap().is_empty());
        assert!(check_monotone(&cardinality(4), 1e-9).unwrap().is_empty());
    }

    #[test]
    fn square_of_cardinality_is_supermodular() {
        let f = FnOracle::new(3, |s: Subset| (s.len() * s.len()) as f64);
        let v = check_submodular_pairwise(&f, 1e-9).unwrap();
        let at_empty = v
            .iter()
            .find(|x| x.base_set == Subset::EMPTY && x.elem_i == 0 && x.elem_j == 1)
            .expect("violation at the empty base set");
        assert_eq!((at_empty.lhs, at_empty.rhs, at_empty.gap), (2.0, 4.0, 2.0));
        assert!(v.iter().all(|x| x.gap > 1e-9 && x.elem_i != x.elem_j));
        assert!(v
            .iter()
            .all(|x| !x.base_set.contains(x.elem_i) && !x.base_set.contains(x.elem_j)));
    }

    #[test]
    fn truncated_cardinality_is_submodular() {
        let f = FnOracle::new(3, |s: Subset| s.len().min(1) as f64);
        assert!(check_setpair_submodular(&f, 1e-9).unwrap().is_empty());
        assert!(check_submodular_pairwise(&f, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn decreasing_function_is_not_monotone() {
        let f = FnOracle::new(3, |s: Subset| -(s.len() as f64));
        assert!(!check_monotone(&f, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(
            check_submodular_pairwise(&cardinality(13), 1e-9),
            Err(Error::GroundSetTooLarge { size: 13, cap: 12 })
        ));
        assert!(matches!(
            check_setpair_submodular(&cardinality(9), 1e-9),
            Err(Error::GroundSetTooLarge { size: 9, cap: 8 })
        ));
        assert!(check_monotone(&cardinality(9), 1e-9).is_err());
    }

    #[test]
    fn waterfill_rate_examples() {
        let f = WaterfillOracle::new(NoiseProfile::new(vec![1.0, 2.0, 4.0, 8.0], 1.0).unwrap());
        assert!(check_submodular_pairwise(&f, 1e-9).unwrap().is_empty());
        let f = WaterfillOracle::new(NoiseProfile::new(vec![0.5, 1.0, 2.0], 2.0).unwrap());
        assert!(check_setpair_submodular(&f, 1e-9).unwrap().is_empty());
        assert!(check_monotone(&f, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn violations_csv_has_expected_columns() {
        let f = FnOracle::new(2, |s: Subset| (s.len() * s.len()) as f64);
        let v = check_submodular_pairwise(&f, 1e-9).unwrap();
        let mut buf = Vec::new();
        write_violations_csv(&v, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "base_set,i,j,lhs,rhs,gap\n{},0,1,2,4,2\n");
    }
}
