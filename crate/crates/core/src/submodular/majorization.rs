//! Majorization order and Karamata's inequality on real vectors.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_lengths<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn sorted_descending<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort_by(|x, y| y.partial_cmp(x).expect("finite entries"));
    v
}

/// `true` when `a` majorizes `b`: equal totals and every descending prefix
/// sum of `a` at least that of `b`. Inputs need not be sorted.
pub fn majorizes<T: Scalar>(a: &[T], b: &[T]) -> Result<bool> {
    check_lengths(a, b)?;
    let a = sorted_descending(a);
    let b = sorted_descending(b);
    let tol = T::tolerance();
    let (mut prefix_a, mut prefix_b) = (T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(&b) {
        prefix_a += x;
        prefix_b += y;
        if prefix_a < prefix_b - T::tolerance_at(prefix_b) {
            return Ok(false);
        }
    }
    let scale = prefix_a.abs().max(prefix_b.abs());
    Ok((prefix_a - prefix_b).abs() <= tol * scale.max(T::one()))
}

/// `Σ g(a_i) ≥ Σ g(b_i)` up to tolerance. The caller guarantees that `a`
/// majorizes `b` and that `g` is convex; neither is verified here.
pub fn karamata_holds<T: Scalar>(a: &[T], b: &[T], g: impl Fn(T) -> T) -> Result<bool> {
    check_lengths(a, b)?;
    let sum_a: T = a.iter().map(|&x| g(x)).sum();
    let sum_b: T = b.iter().map(|&x| g(x)).sum();
    Ok(sum_a >= sum_b - T::tolerance_at(sum_b))
}

/// `∏ b ≥ ∏ a` within relative tolerance.
pub fn product_dominates<T: Scalar>(b: &[T], a: &[T]) -> Result<bool> {
    check_lengths(a, b)?;
    let prod_b = b.iter().fold(T::one(), |acc, &x| acc * x);
    let prod_a = a.iter().fold(T::one(), |acc, &x| acc * x);
    Ok(prod_b >= prod_a - T::tolerance() * prod_a.abs().max(prod_b.abs()))
}

/// Interlacing condition `a_k ≤ b_1 ≤ … ≤ b_n ≤ a_{k+1}` with both vectors
/// taken in ascending order and `k` counted from 1.
pub fn interlaces<T: Scalar>(a: &[T], b: &[T], k: usize) -> Result<bool> {
    check_lengths(a, b)?;
    let n = a.len();
    if k == 0 || k >= n {
        return Ok(false);
    }
    let mut a = sorted_descending(a);
    a.reverse();
    let b_min = b.iter().copied().fold(T::infinity(), T::min);
    let b_max = b.iter().copied().fold(T::neg_infinity(), T::max);
    let below = a[k - 1] <= b_min + T::tolerance_at(b_min);
    let above = b_max <= a[k] + T::tolerance_at(a[k]);
    Ok(below && above)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majorization_examples() {
        assert!(majorizes(&[3.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!majorizes(&[2.0, 2.0], &[3.0, 1.0]).unwrap());
        let v = [0.3, 5.0, 1.25, 2.0];
        assert!(majorizes(&v, &v).unwrap());
        // Sorting is internal.
        assert!(majorizes(&[1.0, 3.0], &[2.0, 2.0]).unwrap());
    }

    #[test]
    fn unequal_sums_do_not_majorize() {
        assert!(!majorizes(&[3.0, 2.0], &[2.0, 2.0]).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            majorizes(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        ));
        assert!(karamata_holds(&[1.0], &[], |x: f64| x).is_err());
    }

    #[test]
    fn karamata_examples() {
        assert!(karamata_holds(&[3.0, 1.0], &[2.0, 2.0], |x: f64| x * x).unwrap());
        let v = [0.5, 4.0, 2.0];
        assert!(karamata_holds(&v, &v, |x: f64| -x.ln()).unwrap());
        assert!(!karamata_holds(&[2.0, 2.0], &[3.0, 1.0], |x: f64| x * x).unwrap());
    }

    #[test]
    fn interlacing() {
        // ascending a = [1, 1, 4, 4], b = [2, 2, 3, 3]: split after two entries.
        let a = [4.0, 4.0, 1.0, 1.0];
        let b = [3.0, 3.0, 2.0, 2.0];
        assert!(interlaces(&a, &b, 2).unwrap());
        assert!(!interlaces(&a, &b, 1).unwrap());
        assert!(!interlaces(&a, &b, 4).unwrap());
        assert!(product_dominates(&b, &a).unwrap());
    }
}
