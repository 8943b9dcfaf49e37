//! King-type inequalities on polarizations of the spaces of morphisms
//! `O(-3) ⊕ 2O(-2) → 2O(-1)` and `5O(-2) → 4O(-1) ⊕ O`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The constant `c_1(2)` of the quotient construction for non-reductive
/// groups. Hard-coded from the literature, not derived here.
pub fn c1_2() -> BigRational {
    r(1, 5)
}

/// `dim Hom(O(-3), O(-2))`.
const A21: i64 = 3;

/// The six strict inequalities for `Λ = (λ1, λ2, μ1)`, plus positivity.
pub fn polarization_valid_42(l1: &BigRational, l2: &BigRational, mu1: &BigRational) -> bool {
    let one = BigRational::one();
    let zero = BigRational::zero();
    let two = r(2, 1);
    *l1 > zero
        && *l2 > zero
        && *mu1 > zero
        && mu1 + &two * l2 > one
        && &two * mu1 + l2 > one
        && mu1 + l1 + l2 > one
        && &two * mu1 + l1 > one
        && mu1 + l1 < one
        && mu1 + l2 < one
}

/// Sufficient conditions for a projective quotient:
/// `α1 = λ1 > 0`, `α2 = λ2 - a21·λ1 > 0`, `λ2 ≥ (a21/2)·c1(2)`,
/// `λ2 ≥ c1(2)·a21·μ1`.
pub fn refined_valid_42(l1: &BigRational, l2: &BigRational, mu1: &BigRational) -> bool {
    let a21 = r(A21, 1);
    let c = c1_2();
    let alpha1 = l1.clone();
    let alpha2 = l2 - &a21 * l1;
    alpha1 > BigRational::zero()
        && alpha2 > BigRational::zero()
        && *l2 >= &a21 / r(2, 1) * &c
        && *l2 >= &c * &a21 * mu1
}

/// The constraint `0 < μ2 < 1/5` on polarizations `(λ1, μ1, μ2)` of
/// `5O(-2) → 4O(-1) ⊕ O`.
pub fn mu2_valid_22(mu2: &BigRational) -> bool {
    *mu2 > BigRational::zero() && *mu2 < r(1, 5)
}

/// Accepted numerators `k` of `μ2 = k/grid` for `0 ≤ k ≤ grid`.
pub fn mu2_window_22(grid: u64) -> Vec<u64> {
    (0..=grid)
        .filter(|&k| mu2_valid_22(&r(k as i64, grid as i64)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub grid: u64,
    /// Numerators `k` of `λ2 = k/grid` accepted by the six inequalities.
    pub six: Vec<u64>,
    /// Numerators accepted by the refined (sufficient) conditions.
    pub refined: Vec<u64>,
    /// Numerators `k` of `μ2 = k/grid` accepted by `0 < μ2 < 1/5`.
    pub mu2: Vec<u64>,
}

impl WindowReport {
    /// `(first, last)` accepted numerators of a window, if any.
    pub fn endpoints(ks: &[u64]) -> Option<(u64, u64)> {
        Some((*ks.first()?, *ks.last()?))
    }

    /// Whether the accepted grid points are consecutive.
    pub fn contiguous(ks: &[u64]) -> bool {
        ks.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// Sweeps `λ2 = k/grid` over `(0, 1/2]` with `λ1 = 1 - 2λ2` and `μ1 = 1/2`.
pub fn polarization_window_42(grid: u64) -> WindowReport {
    let mu1 = r(1, 2);
    let mut six = Vec::new();
    let mut refined = Vec::new();
    for k in 1..=grid / 2 {
        let l2 = r(k as i64, grid as i64);
        let l1 = BigRational::one() - r(2, 1) * &l2;
        if polarization_valid_42(&l1, &l2, &mu1) {
            six.push(k);
        }
        if refined_valid_42(&l1, &l2, &mu1) {
            refined.push(k);
        }
    }
    WindowReport {
        grid,
        six,
        refined,
        mu2: mu2_window_22(grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_checks() {
        assert!(polarization_valid_42(&r(1, 5), &r(2, 5), &r(1, 2)));
        assert!(!polarization_valid_42(&r(3, 5), &r(1, 5), &r(1, 2)));
        assert!(!polarization_valid_42(&r(0, 1), &r(1, 2), &r(1, 2)));
    }

    #[test]
    fn windows_at_grid_100() {
        let w = polarization_window_42(100);
        assert_eq!(WindowReport::endpoints(&w.six), Some((26, 49)));
        assert!(WindowReport::contiguous(&w.six));
        assert_eq!(WindowReport::endpoints(&w.mu2), Some((1, 19)));
        assert_eq!(w.mu2.len(), 19);
    }

    #[test]
    fn refined_window_at_grid_700() {
        let w = polarization_window_42(700);
        assert_eq!(WindowReport::endpoints(&w.refined), Some((301, 349)));
        assert!(WindowReport::contiguous(&w.refined));
        assert_eq!(WindowReport::endpoints(&w.six), Some((176, 349)));
    }
}
