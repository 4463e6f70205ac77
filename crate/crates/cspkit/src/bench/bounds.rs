//! Analytic search-tree bounds, computed exactly: binomial sums in big
//! integers, and branching-factor powers through exact rational bisection so
//! integer ceilings are never wrong by rounding.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact binomial coefficient C(a, b).
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let mut result = BigUint::one();
    for i in 0..b {
        result = result * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    result
}

/// Upper bound on the number of leaves of the clause-width branching tree:
/// sum of C(m+l, l) for l from 0 to ceil(n/k). A path makes at most m left
/// branches and at most ceil(n/k) right branches (each removes k variables).
pub fn schuler_leaf_bound(n: u64, m: u64, k: u64) -> BigUint {
    assert!(k >= 1, "width target must be positive");
    let top = n.div_ceil(k);
    let mut total = BigUint::zero();
    for l in 0..=top {
        total += binomial(m + l, l);
    }
    total
}

fn poly(x: &BigRational, d: u32) -> BigRational {
    // x^d - x^(d-1) - 1
    let xd1 = x.pow((d - 1) as i32);
    &xd1 * x - xd1 - BigRational::one()
}

/// Brackets the unique root of `x^d - x^(d-1) - 1` in (1, 2] to width
/// `2^-iterations` using exact rational arithmetic.
fn root_bracket(d: u32, iterations: u32) -> (BigRational, BigRational) {
    assert!(d >= 2);
    let mut lo = BigRational::one();
    let mut hi = BigRational::from_integer(BigInt::from(2));
    for _ in 0..iterations {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if poly(&mid, d).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// The branching-factor power `x0(d)^T` as a float, for reporting.
pub fn tuple_branch_bound(tuples: u32, d: u32) -> f64 {
    crate::reductions::branching_root(d, 1e-12).powi(tuples as i32)
}

/// `ceil(x0(d)^T)` computed exactly: the root is bracketed to 2^-96 in
/// rationals, the power taken on both endpoints, and the ceiling read off
/// the enclosing interval.
pub fn tuple_branch_bound_ceiling(tuples: u32, d: u32) -> BigUint {
    if tuples == 0 {
        return BigUint::one();
    }
    let (lo, hi) = root_bracket(d, 96);
    let lo_pow = lo.pow(tuples as i32);
    let hi_pow = hi.pow(tuples as i32);
    let ceil_of = |r: &BigRational| -> BigUint {
        let (num, den) = (r.numer().clone(), r.denom().clone());
        let ceil = (num + (&den - BigInt::one())) / den;
        ceil.to_biguint().expect("positive")
    };
    let lo_ceil = ceil_of(&lo_pow);
    let hi_ceil = ceil_of(&hi_pow);
    debug_assert!(
        lo_ceil == hi_ceil || &lo_ceil + BigUint::one() == hi_ceil,
        "bracket too wide"
    );
    hi_ceil
}

pub fn biguint_to_u64_saturating(v: &BigUint) -> u64 {
    v.to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schuler_bound_two_term_case() {
        // ceil(n/k) = 1: C(m,0) + C(m+1,1) = m + 2.
        assert_eq!(schuler_leaf_bound(4, 10, 4), BigUint::from(12u32));
        assert_eq!(schuler_leaf_bound(3, 7, 5), BigUint::from(9u32));
    }

    #[test]
    fn schuler_bound_direct_sum() {
        // n=6, m=4, k=2: C(4,0)+C(5,1)+C(6,2)+C(7,3) = 1+5+15+35 = 56.
        assert_eq!(schuler_leaf_bound(6, 4, 2), BigUint::from(56u32));
    }

    #[test]
    fn golden_ratio_power() {
        let b = tuple_branch_bound(10, 2);
        assert!((b - 122.9918693812).abs() < 1e-6);
    }

    #[test]
    fn exact_ceiling_matches_float_at_small_sizes() {
        for d in 2..=4 {
            for t in 0..=20 {
                let exact = tuple_branch_bound_ceiling(t, d);
                let float = tuple_branch_bound(t, d).ceil() as u64;
                assert_eq!(biguint_to_u64_saturating(&exact), float, "d={} t={}", d, t);
            }
        }
    }

    #[test]
    fn zero_tuples_bound_is_one() {
        assert_eq!(tuple_branch_bound(0, 3), 1.0);
        assert_eq!(tuple_branch_bound_ceiling(0, 3), BigUint::one());
    }

    #[test]
    fn bound_decreases_in_d() {
        let t = 12;
        let mut prev = f64::INFINITY;
        for d in 2..=8 {
            let b = tuple_branch_bound(t, d);
            assert!(b < prev);
            prev = b;
        }
    }
}
