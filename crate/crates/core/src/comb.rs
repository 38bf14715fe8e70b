//! Exact integer combinatorics used throughout the crate.

use num::bigint::BigInt;
use num::traits::{One, Zero};

/// `n!` as an exact big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Falling factorial `n·(n−1)···(n−k+1)`; equals `n!/(n−k)!`, zero when `k > n`.
pub fn falling(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(1), BigInt::from(1));
        assert_eq!(factorial(6), BigInt::from(720));
        assert_eq!(factorial(20), BigInt::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn binomial_row_six() {
        let row: Vec<BigInt> = (0..=6).map(|k| binomial(6, k)).collect();
        let want: Vec<BigInt> = [1, 6, 15, 20, 15, 6, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(row, want);
        assert_eq!(binomial(4, 7), BigInt::zero());
    }

    #[test]
    fn falling_matches_factorial_ratio() {
        for n in 0..8u64 {
            for k in 0..=n {
                assert_eq!(falling(n, k), factorial(n) / factorial(n - k));
            }
            assert_eq!(falling(n, n + 1), BigInt::zero());
        }
    }
}
