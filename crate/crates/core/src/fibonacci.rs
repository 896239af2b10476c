//! Arbitrary-precision Fibonacci and Lucas numbers over all integer indices.
//!
//! Indices with `|n| <= CACHE_SIZE` come from a table that is filled once by
//! iterating the recurrence; larger indices use fast doubling. Negative
//! indices reflect through `F(-n) = (-1)^(n+1) F(n)` and
//! `L(-n) = (-1)^n L(n)`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest `|n|` accepted by [`fib`] and [`lucas`].
pub const DEFAULT_INDEX_BOUND: i64 = 100_000;

/// Number of non-negative indices held in the memo table.
pub const CACHE_SIZE: usize = 2048;

struct Tables {
    fib: Vec<BigInt>,
    lucas: Vec<BigInt>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut fib = Vec::with_capacity(CACHE_SIZE + 1);
        fib.push(BigInt::zero());
        fib.push(BigInt::one());
        let mut lucas = Vec::with_capacity(CACHE_SIZE + 1);
        lucas.push(BigInt::from(2));
        lucas.push(BigInt::one());
        for i in 2..=CACHE_SIZE {
            let f = &fib[i - 1] + &fib[i - 2];
            fib.push(f);
            let l = &lucas[i - 1] + &lucas[i - 2];
            lucas.push(l);
        }
        Tables { fib, lucas }
    })
}

/// `(F(n), F(n+1))` by fast doubling.
fn fib_pair(n: u64) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(n >> 1);
    // F(2k) = F(k) (2F(k+1) - F(k)),  F(2k+1) = F(k)^2 + F(k+1)^2
    let c = &a * (&b * 2u32 - &a);
    let d = &a * &a + &b * &b;
    if n & 1 == 0 {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

fn fib_nonneg(n: u64) -> BigInt {
    if (n as usize) <= CACHE_SIZE {
        tables().fib[n as usize].clone()
    } else {
        fib_pair(n).0
    }
}

fn lucas_nonneg(n: u64) -> BigInt {
    if (n as usize) <= CACHE_SIZE {
        tables().lucas[n as usize].clone()
    } else {
        // L(n) = 2F(n+1) - F(n)
        let (f, g) = fib_pair(n);
        g * 2u32 - f
    }
}

/// Fibonacci number without the index-bound check. Callers must have
/// validated the index range.
pub(crate) fn fib_raw(n: i64) -> BigInt {
    let a = n.unsigned_abs();
    let f = fib_nonneg(a);
    // F(-n) = (-1)^(n+1) F(n)
    if n < 0 && a.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

pub(crate) fn lucas_raw(n: i64) -> BigInt {
    let a = n.unsigned_abs();
    let l = lucas_nonneg(a);
    if n < 0 && a % 2 == 1 {
        -l
    } else {
        l
    }
}

pub(crate) fn check_bound(n: i64, bound: i64) -> Result<()> {
    if n.checked_abs().is_none_or(|a| a > bound) {
        return Err(Error::IndexBound { index: n, bound });
    }
    Ok(())
}

/// Fibonacci number `F(n)` for any signed `n` with `|n| <= DEFAULT_INDEX_BOUND`.
pub fn fib(n: i64) -> Result<BigInt> {
    fib_bounded(n, DEFAULT_INDEX_BOUND)
}

pub fn fib_bounded(n: i64, bound: i64) -> Result<BigInt> {
    check_bound(n, bound)?;
    Ok(fib_raw(n))
}

/// Lucas number `L(n)` for any signed `n` with `|n| <= DEFAULT_INDEX_BOUND`.
pub fn lucas(n: i64) -> Result<BigInt> {
    lucas_bounded(n, DEFAULT_INDEX_BOUND)
}

pub fn lucas_bounded(n: i64, bound: i64) -> Result<BigInt> {
    check_bound(n, bound)?;
    Ok(lucas_raw(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn base_values() {
        assert_eq!(fib(0).unwrap(), big(0));
        assert_eq!(fib(1).unwrap(), big(1));
        assert_eq!(fib(10).unwrap(), big(55));
        assert_eq!(fib(-5).unwrap(), big(5));
        assert_eq!(fib(-6).unwrap(), big(-8));
        assert_eq!(lucas(0).unwrap(), big(2));
        assert_eq!(lucas(2).unwrap(), big(3));
        assert_eq!(lucas(7).unwrap(), fib(8).unwrap() + fib(6).unwrap());
        assert_eq!(lucas(-1).unwrap(), big(-1));
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(fib(100_001), Err(Error::IndexBound { .. })));
        assert!(matches!(lucas(-100_001), Err(Error::IndexBound { .. })));
        assert!(matches!(fib(i64::MIN), Err(Error::IndexBound { .. })));
        assert!(fib_bounded(50, 40).is_err());
        assert!(fib(100_000).is_ok());
    }

    #[test]
    fn fast_doubling_matches_table_at_boundary() {
        for n in [0usize, 1, 2, 97, CACHE_SIZE - 1, CACHE_SIZE] {
            assert_eq!(fib_pair(n as u64).0, tables().fib[n]);
            assert_eq!(lucas_nonneg(n as u64), tables().lucas[n]);
        }
        let (f, g) = fib_pair(CACHE_SIZE as u64 - 1);
        assert_eq!(g * 2u32 - f, tables().lucas[CACHE_SIZE - 1]);
        // Recurrence straddling the switchover.
        let n = CACHE_SIZE as i64 + 1;
        assert_eq!(fib(n).unwrap(), fib(n - 1).unwrap() + fib(n - 2).unwrap());
        assert_eq!(
            lucas(n).unwrap(),
            lucas(n - 1).unwrap() + lucas(n - 2).unwrap()
        );
    }

    #[test]
    fn strictly_increasing_from_two() {
        for n in 2..300 {
            assert!(fib(n + 1).unwrap() > fib(n).unwrap());
            assert!(lucas(n + 1).unwrap() > lucas(n).unwrap());
        }
    }

    #[test]
    fn recurrence_and_reflection_on_window() {
        for n in -200i64..=200 {
            assert_eq!(fib(n).unwrap(), fib(n - 1).unwrap() + fib(n - 2).unwrap());
            let sign = if (n + 1).rem_euclid(2) == 0 { 1 } else { -1 };
            assert_eq!(fib(-n).unwrap(), fib(n).unwrap() * sign);
            assert_eq!(lucas(n).unwrap(), fib(n + 1).unwrap() + fib(n - 1).unwrap());
        }
    }

    proptest! {
        #[test]
        fn large_index_recurrence(n in 2i64..20_000) {
            prop_assert_eq!(fib(n).unwrap(), fib(n - 1).unwrap() + fib(n - 2).unwrap());
            prop_assert_eq!(lucas(n).unwrap(), fib(n + 1).unwrap() + fib(n - 1).unwrap());
        }
    }
}
