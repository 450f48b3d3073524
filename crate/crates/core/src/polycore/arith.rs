//! Small-integer number theory: divisors, Möbius function, divisor sums and
//! the exact-period degree counts.

use crate::error::{Error, Result};

/// Divisors of `n` in increasing order. `n = 0` yields an empty list.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Möbius function by trial factorization.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain("mobius(0) is undefined".into()));
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Sum of the divisors of `n`.
pub fn sigma_divisors(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("sigma(0) is undefined".into()));
    }
    divisors(n)
        .into_iter()
        .try_fold(0u64, |acc, k| acc.checked_add(k))
        .ok_or(Error::Overflow("sigma_divisors"))
}

/// `d_n = Σ_{k|n} μ(n/k) d^k`, the number of points of exact period `n` of a
/// degree-`d` polynomial counted in the dynamical plane. Overflow is reported.
pub fn exact_period_degree(d: u64, n: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::Domain(format!("degree d={d} must be at least 2")));
    }
    if n == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    let mut acc: i128 = 0;
    for k in divisors(n) {
        let mu = mobius(n / k)?;
        if mu == 0 {
            continue;
        }
        let exp = u32::try_from(k).map_err(|_| Error::Overflow("exact_period_degree"))?;
        let power = d
            .checked_pow(exp)
            .ok_or(Error::Overflow("exact_period_degree"))?;
        acc += i128::from(mu) * i128::from(power);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("exact_period_degree"))
}

/// Integer power with overflow detection.
pub fn checked_pow(d: u64, n: u64) -> Result<u64> {
    let exp = u32::try_from(n).map_err(|_| Error::Overflow("power"))?;
    d.checked_pow(exp).ok_or(Error::Overflow("power"))
}
