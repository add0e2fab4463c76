//! Arbitrary-precision rational scalars and small integer helpers.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Ground-field scalar: an arbitrary-precision rational, always reduced,
/// denominator positive.
pub type Rat = num_rational::BigRational;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact integer n-th root, if `x` is a perfect n-th power.
pub fn bigint_nth_root_exact(x: &BigInt, n: u32) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    if x.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return bigint_nth_root_exact(&-x, n).map(|r| -r);
    }
    let r = num_integer::Roots::nth_root(x, n);
    if num_traits::pow::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact rational n-th root, if `x` is a perfect n-th power in the rationals.
pub fn rat_nth_root_exact(x: &Rat, n: u32) -> Option<Rat> {
    let num = bigint_nth_root_exact(x.numer(), n)?;
    let den = bigint_nth_root_exact(x.denom(), n)?;
    Some(Rat::new(num, den))
}

/// Splits a positive integer as `g^e * s` with `s` free of e-th-power factors
/// from primes below the trial-division bound, plus a final perfect-power
/// check on the remaining cofactor.
fn int_power_split(x: &BigInt, e: u32) -> (BigInt, BigInt) {
    debug_assert!(x.sign() == Sign::Plus);
    const TRIAL_BOUND: u64 = 1024;
    let mut rest = x.clone();
    let mut g = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigInt::from(p);
        let mut mult = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            mult += 1;
        }
        if mult >= e {
            g *= num_traits::pow::pow(bp, (mult / e) as usize);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // whatever survived trial division: try a full perfect power
    if let Some(r) = bigint_nth_root_exact(&rest, e) {
        g *= r;
    }
    let s = x / num_traits::pow::pow(g.clone(), e as usize);
    (g, s)
}

/// Splits a rational as `u = g^e * s` with the e-th-power content extracted
/// from numerator and denominator. For even `e` the extracted root is taken
/// positive; the sign stays in `s`.
pub fn rat_power_split(x: &Rat, e: u32) -> (Rat, Rat) {
    if x.is_zero() {
        return (Rat::one(), Rat::zero());
    }
    let (gn, _) = int_power_split(&x.numer().abs(), e);
    let (gd, _) = int_power_split(x.denom(), e);
    let g = Rat::new(gn, gd);
    let s = x / num_traits::pow::pow(g.clone(), e as usize);
    (g, s)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_root_exact_cases() {
        assert_eq!(bigint_nth_root_exact(&BigInt::from(64), 3), Some(BigInt::from(4)));
        assert_eq!(bigint_nth_root_exact(&BigInt::from(63), 3), None);
        assert_eq!(bigint_nth_root_exact(&BigInt::from(-27), 3), Some(BigInt::from(-3)));
        assert_eq!(bigint_nth_root_exact(&BigInt::from(-4), 2), None);
        assert_eq!(rat_nth_root_exact(&rat(9, 16), 2), Some(rat(3, 4)));
        assert_eq!(rat_nth_root_exact(&rat(9, 15), 2), None);
    }

    #[test]
    fn power_split_extracts_squares() {
        let (g, s) = rat_power_split(&rat_i(4), 2);
        assert_eq!((g, s), (rat_i(2), rat_i(1)));
        let (g, s) = rat_power_split(&rat_i(12), 2);
        assert_eq!((g, s), (rat_i(2), rat_i(3)));
        let (g, s) = rat_power_split(&rat(-8, 9), 2);
        assert_eq!((g, s), (rat(2, 3), rat(-2, 1)));
        let (g, s) = rat_power_split(&rat_i(250047), 3); // 63^3
        assert_eq!((g, s), (rat_i(63), rat_i(1)));
    }
}
