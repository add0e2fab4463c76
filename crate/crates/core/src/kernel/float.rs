//! Arbitrary-precision binary floating point on top of `BigInt`.
//!
//! A value is `mantissa * 2^exp`. Operations take an explicit precision in
//! bits and round to nearest. Exact rational inputs plus per-op rounding of
//! at most one ulp keep the accumulated error well under the guard bits used
//! by the callers (they evaluate with 64 extra bits).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_bigint(m: BigInt) -> Self {
        BigFloat { mantissa: m, exp: 0 }
    }

    pub fn from_i64(m: i64) -> Self {
        Self::from_bigint(BigInt::from(m))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    fn normalize(mut self, prec: u32) -> Self {
        if self.mantissa.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mantissa.bits();
        if bits > prec as u64 {
            let shift = bits - prec as u64;
            let neg = self.mantissa.is_negative();
            let mut abs = self.mantissa.magnitude().clone();
            // round to nearest on the dropped bits
            let round_bit = (&abs >> (shift - 1)) & num_bigint::BigUint::one();
            abs >>= shift;
            if !round_bit.is_zero() {
                abs += num_bigint::BigUint::one();
            }
            let m = BigInt::from(abs);
            self.mantissa = if neg { -m } else { m };
            self.exp += shift as i64;
        }
        self
    }

    /// Base-2 logarithm of the magnitude, within one unit.
    pub fn mag_log2(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            return None;
        }
        Some(self.exp + self.mantissa.bits() as i64)
    }

    pub fn from_rat(x: &Rat, prec: u32) -> Self {
        if x.is_zero() {
            return Self::zero();
        }
        let shift = prec as u64 + 2;
        let num = x.numer() << shift;
        let q = num / x.denom();
        BigFloat {
            mantissa: q,
            exp: -(shift as i64),
        }
        .normalize(prec)
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return other.clone().normalize(prec);
        }
        if other.is_zero() {
            return self.clone().normalize(prec);
        }
        // cap the alignment shift: far-apart addends only perturb beyond the
        // working precision
        let la = self.mag_log2().unwrap();
        let lb = other.mag_log2().unwrap();
        if la - lb > prec as i64 + 4 {
            return self.clone().normalize(prec);
        }
        if lb - la > prec as i64 + 4 {
            return other.clone().normalize(prec);
        }
        let (a, b) = (self, other);
        let exp = a.exp.min(b.exp);
        let ma = &a.mantissa << (a.exp - exp) as u64;
        let mb = &b.mantissa << (b.exp - exp) as u64;
        BigFloat {
            mantissa: ma + mb,
            exp,
        }
        .normalize(prec)
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -self.mantissa.clone(),
            exp: self.exp,
        }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        BigFloat {
            mantissa: &self.mantissa * &other.mantissa,
            exp: self.exp + other.exp,
        }
        .normalize(prec)
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = prec as u64 + self.mantissa.bits().max(other.mantissa.bits()) + 2;
        let num = &self.mantissa << shift;
        let q = num / &other.mantissa;
        BigFloat {
            mantissa: q,
            exp: self.exp - other.exp - shift as i64,
        }
        .normalize(prec)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, prec: u32) -> Self {
        self.nth_root(2, prec)
    }

    /// n-th root of a value (odd n may take negative inputs).
    pub fn nth_root(&self, n: u32, prec: u32) -> Self {
        assert!(n >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        if self.is_negative() {
            assert!(n % 2 == 1, "even root of a negative BigFloat");
            return self.neg().nth_root(n, prec).neg();
        }
        // shift so the exponent is divisible by n and the mantissa carries
        // at least n*(prec+2) bits
        let target_bits = (n as u64) * (prec as u64 + 4);
        let cur_bits = self.mantissa.bits();
        let mut shift = target_bits.saturating_sub(cur_bits);
        let total_exp = self.exp - shift as i64;
        let rem = total_exp.rem_euclid(n as i64);
        shift += rem as u64;
        let m = self.mantissa.magnitude() << shift;
        let root = num_integer::Roots::nth_root(&m, n);
        BigFloat {
            mantissa: BigInt::from(root),
            exp: (self.exp - shift as i64) / n as i64,
        }
        .normalize(prec)
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.abs().cmp_value(&other.abs())
    }

    /// Value comparison (exact).
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.sub(other, u32::MAX);
        if d.mantissa.is_zero() {
            Ordering::Equal
        } else if d.mantissa.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            (
                num_traits::ToPrimitive::to_i128(&(&self.mantissa >> shift)).unwrap_or(0) as f64,
                self.exp + shift as i64,
            )
        } else {
            (
                num_traits::ToPrimitive::to_i128(&self.mantissa).unwrap_or(0) as f64,
                self.exp,
            )
        };
        m * 2f64.powi(e.clamp(-1400, 1400) as i32)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 {
            return Self::zero();
        }
        assert!(x.is_finite());
        let (m, e) = {
            let bits = x.to_bits();
            let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
            let exp_bits = ((bits >> 52) & 0x7ff) as i64;
            let frac = bits & ((1u64 << 52) - 1);
            if exp_bits == 0 {
                (sign * frac as i64, -1074i64)
            } else {
                (sign * (frac | (1 << 52)) as i64, exp_bits - 1075)
            }
        };
        BigFloat {
            mantissa: BigInt::from(m),
            exp: e,
        }
        .normalize(prec)
    }

    /// 2^k as a BigFloat.
    pub fn pow2(k: i64) -> Self {
        BigFloat {
            mantissa: BigInt::one(),
            exp: k,
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat;

    const P: u32 = 128;

    #[test]
    fn sqrt2_squared_is_two() {
        let two = BigFloat::from_i64(2);
        let r = two.sqrt(P);
        let back = r.mul(&r, P);
        let err = back.sub(&two, P).abs();
        assert!(err.mag_log2().unwrap_or(i64::MIN) < -(P as i64) + 8);
    }

    #[test]
    fn rational_round_trip() {
        let x = rat(355, 113);
        let f = BigFloat::from_rat(&x, P);
        assert!((f.to_f64() - 355.0 / 113.0).abs() < 1e-12);
    }

    #[test]
    fn cube_root() {
        let x = BigFloat::from_i64(-27);
        let r = x.nth_root(3, P);
        assert!((r.to_f64() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn division() {
        let a = BigFloat::from_i64(1);
        let b = BigFloat::from_i64(3);
        let q = a.div(&b, P);
        let three_q = q.mul(&b, P);
        let err = three_q.sub(&BigFloat::from_i64(1), P).abs();
        assert!(err.mag_log2().unwrap_or(i64::MIN) < -(P as i64) + 8);
    }
}
