//! High-precision complex arithmetic and exact-seeded root extraction.

use super::float::BigFloat;
use super::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CNum {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl CNum {
    pub fn zero() -> Self {
        CNum {
            re: BigFloat::zero(),
            im: BigFloat::zero(),
        }
    }

    pub fn from_rat(x: &Rat, prec: u32) -> Self {
        CNum {
            re: BigFloat::from_rat(x, prec),
            im: BigFloat::zero(),
        }
    }

    pub fn from_real(re: BigFloat) -> Self {
        CNum {
            re,
            im: BigFloat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        CNum {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        CNum {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn neg(&self) -> Self {
        CNum {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let re = self
            .re
            .mul(&o.re, prec)
            .sub(&self.im.mul(&o.im, prec), prec);
        let im = self
            .re
            .mul(&o.im, prec)
            .add(&self.im.mul(&o.re, prec), prec);
        CNum { re, im }
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        assert!(!o.is_zero(), "complex division by zero");
        let den = o
            .re
            .mul(&o.re, prec)
            .add(&o.im.mul(&o.im, prec), prec);
        let re = self
            .re
            .mul(&o.re, prec)
            .add(&self.im.mul(&o.im, prec), prec)
            .div(&den, prec);
        let im = self
            .im
            .mul(&o.re, prec)
            .sub(&self.re.mul(&o.im, prec), prec)
            .div(&den, prec);
        CNum { re, im }
    }

    pub fn pow_u32(&self, e: u32, prec: u32) -> Self {
        let mut acc = CNum::from_real(BigFloat::from_i64(1));
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    /// Magnitude |z|.
    pub fn abs(&self, prec: u32) -> BigFloat {
        self.re
            .mul(&self.re, prec)
            .add(&self.im.mul(&self.im, prec), prec)
            .sqrt(prec)
    }

    /// Base-2 log of the magnitude, within a unit; `None` for zero.
    pub fn mag_log2(&self, prec: u32) -> Option<i64> {
        self.abs(prec).mag_log2()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// All complex e-th roots of `v`, each polished by Newton iteration to the
/// requested precision. Seeds come from double-precision polar form; the
/// roots of `z^e = v` are equally spaced on a circle, so the f64 seeds land
/// well inside the Newton basins.
pub fn all_nth_roots(v: &CNum, e: u32, prec: u32) -> Vec<CNum> {
    assert!(e >= 1);
    if v.is_zero() {
        return vec![CNum::zero()];
    }
    if e == 1 {
        return vec![v.clone()];
    }
    // scale v into comfortable f64 range: v = v_s * 2^(e*t)
    let work = prec + 64;
    let l2 = v.mag_log2(work).unwrap();
    let t = if l2.abs() > 512 { l2 / e as i64 } else { 0 };
    let scale_back = BigFloat::pow2(t);
    let v_scaled = {
        let s = BigFloat::pow2(-(e as i64) * t);
        CNum {
            re: v.re.mul(&s, work),
            im: v.im.mul(&s, work),
        }
    };
    let (re, im) = v_scaled.to_f64();
    let r = re.hypot(im);
    let theta = im.atan2(re);
    let root_r = r.powf(1.0 / e as f64);
    let mut out = Vec::with_capacity(e as usize);
    for k in 0..e {
        let angle = (theta + 2.0 * std::f64::consts::PI * k as f64) / e as f64;
        let seed = CNum {
            re: BigFloat::from_f64(root_r * angle.cos(), work),
            im: BigFloat::from_f64(root_r * angle.sin(), work),
        };
        let mut z = seed;
        // Newton: z <- z - (z^e - v)/(e z^(e-1)); quadratic convergence from
        // ~1e-15 seeds reaches 2^-(prec+32) within a handful of steps
        let steps = 3 + (prec as f64 / 40.0).ceil() as usize;
        let e_f = CNum::from_real(BigFloat::from_i64(e as i64));
        for _ in 0..steps {
            let zp = z.pow_u32(e - 1, work);
            let f = zp.mul(&z, work).sub(&v_scaled, work);
            let df = e_f.mul(&zp, work);
            z = z.sub(&f.div(&df, work), work);
        }
        out.push(CNum {
            re: z.re.mul(&scale_back, work),
            im: z.im.mul(&scale_back, work),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat_i;

    const P: u32 = 128;

    fn close(a: &CNum, b: &CNum, bits: i64) -> bool {
        let d = a.sub(b, P + 64);
        match d.mag_log2(P + 64) {
            None => true,
            Some(l) => {
                let scale = a.mag_log2(P + 64).unwrap_or(0);
                l - scale < -bits
            }
        }
    }

    #[test]
    fn square_roots_of_minus_one() {
        let v = CNum::from_rat(&rat_i(-1), P);
        let roots = all_nth_roots(&v, 2, P);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            let sq = r.mul(r, P + 64);
            assert!(close(&sq, &v, P as i64 - 8));
        }
    }

    #[test]
    fn cube_roots_multiply_back() {
        let v = CNum {
            re: BigFloat::from_i64(5),
            im: BigFloat::from_i64(-2),
        };
        let roots = all_nth_roots(&v, 3, P);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            let c = r.pow_u32(3, P + 64);
            assert!(close(&c, &v, P as i64 - 8));
        }
        // roots pairwise distinct
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(!close(&roots[i], &roots[j], 16));
            }
        }
    }

    #[test]
    fn huge_and_tiny_inputs() {
        let big = CNum::from_real(BigFloat::pow2(2000));
        let roots = all_nth_roots(&big, 2, P);
        let r = &roots[0];
        let sq = r.mul(r, P + 64);
        assert!(close(&sq, &big, P as i64 - 8));
    }
}
