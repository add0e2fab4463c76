//! Elements of a radical-tower field in canonical normal form.
//!
//! An element is a fraction `num/den` where `num` is a polynomial in the base
//! variables, parameters and tower generators with every generator exponent
//! reduced below its index, and `den` is free of generators. Denominators are
//! made generator-free by inverting through the minimal-polynomial relation
//! (extended Euclid level by level), so equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::def::RadicalTower;
use crate::error::{KernelError, TowerError};
use crate::kernel::{compose_poly, poly_gcd, MPoly, Rat, RatFunc, VarId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TowerElem {
    pub num: MPoly,
    pub den: MPoly,
}

impl TowerElem {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when no tower generator occurs, i.e. the element lies in the
    /// rational base field.
    pub fn is_rational(&self, tower: &RadicalTower) -> bool {
        tower.steps().iter().all(|s| !self.num.contains_var(s.var))
    }

    /// View as a plain rational function (requires `is_rational`).
    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::new(self.num.clone(), self.den.clone())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// Substitutes every variable present (base, params, generators) through
    /// the bindings; unbound variables stay themselves.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, RatFunc>) -> Result<RatFunc, KernelError> {
        let num = compose_poly(&self.num, bindings);
        let den = compose_poly(&self.den, bindings);
        if den.is_zero() {
            return Err(KernelError::DenominatorVanishes);
        }
        Ok(num.div(&den))
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.num_terms() > 1 {
            write!(f, "({})/({})", self.num, self.den)
        } else {
            write!(f, "{}/({})", self.num, self.den)
        }
    }
}

impl RadicalTower {
    pub fn elem_zero(&self) -> TowerElem {
        TowerElem {
            num: MPoly::zero(self.registry()),
            den: MPoly::one(self.registry()),
        }
    }

    pub fn elem_one(&self) -> TowerElem {
        TowerElem {
            num: MPoly::one(self.registry()),
            den: MPoly::one(self.registry()),
        }
    }

    pub fn elem_from_ratfunc(&self, f: &RatFunc) -> Result<TowerElem, TowerError> {
        self.elem_normalize(f.num().clone(), f.den().clone())
    }

    /// Reduces generator exponents below their indices; returns the reduced
    /// numerator and the accumulated generator-free denominator.
    fn reduce_exponents(&self, p: &MPoly) -> (MPoly, MPoly) {
        let reg = crate::kernel::join_registries(self.registry(), p.registry());
        let reg = &reg;
        let mut num = p.lift(reg);
        let mut den = MPoly::one(reg);
        for step in self.steps().iter().rev() {
            let d = step.var;
            let e = step.index;
            if num.degree_in(d) < e {
                continue;
            }
            let coeffs = num.coeffs_in(d);
            let qmax = coeffs.keys().max().unwrap() / e;
            let alpha_num = &step.radicand.num;
            let alpha_den = &step.radicand.den;
            let mut out = MPoly::zero(reg);
            for (k, c) in coeffs {
                let q = k / e;
                let r = k % e;
                let term = &(&c * &alpha_num.pow(q)) * &alpha_den.pow(qmax - q);
                let dpow = MPoly::monomial(
                    reg,
                    crate::kernel::Mono::unit(reg.len()).with_exp(d, r),
                    Rat::one(),
                );
                out = &out + &(&term * &dpow);
            }
            num = out;
            den = &den * &alpha_den.pow(qmax);
        }
        (num, den)
    }

    /// Canonical element from an arbitrary fraction of polynomials (which may
    /// contain generators in the denominator and excess exponents anywhere).
    pub fn elem_normalize(&self, num: MPoly, den: MPoly) -> Result<TowerElem, TowerError> {
        if den.is_zero() {
            return Err(TowerError::Kernel(KernelError::DivisionByZero));
        }
        let (n1, extra_d1) = self.reduce_exponents(&num);
        let (n2, extra_d2) = self.reduce_exponents(&den);
        // num/den = (n1/extra_d1) / (n2/extra_d2) = n1*extra_d2 / (n2*extra_d1)
        let mut fnum = &n1 * &extra_d2;
        let mut fden = &n2 * &extra_d1;
        if self.top_radical_in(&fden).is_some() {
            let inv = self.invert_reduced_poly(&fden)?;
            // 1/fden = inv.num / inv.den with inv.den generator-free
            let (prod, extra) = self.reduce_exponents(&(&fnum * &inv.num));
            fnum = prod;
            fden = &inv.den * &extra;
        }
        if fden.is_zero() {
            return Err(TowerError::Kernel(KernelError::DivisionByZero));
        }
        let g = poly_gcd(&fnum, &fden);
        let fnum = fnum.div_exact(&g);
        let fden = fden.div_exact(&g);
        let (fden, unit) = fden.unit_normalized();
        let fnum = fnum.scale(&(Rat::one() / unit));
        Ok(TowerElem {
            num: fnum,
            den: fden,
        })
    }

    /// Highest tower step whose generator occurs in `p`.
    fn top_radical_in(&self, p: &MPoly) -> Option<usize> {
        (0..self.steps().len())
            .rev()
            .find(|&i| p.contains_var(self.steps()[i].var))
    }

    /// Inverts a generator-containing, exponent-reduced polynomial: returns
    /// `1/p` as a canonical element. Extended Euclid against the minimal
    /// polynomial of the top generator, recursing on coefficient inversion.
    fn invert_reduced_poly(&self, p: &MPoly) -> Result<TowerElem, TowerError> {
        let i = match self.top_radical_in(p) {
            None => {
                // generator-free: plain fraction flip
                return Ok(TowerElem {
                    num: MPoly::one(self.registry()),
                    den: p.clone(),
                }
                .canonical_fraction());
            }
            Some(i) => i,
        };
        let step = &self.steps()[i];
        let d = step.var;
        let e = step.index as usize;

        // minimal polynomial T^e - alpha as a coefficient vector over the
        // lower tower
        let mut mpoly_vec: Vec<TowerElem> = vec![self.elem_zero(); e + 1];
        mpoly_vec[e] = self.elem_one();
        mpoly_vec[0] = TowerElem {
            num: -&step.radicand.num,
            den: step.radicand.den.clone(),
        };

        // p as a vector of lower-tower elements
        let coeffs = p.coeffs_in(d);
        let deg_p = *coeffs.keys().max().unwrap() as usize;
        debug_assert!(deg_p < e, "exponent-reduced polynomial exceeds step index");
        let mut pvec: Vec<TowerElem> = vec![self.elem_zero(); deg_p + 1];
        for (k, c) in coeffs {
            pvec[k as usize] = TowerElem {
                num: c,
                den: MPoly::one(self.registry()),
            };
        }

        // extended Euclid tracking only the cofactor of p:
        // invariant t_k * p = r_k (mod minimal polynomial)
        let mut r0 = mpoly_vec;
        let mut r1 = pvec;
        let mut t0: Vec<TowerElem> = vec![];
        let mut t1: Vec<TowerElem> = vec![self.elem_one()];
        while poly_deg(&r1).is_some() {
            let (q, r2) = self.poly_divmod(&r0, &r1)?;
            let tq = self.poly_mul(&q, &t1)?;
            let t2 = self.poly_sub(&t0, &tq)?;
            r0 = r1;
            r1 = r2;
            t0 = t1;
            t1 = t2;
        }
        match poly_deg(&r0) {
            Some(0) => {
                // inverse = (sum_k t0[k] * d^k) / r0[0]
                let inv_lead = self.elem_inv(&r0[0])?;
                let mut acc = self.elem_zero();
                for (k, c) in t0.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let dk = TowerElem {
                        num: MPoly::monomial(
                            self.registry(),
                            crate::kernel::Mono::unit(self.registry().len())
                                .with_exp(d, k as u32),
                            Rat::one(),
                        ),
                        den: MPoly::one(self.registry()),
                    };
                    let term = self.elem_mul(c, &dk)?;
                    acc = self.elem_add(&acc, &term);
                }
                self.elem_mul(&acc, &inv_lead)
            }
            _ => Err(TowerError::ZeroDivisor),
        }
    }

    fn canonical_fraction_elem(&self, num: MPoly, den: MPoly) -> TowerElem {
        let g = poly_gcd(&num, &den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let (den, unit) = den.unit_normalized();
        TowerElem {
            num: num.scale(&(Rat::one() / unit)),
            den,
        }
    }

    pub fn elem_add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.canonical_fraction_elem(
            &(&a.num * &b.den) + &(&b.num * &a.den),
            &a.den * &b.den,
        )
    }

    pub fn elem_sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.canonical_fraction_elem(
            &(&a.num * &b.den) - &(&b.num * &a.den),
            &a.den * &b.den,
        )
    }

    pub fn elem_neg(&self, a: &TowerElem) -> TowerElem {
        TowerElem {
            num: -&a.num,
            den: a.den.clone(),
        }
    }

    pub fn elem_mul(&self, a: &TowerElem, b: &TowerElem) -> Result<TowerElem, TowerError> {
        self.elem_normalize(&a.num * &b.num, &a.den * &b.den)
    }

    pub fn elem_inv(&self, a: &TowerElem) -> Result<TowerElem, TowerError> {
        if a.is_zero() {
            return Err(TowerError::Kernel(KernelError::DivisionByZero));
        }
        self.elem_normalize(a.den.clone(), a.num.clone())
    }

    pub fn elem_div(&self, a: &TowerElem, b: &TowerElem) -> Result<TowerElem, TowerError> {
        if b.is_zero() {
            return Err(TowerError::Kernel(KernelError::DivisionByZero));
        }
        self.elem_normalize(&a.num * &b.den, &a.den * &b.num)
    }

    pub fn elem_pow(&self, a: &TowerElem, e: i64) -> Result<TowerElem, TowerError> {
        if e == 0 {
            return Ok(self.elem_one());
        }
        let base = if e < 0 { self.elem_inv(a)? } else { a.clone() };
        let mut acc = self.elem_one();
        for _ in 0..e.unsigned_abs() {
            acc = self.elem_mul(&acc, &base)?;
        }
        Ok(acc)
    }

    pub fn elem_scale(&self, a: &TowerElem, c: &Rat) -> TowerElem {
        self.canonical_fraction_elem(a.num.scale(c), a.den.clone())
    }

    // --- univariate helpers over lower-tower coefficients ---

    fn poly_sub(&self, a: &[TowerElem], b: &[TowerElem]) -> Result<Vec<TowerElem>, TowerError> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| self.elem_zero());
            let y = b.get(i).cloned().unwrap_or_else(|| self.elem_zero());
            out.push(self.elem_sub(&x, &y));
        }
        trim(&mut out);
        Ok(out)
    }

    fn poly_mul(&self, a: &[TowerElem], b: &[TowerElem]) -> Result<Vec<TowerElem>, TowerError> {
        if a.is_empty() || b.is_empty() {
            return Ok(vec![]);
        }
        let mut out = vec![self.elem_zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = self.elem_mul(x, y)?;
                out[i + j] = self.elem_add(&out[i + j], &prod);
            }
        }
        trim(&mut out);
        Ok(out)
    }

    /// Division with remainder over the lower-tower field.
    fn poly_divmod(
        &self,
        a: &[TowerElem],
        b: &[TowerElem],
    ) -> Result<(Vec<TowerElem>, Vec<TowerElem>), TowerError> {
        let db = poly_deg(b).expect("division by zero polynomial in tower Euclid");
        let lead_inv = self.elem_inv(&b[db])?;
        let mut rem: Vec<TowerElem> = a.to_vec();
        trim(&mut rem);
        let mut quot = vec![self.elem_zero(); a.len().saturating_sub(db)];
        while let Some(da) = poly_deg(&rem) {
            if da < db {
                break;
            }
            let factor = self.elem_mul(&rem[da], &lead_inv)?;
            quot[da - db] = self.elem_add(&quot[da - db], &factor);
            for j in 0..=db {
                let sub = self.elem_mul(&factor, &b[j])?;
                rem[da - db + j] = self.elem_sub(&rem[da - db + j], &sub);
            }
            trim(&mut rem);
        }
        trim(&mut quot);
        Ok((quot, rem))
    }
}

impl TowerElem {
    fn canonical_fraction(self) -> TowerElem {
        let g = poly_gcd(&self.num, &self.den);
        let num = self.num.div_exact(&g);
        let den = self.den.div_exact(&g);
        let (den, unit) = den.unit_normalized();
        TowerElem {
            num: num.scale(&(Rat::one() / unit)),
            den,
        }
    }
}

fn poly_deg(p: &[TowerElem]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn trim(p: &mut Vec<TowerElem>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}
