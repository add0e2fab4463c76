//! Rational functions: reduced fractions of multivariate polynomials with a
//! canonical denominator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::complex::CNum;
use super::gcd::{poly_gcd, power_split};
use super::poly::MPoly;
use super::rat::{rat_power_split, Rat};
use super::vars::{join_registries, VarId, VarRegistry};
use crate::error::KernelError;

/// `num/den`, fully reduced, `den` integer-primitive with positive leading
/// coefficient. Equality is therefore structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "RatFunc with zero denominator");
        Self::reduce(num, den)
    }

    pub fn try_new(num: MPoly, den: MPoly) -> Result<Self, KernelError> {
        if den.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            let reg = join_registries(num.registry(), den.registry());
            return RatFunc {
                num: MPoly::zero(&reg),
                den: MPoly::one(&reg),
            };
        }
        let g = poly_gcd(&num, &den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let (den_prim, unit) = den.unit_normalized();
        let num = num.scale(&(Rat::one() / unit));
        RatFunc {
            num,
            den: den_prim,
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.registry());
        RatFunc { num: p, den }
    }

    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        Self::from_poly(MPoly::zero(reg))
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::from_poly(MPoly::one(reg))
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Rat) -> Self {
        Self::from_poly(MPoly::constant(reg, c))
    }

    pub fn var(reg: &Arc<VarRegistry>, v: VarId) -> Self {
        Self::from_poly(MPoly::var(reg, v))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.num.registry()
    }

    pub fn lift(&self, reg: &Arc<VarRegistry>) -> RatFunc {
        RatFunc {
            num: self.num.lift(reg),
            den: self.den.lift(reg),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn vars_used(&self) -> Vec<VarId> {
        let mut vs = self.num.vars_used();
        for v in self.den.vars_used() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort();
        vs
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::reduce(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::reduce(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::reduce(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "RatFunc division by zero");
        Self::reduce(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero RatFunc");
        Self::reduce(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.registry());
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one(self.registry());
        let mut k = e.unsigned_abs();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Exact quotient-rule derivative, reduced.
    pub fn derivative(&self, v: VarId) -> Self {
        let num = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::reduce(num, &self.den * &self.den)
    }

    /// Simultaneous substitution of variables by rational functions.
    /// Unbound variables stay themselves. Fails when the composed
    /// denominator vanishes identically.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, RatFunc>) -> Result<Self, KernelError> {
        let num = compose_poly(&self.num, bindings);
        let den = compose_poly(&self.den, bindings);
        if den.is_zero() {
            return Err(KernelError::DenominatorVanishes);
        }
        Ok(num.div(&den))
    }

    /// Evaluates at an exact rational point; every used variable must be
    /// bound. Fails on poles.
    pub fn eval_rat(&self, point: &BTreeMap<VarId, Rat>) -> Result<Rat, KernelError> {
        let den = self.den.eval_rat(point);
        if den.is_zero() {
            return Err(KernelError::DenominatorVanishes);
        }
        Ok(self.num.eval_rat(point) / den)
    }

    /// Whether `self = g^e` for a rational function `g`; returns the root.
    /// For even `e`, the root with positive canonical unit is returned.
    pub fn perfect_power(&self, e: u32) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(self.clone());
        }
        // num/den = num*den^(e-1) / den^e
        let n = &self.num * &self.den.pow(e - 1);
        let (g, s) = power_split(&n, e);
        if !s.is_constant() {
            return None;
        }
        let c = s.as_constant().unwrap();
        let (cr, cs) = rat_power_split(&c, e);
        if !cs.is_one() {
            return None;
        }
        Some(RatFunc::new(g.scale(&cr), self.den.clone()))
    }

    /// Splits `self = g^e * s` with s carrying no e-th-power content; `s` is a
    /// polynomial over the same variables (denominator folded into `g`).
    pub fn power_split(&self, e: u32) -> (RatFunc, MPoly) {
        let n = &self.num * &self.den.pow(e - 1);
        let (g, s) = power_split(&n, e);
        (
            RatFunc::new(g, self.den.clone()),
            s,
        )
    }
}

/// Composes a polynomial with rational-function bindings.
pub fn compose_poly(p: &MPoly, bindings: &BTreeMap<VarId, RatFunc>) -> RatFunc {
    let mut reg = p.registry().clone();
    for b in bindings.values() {
        reg = join_registries(&reg, b.registry());
    }
    // cache powers per variable
    let mut pow_cache: BTreeMap<(VarId, u32), RatFunc> = BTreeMap::new();
    let mut var_pow = |v: VarId, e: u32, reg: &Arc<VarRegistry>| -> RatFunc {
        if e == 0 {
            return RatFunc::one(reg);
        }
        if let Some(r) = pow_cache.get(&(v, e)) {
            return r.clone();
        }
        let base = match bindings.get(&v) {
            Some(b) => b.lift(reg),
            None => RatFunc::var(reg, v),
        };
        let r = base.pow(e as i64);
        pow_cache.insert((v, e), r.clone());
        r
    };
    let mut acc = RatFunc::zero(&reg);
    for (m, c) in p.terms() {
        let mut term = RatFunc::constant(&reg, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                term = term.mul(&var_pow(VarId(i), e, &reg));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Evaluates a polynomial at a complex point.
pub fn eval_poly_complex(
    p: &MPoly,
    point: &BTreeMap<VarId, CNum>,
    prec: u32,
) -> CNum {
    let mut pow_cache: BTreeMap<(VarId, u32), CNum> = BTreeMap::new();
    let mut acc = CNum::zero();
    for (m, c) in p.terms() {
        let mut term = CNum::from_rat(c, prec);
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = VarId(i);
            let powed = match pow_cache.get(&(v, e)) {
                Some(x) => x.clone(),
                None => {
                    let base = point
                        .get(&v)
                        .unwrap_or_else(|| panic!("missing value for {}", p.registry().name(v)));
                    let x = base.pow_u32(e, prec);
                    pow_cache.insert((v, e), x.clone());
                    x
                }
            };
            term = term.mul(&powed, prec);
        }
        acc = acc.add(&term, prec);
    }
    acc
}

/// Guarded numeric evaluation of a rational function at a complex point.
///
/// Works internally with 64 guard bits; reports `PrecisionLoss` when the
/// denominator magnitude certifies nothing at the requested precision (its
/// log2 falls below `-prec/2` relative to the numerator scale, which covers
/// exact poles and near-pole samples).
pub fn eval_ratfunc_complex(
    f: &RatFunc,
    point: &BTreeMap<VarId, CNum>,
    prec: u32,
) -> Result<CNum, KernelError> {
    let work = prec + 64;
    let den = eval_poly_complex(f.den(), point, work);
    let den_log = den.mag_log2(work);
    let threshold = -((prec / 2) as i64);
    match den_log {
        None => return Err(KernelError::PrecisionLoss),
        Some(l) if l < threshold => return Err(KernelError::PrecisionLoss),
        _ => {}
    }
    let num = eval_poly_complex(f.num(), point, work);
    Ok(num.div(&den, work))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // render with integer coefficients: move the numerator's rational
        // denominators into the displayed denominator
        let mut lcm = num_bigint::BigInt::one();
        for (_, c) in self.num.terms() {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let scale = Rat::from_integer(lcm);
        let num = self.num.scale(&scale);
        let den = self.den.scale(&scale);
        if den.is_one() {
            return write!(f, "{num}");
        }
        let wrap = |p: &MPoly| {
            let s = p.to_string();
            let core = s.strip_prefix('-').unwrap_or(&s);
            if core.contains(['*', '+', '-', ' ', '^']) {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&num), wrap(&den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat_i;
    use crate::kernel::vars::VarKind;

    #[test]
    fn reduction_is_canonical() {
        let reg = VarRegistry::build(&[("z", VarKind::Base)]);
        let z = reg.lookup("z").unwrap();
        let zv = MPoly::var(&reg, z);
        let one = MPoly::one(&reg);
        // (z^2-1)/(z-1) reduces to z+1
        let f = RatFunc::new(&(&zv * &zv) - &one, &zv - &one);
        assert_eq!(f, RatFunc::from_poly(&zv + &one));
        // denominator normalized positive: (z)/(-2z+2) => num scaled
        let g = RatFunc::new(zv.clone(), &(-&zv).scale(&rat_i(2)) + &one.scale(&rat_i(2)));
        let h = RatFunc::new(zv.scale(&rat_i(-1)), &zv.scale(&rat_i(2)) - &one.scale(&rat_i(2)));
        assert_eq!(g, h);
    }
}
