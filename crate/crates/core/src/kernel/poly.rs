//! Sparse multivariate polynomials over the rationals with a graded-lex
//! canonical term order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rat::Rat;
use super::vars::{join_registries, VarId, VarRegistry};

/// Exponent vector, stored with trailing zeros trimmed so that equality and
/// hashing are independent of registry growth. Ordered
/// graded-lexicographically: higher total degree first, ties broken by the
/// earlier registry variable having the larger exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Box<[u32]>);

impl Mono {
    pub fn new(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Mono(e.into_boxed_slice())
    }

    pub fn unit(_nvars: usize) -> Self {
        Mono(Vec::new().into_boxed_slice())
    }

    pub fn var(v: VarId, _nvars: usize) -> Self {
        let mut e = vec![0u32; v.0 + 1];
        e[v.0] = 1;
        Mono::new(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: VarId) -> u32 {
        self.0.get(v.0).copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn padded(&self, len: usize) -> Mono {
        if self.0.len() >= len {
            self.clone()
        } else {
            let mut e = self.0.to_vec();
            e.resize(len, 0);
            Mono(e.into_boxed_slice())
        }
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let len = self.0.len().max(other.0.len());
        let mut e = vec![0u32; len];
        for (i, item) in e.iter_mut().enumerate() {
            *item = self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0);
        }
        Mono::new(e)
    }

    /// Componentwise division; `None` when not divisible.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let len = self.0.len().max(other.0.len());
        let mut e = vec![0u32; len];
        for (i, item) in e.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            if a < b {
                return None;
            }
            *item = a - b;
        }
        Some(Mono::new(e))
    }

    pub fn with_exp(&self, v: VarId, e: u32) -> Mono {
        let mut vec = self.padded(v.0 + 1).0.to_vec();
        vec[v.0] = e;
        Mono::new(vec)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = self.degree();
        let db = other.degree();
        if da != db {
            return da.cmp(&db);
        }
        // lexicographic: first variable with differing exponent decides;
        // larger exponent on the earlier variable = larger monomial
        let len = self.0.len().max(other.0.len());
        for i in 0..len {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            if a != b {
                return a.cmp(&b);
            }
        }
        Ordering::Equal
    }
}

/// Sparse multivariate polynomial with rational coefficients. Equality and
/// ordering compare the term maps only, so values over prefix-compatible
/// registries of different lengths compare as the polynomials they denote.
#[derive(Debug, Clone)]
pub struct MPoly {
    reg: Arc<VarRegistry>,
    terms: BTreeMap<Mono, Rat>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl PartialOrd for MPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl MPoly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        MPoly {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::constant(reg, Rat::one())
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(reg.len()), c);
        }
        MPoly {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn var(reg: &Arc<VarRegistry>, v: VarId) -> Self {
        Self::monomial(reg, Mono::var(v, reg.len()), Rat::one())
    }

    pub fn monomial(reg: &Arc<VarRegistry>, m: Mono, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn from_terms(reg: &Arc<VarRegistry>, it: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = Self::zero(reg);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    /// Re-homes the polynomial in a longer registry.
    pub fn lift(&self, reg: &Arc<VarRegistry>) -> MPoly {
        debug_assert!(self.reg.is_prefix_of(reg));
        MPoly {
            reg: reg.clone(),
            terms: self.terms.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn vars_used(&self) -> Vec<VarId> {
        self.reg
            .ids()
            .filter(|&v| self.contains_var(v))
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.reg);
        }
        MPoly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.reg);
        }
        MPoly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.reg);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: VarId) -> MPoly {
        let mut out = MPoly::zero(&self.reg);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut vec = m.padded(self.reg.len().max(v.0 + 1)).0.to_vec();
            vec[v.0] = e - 1;
            out.add_term(Mono::new(vec), c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Univariate view with respect to `v`: exponent of `v` mapped to the
    /// coefficient polynomial in the remaining variables.
    pub fn coeffs_in(&self, v: VarId) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut vec = m.padded(self.reg.len().max(v.0 + 1)).0.to_vec();
            vec[v.0] = 0;
            out.entry(e)
                .or_insert_with(|| MPoly::zero(&self.reg))
                .add_term(Mono::new(vec), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn from_coeffs_in(
        reg: &Arc<VarRegistry>,
        v: VarId,
        coeffs: impl IntoIterator<Item = (u32, MPoly)>,
    ) -> MPoly {
        let mut out = MPoly::zero(reg);
        for (e, p) in coeffs {
            let vm = Mono::var(v, reg.len()).with_exp(v, e);
            for (m, c) in &p.terms {
                out.add_term(m.mul(&vm), c.clone());
            }
        }
        out
    }

    /// Leading coefficient viewed univariately in `v`.
    pub fn leading_coeff_in(&self, v: VarId) -> MPoly {
        let d = self.degree_in(v);
        self.coeffs_in(v).remove(&d).unwrap_or_else(|| MPoly::zero(&self.reg))
    }

    /// Exact multivariate division. Returns `None` when the division leaves a
    /// remainder.
    pub fn try_div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let reg = join_registries(&self.reg, &d.reg);
        if self.is_zero() {
            return Some(MPoly::zero(&reg));
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Rat::one() / c)).lift(&reg));
        }
        let (dm, dc) = d.leading().unwrap();
        let mut rem = self.lift(&reg);
        let mut quot = MPoly::zero(&reg);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            quot.add_term(qm.clone(), qc.clone());
            rem = &rem - &d.lift(&reg).mul_mono(&qm, &qc);
        }
        Some(quot)
    }

    pub fn div_exact(&self, d: &MPoly) -> MPoly {
        self.try_div_exact(d)
            .expect("polynomial division expected to be exact")
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients; sign of the leading coefficient is kept
    /// in the content.
    pub fn rational_content(&self) -> Rat {
        use num_bigint::BigInt;
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    /// Canonical associate: integer-primitive with positive leading
    /// coefficient. Returns `(primitive, unit)` with `self = unit * primitive`.
    pub fn unit_normalized(&self) -> (MPoly, Rat) {
        if self.is_zero() {
            return (self.clone(), Rat::one());
        }
        let content = self.rational_content();
        (self.scale(&(Rat::one() / content.clone())), content)
    }

    /// Substitutes a single variable by a polynomial.
    pub fn subst_var_poly(&self, v: VarId, value: &MPoly) -> MPoly {
        let reg = join_registries(&self.reg, value.registry());
        let coeffs = self.coeffs_in(v);
        let mut powers: Vec<MPoly> = vec![MPoly::one(&reg)];
        let max_e = coeffs.keys().max().copied().unwrap_or(0);
        for i in 1..=max_e as usize {
            powers.push(&powers[i - 1] * value);
        }
        let mut out = MPoly::zero(&reg);
        for (e, c) in coeffs {
            out = &out + &(&c.lift(&reg) * &powers[e as usize]);
        }
        out
    }

    /// Evaluates at an exact rational point. Variables missing from the map
    /// must not occur in the polynomial.
    pub fn eval_rat(&self, point: &BTreeMap<VarId, Rat>) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point
                    .get(&VarId(i))
                    .unwrap_or_else(|| panic!("missing value for {}", self.reg.name(VarId(i))));
                term *= num_traits::pow::Pow::pow(x.clone(), e as usize);
            }
            acc += term;
        }
        acc
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let reg = join_registries(&self.reg, &rhs.reg);
        let mut out = self.lift(&reg);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let reg = join_registries(&self.reg, &rhs.reg);
        let mut out = self.lift(&reg);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let reg = join_registries(&self.reg, &rhs.reg);
        let mut out = MPoly::zero(&reg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // print highest terms first
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_unit() {
                if abs.denom().is_one() {
                    factors.push(abs.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.reg.name(VarId(i));
                if e == 1 {
                    factors.push(name.to_owned());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat_i;
    use crate::kernel::vars::VarKind;

    fn xy() -> (Arc<VarRegistry>, VarId, VarId) {
        let reg = VarRegistry::build(&[("x", VarKind::Base), ("y", VarKind::Base)]);
        let x = reg.lookup("x").unwrap();
        let y = reg.lookup("y").unwrap();
        (reg, x, y)
    }

    #[test]
    fn grlex_order() {
        let (reg, x, y) = xy();
        let xv = MPoly::var(&reg, x);
        let yv = MPoly::var(&reg, y);
        let p = &(&xv * &xv) + &(&yv + &MPoly::one(&reg));
        // leading term of x^2 + y + 1 is x^2
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.exp(x), 2);
        // x > y in grlex (earlier variable, same degree)
        let q = &xv + &yv;
        assert_eq!(q.leading().unwrap().0.exp(x), 1);
    }

    #[test]
    fn exact_division() {
        let (reg, x, y) = xy();
        let xv = MPoly::var(&reg, x);
        let yv = MPoly::var(&reg, y);
        let a = &(&xv + &yv) * &(&xv - &yv);
        let q = a.try_div_exact(&(&xv + &yv)).unwrap();
        assert_eq!(q, &xv - &yv);
        assert!(a.try_div_exact(&(&xv + &MPoly::one(&reg))).is_none());
    }

    #[test]
    fn unit_normalization() {
        let (reg, x, _) = xy();
        let xv = MPoly::var(&reg, x);
        let p = &xv.scale(&rat_i(-4)) + &MPoly::constant(&reg, rat_i(-6));
        let (prim, unit) = p.unit_normalized();
        assert_eq!(unit, rat_i(-2));
        assert_eq!(prim, &xv.scale(&rat_i(2)) + &MPoly::constant(&reg, rat_i(3)));
    }

    #[test]
    fn derivative_and_univariate_view() {
        let (reg, x, y) = xy();
        let xv = MPoly::var(&reg, x);
        let yv = MPoly::var(&reg, y);
        // p = x^2*y + 3x
        let p = &(&(&xv * &xv) * &yv) + &xv.scale(&rat_i(3));
        let dp = p.derivative(x);
        let expect = &(&xv * &yv).scale(&rat_i(2)) + &MPoly::constant(&reg, rat_i(3));
        assert_eq!(dp, expect);
        let cs = p.coeffs_in(x);
        assert_eq!(cs[&2], yv);
        assert_eq!(cs[&1], MPoly::constant(&reg, rat_i(3)));
    }
}
