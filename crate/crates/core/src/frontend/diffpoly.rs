//! Polynomials in jet variables (the unknowns and their derivatives) with
//! coefficients in a radical-tower field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::TowerError;
use crate::kernel::Rat;
use crate::tower::{RadicalTower, TowerElem};

/// A single derivative symbol: unknown index plus sorted derivation
/// multi-index (empty = the unknown itself).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub unknown: usize,
    pub deriv: Vec<usize>,
}

impl JetVar {
    pub fn order(&self) -> usize {
        self.deriv.len()
    }
}

/// A product of jet variables with positive powers, kept sorted.
///
/// Ordering: nonempty monomials ascend by total power, then by the expanded
/// variable sequence; the empty monomial (the pure-coefficient term) sorts
/// last. The least monomial fixes the sign convention of a normalized
/// equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetMono(pub Vec<(JetVar, u32)>);

impl JetMono {
    pub fn unit() -> Self {
        JetMono(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        JetMono(vec![(v, 1)])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_power(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    /// Max derivation order among factors.
    pub fn order(&self) -> usize {
        self.0.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &JetMono) -> JetMono {
        let mut map: BTreeMap<JetVar, u32> = BTreeMap::new();
        for (v, p) in self.0.iter().chain(other.0.iter()) {
            *map.entry(v.clone()).or_insert(0) += p;
        }
        JetMono(map.into_iter().collect())
    }

    fn expanded(&self) -> Vec<&JetVar> {
        let mut out = Vec::new();
        for (v, p) in &self.0 {
            for _ in 0..*p {
                out.push(v);
            }
        }
        out
    }

    /// Distinct unknowns whose derivatives occur.
    pub fn unknowns(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.0.iter().map(|(v, _)| v.unknown).collect();
        u.sort_unstable();
        u.dedup();
        u
    }
}

impl PartialOrd for JetMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for JetMono {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_unit(), other.is_unit()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let ta = self.total_power();
                let tb = other.total_power();
                if ta != tb {
                    return ta.cmp(&tb);
                }
                self.expanded().cmp(&other.expanded())
            }
        }
    }
}

/// Polynomial in jet variables over a tower field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffPoly {
    pub n_vars: usize,
    pub n_unknowns: usize,
    pub terms: BTreeMap<JetMono, TowerElem>,
}

impl DiffPoly {
    pub fn zero(n_vars: usize, n_unknowns: usize) -> Self {
        DiffPoly {
            n_vars,
            n_unknowns,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, n_unknowns: usize, c: TowerElem) -> Self {
        let mut p = Self::zero(n_vars, n_unknowns);
        if !c.is_zero() {
            p.terms.insert(JetMono::unit(), c);
        }
        p
    }

    pub fn jet(n_vars: usize, n_unknowns: usize, v: JetVar, t: &RadicalTower) -> Self {
        let mut p = Self::zero(n_vars, n_unknowns);
        p.terms.insert(JetMono::var(v), t.elem_one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max total derivation order present.
    pub fn order(&self) -> usize {
        self.terms.keys().map(|m| m.order()).max().unwrap_or(0)
    }

    pub fn is_jet_free(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    pub fn constant_part(&self, t: &RadicalTower) -> TowerElem {
        self.terms
            .get(&JetMono::unit())
            .cloned()
            .unwrap_or_else(|| t.elem_zero())
    }

    pub fn add_term(&mut self, t: &RadicalTower, m: JetMono, c: TowerElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = t.elem_add(e.get(), &c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, t: &RadicalTower, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(t, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, t: &RadicalTower) -> DiffPoly {
        let mut out = Self::zero(self.n_vars, self.n_unknowns);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), t.elem_neg(c));
        }
        out
    }

    pub fn sub(&self, t: &RadicalTower, o: &DiffPoly) -> DiffPoly {
        self.add(t, &o.neg(t))
    }

    pub fn mul(&self, t: &RadicalTower, o: &DiffPoly) -> Result<DiffPoly, TowerError> {
        let mut out = Self::zero(self.n_vars, self.n_unknowns);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let c = t.elem_mul(ca, cb)?;
                out.add_term(t, ma.mul(mb), c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, t: &RadicalTower, c: &TowerElem) -> Result<DiffPoly, TowerError> {
        let mut out = Self::zero(self.n_vars, self.n_unknowns);
        for (m, a) in &self.terms {
            out.add_term(t, m.clone(), t.elem_mul(a, c)?);
        }
        Ok(out)
    }

    pub fn scale_rat(&self, t: &RadicalTower, c: &Rat) -> DiffPoly {
        let mut out = Self::zero(self.n_vars, self.n_unknowns);
        for (m, a) in &self.terms {
            out.add_term(t, m.clone(), t.elem_scale(a, c));
        }
        out
    }

    pub fn pow(&self, t: &RadicalTower, e: u32) -> Result<DiffPoly, TowerError> {
        let mut acc = DiffPoly::constant(self.n_vars, self.n_unknowns, t.elem_one());
        for _ in 0..e {
            acc = acc.mul(t, self)?;
        }
        Ok(acc)
    }

    /// Rewrites every coefficient through generator rewrites (after tower
    /// simplification).
    pub fn rewrite_coeffs(
        &self,
        t: &RadicalTower,
        rewrites: &BTreeMap<crate::kernel::VarId, TowerElem>,
    ) -> Result<DiffPoly, TowerError> {
        let mut out = Self::zero(self.n_vars, self.n_unknowns);
        for (m, c) in &self.terms {
            let c2 = t.elem_compose(c, rewrites)?;
            out.add_term(t, m.clone(), c2);
        }
        Ok(out)
    }

    /// True when no coefficient involves a tower generator.
    pub fn is_rational(&self, t: &RadicalTower) -> bool {
        self.terms.values().all(|c| c.is_rational(t))
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.unknown)?;
        if !self.deriv.is_empty() {
            let idx: Vec<String> = self.deriv.iter().map(|i| i.to_string()).collect();
            write!(f, "_{}", idx.join(""))?;
        }
        Ok(())
    }
}

impl fmt::Display for JetMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, p)| {
                if *p == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{p}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
