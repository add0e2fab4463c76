//! Inversion of proper rational parametrizations.
//!
//! For each parameter variable, the graph relations
//! `num(component_j(z) - label_j) = 0` are reduced by a Euclidean remainder
//! sequence whose coefficient zero-tests happen on the parametrized variety
//! (labels substituted by the components). A degree-one gcd solves the
//! parameter as a rational expression in the labels; properness fails when
//! the gcd keeps higher degree. Solutions referencing other parameters are
//! closed by substitution rounds.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::InvertError;
use crate::kernel::{RatFunc, VarId, VarRegistry};

struct OnCurve<'a> {
    reg: &'a Arc<VarRegistry>,
    /// label -> component (expression in the z-variables)
    curve: BTreeMap<VarId, RatFunc>,
}

impl OnCurve<'_> {
    /// Whether an expression in (labels, z-variables) vanishes identically on
    /// the graph of the parametrization.
    fn is_zero(&self, f: &RatFunc) -> Option<bool> {
        match f.lift(self.reg).substitute(&self.curve) {
            Ok(v) => Some(v.is_zero()),
            Err(_) => None,
        }
    }

    fn trim(&self, p: &mut Vec<RatFunc>) -> Option<()> {
        while let Some(last) = p.last() {
            if self.is_zero(last)? {
                p.pop();
            } else {
                break;
            }
        }
        Some(())
    }

    /// Remainder of `a` by `b` (b trimmed, nonzero on the curve).
    fn rem(&self, a: &[RatFunc], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
        let db = b.len() - 1;
        let lead = b.last().unwrap();
        let mut r: Vec<RatFunc> = a.to_vec();
        self.trim(&mut r)?;
        while r.len() > db {
            let da = r.len() - 1;
            let factor = r.last().unwrap().div(lead);
            for j in 0..=db {
                let sub = factor.mul(&b[j]);
                r[da - db + j] = r[da - db + j].sub(&sub);
            }
            // the leading term cancels on the curve by construction; force it
            r.truncate(da);
            self.trim(&mut r)?;
        }
        Some(r)
    }

    fn gcd(&self, a: &[RatFunc], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
        let mut x: Vec<RatFunc> = a.to_vec();
        let mut y: Vec<RatFunc> = b.to_vec();
        self.trim(&mut x)?;
        self.trim(&mut y)?;
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        Some(x)
    }
}

/// Coefficient vector of `f`'s numerator in the variable `v` (coefficients
/// are rational functions of everything else).
fn poly_in(f: &RatFunc, v: VarId, reg: &Arc<VarRegistry>) -> Vec<RatFunc> {
    let num = f.num();
    let deg = num.degree_in(v) as usize;
    let cs = num.coeffs_in(v);
    let mut out = vec![RatFunc::zero(reg); deg + 1];
    for (e, c) in cs {
        out[e as usize] = RatFunc::from_poly(c);
    }
    out
}

/// Inverts a parametrization given by `components` of the variety (one per
/// label variable) in the parameters `z_vars`. Returns one expression per
/// parameter, in order, over the label variables.
pub fn invert_parametrization(
    reg: &Arc<VarRegistry>,
    components: &[RatFunc],
    z_vars: &[VarId],
    label_vars: &[VarId],
) -> Result<Vec<RatFunc>, InvertError> {
    assert_eq!(components.len(), label_vars.len());
    let curve: BTreeMap<VarId, RatFunc> = label_vars
        .iter()
        .zip(components)
        .map(|(l, c)| (*l, c.lift(reg)))
        .collect();
    let oc = OnCurve { reg, curve };

    // graph relations: num(component_j - label_j)
    let relations: Vec<RatFunc> = components
        .iter()
        .zip(label_vars)
        .map(|(c, l)| c.lift(reg).sub(&RatFunc::var(reg, *l)))
        .collect();

    let mut solutions: BTreeMap<VarId, RatFunc> = BTreeMap::new();
    for &zk in z_vars {
        let mut acc: Option<Vec<RatFunc>> = None;
        for rel in &relations {
            if !rel.contains_var(zk) {
                continue;
            }
            let vec = poly_in(rel, zk, reg);
            acc = Some(match acc {
                None => {
                    let mut v = vec;
                    oc.trim(&mut v).ok_or(InvertError::Unsolved(
                        reg.name(zk).to_owned(),
                    ))?;
                    v
                }
                Some(prev) => oc
                    .gcd(&prev, &vec)
                    .ok_or(InvertError::Unsolved(reg.name(zk).to_owned()))?,
            });
        }
        let g = acc.ok_or(InvertError::Unsolved(reg.name(zk).to_owned()))?;
        match g.len() {
            2 => {
                // linear: zk = -c0/c1
                let expr = g[0].neg().div(&g[1]);
                solutions.insert(zk, expr);
            }
            d if d > 2 => {
                return Err(InvertError::NotProper { degree: d - 1 });
            }
            _ => {
                return Err(InvertError::Unsolved(reg.name(zk).to_owned()));
            }
        }
    }

    // close the solutions: substitute until only labels remain
    for _ in 0..z_vars.len() {
        let snapshot = solutions.clone();
        for expr in solutions.values_mut() {
            if z_vars.iter().any(|z| expr.contains_var(*z)) {
                *expr = expr
                    .substitute(&snapshot)
                    .map_err(|_| InvertError::Unsolved("closure".to_owned()))?;
            }
        }
    }
    let mut out = Vec::with_capacity(z_vars.len());
    for &zk in z_vars {
        let expr = solutions.remove(&zk).unwrap();
        if z_vars.iter().any(|z| expr.contains_var(*z)) {
            return Err(InvertError::Unsolved(reg.name(zk).to_owned()));
        }
        out.push(expr);
    }
    Ok(out)
}

/// Curve-case inversion (one parameter).
pub fn invert_curve_parametrization(
    reg: &Arc<VarRegistry>,
    components: &[RatFunc],
    z: VarId,
    label_vars: &[VarId],
) -> Result<RatFunc, InvertError> {
    let v = invert_parametrization(reg, components, &[z], label_vars)?;
    Ok(v.into_iter().next().unwrap())
}
