//! Tower simplification: pulls e-th-power factors out of radicands, merges
//! steps with equal radicands, eliminates steps whose radicand is an exact
//! power, and detects multiplicative dependence among square-root steps via
//! subset products.
//!
//! Factor extraction fixes the branch `(p^e * q)^(1/e) = p * q^(1/e)` as a
//! formal identity of algebraic functions; the caller records this so the
//! numeric oracle can select consistent branches.

use std::collections::BTreeMap;


use super::def::RadicalTower;
use super::elem::TowerElem;
use crate::error::TowerError;
use crate::kernel::{perfect_power, power_split, MPoly, VarId};

/// Outcome of a simplification pass.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub tower: RadicalTower,
    /// Old generator -> element over the simplified tower. Contains an entry
    /// for every original step (identity for untouched ones).
    pub rewrites: BTreeMap<VarId, TowerElem>,
    /// Steps that disappeared (their field contribution was degree 1).
    pub eliminated: Vec<VarId>,
    /// Whether anything changed at all.
    pub changed: bool,
}

/// Splits a numerator polynomial that may contain generator variables into
/// the generator-monomial content (a generator-free gcd) and applies
/// an e-th-power split to the whole thing, treating generators as plain
/// variables. This is a sound formal extraction.
fn radicand_split(num: &MPoly, den: &MPoly, e: u32) -> (TowerElem, MPoly) {
    // num/den = num*den^(e-1) / den^e
    let n = num * &den.pow(e - 1);
    let (g, s) = power_split(&n, e);
    (
        TowerElem {
            num: g,
            den: den.clone(),
        },
        s,
    )
}

pub fn simplify_radicals(tower: &RadicalTower) -> Result<Simplified, TowerError> {
    let reg = tower.registry().clone();
    let mut out = RadicalTower::empty(&reg);
    let mut rewrites: BTreeMap<VarId, TowerElem> = BTreeMap::new();
    let mut eliminated: Vec<VarId> = Vec::new();
    let mut changed = false;

    for step in tower.steps() {
        // rewrite the radicand into the simplified world
        let alpha = out.elem_compose(&step.radicand, &rewrites)?;
        let e = step.index;
        let (gamma, rho) = radicand_split(&alpha.num, &alpha.den, e);
        if !gamma.num.is_one() || !gamma.den.is_one() {
            changed = true;
        }

        if rho.is_one() {
            // exact e-th power: the step dissolves; fixed branch convention
            rewrites.insert(step.var, out.elem_normalize(gamma.num, gamma.den)?);
            eliminated.push(step.var);
            changed = true;
            continue;
        }

        // try to express rho through existing steps
        if let Some(expr) = merge_into(&out, &rho, e)? {
            let merged = out.elem_mul(&gamma, &expr)?;
            rewrites.insert(step.var, merged);
            eliminated.push(step.var);
            changed = true;
            continue;
        }

        // keep the step (same generator variable, reduced radicand)
        let rho_elem = out.elem_normalize(rho, MPoly::one(&reg))?;
        let var = step.var;
        out.push_existing_step(var, e, rho_elem);
        let d_elem = TowerElem {
            num: MPoly::var(&reg, var),
            den: MPoly::one(&reg),
        };
        rewrites.insert(var, out.elem_mul(&gamma, &d_elem)?);
    }

    Ok(Simplified {
        tower: out,
        rewrites,
        eliminated,
        changed,
    })
}

/// Looks for an element `expr` of the current tower with `expr^e = rho`:
/// exact radicand equality for any index, and subset products of
/// square-root steps with generator-free radicands for `e = 2`.
fn merge_into(
    tower: &RadicalTower,
    rho: &MPoly,
    e: u32,
) -> Result<Option<TowerElem>, TowerError> {
    let reg = tower.registry();
    // exact match on the canonical radicand
    for s in tower.steps() {
        if s.index == e && s.radicand.den.is_one() && s.radicand.num == *rho {
            return Ok(Some(TowerElem {
                num: MPoly::var(reg, s.var),
                den: MPoly::one(reg),
            }));
        }
    }
    if e != 2 {
        return Ok(None);
    }
    // subset products over square-root steps with generator-free radicands
    let gen_vars = tower.generator_vars();
    let candidates: Vec<&super::def::TowerStep> = tower
        .steps()
        .iter()
        .filter(|s| {
            s.index == 2
                && s.radicand.den.is_one()
                && gen_vars.iter().all(|&d| !s.radicand.num.contains_var(d))
        })
        .collect();
    let rho_is_gen_free = gen_vars.iter().all(|&d| !rho.contains_var(d));
    if !rho_is_gen_free || candidates.is_empty() {
        return Ok(None);
    }
    let k = candidates.len();
    for mask in 1u32..(1 << k) {
        let mut prod = rho.clone();
        for (i, s) in candidates.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = &prod * &s.radicand.num;
            }
        }
        if let Some(beta) = perfect_power(&prod, 2) {
            // rho = (beta * prod_d / prod_rho)^2
            let mut num = beta;
            let mut den = MPoly::one(reg);
            for (i, s) in candidates.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    num = &num * &MPoly::var(reg, s.var);
                    den = &den * &s.radicand.num;
                }
            }
            return Ok(Some(tower.elem_normalize(num, den)?));
        }
    }
    Ok(None)
}

impl RadicalTower {
    /// Appends a step reusing an existing generator variable (simplification
    /// keeps the original variable ids so coefficient rewriting is a plain
    /// substitution).
    pub(crate) fn push_existing_step(&mut self, var: VarId, index: u32, radicand: TowerElem) {
        let steps = self.steps_mut();
        steps.push(super::def::TowerStep {
            var,
            index,
            radicand,
        });
    }

    /// Composes an element through generator rewrites (element-valued
    /// substitution).
    pub fn elem_compose(
        &self,
        elem: &TowerElem,
        rewrites: &BTreeMap<VarId, TowerElem>,
    ) -> Result<TowerElem, TowerError> {
        let num = self.compose_poly_elem(&elem.num, rewrites)?;
        let den = self.compose_poly_elem(&elem.den, rewrites)?;
        self.elem_div(&num, &den)
    }

    fn compose_poly_elem(
        &self,
        p: &MPoly,
        rewrites: &BTreeMap<VarId, TowerElem>,
    ) -> Result<TowerElem, TowerError> {
        let reg = self.registry();
        let mut acc = self.elem_zero();
        for (m, c) in p.terms() {
            let mut term = TowerElem {
                num: MPoly::constant(reg, c.clone()),
                den: MPoly::one(reg),
            };
            for (i, &exp) in m.0.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let v = VarId(i);
                let base = match rewrites.get(&v) {
                    Some(r) => r.clone(),
                    None => TowerElem {
                        num: MPoly::var(reg, v),
                        den: MPoly::one(reg),
                    },
                };
                let powed = self.elem_pow(&base, exp as i64)?;
                term = self.elem_mul(&term, &powed)?;
            }
            acc = self.elem_add(&acc, &term);
        }
        Ok(acc)
    }

    /// Verifies the simplification postcondition on this tower: no radicand
    /// has an extractable e-th-power factor and no merges remain.
    pub fn is_fully_simplified(&self) -> bool {
        let mut probe = RadicalTower::empty(self.registry());
        for step in self.steps() {
            let (gamma, rho) = radicand_split(&step.radicand.num, &step.radicand.den, step.index);
            if !gamma.num.is_one() || !gamma.den.is_one() || rho.is_one() {
                return false;
            }
            if let Ok(Some(_)) = merge_into(&probe, &rho, step.index) {
                return false;
            }
            probe.push_existing_step(step.var, step.index, step.radicand.clone());
        }
        true
    }
}

