//! Applying a parametrization to an equation: substitute the coefficients,
//! rewrite the jets, clear denominators, and canonicalize up to a recorded
//! unit.

use std::collections::BTreeMap;

use num_traits::One;

use super::jets::JetTable;
use crate::error::TransformError;
use crate::frontend::{DiffPoly, JetVar};
use crate::kernel::{poly_gcd, MPoly, Rat, RatFunc, VarId};
use crate::parametrize::Parametrization;
use crate::tower::{RadicalTower, TowerElem};

/// Substitutes the parametrization into every coefficient and rewrites the
/// jets through the table. The result has rational coefficients in the fresh
/// variables (represented as generator-free tower elements) and is not yet
/// normalized.
pub fn transform_equation(
    f: &DiffPoly,
    tower: &RadicalTower,
    x_vars: &[VarId],
    q: &Parametrization,
    table: &JetTable,
) -> Result<DiffPoly, TransformError> {
    let reg = q.x_components[0].registry().clone();
    let bindings = q.bindings(x_vars, &tower.generator_vars());
    let mut out = DiffPoly::zero(f.n_vars, f.n_unknowns);
    for (mono, coeff) in &f.terms {
        let c_z = coeff
            .substitute(&bindings)
            .map_err(TransformError::Kernel)?;
        // rewrite the jet monomial factor by factor
        let mut factor_poly = DiffPoly::constant(
            f.n_vars,
            f.n_unknowns,
            TowerElem {
                num: c_z.num().clone(),
                den: c_z.den().clone(),
            },
        );
        for (jv, pow) in &mono.0 {
            let row = table
                .row(&jv.deriv)
                .ok_or_else(|| TransformError::InvalidParametrization("jet order exceeded".into()))?;
            let mut lin = DiffPoly::zero(f.n_vars, f.n_unknowns);
            for (zidx, c) in row {
                lin.add_term(
                    tower,
                    crate::frontend::JetMono::var(JetVar {
                        unknown: jv.unknown,
                        deriv: zidx.clone(),
                    }),
                    TowerElem {
                        num: c.num().clone(),
                        den: c.den().clone(),
                    },
                );
            }
            for _ in 0..*pow {
                factor_poly = factor_poly
                    .mul(tower, &lin)
                    .map_err(TransformError::Tower)?;
            }
        }
        out = out.add(tower, &factor_poly);
    }
    let _ = reg;
    Ok(out)
}

/// Clears denominators, strips the coefficient content, and fixes the sign
/// so that the least jet monomial's leading coefficient is positive.
/// Returns the canonical equation and the removed unit factor, so that
/// `input = unit * canonical`.
pub fn normalize_equation(
    g: &DiffPoly,
    tower: &RadicalTower,
) -> Result<(DiffPoly, RatFunc), TransformError> {
    let reg = tower.registry().clone();
    if g.is_zero() {
        return Ok((g.clone(), RatFunc::one(&reg)));
    }
    // lcm of the denominators
    let mut lcm = MPoly::one(&reg);
    for c in g.terms.values() {
        let gg = poly_gcd(&lcm, &c.den);
        lcm = (&lcm * &c.den).div_exact(&gg);
    }
    // scaled integer numerators
    let mut nums: BTreeMap<crate::frontend::JetMono, MPoly> = BTreeMap::new();
    for (m, c) in &g.terms {
        let factor = lcm.div_exact(&c.den);
        nums.insert(m.clone(), &c.num * &factor);
    }
    // polynomial content
    let mut content: Option<MPoly> = None;
    for p in nums.values() {
        content = Some(match content {
            None => p.unit_normalized().0,
            Some(acc) => poly_gcd(&acc, p),
        });
        if content.as_ref().map(|c| c.is_one()).unwrap_or(false) {
            break;
        }
    }
    let content = content.unwrap();
    // joint rational content of the cofactors
    let mut rat_content: Option<Rat> = None;
    let mut reduced: BTreeMap<crate::frontend::JetMono, MPoly> = BTreeMap::new();
    for (m, p) in nums {
        let q = p.div_exact(&content);
        let rc = q.rational_content();
        rat_content = Some(match rat_content {
            None => rc.clone(),
            Some(acc) => rat_gcd(&acc, &rc),
        });
        reduced.insert(m, q);
    }
    let mut rat_content = rat_content.unwrap();
    // sign convention from the least jet monomial
    {
        let (_, first) = reduced.iter().next().unwrap();
        let lead_sign_negative = {
            use num_traits::Signed;
            first
                .scale(&(Rat::one() / rat_content.clone()))
                .leading_coeff()
                .is_negative()
        };
        if lead_sign_negative {
            rat_content = -rat_content;
        }
    }
    let mut out = DiffPoly::zero(g.n_vars, g.n_unknowns);
    for (m, p) in reduced {
        let c = p.scale(&(Rat::one() / rat_content.clone()));
        out.terms.insert(
            m,
            TowerElem {
                num: c,
                den: MPoly::one(&reg),
            },
        );
    }
    // unit: input = unit * canonical, unit = content * rat_content / lcm
    let unit = RatFunc::new(content.scale(&rat_content), lcm);
    Ok((out, unit))
}

pub(crate) fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num: BigInt = a.numer().gcd(b.numer());
    let den: BigInt = a.denom().lcm(b.denom());
    Rat::new(num, den).abs()
}

/// True when no coefficient involves a tower generator after normal form.
pub fn rationality_check(g: &DiffPoly, tower: &RadicalTower) -> bool {
    g.is_rational(tower)
}

/// Admissibility of a system equation for the rational-coefficients
/// guarantee: no monomial may mix derivatives of different unknowns.
pub fn admissibility_warnings(equations: &[DiffPoly]) -> Vec<String> {
    let mut out = Vec::new();
    for (k, eq) in equations.iter().enumerate() {
        for mono in eq.terms.keys() {
            if mono.unknowns().len() > 1 {
                out.push(format!(
                    "equation {}: monomial {} mixes derivatives of several unknowns; the \
                     rational-coefficient guarantee covers only single-unknown monomials",
                    k + 1,
                    mono
                ));
            }
        }
    }
    out
}
