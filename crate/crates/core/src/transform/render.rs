//! Rendering of polynomials, rational functions, tower elements and
//! transformed equations back into the surface syntax, including radical
//! expansion for back-substitutions.

use std::collections::BTreeMap;

use num_traits::{One, Signed};

use crate::frontend::{DiffPoly, Expr, JetVar};
use crate::kernel::{MPoly, Rat, RatFunc, VarId};
use crate::tower::RadicalTower;

/// How a variable renders: by name or by an arbitrary expression (used for
/// labels that stand for radicals).
pub struct VarRender<'a> {
    pub map: BTreeMap<VarId, Expr>,
    pub reg: &'a std::sync::Arc<crate::kernel::VarRegistry>,
}

impl VarRender<'_> {
    fn var(&self, v: VarId) -> Expr {
        self.map
            .get(&v)
            .cloned()
            .unwrap_or_else(|| Expr::Name(self.reg.name(v).to_owned()))
    }
}

fn mono_expr(m: &crate::kernel::Mono, coeff: &Rat, r: &VarRender) -> Expr {
    let mut factors: Vec<Expr> = Vec::new();
    let c = coeff.abs();
    if !c.is_one() || m.is_unit() {
        if c.denom().is_one() {
            factors.push(Expr::Num(Rat::from_integer(c.numer().clone())));
        } else {
            factors.push(Expr::div(
                Expr::Num(Rat::from_integer(c.numer().clone())),
                Expr::Num(Rat::from_integer(c.denom().clone())),
            ));
        }
    }
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let base = r.var(VarId(i));
        if e == 1 {
            factors.push(base);
        } else {
            factors.push(Expr::Pow(Box::new(base), Rat::from_integer(e.into())));
        }
    }
    factors
        .into_iter()
        .reduce(Expr::mul)
        .unwrap_or_else(|| Expr::num_i(1))
}

/// Polynomial as an expression, terms in descending canonical order.
pub fn poly_expr(p: &MPoly, r: &VarRender) -> Expr {
    if p.is_zero() {
        return Expr::num_i(0);
    }
    let mut acc: Option<Expr> = None;
    for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        let term = mono_expr(m, c, r);
        acc = Some(match acc {
            None => {
                if c.is_negative() {
                    Expr::Neg(Box::new(term))
                } else {
                    term
                }
            }
            Some(a) => {
                if c.is_negative() {
                    Expr::sub(a, term)
                } else {
                    Expr::add(a, term)
                }
            }
        });
    }
    acc.unwrap()
}

/// Rational function as an expression, with integral coefficients.
pub fn ratfunc_expr(f: &RatFunc, r: &VarRender) -> Expr {
    let mut lcm = num_bigint::BigInt::one();
    for (_, c) in f.num().terms() {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    let scale = Rat::from_integer(lcm);
    let num = f.num().scale(&scale);
    let den = f.den().scale(&scale);
    if den.is_one() {
        return poly_expr(&num, r);
    }
    Expr::div(poly_expr(&num, r), poly_expr(&den, r))
}

/// Expression for a tower generator: the radical over its (recursively
/// rendered) radicand.
pub fn radical_expr(tower: &RadicalTower, step_index: usize, r: &VarRender) -> Expr {
    let step = &tower.steps()[step_index];
    let num = poly_expr(&step.radicand.num, r);
    let radicand = if step.radicand.den.is_one() {
        num
    } else {
        Expr::div(num, poly_expr(&step.radicand.den, r))
    };
    if step.index == 2 {
        Expr::Sqrt(Box::new(radicand))
    } else {
        Expr::Root(Box::new(radicand), step.index)
    }
}

/// Renderer that expands every tower generator into its radical expression
/// (recursively, innermost first).
pub fn radical_render<'a>(
    tower: &RadicalTower,
    reg: &'a std::sync::Arc<crate::kernel::VarRegistry>,
) -> VarRender<'a> {
    let mut render = VarRender {
        map: BTreeMap::new(),
        reg,
    };
    for i in 0..tower.len() {
        let e = radical_expr(tower, i, &render);
        render.map.insert(tower.steps()[i].var, e);
    }
    render
}

/// Jet symbol in the surface grammar: primes for low orders of a single
/// variable, `diff(...)` otherwise.
fn jet_expr(jv: &JetVar, unknown_names: &[String]) -> Expr {
    Expr::Deriv {
        unknown: unknown_names[jv.unknown].clone(),
        multi_index: jv.deriv.clone(),
    }
}

/// Transformed equation as an expression over the new variables (coefficients
/// must be generator-free).
pub fn diffpoly_expr(
    g: &DiffPoly,
    unknown_names: &[String],
    r: &VarRender,
) -> Expr {
    if g.is_zero() {
        return Expr::num_i(0);
    }
    let mut acc: Option<Expr> = None;
    for (mono, coeff) in &g.terms {
        debug_assert!(coeff.den.is_one() || !coeff.den.is_zero());
        // render coefficient * jets; put a leading minus outside when the
        // coefficient is a negated single term
        let cf = RatFunc::new(coeff.num.clone(), coeff.den.clone());
        let mut jet_factors: Vec<Expr> = Vec::new();
        for (jv, p) in &mono.0 {
            let base = jet_expr(jv, unknown_names);
            if *p == 1 {
                jet_factors.push(base);
            } else {
                jet_factors.push(Expr::Pow(Box::new(base), Rat::from_integer((*p).into())));
            }
        }
        let (coeff_expr, negative) = signed_coeff_expr(&cf, r);
        let mut factors: Vec<Expr> = Vec::new();
        if let Some(c) = coeff_expr {
            factors.push(c);
        }
        factors.extend(jet_factors);
        let term = factors
            .into_iter()
            .reduce(Expr::mul)
            .unwrap_or_else(|| Expr::num_i(1));
        acc = Some(match acc {
            None => {
                if negative {
                    Expr::Neg(Box::new(term))
                } else {
                    term
                }
            }
            Some(a) => {
                if negative {
                    Expr::sub(a, term)
                } else {
                    Expr::add(a, term)
                }
            }
        });
    }
    acc.unwrap()
}

/// Coefficient as (expression-or-None-if-one, sign). Multi-term coefficients
/// are parenthesized by the printer automatically.
fn signed_coeff_expr(f: &RatFunc, r: &VarRender) -> (Option<Expr>, bool) {
    if f.is_one() {
        return (None, false);
    }
    if f.eq(&RatFunc::constant(f.registry(), Rat::from_integer((-1).into()))) {
        return (None, true);
    }
    let negative = f.num().num_terms() == 1 && {
        use num_traits::Signed;
        f.num().leading_coeff().is_negative()
    };
    let g = if negative { f.neg() } else { f.clone() };
    (Some(ratfunc_expr(&g, r)), negative)
}

/// Uppercases an unknown name for the transformed equation (`y` -> `Y`).
pub fn transformed_unknown_names(unknowns: &[String]) -> Vec<String> {
    unknowns
        .iter()
        .map(|u| {
            let mut c = u.chars();
            match c.next() {
                Some(first) => {
                    let up: String = first.to_uppercase().collect();
                    format!("{up}{}", c.as_str())
                }
                None => u.clone(),
            }
        })
        .collect()
}
