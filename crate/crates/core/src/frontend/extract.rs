//! Conversion of parsed expressions into jet polynomials over a radical
//! tower: radicals are normalized into tower steps, rational powers become
//! generator powers, and the tower is simplified before handing back.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, ToPrimitive};

use super::ast::Expr;
use super::diffpoly::{DiffPoly, JetVar};
use super::parse::SymbolTable;
use crate::error::FrontendError;
use crate::kernel::{MPoly, VarId, VarKind, VarRegistry};
use crate::tower::{simplify_radicals, RadicalTower, TowerElem};

/// Result of tower extraction over a set of equations.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub tower: RadicalTower,
    pub equations: Vec<DiffPoly>,
    /// Branch-convention notes produced by simplification rewrites.
    pub notes: Vec<String>,
}

struct Builder<'a> {
    tower: RadicalTower,
    symbols: &'a SymbolTable,
}

impl Builder<'_> {
    fn reg(&self) -> &Arc<VarRegistry> {
        self.tower.registry()
    }

    fn n(&self) -> usize {
        self.symbols.vars.len()
    }

    fn ell(&self) -> usize {
        self.symbols.unknowns.len()
    }

    /// Finds or creates a tower step for an e-th root of `radicand`.
    fn radical(&mut self, index: u32, radicand: TowerElem) -> Result<TowerElem, FrontendError> {
        if radicand.is_zero() {
            return Ok(self.tower.elem_zero());
        }
        for step in self.tower.steps() {
            if step.index == index && step.radicand == radicand {
                return Ok(TowerElem {
                    num: MPoly::var(self.reg(), step.var),
                    den: MPoly::one(self.reg()),
                });
            }
        }
        let hint = format!("d{}", self.tower.len() + 1);
        let var = self.tower.push_step(&hint, index, radicand);
        Ok(TowerElem {
            num: MPoly::var(self.reg(), var),
            den: MPoly::one(self.reg()),
        })
    }

    fn eval(&mut self, e: &Expr) -> Result<DiffPoly, FrontendError> {
        let n = self.n();
        let ell = self.ell();
        match e {
            Expr::Num(r) => {
                let c = TowerElem {
                    num: MPoly::constant(self.reg(), r.clone()),
                    den: MPoly::one(self.reg()),
                };
                Ok(DiffPoly::constant(n, ell, c))
            }
            Expr::Name(name) => {
                let v = self
                    .reg()
                    .lookup(name)
                    .unwrap_or_else(|| panic!("undeclared name `{name}` survived parsing"));
                let c = TowerElem {
                    num: MPoly::var(self.reg(), v),
                    den: MPoly::one(self.reg()),
                };
                Ok(DiffPoly::constant(n, ell, c))
            }
            Expr::Add(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                Ok(x.add(&self.tower, &y))
            }
            Expr::Sub(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                Ok(x.sub(&self.tower, &y))
            }
            Expr::Neg(a) => {
                let x = self.eval(a)?;
                Ok(x.neg(&self.tower))
            }
            Expr::Mul(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                x.mul(&self.tower, &y).map_err(FrontendError::from)
            }
            Expr::Div(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                if !y.is_jet_free() {
                    return Err(FrontendError::NonPolynomial(
                        "division by an expression containing the unknown".to_owned(),
                    ));
                }
                let c = y.constant_part(&self.tower);
                if c.is_zero() {
                    return Err(FrontendError::NonPolynomial(
                        "division by zero".to_owned(),
                    ));
                }
                let inv = self.tower.elem_inv(&c).map_err(FrontendError::from)?;
                x.scale(&self.tower, &inv).map_err(FrontendError::from)
            }
            Expr::Pow(a, exp) => {
                let x = self.eval(a)?;
                if exp.denom().is_one() {
                    let k = exp
                        .numer()
                        .to_i64()
                        .ok_or_else(|| FrontendError::NonPolynomial("exponent overflow".into()))?;
                    if k >= 0 {
                        return x
                            .pow(&self.tower, k as u32)
                            .map_err(FrontendError::from);
                    }
                    if !x.is_jet_free() {
                        return Err(FrontendError::NonPolynomial(
                            "negative power of an expression containing the unknown".to_owned(),
                        ));
                    }
                    let c = x.constant_part(&self.tower);
                    let p = self.tower.elem_pow(&c, k).map_err(FrontendError::from)?;
                    return Ok(DiffPoly::constant(n, ell, p));
                }
                // rational exponent p/q: route through a tower step d^q = base
                if !x.is_jet_free() {
                    return Err(FrontendError::UnsupportedRadicand);
                }
                let base = x.constant_part(&self.tower);
                let q = exp
                    .denom()
                    .to_u32()
                    .ok_or_else(|| FrontendError::NonPolynomial("exponent overflow".into()))?;
                let p = exp
                    .numer()
                    .to_i64()
                    .ok_or_else(|| FrontendError::NonPolynomial("exponent overflow".into()))?;
                let d = self.radical(q, base)?;
                let powed = self.tower.elem_pow(&d, p).map_err(FrontendError::from)?;
                Ok(DiffPoly::constant(n, ell, powed))
            }
            Expr::Sqrt(a) => self.radical_node(a, 2),
            Expr::Root(a, k) => self.radical_node(a, *k),
            Expr::Deriv {
                unknown,
                multi_index,
            } => {
                let u = self
                    .symbols
                    .unknowns
                    .iter()
                    .position(|x| x == unknown)
                    .expect("unknown resolved during parsing");
                let jet = JetVar {
                    unknown: u,
                    deriv: multi_index.clone(),
                };
                Ok(DiffPoly::jet(n, ell, jet, &self.tower))
            }
        }
    }

    fn radical_node(&mut self, a: &Expr, index: u32) -> Result<DiffPoly, FrontendError> {
        let x = self.eval(a)?;
        if !x.is_jet_free() {
            return Err(FrontendError::UnsupportedRadicand);
        }
        let base = x.constant_part(&self.tower);
        let d = self.radical(index, base)?;
        Ok(DiffPoly::constant(self.n(), self.ell(), d))
    }
}

/// Extracts the minimal radical tower for a family of equations and rewrites
/// them as jet polynomials with tower-element coefficients. The tower comes
/// back simplified; the equations are rewritten accordingly.
pub fn extract_tower(
    exprs: &[Expr],
    symbols: &SymbolTable,
    reg: &Arc<VarRegistry>,
) -> Result<Extraction, FrontendError> {
    debug_assert!(symbols
        .vars
        .iter()
        .all(|v| reg.lookup(v).map(|id| reg.kind(id) == VarKind::Base) == Some(true)));
    let mut b = Builder {
        tower: RadicalTower::empty(reg),
        symbols,
    };
    let mut equations = Vec::with_capacity(exprs.len());
    for e in exprs {
        equations.push(b.eval(e)?);
    }
    let mut notes = Vec::new();
    let simplified = simplify_radicals(&b.tower).map_err(FrontendError::from)?;
    if simplified.changed {
        for step in b.tower.steps() {
            let rw = &simplified.rewrites[&step.var];
            let name = b.tower.registry().name(step.var);
            let ident = rw.den.is_one()
                && rw.num == MPoly::var(b.tower.registry(), step.var);
            if !ident {
                notes.push(format!(
                    "radical rewrite (fixed branch): {name} = {rw}"
                ));
            }
        }
        equations = equations
            .iter()
            .map(|q| q.rewrite_coeffs(&simplified.tower, &simplified.rewrites))
            .collect::<Result<_, _>>()
            .map_err(FrontendError::from)?;
    }
    Ok(Extraction {
        tower: simplified.tower,
        equations,
        notes,
    })
}

/// Numeric faithfulness helper: evaluates an original expression at a
/// rational point with principal-branch radicals.
pub fn eval_expr_numeric(
    e: &Expr,
    symbols: &SymbolTable,
    reg: &Arc<VarRegistry>,
    point: &BTreeMap<VarId, crate::kernel::CNum>,
    jets: &BTreeMap<JetVar, crate::kernel::CNum>,
    prec: u32,
) -> Result<crate::kernel::CNum, FrontendError> {
    use crate::kernel::{all_nth_roots, CNum};
    fn go(
        e: &Expr,
        symbols: &SymbolTable,
        reg: &Arc<VarRegistry>,
        point: &BTreeMap<VarId, CNum>,
        jets: &BTreeMap<JetVar, CNum>,
        prec: u32,
    ) -> Result<CNum, FrontendError> {
        Ok(match e {
            Expr::Num(r) => CNum::from_rat(r, prec),
            Expr::Name(n) => point
                .get(&reg.lookup(n).expect("declared"))
                .expect("bound")
                .clone(),
            Expr::Add(a, b) => go(a, symbols, reg, point, jets, prec)?
                .add(&go(b, symbols, reg, point, jets, prec)?, prec),
            Expr::Sub(a, b) => go(a, symbols, reg, point, jets, prec)?
                .sub(&go(b, symbols, reg, point, jets, prec)?, prec),
            Expr::Mul(a, b) => go(a, symbols, reg, point, jets, prec)?
                .mul(&go(b, symbols, reg, point, jets, prec)?, prec),
            Expr::Div(a, b) => {
                let d = go(b, symbols, reg, point, jets, prec)?;
                if d.is_zero() {
                    return Err(FrontendError::Kernel(
                        crate::error::KernelError::PrecisionLoss,
                    ));
                }
                go(a, symbols, reg, point, jets, prec)?.div(&d, prec)
            }
            Expr::Neg(a) => go(a, symbols, reg, point, jets, prec)?.neg(),
            Expr::Pow(a, r) => {
                let base = go(a, symbols, reg, point, jets, prec)?;
                let p = r.numer().to_i64().unwrap();
                let q = r.denom().to_u32().unwrap();
                let root = if q == 1 {
                    base
                } else {
                    principal_root(&base, q, prec)
                };
                let powed = root.pow_u32(p.unsigned_abs() as u32, prec);
                if p < 0 {
                    CNum::from_rat(&crate::kernel::rat_i(1), prec).div(&powed, prec)
                } else {
                    powed
                }
            }
            Expr::Sqrt(a) => {
                let base = go(a, symbols, reg, point, jets, prec)?;
                principal_root(&base, 2, prec)
            }
            Expr::Root(a, k) => {
                let base = go(a, symbols, reg, point, jets, prec)?;
                principal_root(&base, *k, prec)
            }
            Expr::Deriv {
                unknown,
                multi_index,
            } => {
                let u = symbols.unknowns.iter().position(|x| x == unknown).unwrap();
                jets.get(&JetVar {
                    unknown: u,
                    deriv: multi_index.clone(),
                })
                .expect("jet value bound")
                .clone()
            }
        })
    }
    fn principal_root(v: &crate::kernel::CNum, e: u32, prec: u32) -> crate::kernel::CNum {
        // principal branch: the root with the largest real part, ties broken
        // by the largest imaginary part (matches the positive real root on
        // positive real inputs)
        let roots = all_nth_roots(v, e, prec);
        roots
            .into_iter()
            .max_by(|a, b| {
                a.re.cmp_value(&b.re)
                    .then_with(|| a.im.cmp_value(&b.im))
            })
            .expect("nonempty root list")
    }
    go(e, symbols, reg, point, jets, prec)
}
