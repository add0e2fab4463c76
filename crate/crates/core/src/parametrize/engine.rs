//! Strategy pipeline that builds a proper rational parametrization of a
//! tower variety, or decides non-rationality in the certified
//! hyperelliptic-step case.
//!
//! Per tower step, in order: exact-power extraction; solve-for (the radicand
//! is linear in a still-free coordinate, preferring the most recently
//! introduced fresh parameter so original variables survive as identity
//! components); the conic reduction for square-root steps whose power-free
//! part involves one free coordinate; and a homogeneity split that peels off
//! scaling variables. Every step carries its own inverse, so properness and
//! the composed inverse come out of the construction.

use std::collections::BTreeMap;
use std::sync::Arc;


use super::conic::{parametrize_conic, ConicFailure};
use super::types::{NonRationalWitness, ParamOutcome, Parametrization};
use crate::error::TowerError;
use crate::kernel::{MPoly, RatFunc, VarId, VarKind, VarRegistry};
use crate::tower::RadicalTower;

struct FreeParam {
    var: VarId,
    /// Original coordinate slot this parameter occupies (decides the final
    /// z-numbering).
    slot: usize,
    /// Introduction order; larger = more recent.
    birth: usize,
}

struct Engine {
    reg: Arc<VarRegistry>,
    x_vars: Vec<VarId>,
    /// Values of bound coordinates (x's and consumed fresh parameters), over
    /// the current free parameters.
    bindings: BTreeMap<VarId, RatFunc>,
    /// Values of processed generators.
    d_values: BTreeMap<VarId, RatFunc>,
    free: Vec<FreeParam>,
    /// Expression of each free parameter in terms of the original
    /// coordinates and generators (the stepwise inverse).
    cobind: BTreeMap<VarId, RatFunc>,
    trace: Vec<String>,
    notes: Vec<String>,
    births: usize,
}

impl Engine {
    fn new(reg: &Arc<VarRegistry>, x_vars: &[VarId]) -> Self {
        let mut e = Engine {
            reg: reg.clone(),
            x_vars: x_vars.to_vec(),
            bindings: BTreeMap::new(),
            d_values: BTreeMap::new(),
            free: Vec::new(),
            cobind: BTreeMap::new(),
            trace: Vec::new(),
            notes: Vec::new(),
            births: 0,
        };
        for (slot, &x) in x_vars.iter().enumerate() {
            e.free.push(FreeParam {
                var: x,
                slot,
                birth: 0,
            });
            e.cobind.insert(x, RatFunc::var(reg, x));
        }
        e
    }

    fn fresh(&mut self, hint: &str) -> VarId {
        let name = self.reg.fresh_name(hint);
        let (reg, v) = self.reg.with_var(&name, VarKind::Fresh);
        self.reg = reg;
        v
    }

    /// Current substitution for a tower radicand: bound coordinates map to
    /// their values, free ones stay, processed generators map to theirs.
    fn full_bindings(&self) -> BTreeMap<VarId, RatFunc> {
        let mut map = self.bindings.clone();
        for (v, f) in &self.d_values {
            map.insert(*v, f.clone());
        }
        map
    }

    fn is_free(&self, v: VarId) -> bool {
        self.free.iter().any(|p| p.var == v)
    }

    /// Re-expresses every stored value through `var := value`.
    fn propagate(&mut self, var: VarId, value: &RatFunc) -> Result<(), TowerError> {
        let mut single = BTreeMap::new();
        single.insert(var, value.clone());
        for f in self.bindings.values_mut() {
            if f.contains_var(var) {
                *f = f
                    .substitute(&single)
                    .map_err(TowerError::Kernel)?;
            }
        }
        for f in self.d_values.values_mut() {
            if f.contains_var(var) {
                *f = f
                    .substitute(&single)
                    .map_err(TowerError::Kernel)?;
            }
        }
        Ok(())
    }

    /// Binds a free coordinate (original variable or fresh parameter).
    fn bind(&mut self, var: VarId, value: RatFunc, replacement: Option<FreeParam>) -> Result<(), TowerError> {
        self.propagate(var, &value)?;
        self.bindings.insert(var, value);
        self.cobind.remove(&var);
        let idx = self
            .free
            .iter()
            .position(|p| p.var == var)
            .expect("binding a non-free coordinate");
        match replacement {
            Some(p) => self.free[idx] = p,
            None => {
                self.free.remove(idx);
            }
        }
        Ok(())
    }

    fn free_vars_in(&self, f: &RatFunc) -> Vec<VarId> {
        f.vars_used()
            .into_iter()
            .filter(|&v| self.is_free(v))
            .collect()
    }

    fn run(mut self, tower: &RadicalTower) -> Result<ParamOutcome, TowerError> {
        let n = self.x_vars.len();
        for (i, step) in tower.steps().iter().enumerate() {
            let e = step.index;
            let step_name = tower.registry().name(step.var).to_owned();
            let mut rounds = 0;
            'strategies: loop {
                rounds += 1;
                if rounds > 4 {
                    return Ok(ParamOutcome::Unknown {
                        notes: self.note_exhausted(&step_name),
                    });
                }
                let alpha = step
                    .radicand
                    .substitute(&self.full_bindings())
                    .map_err(TowerError::Kernel)?;

                // exact e-th power: the generator gets a rational value
                if let Some(root) = alpha.perfect_power(e) {
                    self.d_values.insert(step.var, root);
                    self.trace
                        .push(format!("{step_name}: radicand is an exact power"));
                    break 'strategies;
                }

                // solve-for: radicand linear in a free coordinate
                if let Some((v, a, b, den)) = self.solve_for_candidate(&alpha) {
                    let t = self.fresh("@t");
                    let slot = self.free.iter().find(|p| p.var == v).unwrap().slot;
                    self.births += 1;
                    let birth = self.births;
                    // v := (t^e * den - b) / a
                    let te = RatFunc::var(&self.reg, t).pow(e as i64);
                    let value = te
                        .mul(&RatFunc::from_poly(den))
                        .sub(&RatFunc::from_poly(b))
                        .div(&RatFunc::from_poly(a));
                    let d_expr = RatFunc::var(&self.reg, step.var);
                    self.bind(v, value, Some(FreeParam { var: t, slot, birth }))?;
                    self.d_values
                        .insert(step.var, RatFunc::var(&self.reg, t));
                    self.cobind.insert(t, d_expr);
                    self.trace.push(format!(
                        "{step_name}: solved the radicand for a linear coordinate"
                    ));
                    break 'strategies;
                }

                // conic reduction for square roots
                if e == 2 {
                    let (g, s) = alpha.power_split(2);
                    let sv = self.free_vars_in(&RatFunc::from_poly(s.clone()));
                    if sv.len() == 1 {
                        let u = sv[0];
                        let sdeg = s.degree_in(u);
                        if sdeg <= 2 {
                            match self.conic_step(step.var, &step_name, u, &g, &s) {
                                Ok(()) => break 'strategies,
                                Err(ConicFailure::NoRationalPointFound)
                                | Err(ConicFailure::Degenerate) => {
                                    self.notes.push(format!(
                                        "{step_name}: conic has no rational point in the ground \
                                         field; a parametrization may exist over an extension"
                                    ));
                                    return Ok(ParamOutcome::Unknown { notes: self.notes });
                                }
                                Err(ConicFailure::NotAConic) => {}
                            }
                        } else {
                            // genus >= 1 unless another strategy still applies
                            if self.homogeneity_split(&alpha, e, &step_name)? {
                                continue 'strategies;
                            }
                            if n == 1 {
                                return Ok(ParamOutcome::ProvenNonRational(NonRationalWitness {
                                    step: i,
                                    reduced_curve: format!("Y^2 = {s}"),
                                    degree: sdeg,
                                }));
                            }
                            self.notes.push(format!(
                                "{step_name}: reduced curve Y^2 = {s} has genus >= 1, but with \
                                 several variables no impossibility certificate is available"
                            ));
                            return Ok(ParamOutcome::Unknown { notes: self.notes });
                        }
                    } else if sv.is_empty() {
                        self.notes.push(format!(
                            "{step_name}: power-free part {s} is constant and not a rational \
                             square; a complex parametrization exists outside exact rational \
                             arithmetic"
                        ));
                        return Ok(ParamOutcome::Unknown { notes: self.notes });
                    }
                }

                // homogeneity split
                if self.homogeneity_split(
                    &step
                        .radicand
                        .substitute(&self.full_bindings())
                        .map_err(TowerError::Kernel)?,
                    e,
                    &step_name,
                )? {
                    continue 'strategies;
                }

                return Ok(ParamOutcome::Unknown {
                    notes: self.note_exhausted(&step_name),
                });
            }
        }
        Ok(ParamOutcome::Found(Box::new(self.finish(tower)?)))
    }

    fn note_exhausted(mut self, step_name: &str) -> Vec<String> {
        self.notes
            .push(format!("{step_name}: parametrization strategies exhausted"));
        self.notes
    }

    /// Linear solve-for candidate: most recent fresh parameter first, then
    /// original variables in declaration order.
    fn solve_for_candidate(&self, alpha: &RatFunc) -> Option<(VarId, MPoly, MPoly, MPoly)> {
        let mut fresh: Vec<&FreeParam> = self
            .free
            .iter()
            .filter(|p| self.reg.kind(p.var) == VarKind::Fresh)
            .collect();
        fresh.sort_by_key(|p| std::cmp::Reverse(p.birth));
        let mut base: Vec<&FreeParam> = self
            .free
            .iter()
            .filter(|p| self.reg.kind(p.var) == VarKind::Base)
            .collect();
        base.sort_by_key(|p| p.slot);
        for p in fresh.into_iter().chain(base) {
            let v = p.var;
            if alpha.num().degree_in(v) == 1 && alpha.den().degree_in(v) == 0 {
                let cs = alpha.num().coeffs_in(v);
                let a = cs.get(&1).cloned().unwrap();
                let b = cs
                    .get(&0)
                    .cloned()
                    .unwrap_or_else(|| MPoly::zero(&self.reg));
                return Some((v, a, b, alpha.den().clone()));
            }
        }
        None
    }

    /// Reduces `d^2 = g^2 * s(u)` through the conic `Y^2 = s(u)`.
    fn conic_step(
        &mut self,
        d_var: VarId,
        step_name: &str,
        u: VarId,
        g: &RatFunc,
        s: &MPoly,
    ) -> Result<(), ConicFailure> {
        let yvar = self.fresh("@Y");
        let zvar = self.fresh("@t");
        let q = &(&MPoly::var(&self.reg, yvar) * &MPoly::var(&self.reg, yvar)) - &s.lift(&self.reg);
        let conic = parametrize_conic(&q, u, yvar, zvar)?;
        // d = g(u) * Y; compose with u = u(z)
        let mut ub = BTreeMap::new();
        ub.insert(u, conic.u.clone());
        let g_of_z = g
            .lift(&self.reg)
            .substitute(&ub)
            .map_err(|_| ConicFailure::NotAConic)?;
        let d_value = g_of_z.mul(&conic.v);
        // inverse bookkeeping before rebinding u
        let e_u = self.cobind[&u].clone();
        let e_y = {
            // Y = d / g, with every free parameter of g expressed in the
            // original coordinates
            let mut orig = BTreeMap::new();
            for v in self.free_vars_in(g) {
                orig.insert(v, self.cobind[&v].clone());
            }
            let g_orig = g
                .lift(&self.reg)
                .substitute(&orig)
                .map_err(|_| ConicFailure::NotAConic)?;
            RatFunc::var(&self.reg, d_var).div(&g_orig)
        };
        let mut slope_bind = BTreeMap::new();
        slope_bind.insert(u, e_u);
        slope_bind.insert(yvar, e_y);
        let e_z = conic
            .slope
            .lift(&self.reg)
            .substitute(&slope_bind)
            .map_err(|_| ConicFailure::NotAConic)?;
        let slot = self.free.iter().find(|p| p.var == u).unwrap().slot;
        self.births += 1;
        let birth = self.births;
        self.bind(
            u,
            conic.u.clone(),
            Some(FreeParam {
                var: zvar,
                slot,
                birth,
            }),
        )
        .map_err(|_| ConicFailure::NotAConic)?;
        self.d_values.insert(d_var, d_value);
        self.cobind.insert(zvar, e_z);
        self.trace.push(format!(
            "{step_name}: conic reduction through a rational point"
        ));
        Ok(())
    }

    /// Splits off scaling variables when the radicand is homogeneous of
    /// degree e in the free coordinates it uses. Returns true when a split
    /// happened.
    fn homogeneity_split(
        &mut self,
        alpha: &RatFunc,
        e: u32,
        step_name: &str,
    ) -> Result<bool, TowerError> {
        let used = self.free_vars_in(alpha);
        if used.len() < 2 {
            return Ok(false);
        }
        let deg_of = |p: &MPoly, vs: &[VarId]| -> Option<u32> {
            let mut d: Option<u32> = None;
            for (m, _) in p.terms() {
                let total: u32 = vs.iter().map(|&v| m.exp(v)).sum();
                match d {
                    None => d = Some(total),
                    Some(x) if x == total => {}
                    _ => return None,
                }
            }
            d
        };
        let dn = deg_of(alpha.num(), &used);
        let dd = deg_of(alpha.den(), &used);
        let (Some(dn), Some(dd)) = (dn, dd) else {
            return Ok(false);
        };
        if dn < dd || dn - dd != e {
            return Ok(false);
        }
        // pivot: last used variable; others become pivot * t
        let pivot = *used.last().unwrap();
        let others: Vec<VarId> = used.iter().copied().filter(|&v| v != pivot).collect();
        for v in others {
            let t = self.fresh("@t");
            let slot = self.free.iter().find(|p| p.var == v).unwrap().slot;
            self.births += 1;
            let birth = self.births;
            let value = RatFunc::var(&self.reg, pivot).mul(&RatFunc::var(&self.reg, t));
            let e_t = self.cobind[&v].clone().div(&self.cobind[&pivot]);
            self.bind(v, value, Some(FreeParam { var: t, slot, birth }))?;
            self.cobind.insert(t, e_t);
        }
        self.trace.push(format!(
            "{step_name}: homogeneous radicand, split off a scaling variable"
        ));
        Ok(true)
    }

    /// Renames the surviving free parameters to z-variables and builds the
    /// final parametrization with its composed inverse.
    fn finish(mut self, tower: &RadicalTower) -> Result<Parametrization, TowerError> {
        let n = self.x_vars.len();
        let mut order: Vec<usize> = (0..self.free.len()).collect();
        order.sort_by_key(|&i| self.free[i].slot);
        debug_assert_eq!(self.free.len(), n);

        // fresh z variables
        let mut z_vars = Vec::with_capacity(n);
        for k in 0..n {
            let hint = if n == 1 {
                "z".to_owned()
            } else {
                format!("z{}", k + 1)
            };
            let z = self.fresh(&hint);
            z_vars.push(z);
        }
        let mut rename: BTreeMap<VarId, RatFunc> = BTreeMap::new();
        for (k, &i) in order.iter().enumerate() {
            rename.insert(self.free[i].var, RatFunc::var(&self.reg, z_vars[k]));
        }

        let mut x_components = Vec::with_capacity(n);
        for &x in &self.x_vars {
            let val = match self.bindings.get(&x) {
                Some(f) => f.clone(),
                None => RatFunc::var(&self.reg, x),
            };
            x_components.push(apply(&val, &self.reg, &rename)?);
        }
        let mut d_components = Vec::with_capacity(tower.len());
        for step in tower.steps() {
            let f = self
                .d_values
                .get(&step.var)
                .expect("every step processed")
                .clone();
            d_components.push(apply(&f, &self.reg, &rename)?);
        }

        // labels for the inverse: one per component (x's then generators)
        let mut label_vars = Vec::new();
        let letters = [
            "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
        ];
        for k in 0..n + tower.len() {
            let hint = letters.get(k).copied().unwrap_or("L");
            let name = self.reg.fresh_name(hint);
            let (reg, v) = self.reg.with_var(&name, VarKind::Fresh);
            self.reg = reg;
            label_vars.push(v);
        }
        let mut to_labels: BTreeMap<VarId, RatFunc> = BTreeMap::new();
        for (k, &x) in self.x_vars.iter().enumerate() {
            to_labels.insert(x, RatFunc::var(&self.reg, label_vars[k]));
        }
        for (k, step) in tower.steps().iter().enumerate() {
            to_labels.insert(step.var, RatFunc::var(&self.reg, label_vars[n + k]));
        }
        let mut inverse = Vec::with_capacity(n);
        for &i in &order {
            let e = self.cobind[&self.free[i].var].clone();
            inverse.push(apply(&e, &self.reg, &to_labels)?);
        }

        Ok(Parametrization {
            z_vars,
            x_components,
            d_components,
            inverse: Some(inverse),
            label_vars,
            trace: self.trace,
        })
    }
}

fn apply(
    f: &RatFunc,
    reg: &Arc<VarRegistry>,
    bindings: &BTreeMap<VarId, RatFunc>,
) -> Result<RatFunc, TowerError> {
    f.lift(reg).substitute(bindings).map_err(TowerError::Kernel)
}

/// Attempts a proper rational parametrization of the (simplified) tower.
/// The registry inside the returned parametrization extends the tower's.
pub fn parametrize_tower(
    tower: &RadicalTower,
    x_vars: &[VarId],
) -> Result<ParamOutcome, TowerError> {
    let engine = Engine::new(tower.registry(), x_vars);
    engine.run(tower)
}
