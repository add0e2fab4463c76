//! Radical towers: chains of field extensions, each generated by an e-th
//! root of an element of the field below.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use std::sync::Arc;

use super::elem::TowerElem;
use crate::error::KernelError;
use crate::kernel::{
    all_nth_roots, eval_poly_complex, CNum, MPoly, VarId, VarKind, VarRegistry,
};

/// One tower step: `var^index = radicand`, the radicand an element of the
/// tower below (its numerator may use earlier generators; its denominator is
/// generator-free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerStep {
    pub var: VarId,
    pub index: u32,
    pub radicand: TowerElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalTower {
    reg: Arc<VarRegistry>,
    steps: Vec<TowerStep>,
}

impl RadicalTower {
    pub fn empty(reg: &Arc<VarRegistry>) -> Self {
        RadicalTower {
            reg: reg.clone(),
            steps: Vec::new(),
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn steps(&self) -> &[TowerStep] {
        &self.steps
    }

    pub(crate) fn steps_mut(&mut self) -> &mut Vec<TowerStep> {
        &mut self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step_for(&self, v: VarId) -> Option<&TowerStep> {
        self.steps.iter().find(|s| s.var == v)
    }

    /// Appends a step with a fresh generator variable; the radicand must be
    /// an element over the existing steps.
    pub fn push_step(&mut self, name_hint: &str, index: u32, radicand: TowerElem) -> VarId {
        let name = self.reg.fresh_name(name_hint);
        let (reg, var) = self.reg.with_var(&name, VarKind::Radical);
        self.reg = reg;
        self.steps.push(TowerStep {
            var,
            index,
            radicand,
        });
        var
    }

    /// Replaces the registry with a longer, compatible one (used when the
    /// pipeline appends fresh variables after extraction).
    pub fn lift_registry(&mut self, reg: &Arc<VarRegistry>) {
        debug_assert!(self.reg.is_prefix_of(reg));
        self.reg = reg.clone();
    }

    pub fn generator_vars(&self) -> Vec<VarId> {
        self.steps.iter().map(|s| s.var).collect()
    }

    /// Defining equations: `var^index * den(radicand) - num(radicand)`,
    /// content-normalized. Triangular in the generators.
    pub fn equations(&self) -> Vec<MPoly> {
        self.steps
            .iter()
            .map(|s| {
                let dpow = MPoly::monomial(
                    &self.reg,
                    crate::kernel::Mono::unit(self.reg.len()).with_exp(s.var, s.index),
                    crate::kernel::Rat::one(),
                );
                let g = &(&dpow * &s.radicand.den) - &s.radicand.num;
                g.unit_normalized().0
            })
            .collect()
    }

    /// Evaluates every generator numerically at a base point, choosing the
    /// root of each step closest to the provided branch targets (or the
    /// enumerated branch index). Returns generator values in step order.
    pub fn eval_generators_by_branch(
        &self,
        base: &BTreeMap<VarId, CNum>,
        branch: &[usize],
        prec: u32,
    ) -> Result<Vec<CNum>, KernelError> {
        assert_eq!(branch.len(), self.steps.len());
        let mut point = base.clone();
        let mut out = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            let num = eval_poly_complex(&step.radicand.num, &point, prec);
            let den = eval_poly_complex(&step.radicand.den, &point, prec);
            if den.is_zero() {
                return Err(KernelError::PrecisionLoss);
            }
            let val = num.div(&den, prec);
            let roots = all_nth_roots(&val, step.index, prec);
            let idx = branch[i];
            if idx >= roots.len() {
                return Err(KernelError::PrecisionLoss);
            }
            let dv = roots[idx].clone();
            point.insert(step.var, dv.clone());
            out.push(dv);
        }
        Ok(out)
    }

    /// Number of branch tuples: the product of the step indices.
    pub fn branch_count(&self) -> usize {
        self.steps.iter().map(|s| s.index as usize).product()
    }

    /// Enumerates all branch index tuples.
    pub fn branch_tuples(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![vec![]];
        for step in &self.steps {
            let mut next = Vec::with_capacity(out.len() * step.index as usize);
            for t in &out {
                for k in 0..step.index as usize {
                    let mut t2 = t.clone();
                    t2.push(k);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for RadicalTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "(empty tower)");
        }
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                format!(
                    "{}^{} = {}",
                    self.reg.name(s.var),
                    s.index,
                    s.radicand
                )
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}
