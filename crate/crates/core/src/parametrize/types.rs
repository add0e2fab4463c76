//! Parametrization data: rational components for the base variables and the
//! tower generators, the inverse map, and the strategy trace.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::kernel::{RatFunc, VarId, VarRegistry};

/// A rational parametrization of a tower variety.
///
/// The components live over the pipeline registry (parameters plus the fresh
/// z-variables). The inverse, when present, is expressed over a separate
/// label registry with one variable per component of the variety
/// (`A, B, C, ...` for `x1..xn, d1..dm`), the convention used for reporting.
#[derive(Debug, Clone)]
pub struct Parametrization {
    /// Fresh parameter variables, in order (z, or z1..zn).
    pub z_vars: Vec<VarId>,
    /// One component per base variable, in declaration order.
    pub x_components: Vec<RatFunc>,
    /// One component per tower step, in step order.
    pub d_components: Vec<RatFunc>,
    /// Inverse components: z_j = h_j(labels). The labels are fresh
    /// variables appended to the pipeline registry, one per component of the
    /// variety (`A, B, C, ...` for `x1..xn, d1..dm`).
    pub inverse: Option<Vec<RatFunc>>,
    /// Label variables for (x-components then d-components); empty when no
    /// inverse is attached.
    pub label_vars: Vec<VarId>,
    /// Human-readable strategy trace.
    pub trace: Vec<String>,
}

impl Parametrization {
    /// Identity parametrization: x_i = z_i, no tower steps.
    pub fn identity(z_vars: Vec<VarId>, reg: &Arc<VarRegistry>) -> Self {
        let comps = z_vars.iter().map(|&z| RatFunc::var(reg, z)).collect();
        Parametrization {
            z_vars,
            x_components: comps,
            d_components: vec![],
            inverse: None,
            label_vars: vec![],
            trace: vec!["identity".to_owned()],
        }
    }

    /// Substitution bindings base-var/generator -> component.
    pub fn bindings(
        &self,
        x_vars: &[VarId],
        d_vars: &[VarId],
    ) -> BTreeMap<VarId, RatFunc> {
        assert_eq!(x_vars.len(), self.x_components.len());
        assert_eq!(d_vars.len(), self.d_components.len());
        let mut map = BTreeMap::new();
        for (v, c) in x_vars.iter().zip(&self.x_components) {
            map.insert(*v, c.clone());
        }
        for (v, c) in d_vars.iter().zip(&self.d_components) {
            map.insert(*v, c.clone());
        }
        map
    }
}

/// Why a tower was judged non-rational.
#[derive(Debug, Clone)]
pub struct NonRationalWitness {
    /// Index of the offending tower step.
    pub step: usize,
    /// The squarefree reduced curve `Y^2 = S`, rendered.
    pub reduced_curve: String,
    /// Degree of S.
    pub degree: u32,
}

/// Outcome of the parametrization pipeline.
#[derive(Debug, Clone)]
pub enum ParamOutcome {
    Found(Box<Parametrization>),
    /// Certified: the tower variety admits no rational parametrization.
    ProvenNonRational(NonRationalWitness),
    /// Strategies exhausted without a decision.
    Unknown { notes: Vec<String> },
}
