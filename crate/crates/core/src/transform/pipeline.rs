//! End-to-end orchestration: extraction, simplification, parametrization (or
//! a user-supplied substitution), transformation, rationality check, inverse
//! and back-substitution, tracing diagnostics, and the numeric oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::apply::{
    admissibility_warnings, normalize_equation, rationality_check, transform_equation,
};
use super::jets::{inverse_jet_table, JetTable};
use super::render::{diffpoly_expr, radical_render, transformed_unknown_names, VarRender};
use crate::error::{FrontendError, TransformError};
use crate::frontend::{extract_tower, DiffPoly, Expr, SymbolTable};
use crate::kernel::{RatFunc, VarId, VarKind, VarRegistry};
use crate::oracle::{numeric_chain_check, OracleConfig, OracleReport};
use crate::parametrize::{
    invert_parametrization, parametrize_tower, NonRationalWitness, ParamOutcome, Parametrization,
};
use crate::tower::{tracing_index, verify_parametrization, RadicalTower, TracingReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Transformed,
    ProvenImpossible,
    NoAnswer,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Transformed => "transformed",
            Status::ProvenImpossible => "proven_impossible",
            Status::NoAnswer => "no_answer",
        }
    }
}

/// A user-supplied substitution: component texts for the base variables and
/// optionally for the tower generators, in terms of the fresh variables.
#[derive(Debug, Clone, Default)]
pub struct SuppliedSubstitution {
    /// var name -> expression text
    pub x_components: BTreeMap<String, String>,
    /// generator name (d1, d2, ...) -> expression text
    pub d_components: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub seed: u64,
    pub precision: u32,
    pub run_oracle: bool,
    pub oracle_samples: usize,
    pub substitution: Option<SuppliedSubstitution>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            seed: 0,
            precision: 128,
            run_oracle: true,
            oracle_samples: 20,
            substitution: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransformOutcome {
    pub status: Status,
    pub symbols: SymbolTable,
    pub registry: Arc<VarRegistry>,
    pub x_vars: Vec<VarId>,
    pub tower: RadicalTower,
    pub original: Vec<DiffPoly>,
    pub parametrization: Option<Parametrization>,
    /// Canonical transformed equations (generator-free coefficients).
    pub transformed: Vec<DiffPoly>,
    /// Pre-normalization transforms, for the oracle.
    pub pre_normal: Vec<DiffPoly>,
    /// Unit factor removed per equation: pre_normal = unit * transformed.
    pub units: Vec<RatFunc>,
    /// Inverse components over labels, plus the rendered back-substitution.
    pub inverse: Option<Vec<RatFunc>>,
    pub back_substitution: Vec<Expr>,
    pub tracing: Option<TracingReport>,
    pub witness: Option<NonRationalWitness>,
    pub oracle: Option<OracleReport>,
    pub rationality: Option<bool>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    /// Names of the fresh variables, in order.
    pub z_names: Vec<String>,
    /// Uppercased unknown names used in the transformed rendering.
    pub transformed_unknowns: Vec<String>,
}

impl TransformOutcome {
    /// Canonical text of the transformed equations.
    pub fn transformed_texts(&self) -> Vec<String> {
        let reg = self.render_registry();
        let render = VarRender {
            map: BTreeMap::new(),
            reg: &reg,
        };
        self.transformed
            .iter()
            .map(|g| {
                diffpoly_expr(g, &self.transformed_unknowns, &render).render(&self.z_names)
            })
            .collect()
    }

    fn render_registry(&self) -> Arc<VarRegistry> {
        match &self.parametrization {
            Some(q) => q.x_components[0].registry().clone(),
            None => self.tower.registry().clone(),
        }
    }

    /// Back-substitution rendered as text, one input variable per line
    /// (`z = sqrt(x) + sqrt(x + 1)`).
    pub fn back_substitution_texts(&self) -> Vec<String> {
        self.back_substitution
            .iter()
            .zip(&self.z_names)
            .map(|(e, z)| format!("{z} = {}", e.render(&self.symbols.vars)))
            .collect()
    }
}

fn build_registry(symbols: &SymbolTable) -> Arc<VarRegistry> {
    let mut pairs: Vec<(&str, VarKind)> = symbols
        .params
        .iter()
        .map(|p| (p.as_str(), VarKind::Param))
        .collect();
    pairs.extend(symbols.vars.iter().map(|v| (v.as_str(), VarKind::Base)));
    VarRegistry::build(&pairs)
}

/// Runs the whole pipeline on parsed equations.
pub fn run_pipeline(
    exprs: &[Expr],
    symbols: &SymbolTable,
    options: &PipelineOptions,
) -> Result<TransformOutcome, FrontendError> {
    let reg = build_registry(symbols);
    let x_vars: Vec<VarId> = symbols
        .vars
        .iter()
        .map(|v| reg.lookup(v).unwrap())
        .collect();
    let extraction = extract_tower(exprs, symbols, &reg)?;
    let mut tower = extraction.tower;
    let original = extraction.equations;
    let mut notes = extraction.notes;
    let warnings = admissibility_warnings(&original);

    let mut outcome = TransformOutcome {
        status: Status::NoAnswer,
        symbols: symbols.clone(),
        registry: tower.registry().clone(),
        x_vars: x_vars.clone(),
        tower: tower.clone(),
        original: original.clone(),
        parametrization: None,
        transformed: vec![],
        pre_normal: vec![],
        units: vec![],
        inverse: None,
        back_substitution: vec![],
        tracing: None,
        witness: None,
        oracle: None,
        rationality: None,
        warnings,
        notes: vec![],
        z_names: vec![],
        transformed_unknowns: transformed_unknown_names(&symbols.unknowns),
    };

    // tracing diagnostics on the nonrational coefficients
    let coeff_elems: Vec<crate::tower::TowerElem> = original
        .iter()
        .flat_map(|f| f.terms.values().cloned())
        .filter(|c| !c.is_rational(&tower))
        .collect();
    if !coeff_elems.is_empty() {
        match tracing_index(&tower, &coeff_elems, options.seed) {
            Ok(rep) => outcome.tracing = Some(rep),
            Err(e) => notes.push(format!("tracing index unavailable: {e}")),
        }
    }

    // obtain a parametrization
    let param: Option<Parametrization> = match &options.substitution {
        Some(s) => match supplied_parametrization(&mut tower, &x_vars, symbols, s, &mut notes) {
            Ok(q) => Some(q),
            Err(e) => {
                notes.push(format!("supplied substitution rejected: {e}"));
                outcome.notes = notes;
                outcome.status = Status::NoAnswer;
                return Ok(outcome);
            }
        },
        None => {
            if tower.is_empty() {
                // already rational: identity change of variables
                Some(identity_parametrization(&mut tower, &x_vars, symbols))
            } else {
                match parametrize_tower(&tower, &x_vars).map_err(FrontendError::Tower)? {
                    ParamOutcome::Found(q) => Some(*q),
                    ParamOutcome::ProvenNonRational(w) => {
                        outcome.witness = Some(w);
                        let certified_one = outcome
                            .tracing
                            .as_ref()
                            .map(|t| t.certified && t.index == 1)
                            .unwrap_or(false);
                        outcome.status = if certified_one {
                            Status::ProvenImpossible
                        } else {
                            Status::NoAnswer
                        };
                        outcome.notes = notes;
                        return Ok(outcome);
                    }
                    ParamOutcome::Unknown { notes: why } => {
                        notes.extend(why);
                        outcome.status = Status::NoAnswer;
                        outcome.notes = notes;
                        return Ok(outcome);
                    }
                }
            }
        }
    };
    let q = param.expect("parametrization present past this point");

    // the engine extended the registry with fresh variables; re-home the tower
    tower.lift_registry(q.x_components[0].registry());
    if let Err(e) = verify_parametrization(&tower, &x_vars, &q, options.seed) {
        notes.push(format!("parametrization failed verification: {e}"));
        outcome.notes = notes;
        outcome.status = Status::NoAnswer;
        return Ok(outcome);
    }

    // transform every equation through a shared jet table
    let order = original.iter().map(|f| f.order()).max().unwrap_or(0);
    let table: JetTable =
        match inverse_jet_table(&q.x_components, &q.z_vars, order) {
            Ok(t) => t,
            Err(TransformError::SingularJacobian) => {
                notes.push("substitution has identically singular Jacobian".into());
                outcome.notes = notes;
                return Ok(outcome);
            }
            Err(e) => {
                notes.push(format!("jet table construction failed: {e}"));
                outcome.notes = notes;
                return Ok(outcome);
            }
        };
    let mut pre_normal = Vec::new();
    let mut transformed = Vec::new();
    let mut units = Vec::new();
    for f in &original {
        let g_pre = transform_equation(f, &tower, &x_vars, &q, &table)
            .map_err(|e| FrontendError::NonPolynomial(e.to_string()))?;
        let (g, unit) = normalize_equation(&g_pre, &tower)
            .map_err(|e| FrontendError::NonPolynomial(e.to_string()))?;
        pre_normal.push(g_pre);
        transformed.push(g);
        units.push(unit);
    }
    let rational = transformed.iter().all(|g| rationality_check(g, &tower));
    outcome.rationality = Some(rational);
    if !rational {
        notes.push("transformed coefficients still involve radicals".into());
        outcome.notes = notes;
        outcome.status = Status::NoAnswer;
        return Ok(outcome);
    }

    // inverse and back-substitution
    let reg_full = q.x_components[0].registry().clone();
    outcome.z_names = q
        .z_vars
        .iter()
        .map(|&z| reg_full.name(z).to_owned())
        .collect();
    let inverse = q.inverse.clone().or_else(|| {
        // no composed inverse (supplied substitution): try the gcd route
        let comps: Vec<RatFunc> = q
            .x_components
            .iter()
            .chain(&q.d_components)
            .cloned()
            .collect();
        invert_parametrization(&reg_full, &comps, &q.z_vars, &q.label_vars).ok()
    });
    if let Some(h) = &inverse {
        let render = radical_render(&tower, &reg_full);
        let mut label_map: BTreeMap<VarId, Expr> = BTreeMap::new();
        for (k, &x) in x_vars.iter().enumerate() {
            label_map.insert(
                q.label_vars[k],
                Expr::Name(reg_full.name(x).to_owned()),
            );
        }
        for (k, step_i) in (0..tower.len()).enumerate() {
            let radical = render.map[&tower.steps()[step_i].var].clone();
            label_map.insert(q.label_vars[x_vars.len() + k], radical);
        }
        let label_render = VarRender {
            map: label_map,
            reg: &reg_full,
        };
        outcome.back_substitution = h
            .iter()
            .map(|hj| super::render::ratfunc_expr(hj, &label_render))
            .collect();
    } else {
        notes.push("no inverse available; back-substitution omitted".into());
    }

    // numeric chain oracle
    if options.run_oracle {
        let cfg = OracleConfig {
            samples: options.oracle_samples,
            precision: options.precision,
            seed: options.seed,
            ..OracleConfig::default()
        };
        let mut worst: Option<OracleReport> = None;
        for (f, g_pre) in original.iter().zip(&pre_normal) {
            match numeric_chain_check(f, g_pre, &tower, &q, &x_vars, &cfg) {
                Ok(rep) => {
                    worst = Some(match worst {
                        None => rep,
                        Some(acc) => {
                            if rep.max_residual_log2 > acc.max_residual_log2 || !rep.pass {
                                rep
                            } else {
                                acc
                            }
                        }
                    });
                }
                Err(e) => {
                    notes.push(format!("oracle sampling failed: {e}"));
                }
            }
        }
        outcome.oracle = worst;
    }

    outcome.tower = tower;
    outcome.inverse = inverse;
    outcome.parametrization = Some(q);
    outcome.transformed = transformed;
    outcome.pre_normal = pre_normal;
    outcome.units = units;
    outcome.notes = notes;
    outcome.status = Status::Transformed;
    Ok(outcome)
}

fn identity_parametrization(
    tower: &mut RadicalTower,
    x_vars: &[VarId],
    symbols: &SymbolTable,
) -> Parametrization {
    let mut reg = tower.registry().clone();
    let n = x_vars.len();
    let mut z_vars = Vec::with_capacity(n);
    for k in 0..n {
        let hint = if n == 1 {
            "z".to_owned()
        } else {
            format!("z{}", k + 1)
        };
        let name = reg.fresh_name(&hint);
        let (r2, z) = reg.with_var(&name, VarKind::Fresh);
        reg = r2;
        z_vars.push(z);
    }
    // labels for a trivial inverse
    let mut label_vars = Vec::with_capacity(n);
    let letters = ["A", "B", "C", "D", "E", "F", "G", "H"];
    for k in 0..n {
        let name = reg.fresh_name(letters.get(k).copied().unwrap_or("L"));
        let (r2, l) = reg.with_var(&name, VarKind::Fresh);
        reg = r2;
        label_vars.push(l);
    }
    tower.lift_registry(&reg);
    let _ = symbols;
    Parametrization {
        z_vars: z_vars.clone(),
        x_components: z_vars.iter().map(|&z| RatFunc::var(&reg, z)).collect(),
        d_components: vec![],
        inverse: Some(label_vars.iter().map(|&l| RatFunc::var(&reg, l)).collect()),
        label_vars,
        trace: vec!["identity".to_owned()],
    }
}

/// Builds and validates a supplied substitution; derives generator
/// components when only the base components were given (each composed
/// radicand must be an exact power).
fn supplied_parametrization(
    tower: &mut RadicalTower,
    x_vars: &[VarId],
    symbols: &SymbolTable,
    s: &SuppliedSubstitution,
    notes: &mut Vec<String>,
) -> Result<Parametrization, String> {
    let n = x_vars.len();
    let mut reg = tower.registry().clone();
    let mut z_vars = Vec::with_capacity(n);
    let mut z_names = Vec::with_capacity(n);
    for k in 0..n {
        let hint = if n == 1 {
            "z".to_owned()
        } else {
            format!("z{}", k + 1)
        };
        let name = reg.fresh_name(&hint);
        let (r2, z) = reg.with_var(&name, VarKind::Fresh);
        reg = r2;
        z_names.push(name);
        z_vars.push(z);
    }
    tower.lift_registry(&reg);

    // parse component texts as rational expressions in the fresh variables
    let sub_symbols = SymbolTable {
        vars: z_names.clone(),
        unknowns: vec!["_n".into()],
        params: symbols.params.clone(),
    };
    let parse_component = |text: &str, reg: &Arc<VarRegistry>| -> Result<RatFunc, String> {
        let e = crate::frontend::parse_equation(text, &sub_symbols)
            .map_err(|err| format!("component `{text}`: {err}"))?;
        expr_to_ratfunc(&e, reg, &sub_symbols).ok_or_else(|| {
            format!("component `{text}` is not a rational expression in the new variables")
        })
    };

    let mut x_components = Vec::with_capacity(n);
    for name in &symbols.vars {
        let text = s
            .x_components
            .get(name)
            .ok_or_else(|| format!("missing substitution component for `{name}`"))?;
        x_components.push(parse_component(text, &reg)?);
    }

    let mut d_components = Vec::with_capacity(tower.len());
    if !s.d_components.is_empty() {
        for step in tower.steps() {
            let dname = reg.name(step.var).to_owned();
            let text = s
                .d_components
                .get(&dname)
                .ok_or_else(|| format!("missing substitution component for `{dname}`"))?;
            d_components.push(parse_component(text, &reg)?);
        }
    } else {
        // derive: each composed radicand must be an exact index-th power
        let mut bindings: BTreeMap<VarId, RatFunc> = BTreeMap::new();
        for (v, c) in x_vars.iter().zip(&x_components) {
            bindings.insert(*v, c.clone());
        }
        for step in tower.steps() {
            let composed = step
                .radicand
                .substitute(&bindings)
                .map_err(|e| format!("radicand does not compose: {e}"))?;
            match composed.perfect_power(step.index) {
                Some(root) => {
                    bindings.insert(step.var, root.clone());
                    d_components.push(root);
                }
                None => {
                    return Err(format!(
                        "coefficient radical {}^{} = {} does not become rational under the \
                         substitution",
                        reg.name(step.var),
                        step.index,
                        step.radicand
                    ));
                }
            }
        }
        notes.push("generator components derived from the substitution".into());
    }

    // labels
    let mut label_vars = Vec::new();
    let letters = [
        "A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
    ];
    for k in 0..n + tower.len() {
        let name = reg.fresh_name(letters.get(k).copied().unwrap_or("L"));
        let (r2, l) = reg.with_var(&name, VarKind::Fresh);
        reg = r2;
        label_vars.push(l);
    }
    tower.lift_registry(&reg);
    let lift = |f: &RatFunc| f.lift(&reg);
    Ok(Parametrization {
        z_vars,
        x_components: x_components.iter().map(&lift).collect(),
        d_components: d_components.iter().map(&lift).collect(),
        inverse: None,
        label_vars,
        trace: vec!["supplied substitution".to_owned()],
    })
}

/// Strict conversion of a parsed expression into a rational function; radical
/// and derivative nodes are rejected.
fn expr_to_ratfunc(
    e: &Expr,
    reg: &Arc<VarRegistry>,
    symbols: &SymbolTable,
) -> Option<RatFunc> {
    Some(match e {
        Expr::Num(r) => RatFunc::constant(reg, r.clone()),
        Expr::Name(n) => RatFunc::var(reg, reg.lookup(n)?),
        Expr::Add(a, b) => {
            expr_to_ratfunc(a, reg, symbols)?.add(&expr_to_ratfunc(b, reg, symbols)?)
        }
        Expr::Sub(a, b) => {
            expr_to_ratfunc(a, reg, symbols)?.sub(&expr_to_ratfunc(b, reg, symbols)?)
        }
        Expr::Mul(a, b) => {
            expr_to_ratfunc(a, reg, symbols)?.mul(&expr_to_ratfunc(b, reg, symbols)?)
        }
        Expr::Div(a, b) => {
            let d = expr_to_ratfunc(b, reg, symbols)?;
            if d.is_zero() {
                return None;
            }
            expr_to_ratfunc(a, reg, symbols)?.div(&d)
        }
        Expr::Neg(a) => expr_to_ratfunc(a, reg, symbols)?.neg(),
        Expr::Pow(a, r) => {
            use num_traits::ToPrimitive;
            if !r.denom().is_one() {
                return None;
            }
            expr_to_ratfunc(a, reg, symbols)?.pow(r.numer().to_i64()?)
        }
        Expr::Sqrt(_) | Expr::Root(..) | Expr::Deriv { .. } => return None,
    })
}
