//! High-precision numeric verification: branch-consistent evaluation of the
//! original radical equation against the transformed rational one, and tower
//! identity residuals under a claimed parametrization.
//!
//! Sample points are random rationals with numerator and denominator bounded
//! by 10^4, rejected on poles and on branch ambiguity; the only approximation
//! in the whole check is the radical evaluation itself. Samples are
//! independent and evaluated through the data-parallel helpers; reports fold
//! deterministically (max of residuals in sample order).

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::OracleError;
use crate::frontend::{DiffPoly, JetVar};
use crate::kernel::{
    all_nth_roots, eval_poly_complex, CNum, MPoly, Mono, Rat, RatFunc, VarId, VarKind,
};
use crate::par::par_map;
use crate::parametrize::Parametrization;
use crate::tower::RadicalTower;

/// Chosen root index for every tower step at a sample point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchAssignment {
    pub indices: Vec<usize>,
}

/// Outcome of a numeric verification.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub samples: usize,
    /// Base-2 log of the worst relative residual (None = all residuals
    /// exactly zero).
    pub max_residual_log2: Option<i64>,
    pub precision: u32,
    /// Residuals must stay below 2^threshold_log2.
    pub threshold_log2: i64,
    pub pass: bool,
}

impl OracleReport {
    fn from_residuals(residuals: &[Option<i64>], prec: u32, threshold_log2: i64) -> Self {
        let max = residuals.iter().filter_map(|r| *r).max();
        OracleReport {
            samples: residuals.len(),
            max_residual_log2: max,
            precision: prec,
            threshold_log2,
            pass: max.map(|m| m < threshold_log2).unwrap_or(true),
        }
    }

    pub fn max_residual_approx(&self) -> f64 {
        match self.max_residual_log2 {
            None => 0.0,
            Some(l) => 2f64.powi(l.clamp(-1000, 1000) as i32),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub samples: usize,
    pub precision: u32,
    /// Relative threshold as a power of ten (e.g. -20).
    pub threshold_log10: i32,
    pub test_degree: u32,
    pub seed: u64,
    /// Fixed parameter values; unlisted parameters get random small
    /// rationals per sample.
    pub param_values: BTreeMap<VarId, Rat>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: 20,
            precision: 128,
            threshold_log10: -20,
            test_degree: 4,
            seed: 0,
            param_values: BTreeMap::new(),
        }
    }
}

fn threshold_log2(threshold_log10: i32) -> i64 {
    (threshold_log10 as f64 * std::f64::consts::LOG2_10).floor() as i64
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.random_range(1..=10_000i64);
    let den = rng.random_range(1..=10_000i64);
    Rat::new(num.into(), den.into())
}

/// Resolves a branch assignment at a sample point: for each step, the root
/// of the radicand closest to the parametrization's generator component,
/// certified separated from the second-closest root. Returns the chosen
/// numeric generator values alongside.
pub fn branch_resolve(
    tower: &RadicalTower,
    q: &Parametrization,
    x_vars: &[VarId],
    z0: &BTreeMap<VarId, Rat>,
    prec: u32,
) -> Result<(BranchAssignment, Vec<CNum>), OracleError> {
    // exact base point and generator targets
    let mut x0: BTreeMap<VarId, Rat> = BTreeMap::new();
    for (v, comp) in x_vars.iter().zip(&q.x_components) {
        x0.insert(*v, comp.eval_rat(z0).map_err(OracleError::Kernel)?);
    }
    let mut targets = Vec::with_capacity(tower.len());
    for comp in &q.d_components {
        targets.push(comp.eval_rat(z0).map_err(OracleError::Kernel)?);
    }

    let mut point: BTreeMap<VarId, CNum> = x0
        .iter()
        .map(|(v, r)| (*v, CNum::from_rat(r, prec)))
        .collect();
    for (v, r) in z0 {
        point.entry(*v).or_insert_with(|| CNum::from_rat(r, prec));
    }
    let mut indices = Vec::with_capacity(tower.len());
    let mut values = Vec::with_capacity(tower.len());
    for (step, target) in tower.steps().iter().zip(&targets) {
        let num = eval_poly_complex(&step.radicand.num, &point, prec);
        let den = eval_poly_complex(&step.radicand.den, &point, prec);
        if den.is_zero() {
            return Err(OracleError::Kernel(
                crate::error::KernelError::PrecisionLoss,
            ));
        }
        let val = num.div(&den, prec);
        let roots = all_nth_roots(&val, step.index, prec);
        let tnum = CNum::from_rat(target, prec);
        let mut dists: Vec<(usize, crate::kernel::BigFloat)> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.sub(&tnum, prec).abs(prec)))
            .collect();
        dists.sort_by(|a, b| a.1.cmp_value(&b.1));
        let (best_idx, best_d) = (dists[0].0, dists[0].1.clone());
        if dists.len() > 1 {
            let second = &dists[1].1;
            // separation certificate: the gap must clear the precision floor
            let scale = roots[best_idx]
                .mag_log2(prec)
                .unwrap_or(0)
                .max(second.mag_log2().unwrap_or(0));
            let gap = second.sub(&best_d, prec);
            let gap_log = gap.mag_log2().unwrap_or(i64::MIN);
            if gap_log < scale - (prec as i64) / 2 {
                return Err(OracleError::BranchAmbiguous);
            }
        }
        let chosen = roots[best_idx].clone();
        point.insert(step.var, chosen.clone());
        indices.push(best_idx);
        values.push(chosen);
    }
    Ok((BranchAssignment { indices }, values))
}

fn relative_residual(diff: &CNum, scale_log2: i64, prec: u32) -> Option<i64> {
    diff.mag_log2(prec).map(|l| l - scale_log2)
}

/// Residuals of the tower equations under the parametrization at random
/// sample points.
pub fn numeric_tower_check(
    tower: &RadicalTower,
    q: &Parametrization,
    x_vars: &[VarId],
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    let reg = q.x_components[0].registry().clone();
    let params: Vec<VarId> = reg.of_kind(VarKind::Param);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x70c4);
    let mut samples = Vec::with_capacity(cfg.samples);
    let mut budget = cfg.samples * 8;
    while samples.len() < cfg.samples && budget > 0 {
        budget -= 1;
        let mut z0: BTreeMap<VarId, Rat> = BTreeMap::new();
        for &z in &q.z_vars {
            z0.insert(z, random_rat(&mut rng));
        }
        for &p in &params {
            let v = cfg
                .param_values
                .get(&p)
                .cloned()
                .unwrap_or_else(|| random_rat(&mut rng));
            z0.insert(p, v);
        }
        // reject poles of the components
        if q.x_components
            .iter()
            .chain(&q.d_components)
            .any(|c| c.eval_rat(&z0).is_err())
        {
            continue;
        }
        samples.push(z0);
    }
    if samples.len() < cfg.samples {
        return Err(OracleError::SampleBudgetExhausted);
    }
    // the parametrization components are rational functions, so the
    // identities evaluate exactly; a zero residual here is exact
    let prec = cfg.precision;
    let equations = tower.equations();
    let gen_vars = tower.generator_vars();
    let residuals: Vec<Option<i64>> = par_map(samples, |z0| {
        let mut point: BTreeMap<VarId, Rat> = z0.clone();
        for (v, comp) in x_vars.iter().zip(&q.x_components) {
            point.insert(*v, comp.eval_rat(&z0).unwrap());
        }
        for (v, comp) in gen_vars.iter().zip(&q.d_components) {
            point.insert(*v, comp.eval_rat(&z0).unwrap());
        }
        let mut worst: Option<i64> = None;
        for g in &equations {
            let val = g.eval_rat(&point);
            if num_traits::Zero::is_zero(&val) {
                continue;
            }
            // scale: largest term magnitude
            let mut scale = crate::kernel::BigFloat::zero();
            for (m, c) in g.terms() {
                let term = eval_mono_rat(m, c, &point);
                let t = crate::kernel::BigFloat::from_rat(&term, prec).abs();
                if scale.cmp_value(&t) == std::cmp::Ordering::Less {
                    scale = t;
                }
            }
            let v = crate::kernel::BigFloat::from_rat(&val, prec).abs();
            let rel = v.mag_log2().unwrap_or(i64::MIN)
                - scale.mag_log2().unwrap_or(0);
            worst = Some(worst.map_or(rel, |w: i64| w.max(rel)));
        }
        worst
    });
    Ok(OracleReport::from_residuals(
        &residuals,
        cfg.precision,
        threshold_log2(cfg.threshold_log10),
    ))
}

fn eval_mono_rat(m: &Mono, c: &Rat, point: &BTreeMap<VarId, Rat>) -> Rat {
    let mut acc = c.clone();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        acc *= num_traits::pow::Pow::pow(point[&VarId(i)].clone(), e as usize);
    }
    acc
}

/// Chain-rule identity check between the original equation (radical
/// coefficients, old jets) and the pre-normalization transformed equation
/// (rational coefficients, new jets): both sides are evaluated on a random
/// polynomial test function and compared.
pub fn numeric_chain_check(
    f: &DiffPoly,
    g_pre: &DiffPoly,
    tower: &RadicalTower,
    q: &Parametrization,
    x_vars: &[VarId],
    cfg: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    let reg = q.x_components[0].registry().clone();
    let params: Vec<VarId> = reg.of_kind(VarKind::Param);
    let order = f.order().max(g_pre.order());
    let n_unknowns = f.n_unknowns;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc4a1);

    struct Sample {
        z0: BTreeMap<VarId, Rat>,
        x_jets: BTreeMap<JetVar, Rat>,
        z_jets: BTreeMap<JetVar, Rat>,
    }

    let mut samples: Vec<Sample> = Vec::with_capacity(cfg.samples);
    let mut budget = cfg.samples * 8;
    'sampling: while samples.len() < cfg.samples && budget > 0 {
        budget -= 1;
        let mut z0: BTreeMap<VarId, Rat> = BTreeMap::new();
        for &z in &q.z_vars {
            z0.insert(z, random_rat(&mut rng));
        }
        for &p in &params {
            let v = cfg
                .param_values
                .get(&p)
                .cloned()
                .unwrap_or_else(|| random_rat(&mut rng));
            z0.insert(p, v);
        }
        // random polynomial test function per unknown
        let mut test_fns: Vec<MPoly> = Vec::new();
        for _ in 0..n_unknowns {
            let mut y = MPoly::zero(&reg);
            for _ in 0..=cfg.test_degree {
                let mut mono = Mono::unit(reg.len());
                let mut deg_budget = cfg.test_degree;
                for &xv in x_vars {
                    if deg_budget == 0 {
                        break;
                    }
                    let e = rng.random_range(0..=deg_budget);
                    mono = mono.with_exp(xv, e);
                    deg_budget -= e;
                }
                let c = rng.random_range(-9..=9i64);
                if c != 0 {
                    y.add_term(mono, Rat::from_integer(c.into()));
                }
            }
            if y.is_zero() {
                continue 'sampling;
            }
            test_fns.push(y);
        }
        // exact base point
        let mut x0: BTreeMap<VarId, Rat> = z0.clone();
        for (v, comp) in x_vars.iter().zip(&q.x_components) {
            match comp.eval_rat(&z0) {
                Ok(val) => {
                    x0.insert(*v, val);
                }
                Err(_) => continue 'sampling,
            }
        }
        // exact x-jets of the test functions at x0
        let mut x_jets: BTreeMap<JetVar, Rat> = BTreeMap::new();
        for (u, y) in test_fns.iter().enumerate() {
            let mut level: Vec<(Vec<usize>, MPoly)> = vec![(vec![], y.clone())];
            for _ in 0..=order {
                for (idx, p) in &level {
                    x_jets.insert(
                        JetVar {
                            unknown: u,
                            deriv: idx.clone(),
                        },
                        p.eval_rat(&x0),
                    );
                }
                let mut next = Vec::new();
                for (idx, p) in &level {
                    let lo = idx.last().copied().unwrap_or(0);
                    for (i, &xv) in x_vars.iter().enumerate().skip(lo) {
                        let mut id2 = idx.clone();
                        id2.push(i);
                        next.push((id2, p.derivative(xv)));
                    }
                }
                level = next;
            }
        }
        // exact z-jets of y∘r at z0
        let mut z_jets: BTreeMap<JetVar, Rat> = BTreeMap::new();
        let mut ok = true;
        'zjets: for (u, y) in test_fns.iter().enumerate() {
            let bindings: BTreeMap<VarId, RatFunc> = x_vars
                .iter()
                .zip(&q.x_components)
                .map(|(v, c)| (*v, c.clone()))
                .collect();
            let composed = match RatFunc::from_poly(y.clone()).substitute(&bindings) {
                Ok(c) => c,
                Err(_) => {
                    ok = false;
                    break 'zjets;
                }
            };
            let mut level: Vec<(Vec<usize>, RatFunc)> = vec![(vec![], composed)];
            for _ in 0..=order {
                for (idx, p) in &level {
                    match p.eval_rat(&z0) {
                        Ok(v) => {
                            z_jets.insert(
                                JetVar {
                                    unknown: u,
                                    deriv: idx.clone(),
                                },
                                v,
                            );
                        }
                        Err(_) => {
                            ok = false;
                            break 'zjets;
                        }
                    }
                }
                let mut next = Vec::new();
                for (idx, p) in &level {
                    let lo = idx.last().copied().unwrap_or(0);
                    for (i, &zv) in q.z_vars.iter().enumerate().skip(lo) {
                        let mut id2 = idx.clone();
                        id2.push(i);
                        next.push((id2, p.derivative(zv)));
                    }
                }
                level = next;
            }
        }
        if !ok {
            continue 'sampling;
        }
        // branch resolution must succeed
        if branch_resolve(tower, q, x_vars, &z0, cfg.precision + 64).is_err() {
            continue 'sampling;
        }
        samples.push(Sample { z0, x_jets, z_jets });
    }
    if samples.len() < cfg.samples {
        return Err(OracleError::SampleBudgetExhausted);
    }

    let prec = cfg.precision + 64;
    let residuals: Vec<Option<i64>> = par_map(samples, |s| {
        let (_, d_values) = branch_resolve(tower, q, x_vars, &s.z0, prec).ok()?;
        // point for coefficient evaluation on the original side
        let mut x_point: BTreeMap<VarId, CNum> = BTreeMap::new();
        for (v, comp) in x_vars.iter().zip(&q.x_components) {
            x_point.insert(*v, CNum::from_rat(&comp.eval_rat(&s.z0).unwrap(), prec));
        }
        for (v, r) in &s.z0 {
            x_point
                .entry(*v)
                .or_insert_with(|| CNum::from_rat(r, prec));
        }
        for (step, val) in tower.steps().iter().zip(&d_values) {
            x_point.insert(step.var, val.clone());
        }
        let mut scale = 0i64;
        let mut f_val = CNum::zero();
        for (mono, coeff) in &f.terms {
            let cnum = eval_poly_complex(&coeff.num, &x_point, prec);
            let cden = eval_poly_complex(&coeff.den, &x_point, prec);
            if cden.is_zero() {
                return None;
            }
            let mut term = cnum.div(&cden, prec);
            for (jv, p) in &mono.0 {
                let jval = CNum::from_rat(&s.x_jets[jv], prec);
                term = term.mul(&jval.pow_u32(*p, prec), prec);
            }
            if let Some(l) = term.mag_log2(prec) {
                scale = scale.max(l);
            }
            f_val = f_val.add(&term, prec);
        }
        let mut g_val = CNum::zero();
        let z_point: BTreeMap<VarId, CNum> = s
            .z0
            .iter()
            .map(|(v, r)| (*v, CNum::from_rat(r, prec)))
            .collect();
        for (mono, coeff) in &g_pre.terms {
            let cnum = eval_poly_complex(&coeff.num, &z_point, prec);
            let cden = eval_poly_complex(&coeff.den, &z_point, prec);
            if cden.is_zero() {
                return None;
            }
            let mut term = cnum.div(&cden, prec);
            for (jv, p) in &mono.0 {
                let jval = CNum::from_rat(&s.z_jets[jv], prec);
                term = term.mul(&jval.pow_u32(*p, prec), prec);
            }
            if let Some(l) = term.mag_log2(prec) {
                scale = scale.max(l);
            }
            g_val = g_val.add(&term, prec);
        }
        let diff = f_val.sub(&g_val, prec);
        relative_residual(&diff, scale, prec)
    });
    Ok(OracleReport::from_residuals(
        &residuals,
        cfg.precision,
        threshold_log2(cfg.threshold_log10),
    ))
}
