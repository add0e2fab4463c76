//! Exact field-degree and tracing-index computation.
//!
//! The minimal polynomial of an element `u` of the tower field over the
//! rational base field is obtained by eliminating the generators from the
//! triangular system {tower equations, U*den(u) - num(u)} with iterated
//! resultants, then taking the squarefree, primitive part with respect to U.
//! Because the system is triangular with generator-free leading
//! coefficients, the elimination introduces no U-dependent extraneous
//! factors; the degree in U counts the distinct conjugate values of `u`.
//!
//! The tracing index is the ratio of the full tower degree to the degree of
//! the field generated by the coefficient tuple. Randomized primitive
//! elements are retried until two independent draws agree.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::def::RadicalTower;
use super::elem::TowerElem;
use super::simplify::simplify_radicals;
use crate::error::TowerError;
use crate::kernel::{resultant, squarefree_part, MPoly, Rat, VarId, VarKind};

/// Exact degree/tracing summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracingReport {
    /// [F_m : base field], the total tower degree.
    pub tower_degree: u32,
    /// Degree of the field generated by the coefficient tuple.
    pub image_degree: u32,
    /// tower_degree / image_degree.
    pub index: u32,
    /// Two independent randomized draws agreed.
    pub certified: bool,
    /// Extra random draws consumed beyond the first.
    pub retries: u32,
}

/// Degree in U of the squarefree primitive part of the eliminated minimal
/// polynomial of `u` (given as a tower element).
pub fn minpoly_degree(tower: &RadicalTower, u: &TowerElem) -> Result<u32, TowerError> {
    let (reg_u, uvar) = tower.registry().with_var(
        &tower.registry().fresh_name("@U"),
        VarKind::Fresh,
    );
    // P = U*den(u) - num(u)
    let upoly = MPoly::var(&reg_u, uvar);
    let mut p = &(&upoly * &u.den.lift(&reg_u)) - &u.num.lift(&reg_u);
    let equations = tower.equations();
    for (i, step) in tower.steps().iter().enumerate().rev() {
        if !p.contains_var(step.var) {
            continue;
        }
        let g = equations[i].lift(&reg_u);
        p = resultant(&g, &p, step.var);
        if p.is_zero() {
            return Err(TowerError::ZeroDivisor);
        }
    }
    let sf = squarefree_part(&p, uvar);
    // strip content that does not involve U
    let content = crate::kernel::content_in(&sf, uvar);
    let prim = sf.div_exact(&content);
    Ok(prim.degree_in(uvar))
}

fn linear_combination(
    tower: &RadicalTower,
    items: &[TowerElem],
    rng: &mut ChaCha8Rng,
) -> Result<TowerElem, TowerError> {
    let mut acc = tower.elem_zero();
    for item in items {
        let lambda: i64 = loop {
            let l = rng.random_range(-9..=9);
            if l != 0 {
                break l;
            }
        };
        let scaled = tower.elem_scale(item, &Rat::from_integer(lambda.into()));
        acc = tower.elem_add(&acc, &scaled);
    }
    Ok(acc)
}

/// Randomized minimal-polynomial degree of the subfield generated by
/// `items`, certified when two independent draws agree.
fn certified_subfield_degree(
    tower: &RadicalTower,
    items: &[TowerElem],
    rng: &mut ChaCha8Rng,
    budget: u32,
) -> Result<(u32, bool, u32), TowerError> {
    let mut seen: Vec<u32> = Vec::new();
    for attempt in 0..budget {
        let u = linear_combination(tower, items, rng)?;
        let deg = minpoly_degree(tower, &u)?;
        if seen.contains(&deg) {
            return Ok((deg, true, attempt));
        }
        seen.push(deg);
    }
    let best = seen.iter().copied().max().unwrap_or(1);
    Ok((best, false, budget))
}

/// Exact tower degree [F_m : base]. Errors with `DegenerateTower` when a
/// simplification pass finds a step contributing degree 1.
pub fn field_degree(tower: &RadicalTower) -> Result<u32, TowerError> {
    field_degree_seeded(tower, 0)
}

pub fn field_degree_seeded(tower: &RadicalTower, seed: u64) -> Result<u32, TowerError> {
    if tower.is_empty() {
        return Ok(1);
    }
    let probe = simplify_radicals(tower)?;
    if let Some(&var) = probe.eliminated.first() {
        return Err(TowerError::DegenerateTower {
            step: tower.registry().name(var).to_owned(),
        });
    }
    // generators of the simplified tower generate the same field
    let t = &probe.tower;
    let gens: Vec<TowerElem> = t
        .generator_vars()
        .iter()
        .map(|&v| TowerElem {
            num: MPoly::var(t.registry(), v),
            den: MPoly::one(t.registry()),
        })
        .collect();
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1e1d);
    let (deg, _certified, _) = certified_subfield_degree(t, &gens, &mut rng, 5)?;
    Ok(deg)
}

/// Tower degree plus its certification flag.
pub(crate) fn field_degree_certified(
    tower: &RadicalTower,
    seed: u64,
) -> Result<(u32, bool), TowerError> {
    if tower.is_empty() {
        return Ok((1, true));
    }
    let probe = simplify_radicals(tower)?;
    if let Some(&var) = probe.eliminated.first() {
        return Err(TowerError::DegenerateTower {
            step: tower.registry().name(var).to_owned(),
        });
    }
    let t = &probe.tower;
    let gens: Vec<TowerElem> = t
        .generator_vars()
        .iter()
        .map(|&v| TowerElem {
            num: MPoly::var(t.registry(), v),
            den: MPoly::one(t.registry()),
        })
        .collect();
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1e1d);
    let (deg, certified, _) = certified_subfield_degree(t, &gens, &mut rng, 5)?;
    Ok((deg, certified))
}

/// Tracing index of the coefficient tuple over the tower: ratio of the tower
/// degree to the coefficient-field degree, Monte Carlo certified.
pub fn tracing_index(
    tower: &RadicalTower,
    coeffs: &[TowerElem],
    seed: u64,
) -> Result<TracingReport, TowerError> {
    assert!(!coeffs.is_empty(), "tracing index needs a coefficient list");
    let probe = simplify_radicals(tower)?;
    if let Some(&var) = probe.eliminated.first() {
        return Err(TowerError::DegenerateTower {
            step: tower.registry().name(var).to_owned(),
        });
    }
    let t = &probe.tower;
    let coeffs: Vec<TowerElem> = coeffs
        .iter()
        .map(|c| t.elem_compose(c, &probe.rewrites))
        .collect::<Result<_, _>>()?;

    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7ace_1d);
    let (d, d_certified) = field_degree_certified(tower, seed)?;

    let budget = 5;
    let mut retries = 0;
    let mut seen: Vec<u32> = Vec::new();
    let mut result: Option<(u32, bool)> = None;
    for attempt in 0..budget {
        let u = linear_combination(t, &coeffs, &mut rng)?;
        let img = minpoly_degree(t, &u)?;
        retries = attempt;
        if img > 0 && d % img == 0 && seen.contains(&img) {
            result = Some((img, true));
            break;
        }
        seen.push(img);
    }
    let (img, img_certified) = result.unwrap_or_else(|| {
        let best = seen
            .iter()
            .copied()
            .filter(|&x| x > 0 && d % x == 0)
            .max()
            .unwrap_or(d);
        (best, false)
    });
    Ok(TracingReport {
        tower_degree: d,
        image_degree: img,
        index: d / img,
        certified: d_certified && img_certified,
        retries,
    })
}

/// Test oracle: numerically enumerates every branch tuple at a base point and
/// counts the tuples whose coefficient values match the principal branch.
/// Returns the fibre cardinality.
pub fn numeric_fibre_count(
    tower: &RadicalTower,
    coeffs: &[TowerElem],
    base: &std::collections::BTreeMap<VarId, crate::kernel::Rat>,
    prec: u32,
) -> Result<u32, TowerError> {
    use crate::kernel::{eval_poly_complex, CNum};
    let basec: std::collections::BTreeMap<VarId, CNum> = base
        .iter()
        .map(|(k, v)| (*k, CNum::from_rat(v, prec)))
        .collect();
    let tuples = tower.branch_tuples();
    let mut values: Vec<Vec<CNum>> = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let gens = tower
            .eval_generators_by_branch(&basec, t, prec)
            .map_err(TowerError::Kernel)?;
        let mut point = basec.clone();
        for (step, val) in tower.steps().iter().zip(gens) {
            point.insert(step.var, val);
        }
        let vals: Vec<CNum> = coeffs
            .iter()
            .map(|c| {
                let n = eval_poly_complex(&c.num, &point, prec);
                let d = eval_poly_complex(&c.den, &point, prec);
                n.div(&d, prec)
            })
            .collect();
        values.push(vals);
    }
    // principal branch is tuple index 0 (all-principal roots)
    let principal = &values[0];
    let tol = -((prec / 2) as i64);
    let mut count = 0u32;
    for vals in &values {
        let matches = vals.iter().zip(principal).all(|(a, b)| {
            let d = a.sub(b, prec);
            match d.mag_log2(prec) {
                None => true,
                Some(l) => {
                    let scale = b.mag_log2(prec).unwrap_or(0);
                    l - scale < tol
                }
            }
        });
        if matches {
            count += 1;
        }
    }
    Ok(count)
}

