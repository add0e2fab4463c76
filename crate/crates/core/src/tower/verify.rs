//! Symbolic verification of a claimed parametrization: tower identities,
//! generic Jacobian rank, and properness of the attached inverse.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::def::RadicalTower;
use crate::kernel::{Rat, RatFunc, VarId, VarKind};
use crate::parametrize::Parametrization;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    /// A tower defining equation does not vanish under the components.
    GeneratorResidual { step: String, residual: String },
    /// The Jacobian of the x-components is identically singular.
    SingularJacobian,
    /// Component substitution hit an identically-zero denominator.
    Pole { step: String },
    /// h(Q(z)) differs from z in some component.
    NotProper { component: usize, got: String },
    /// Structural mismatch (wrong component count).
    Shape { msg: String },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::GeneratorResidual { step, residual } => {
                write!(f, "tower equation for {step} does not vanish: residual {residual}")
            }
            VerifyFailure::SingularJacobian => {
                write!(f, "Jacobian of the x-components is identically singular")
            }
            VerifyFailure::Pole { step } => {
                write!(f, "denominator vanishes identically while checking {step}")
            }
            VerifyFailure::NotProper { component, got } => {
                write!(f, "inverse check failed: h(Q(z))[{component}] = {got} != z")
            }
            VerifyFailure::Shape { msg } => write!(f, "{msg}"),
        }
    }
}

/// Determinant of a small matrix of rational functions by cofactor
/// expansion.
pub fn ratfunc_determinant(m: &[Vec<RatFunc>]) -> RatFunc {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    let reg = m[0][0].registry();
    let mut det = RatFunc::zero(reg);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatFunc>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cof = entry.mul(&ratfunc_determinant(&minor));
        det = if j % 2 == 0 { det.add(&cof) } else { det.sub(&cof) };
    }
    det
}

/// Jacobian matrix d(components)/d(z_vars).
pub fn jacobian(components: &[RatFunc], z_vars: &[VarId]) -> Vec<Vec<RatFunc>> {
    components
        .iter()
        .map(|c| z_vars.iter().map(|&z| c.derivative(z)).collect())
        .collect()
}

/// Checks that `q` parametrizes the tower variety of `t`: every defining
/// equation vanishes identically, the x-components have generically
/// invertible Jacobian, and, when an inverse is attached, h(Q(z)) = z.
pub fn verify_parametrization(
    t: &RadicalTower,
    x_vars: &[VarId],
    q: &Parametrization,
    seed: u64,
) -> Result<(), VerifyFailure> {
    if q.x_components.len() != x_vars.len() {
        return Err(VerifyFailure::Shape {
            msg: format!(
                "expected {} x-components, got {}",
                x_vars.len(),
                q.x_components.len()
            ),
        });
    }
    if q.d_components.len() != t.len() {
        return Err(VerifyFailure::Shape {
            msg: format!(
                "expected {} generator components, got {}",
                t.len(),
                q.d_components.len()
            ),
        });
    }
    let bindings = q.bindings(x_vars, &t.generator_vars());

    // 1. tower equations vanish identically
    for (i, g) in t.equations().iter().enumerate() {
        let gf = RatFunc::from_poly(g.clone());
        let step_name = t.registry().name(t.steps()[i].var).to_owned();
        match gf.substitute(&bindings) {
            Err(_) => {
                return Err(VerifyFailure::Pole { step: step_name });
            }
            Ok(res) => {
                if !res.is_zero() {
                    return Err(VerifyFailure::GeneratorResidual {
                        step: step_name,
                        residual: res.to_string(),
                    });
                }
            }
        }
    }

    // 2. generic rank of the x-component Jacobian: a cheap randomized rank
    //    probe first, the symbolic determinant as the decision
    let jac = jacobian(&q.x_components, &q.z_vars);
    let n = q.z_vars.len();
    if q.x_components.len() != n {
        return Err(VerifyFailure::Shape {
            msg: format!(
                "{} x-components over {} parameters",
                q.x_components.len(),
                n
            ),
        });
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xbeef);
    let mut rank_probe_ok = false;
    'probe: for _ in 0..5 {
        let mut point: BTreeMap<VarId, Rat> = BTreeMap::new();
        for v in q.x_components[0].registry().ids() {
            let kind = q.x_components[0].registry().kind(v);
            if kind == VarKind::Param || q.z_vars.contains(&v) {
                point.insert(v, Rat::from_integer(rng.random_range(2..=97i64).into()));
            }
        }
        let mut vals: Vec<Vec<Rat>> = Vec::new();
        for row in &jac {
            let mut r = Vec::new();
            for entry in row {
                match entry.eval_rat(&point) {
                    Ok(v) => r.push(v),
                    Err(_) => continue 'probe,
                }
            }
            vals.push(r);
        }
        if rat_matrix_rank(vals) == n {
            rank_probe_ok = true;
            break;
        }
    }
    let det = ratfunc_determinant(&jac);
    if det.is_zero() {
        return Err(VerifyFailure::SingularJacobian);
    }
    let _ = rank_probe_ok;

    // 3. properness of the attached inverse
    if let Some(h) = &q.inverse {
        // labels bind to components in order: x-components then d-components
        let mut label_bindings: BTreeMap<VarId, RatFunc> = BTreeMap::new();
        let all: Vec<&RatFunc> = q.x_components.iter().chain(&q.d_components).collect();
        for (lv, comp) in q.label_vars.iter().zip(all) {
            label_bindings.insert(*lv, comp.clone());
        }
        for (j, hj) in h.iter().enumerate() {
            match hj.substitute(&label_bindings) {
                Err(_) => {
                    return Err(VerifyFailure::Pole {
                        step: format!("inverse component {j}"),
                    })
                }
                Ok(res) => {
                    let z = RatFunc::var(q.x_components[0].registry(), q.z_vars[j]);
                    if res != z {
                        return Err(VerifyFailure::NotProper {
                            component: j,
                            got: res.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn rat_matrix_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for r in row + 1..rows {
            let factor = &m[r][col] / &pv;
            for c in col..cols {
                let sub = &m[row][c] * &factor;
                m[r][c] = &m[r][c] - &sub;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}
