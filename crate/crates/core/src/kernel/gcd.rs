//! Multivariate gcd, subresultant remainder sequences, resultants, squarefree
//! decomposition and perfect-power extraction.
//!
//! Everything here works over Q[x1..xk] by recursing on a main variable with
//! the classic primitive/subresultant PRS. Inputs in this artifact are small
//! (few variables, modest degree), so the PRS without modular tricks is the
//! right tool.

use std::collections::BTreeMap;

use num_traits::One;

use super::poly::MPoly;
use super::rat::{rat_power_split, Rat};
use super::vars::VarId;

/// Pseudo-remainder of `a` by `b` with respect to `v`:
/// `lc(b)^(deg a - deg b + 1) * a = q*b + r`.
fn pseudo_rem(a: &MPoly, b: &MPoly, v: VarId) -> MPoly {
    let db = b.degree_in(v);
    debug_assert!(!b.is_zero());
    let lcb = b.leading_coeff_in(v);
    let mut r = a.clone();
    let mut da = r.degree_in(v);
    let mut steps_left = a.degree_in(v).saturating_sub(db) + 1;
    while !r.is_zero() && da >= db && steps_left > 0 {
        let lcr = r.leading_coeff_in(v);
        // r := lc(b)*r - lc(r)*v^(da-db)*b
        let shift = MPoly::from_coeffs_in(r.registry(), v, [(da - db, lcr)]);
        r = &(&r * &lcb) - &(&shift * b);
        da = r.degree_in(v);
        steps_left -= 1;
    }
    // pad remaining multiplications so the pseudo-division identity holds
    for _ in 0..steps_left {
        r = &r * &lcb;
    }
    r
}

/// Content of `p` viewed univariately in `v`: gcd of its coefficients.
pub fn content_in(p: &MPoly, v: VarId) -> MPoly {
    let mut acc = MPoly::zero(p.registry());
    for (_, c) in p.coeffs_in(v) {
        acc = poly_gcd(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Primitive part of `p` with respect to `v`.
pub fn primitive_part_in(p: &MPoly, v: VarId) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c)
}

fn main_variable(p: &MPoly, q: &MPoly) -> Option<VarId> {
    let reg = p.registry();
    let mut best: Option<VarId> = None;
    for v in reg.ids().chain(q.registry().ids()) {
        if p.contains_var(v) || q.contains_var(v) {
            best = Some(best.map_or(v, |b| if v.0 > b.0 { v } else { b }));
        }
    }
    best
}

/// Greatest common divisor, normalized integer-primitive with positive
/// leading coefficient. `gcd(0,0) = 0` by convention.
pub fn poly_gcd(p: &MPoly, q: &MPoly) -> MPoly {
    if p.is_zero() {
        return q.unit_normalized().0;
    }
    if q.is_zero() {
        return p.unit_normalized().0;
    }
    if p.is_constant() || q.is_constant() {
        return MPoly::one(p.registry());
    }
    if p == q {
        return p.unit_normalized().0;
    }
    let v = match main_variable(p, q) {
        Some(v) => v,
        None => return MPoly::one(p.registry()),
    };
    // order by degree in the main variable
    let (mut a, mut b) = if p.degree_in(v) >= q.degree_in(v) {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    };
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    a = a.div_exact(&ca);
    b = b.div_exact(&cb);
    let cont = poly_gcd(&ca, &cb);

    if b.degree_in(v) == 0 {
        // b is v-free and primitive: the v-parts are coprime
        return cont;
    }

    // subresultant PRS on the primitive parts
    let mut g = MPoly::one(a.registry());
    let mut h = MPoly::one(a.registry());
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            // gcd of the primitive parts is trivial
            b = MPoly::one(a.registry());
            break;
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact(&divisor);
        g = a.leading_coeff_in(v);
        h = if delta == 0 {
            h
        } else {
            let gd = g.pow(delta);
            if delta == 1 {
                gd
            } else {
                gd.div_exact(&h.pow(delta - 1))
            }
        };
    }
    let pp = primitive_part_in(&b, v);
    (&cont * &pp).unit_normalized().0
}

/// Resultant of `p` and `q` with respect to `v`, computed through the
/// subresultant remainder sequence. Exact including sign.
pub fn resultant(p: &MPoly, q: &MPoly, v: VarId) -> MPoly {
    let reg = p.registry().clone();
    if p.is_zero() || q.is_zero() {
        return MPoly::zero(&reg);
    }
    let dp = p.degree_in(v);
    let dq = q.degree_in(v);
    if dp == 0 {
        return p.pow(dq);
    }
    if dq == 0 {
        return q.pow(dp);
    }
    let mut sign_negative = false;
    let (mut a, mut b) = if dp >= dq {
        (p.clone(), q.clone())
    } else {
        if dp % 2 == 1 && dq % 2 == 1 {
            sign_negative = true;
        }
        (q.clone(), p.clone())
    };
    // pull out contents: res(c*A, B) = c^(deg B) * res(A, B)
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    a = a.div_exact(&ca);
    b = b.div_exact(&cb);
    let mut scale = &ca.pow(b.degree_in(v)) * &cb.pow(a.degree_in(v));
    if sign_negative {
        scale = -&scale;
    }

    let mut g = MPoly::one(&reg);
    let mut h = MPoly::one(&reg);
    loop {
        let da = a.degree_in(v);
        let db = b.degree_in(v);
        if da % 2 == 1 && db % 2 == 1 {
            scale = -&scale;
        }
        let delta = da - db;
        let r = pseudo_rem(&a, &b, v);
        a = b;
        if r.is_zero() {
            return MPoly::zero(&reg);
        }
        let divisor = &g * &h.pow(delta);
        b = r.div_exact(&divisor);
        g = a.leading_coeff_in(v);
        h = if delta == 0 {
            h
        } else {
            let gd = g.pow(delta);
            if delta == 1 {
                gd
            } else {
                gd.div_exact(&h.pow(delta - 1))
            }
        };
        if b.degree_in(v) == 0 {
            // final step: res = s * B^(deg A) / h^(deg A - 1)
            let da = a.degree_in(v);
            let num = b.pow(da);
            let den = h.pow(da.saturating_sub(1));
            let res = num.div_exact(&den);
            return &scale * &res;
        }
    }
}

/// Squarefree part of `p` as a polynomial in `v`: `p / gcd(p, dp/dv)`,
/// normalized.
pub fn squarefree_part(p: &MPoly, v: VarId) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    if p.degree_in(v) == 0 {
        return MPoly::one(p.registry());
    }
    let g = poly_gcd(p, &p.derivative(v));
    p.div_exact(&g).unit_normalized().0
}

/// Yun squarefree decomposition of a polynomial that is primitive with
/// respect to `v`: returns `(unit, [(f_i, i)])` with
/// `p = unit * prod f_i^i`, every `f_i` squarefree, pairwise coprime.
pub fn yun_decomposition(p: &MPoly, v: VarId) -> (Rat, Vec<(MPoly, u32)>) {
    debug_assert!(p.degree_in(v) > 0);
    let dp = p.derivative(v);
    let g = poly_gcd(p, &dp);
    let mut factors: Vec<(MPoly, u32)> = Vec::new();
    let mut c = p.div_exact(&g);
    let mut d = &dp.div_exact(&g) - &c.derivative(v);
    let mut i = 1u32;
    while c.degree_in(v) > 0 {
        let a = poly_gcd(&c, &d);
        if !a.is_constant() {
            factors.push((a.clone(), i));
        }
        c = c.div_exact(&a);
        d = &d.div_exact(&a) - &c.derivative(v);
        i += 1;
    }
    let mut prod = MPoly::one(p.registry());
    for (f, m) in &factors {
        prod = &prod * &f.pow(*m);
    }
    let unit = p
        .div_exact(&prod)
        .as_constant()
        .expect("Yun decomposition residual must be constant");
    (unit, factors)
}

/// Splits `p = g^e * s` with every e-th-power polynomial factor moved into
/// `g`; the rational coefficient part is split `unit = a^e * b` with bounded
/// trial division on the constant. `s` keeps the residual factors.
pub fn power_split(p: &MPoly, e: u32) -> (MPoly, MPoly) {
    assert!(e >= 1);
    let reg = p.registry().clone();
    if p.is_zero() {
        return (MPoly::one(&reg), p.clone());
    }
    if let Some(c) = p.as_constant() {
        let (a, b) = rat_power_split(&c, e);
        return (MPoly::constant(&reg, a), MPoly::constant(&reg, b));
    }
    let v = *p
        .vars_used()
        .last()
        .expect("non-constant polynomial uses a variable");
    let cont = content_in(p, v);
    let pp = p.div_exact(&cont);
    let (cont_g, cont_s) = power_split(&cont, e);
    let (unit, factors) = yun_decomposition(&pp, v);
    let (unit_g, unit_s) = rat_power_split(&unit, e);
    let mut g = &cont_g * &MPoly::constant(&reg, unit_g);
    let mut s = &cont_s * &MPoly::constant(&reg, unit_s);
    for (f, m) in factors {
        if m / e > 0 {
            g = &g * &f.pow(m / e);
        }
        if m % e > 0 {
            s = &s * &f.pow(m % e);
        }
    }
    (g, s)
}

/// Whether `p` is an exact e-th power; returns the root when it is.
pub fn perfect_power(p: &MPoly, e: u32) -> Option<MPoly> {
    let (g, s) = power_split(p, e);
    if s.is_one() {
        Some(g)
    } else {
        None
    }
}

/// Squarefree-decomposes across all variables: `p = unit * prod f_i^(m_i)`.
/// Used by tests as an independent cross-check.
pub fn full_factor_multiplicities(p: &MPoly) -> (Rat, Vec<(MPoly, u32)>) {
    let mut out: Vec<(MPoly, u32)> = Vec::new();
    let mut unit = Rat::one();
    let mut work: Vec<MPoly> = vec![p.clone()];
    while let Some(q) = work.pop() {
        if let Some(c) = q.as_constant() {
            unit *= c;
            continue;
        }
        let v = *q.vars_used().last().unwrap();
        let cont = content_in(&q, v);
        let pp = q.div_exact(&cont);
        if !cont.is_constant() {
            work.push(cont);
        } else {
            unit *= cont.as_constant().unwrap();
        }
        let (u, factors) = yun_decomposition(&pp, v);
        unit *= u;
        for (f, m) in factors {
            out.push((f, m));
        }
    }
    (unit, out)
}

/// Collects the gcd of a whole family.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a MPoly>) -> Option<MPoly> {
    let mut acc: Option<MPoly> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.unit_normalized().0,
            Some(a) => poly_gcd(&a, p),
        });
        if acc.as_ref().map(|a| a.is_one()).unwrap_or(false) {
            break;
        }
    }
    acc
}

/// Determinant by fraction-free Bareiss elimination; entries are polynomials.
/// Test oracle for the subresultant-based resultant and the Jacobian checks.
pub fn bareiss_determinant(matrix: &[Vec<MPoly>]) -> MPoly {
    let n = matrix.len();
    if n == 0 {
        panic!("empty matrix");
    }
    let reg = matrix[0][0].registry().clone();
    let mut m: Vec<Vec<MPoly>> = matrix.to_vec();
    let mut sign_negative = false;
    let mut prev = MPoly::one(&reg);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign_negative = !sign_negative;
                }
                None => return MPoly::zero(&reg),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev);
            }
        }
        for item in m.iter_mut().skip(k + 1) {
            item[k] = MPoly::zero(&reg);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_negative {
        -&det
    } else {
        det
    }
}

/// Sylvester-matrix resultant via Bareiss; test oracle for `resultant`.
pub fn sylvester_resultant(p: &MPoly, q: &MPoly, v: VarId) -> MPoly {
    let reg = p.registry().clone();
    if p.is_zero() || q.is_zero() {
        return MPoly::zero(&reg);
    }
    let dp = p.degree_in(v) as usize;
    let dq = q.degree_in(v) as usize;
    if dp == 0 {
        return p.pow(dq as u32);
    }
    if dq == 0 {
        return q.pow(dp as u32);
    }
    let pc: BTreeMap<u32, MPoly> = p.coeffs_in(v);
    let qc: BTreeMap<u32, MPoly> = q.coeffs_in(v);
    let coeff = |cs: &BTreeMap<u32, MPoly>, i: i64| -> MPoly {
        if i < 0 {
            return MPoly::zero(&reg);
        }
        cs.get(&(i as u32)).cloned().unwrap_or_else(|| MPoly::zero(&reg))
    };
    let n = dp + dq;
    let mut rows: Vec<Vec<MPoly>> = Vec::with_capacity(n);
    for r in 0..dq {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            row.push(coeff(&pc, dp as i64 - (c as i64 - r as i64)));
        }
        rows.push(row);
    }
    for r in 0..dp {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            row.push(coeff(&qc, dq as i64 - (c as i64 - r as i64)));
        }
        rows.push(row);
    }
    bareiss_determinant(&rows)
}
