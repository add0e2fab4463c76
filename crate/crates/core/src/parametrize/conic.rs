//! Proper parametrization of conics by the pencil of lines through a
//! rational point.
//!
//! Point selection priority: rational points at infinity, then axis
//! intercepts with square discriminant, then a bounded-height search (only
//! when the coefficients are free of parameters). Candidates at each stage
//! are enumerated in a fixed canonical order, so the output is deterministic;
//! for `v^2 = u^2 + g` the selected pencil gives the slope map `t = u + v`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::kernel::{perfect_power, poly_gcd, MPoly, Rat, RatFunc, VarId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicFailure {
    /// No rational point was found; the conic may still have one over an
    /// extension field, so the caller reports "unknown", never
    /// "non-rational".
    NoRationalPointFound,
    /// The quadratic form is degenerate (a product of lines).
    Degenerate,
    /// The polynomial is not a conic in the two variables.
    NotAConic,
}

/// A proper parametrization of `q(u, v) = 0` with its slope inverse.
#[derive(Debug, Clone)]
pub struct ConicParam {
    pub u: RatFunc,
    pub v: RatFunc,
    /// Inverse: the pencil parameter expressed in (u, v).
    pub slope: RatFunc,
}

struct Coeffs {
    a: MPoly, // u^2
    b: MPoly, // uv
    c: MPoly, // v^2
    d: MPoly, // u
    e: MPoly, // v
    f: MPoly, // 1
}

fn coeffs(q: &MPoly, u: VarId, v: VarId) -> Option<Coeffs> {
    let reg = q.registry().clone();
    let mut parts = BTreeMap::new();
    for (m, coef) in q.terms() {
        let eu = m.exp(u);
        let ev = m.exp(v);
        if eu + ev > 2 {
            return None;
        }
        let mut rest = m.clone();
        rest = rest.with_exp(u, 0).with_exp(v, 0);
        parts
            .entry((eu, ev))
            .or_insert_with(|| MPoly::zero(&reg))
            .add_term(rest, coef.clone());
    }
    let get = |k: (u32, u32)| parts.get(&k).cloned().unwrap_or_else(|| MPoly::zero(&reg));
    Some(Coeffs {
        a: get((2, 0)),
        b: get((1, 1)),
        c: get((0, 2)),
        d: get((1, 0)),
        e: get((0, 1)),
        f: get((0, 0)),
    })
}

/// Canonical representative of a projective direction (u0 : v0): primitive
/// including the rational content, with v0 positive-leading, or u0
/// negative-leading when v0 = 0.
fn canonical_direction(u0: MPoly, v0: MPoly) -> (MPoly, MPoly) {
    let g = poly_gcd(&u0, &v0);
    let (mut u0, mut v0) = if g.is_zero() {
        (u0, v0)
    } else {
        (u0.div_exact(&g), v0.div_exact(&g))
    };
    // strip the joint rational content
    let cu = u0.rational_content();
    let cv = v0.rational_content();
    let joint = rat_content_gcd(&cu, &cv);
    if !joint.is_zero() {
        let inv = Rat::one() / joint;
        u0 = u0.scale(&inv);
        v0 = v0.scale(&inv);
    }
    let flip = if v0.is_zero() {
        !u0.leading_coeff().is_negative()
    } else {
        v0.leading_coeff().is_negative()
    };
    if flip {
        u0 = -&u0;
        v0 = -&v0;
    }
    (u0, v0)
}

/// gcd of two rational contents: gcd of numerators over lcm of denominators,
/// always nonnegative.
fn rat_content_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_bigint::BigInt;
    use num_integer::Integer;
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num: BigInt = a.numer().gcd(b.numer());
    let den: BigInt = a.denom().lcm(b.denom());
    Rat::new(num, den).abs()
}

/// Rational root directions of the degree-2 form `a u^2 + b uv + c v^2`.
fn infinity_directions(co: &Coeffs) -> Vec<(MPoly, MPoly)> {
    let reg = co.a.registry().clone();
    let one = MPoly::one(&reg);
    let mut out = Vec::new();
    if co.a.is_zero() {
        // form = v (b u + c v)
        out.push(canonical_direction(one.clone(), MPoly::zero(&reg)));
        if !co.b.is_zero() {
            out.push(canonical_direction(-&co.c, co.b.clone()));
        }
    } else {
        // u/v = (-b ± s) / (2a) with s^2 = b^2 - 4ac
        let disc = &(&co.b * &co.b) - &(&co.a * &co.c).scale(&Rat::from_integer(4.into()));
        if let Some(s) = perfect_power(&disc, 2) {
            let two_a = co.a.scale(&Rat::from_integer(2.into()));
            out.push(canonical_direction(&(-&co.b) + &s, two_a.clone()));
            out.push(canonical_direction(&(-&co.b) - &s, two_a));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Solves `c2 y^2 + c1 y + c0 = 0` for rational roots over the parameter
/// field; returns both roots when the discriminant is a perfect square.
fn quadratic_rational_roots(c2: &MPoly, c1: &MPoly, c0: &MPoly) -> Vec<RatFunc> {
    let mut out = Vec::new();
    if c2.is_zero() {
        if !c1.is_zero() {
            out.push(RatFunc::new(-c0, c1.clone()));
        }
        return out;
    }
    let disc = &(c1 * c1) - &(c2 * c0).scale(&Rat::from_integer(4.into()));
    if let Some(s) = perfect_power(&disc, 2) {
        let two_c2 = c2.scale(&Rat::from_integer(2.into()));
        out.push(RatFunc::new(&(-c1) + &s, two_c2.clone()));
        out.push(RatFunc::new(&(-c1) - &s, two_c2));
    }
    out.sort();
    out.dedup();
    out
}

fn has_params(q: &MPoly, u: VarId, v: VarId) -> bool {
    q.vars_used().iter().any(|&w| w != u && w != v)
}

/// Parametrizes an irreducible conic `q(u, v) = 0` over the parameter field,
/// using the fresh variable `z` as the pencil parameter.
pub fn parametrize_conic(
    q: &MPoly,
    u: VarId,
    v: VarId,
    z: VarId,
) -> Result<ConicParam, ConicFailure> {
    let reg = q.registry().clone();
    let co = coeffs(q, u, v).ok_or(ConicFailure::NotAConic)?;
    if co.a.is_zero() && co.b.is_zero() && co.c.is_zero() {
        return Err(ConicFailure::NotAConic);
    }
    // degeneracy: det of the symmetric matrix (scaled by 8 to stay integral)
    // | 2a  b   d |
    // | b   2c  e |
    // | d   e   2f |
    let det = {
        let m = |x: &MPoly| x.clone();
        let two = |x: &MPoly| x.scale(&Rat::from_integer(2.into()));
        let a2 = two(&co.a);
        let c2 = two(&co.c);
        let f2 = two(&co.f);
        let t1 = &a2 * &(&(&c2 * &f2) - &(&co.e * &co.e));
        let t2 = &m(&co.b) * &(&(&m(&co.b) * &f2) - &(&co.e * &co.d));
        let t3 = &m(&co.d) * &(&(&m(&co.b) * &co.e) - &(&c2 * &co.d));
        &(&t1 - &t2) + &t3
    };
    if det.is_zero() {
        return Err(ConicFailure::Degenerate);
    }

    // (1) rational points at infinity
    for (u0, v0) in infinity_directions(&co) {
        if let Some(p) = param_through_infinity(q, &co, u, v, z, &u0, &v0) {
            return Ok(p);
        }
    }

    // (2) axis intercepts with square discriminant
    let mut finite: Vec<(RatFunc, RatFunc)> = Vec::new();
    for vr in quadratic_rational_roots(&co.c, &co.e, &co.f) {
        finite.push((RatFunc::zero(&reg), vr));
    }
    for ur in quadratic_rational_roots(&co.a, &co.d, &co.f) {
        finite.push((ur, RatFunc::zero(&reg)));
    }
    finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
    finite.dedup();
    for (u0, v0) in &finite {
        if let Some(p) = param_through_point(q, u, v, z, u0, v0) {
            return Ok(p);
        }
    }

    // (3) bounded height search, only without parameters
    if !has_params(q, u, v) {
        for qden in 1i64..=100 {
            for pnum in -100i64..=100 {
                if num_integer::Integer::gcd(&pnum, &qden) != 1 {
                    continue;
                }
                let u0 = RatFunc::constant(&reg, Rat::new(pnum.into(), qden.into()));
                // solve c v^2 + (b u0 + e) v + (a u0^2 + d u0 + f) = 0
                let u0p = u0.num().scale(&(Rat::one() / u0.den().as_constant().unwrap()));
                let c2 = co.c.clone();
                let c1 = &(&co.b * &u0p) + &co.e;
                let c0 = &(&(&co.a * &u0p) * &u0p) + &(&(&co.d * &u0p) + &co.f);
                for vr in quadratic_rational_roots(&c2, &c1, &c0) {
                    if let Some(p) = param_through_point(q, u, v, z, &u0, &vr) {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(ConicFailure::NoRationalPointFound)
}

/// Pencil of lines with direction (u0 : v0), a point of the conic at
/// infinity: lines `v0*u - u0*v = t`.
fn param_through_infinity(
    q: &MPoly,
    co: &Coeffs,
    u: VarId,
    v: VarId,
    z: VarId,
    u0: &MPoly,
    v0: &MPoly,
) -> Option<ConicParam> {
    let reg = q.registry().clone();
    let zf = RatFunc::var(&reg, z);
    let slope = RatFunc::from_poly(&(v0 * &MPoly::var(&reg, u)) - &(u0 * &MPoly::var(&reg, v)));
    if !v0.is_zero() {
        // u = (t + u0 v)/v0, substitute and solve the linear equation in v
        let mut bind = BTreeMap::new();
        bind.insert(
            u,
            RatFunc::new(
                &MPoly::var(&reg, z) + &(u0 * &MPoly::var(&reg, v)),
                v0.clone(),
            ),
        );
        let qq = RatFunc::from_poly(q.clone()).substitute(&bind).ok()?;
        let numer = qq.num();
        if numer.degree_in(v) != 1 {
            return None;
        }
        let cs = numer.coeffs_in(v);
        let c1 = cs.get(&1).cloned()?;
        let c0 = cs.get(&0).cloned().unwrap_or_else(|| MPoly::zero(&reg));
        if c1.is_zero() {
            return None;
        }
        let v_of_t = RatFunc::new(-&c0, c1);
        let u_of_t = zf
            .add(&v_of_t.mul(&RatFunc::from_poly(u0.clone())))
            .div(&RatFunc::from_poly(v0.clone()));
        Some(ConicParam {
            u: u_of_t,
            v: v_of_t,
            slope,
        })
    } else {
        // direction (u0, 0): lines v = -t/u0; q becomes linear in u
        let _ = co;
        let mut bind = BTreeMap::new();
        bind.insert(
            v,
            RatFunc::new(-&MPoly::var(&reg, z), u0.clone()),
        );
        let qq = RatFunc::from_poly(q.clone()).substitute(&bind).ok()?;
        let numer = qq.num();
        if numer.degree_in(u) != 1 {
            return None;
        }
        let cs = numer.coeffs_in(u);
        let c1 = cs.get(&1).cloned()?;
        let c0 = cs.get(&0).cloned().unwrap_or_else(|| MPoly::zero(&reg));
        if c1.is_zero() {
            return None;
        }
        let u_of_t = RatFunc::new(-&c0, c1);
        let v_of_t = zf.neg().div(&RatFunc::from_poly(u0.clone()));
        Some(ConicParam {
            u: u_of_t,
            v: v_of_t,
            slope,
        })
    }
}

/// Pencil of lines through a finite rational point: `v = v0 + t (u - u0)`,
/// slope map `t = (v - v0)/(u - u0)`.
fn param_through_point(
    q: &MPoly,
    u: VarId,
    v: VarId,
    z: VarId,
    u0: &RatFunc,
    v0: &RatFunc,
) -> Option<ConicParam> {
    let reg = q.registry().clone();
    // check the point is on the conic
    let mut at = BTreeMap::new();
    at.insert(u, u0.clone());
    at.insert(v, v0.clone());
    let on = RatFunc::from_poly(q.clone()).substitute(&at).ok()?;
    if !on.is_zero() {
        return None;
    }
    let zf = RatFunc::var(&reg, z);
    let uf = RatFunc::var(&reg, u);
    // substitute v = v0 + t(u - u0); q becomes quadratic in u with root u0
    let mut bind = BTreeMap::new();
    bind.insert(v, v0.add(&zf.mul(&uf.sub(u0))));
    let qq = RatFunc::from_poly(q.clone()).substitute(&bind).ok()?;
    let numer = qq.num();
    let cs = numer.coeffs_in(u);
    let c2 = cs.get(&2).cloned().unwrap_or_else(|| MPoly::zero(&reg));
    let c1 = cs.get(&1).cloned().unwrap_or_else(|| MPoly::zero(&reg));
    if c2.is_zero() {
        return None;
    }
    // sum of the two roots = -c1/c2; the second intersection:
    let u_of_t = RatFunc::new(-&c1, c2).sub(u0);
    let v_of_t = v0.add(&zf.mul(&u_of_t.sub(u0)));
    let slope = RatFunc::var(&reg, v)
        .sub(v0)
        .div(&RatFunc::var(&reg, u).sub(u0));
    Some(ConicParam {
        u: u_of_t,
        v: v_of_t,
        slope,
    })
}
