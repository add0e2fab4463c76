//! Strategy-pipeline tests: exact parametrizations for the worked examples,
//! conic machinery, inversion, and soundness properties.

use std::collections::BTreeMap;

use num_traits::Zero;

use radform_core::kernel::{rat_i, MPoly, Rat, RatFunc, VarId, VarKind, VarRegistry};
use radform_core::parametrize::{
    invert_parametrization, parametrize_conic, parametrize_tower, ConicFailure, ParamOutcome,
};
use radform_core::tower::{verify_parametrization, RadicalTower, TowerElem};

fn elem(t: &RadicalTower, p: MPoly) -> TowerElem {
    t.elem_normalize(p, MPoly::one(t.registry())).unwrap()
}

fn rf(reg: &std::sync::Arc<VarRegistry>, v: VarId) -> RatFunc {
    RatFunc::var(reg, v)
}

/// Renders a rational function against the final registry for quick exact
/// string comparison in tests.
fn s(f: &RatFunc) -> String {
    f.to_string()
}

#[test]
fn intro_tower_parametrization_matches_remark() {
    // [d1^2=x, d2^2=x+1]: x=(z^2-1)^2/(4z^2), d1=(z^2-1)/(2z), d2=(z^2+1)/(2z)
    let reg = VarRegistry::build(&[("x", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    t.push_step("d1", 2, elem(&t, MPoly::var(&reg, x)));
    let r2 = elem(&t, &MPoly::var(t.registry(), x) + &MPoly::one(t.registry()));
    t.push_step("d2", 2, r2);

    let outcome = parametrize_tower(&t, &[x]).unwrap();
    let q = match outcome {
        ParamOutcome::Found(q) => q,
        other => panic!("expected Found, got {other:?}"),
    };
    assert_eq!(s(&q.x_components[0]), "(z^4 - 2*z^2 + 1)/(4*z^2)");
    assert_eq!(s(&q.d_components[0]), "(z^2 - 1)/(2*z)");
    assert_eq!(s(&q.d_components[1]), "(z^2 + 1)/(2*z)");
    // inverse h(A,B,C) = B + C
    let h = q.inverse.as_ref().unwrap();
    assert_eq!(h.len(), 1);
    assert_eq!(s(&h[0]), "B + C");
    verify_parametrization(&t, &[x], &q, 0).unwrap();
}

#[test]
fn single_sqrt_shift_parametrization() {
    // [d^2 = x+1] -> (z^2 - 1, z), inverse B
    let reg = VarRegistry::build(&[("x", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let rad = elem(&t, &MPoly::var(&reg, x) + &MPoly::one(&reg));
    t.push_step("d", 2, rad);
    let q = match parametrize_tower(&t, &[x]).unwrap() {
        ParamOutcome::Found(q) => q,
        other => panic!("expected Found, got {other:?}"),
    };
    assert_eq!(s(&q.x_components[0]), "z^2 - 1");
    assert_eq!(s(&q.d_components[0]), "z");
    assert_eq!(s(&q.inverse.as_ref().unwrap()[0]), "B");
    verify_parametrization(&t, &[x], &q, 0).unwrap();
}

#[test]
fn genus_one_step_is_proven_non_rational() {
    // [d^2 = x^3 - 1]
    let reg = VarRegistry::build(&[("x", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let xv = MPoly::var(&reg, x);
    let rad = elem(&t, &(&(&xv * &xv) * &xv) - &MPoly::one(&reg));
    t.push_step("d", 2, rad);
    match parametrize_tower(&t, &[x]).unwrap() {
        ParamOutcome::ProvenNonRational(w) => {
            assert_eq!(w.degree, 3);
        }
        other => panic!("expected ProvenNonRational, got {other:?}"),
    }
}

#[test]
fn quintic_root_step_is_unknown() {
    // [d^5 = x^5 + x + 1]: outside the decision scope by design
    let reg = VarRegistry::build(&[("x", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let xv = MPoly::var(&reg, x);
    let rad = elem(
        &t,
        &(&xv.pow(5) + &xv) + &MPoly::one(&reg),
    );
    t.push_step("d", 5, rad);
    match parametrize_tower(&t, &[x]).unwrap() {
        ParamOutcome::Unknown { .. } => {}
        other => panic!("expected Unknown, got {other:?}"),
    }
}

#[test]
fn conic_hyperbola_unit() {
    // v^2 = u^2 + 1 -> u=(z^2-1)/(2z), v=(z^2+1)/(2z), slope z = u+v
    let reg = VarRegistry::build(&[
        ("u", VarKind::Base),
        ("v", VarKind::Base),
        ("z", VarKind::Fresh),
    ]);
    let u = reg.lookup("u").unwrap();
    let v = reg.lookup("v").unwrap();
    let z = reg.lookup("z").unwrap();
    let q = &(&(&MPoly::var(&reg, v) * &MPoly::var(&reg, v))
        - &(&MPoly::var(&reg, u) * &MPoly::var(&reg, u)))
        - &MPoly::one(&reg);
    let p = parametrize_conic(&q, u, v, z).unwrap();
    assert_eq!(s(&p.u), "(z^2 - 1)/(2*z)");
    assert_eq!(s(&p.v), "(z^2 + 1)/(2*z)");
    assert_eq!(s(&p.slope), "u + v");
    // identity check q(u(z), v(z)) = 0 and slope inverse
    let mut bind = BTreeMap::new();
    bind.insert(u, p.u.clone());
    bind.insert(v, p.v.clone());
    assert!(RatFunc::from_poly(q).substitute(&bind).unwrap().is_zero());
    assert_eq!(p.slope.substitute(&bind).unwrap(), rf(&reg, z));
}

#[test]
fn conic_hyperbola_with_parameter() {
    // v^2 = u^2 + c^2 -> u=(z^2-c^2)/(2z), v=(z^2+c^2)/(2z)
    let reg = VarRegistry::build(&[
        ("u", VarKind::Base),
        ("v", VarKind::Base),
        ("c", VarKind::Param),
        ("z", VarKind::Fresh),
    ]);
    let u = reg.lookup("u").unwrap();
    let v = reg.lookup("v").unwrap();
    let c = reg.lookup("c").unwrap();
    let z = reg.lookup("z").unwrap();
    let q = &(&(&MPoly::var(&reg, v) * &MPoly::var(&reg, v))
        - &(&MPoly::var(&reg, u) * &MPoly::var(&reg, u)))
        - &(&MPoly::var(&reg, c) * &MPoly::var(&reg, c));
    let p = parametrize_conic(&q, u, v, z).unwrap();
    assert_eq!(s(&p.u), "(-c^2 + z^2)/(2*z)");
    assert_eq!(s(&p.v), "(c^2 + z^2)/(2*z)");
}

#[test]
fn conic_without_rational_points() {
    // u^2 + v^2 = -1
    let reg = VarRegistry::build(&[
        ("u", VarKind::Base),
        ("v", VarKind::Base),
        ("z", VarKind::Fresh),
    ]);
    let u = reg.lookup("u").unwrap();
    let v = reg.lookup("v").unwrap();
    let z = reg.lookup("z").unwrap();
    let q = &(&(&MPoly::var(&reg, u) * &MPoly::var(&reg, u))
        + &(&MPoly::var(&reg, v) * &MPoly::var(&reg, v)))
        + &MPoly::one(&reg);
    match parametrize_conic(&q, u, v, z) {
        Err(ConicFailure::NoRationalPointFound) => {}
        other => panic!("expected NoRationalPointFound, got {other:?}"),
    }
}

#[test]
fn nested_tower_parametrization_matches_example() {
    // [d1^2 = x2, d2^2 = x1 + d1]:
    // Q = (z1, (z2^2 - z1)^2, z3, z2^2 - z1, z2), inverse (A, E, C)
    let reg = VarRegistry::build(&[
        ("x1", VarKind::Base),
        ("x2", VarKind::Base),
        ("x3", VarKind::Base),
    ]);
    let x1 = reg.lookup("x1").unwrap();
    let x2 = reg.lookup("x2").unwrap();
    let x3 = reg.lookup("x3").unwrap();
    let mut t = RadicalTower::empty(&reg);
    t.push_step("d1", 2, elem(&t, MPoly::var(&reg, x2)));
    let nested = elem(
        &t,
        &MPoly::var(t.registry(), x1) + &MPoly::var(t.registry(), t.steps()[0].var),
    );
    t.push_step("d2", 2, nested);
    let q = match parametrize_tower(&t, &[x1, x2, x3]).unwrap() {
        ParamOutcome::Found(q) => q,
        other => panic!("expected Found, got {other:?}"),
    };
    assert_eq!(s(&q.x_components[0]), "z1");
    assert_eq!(s(&q.x_components[1]), "z2^4 - 2*z1*z2^2 + z1^2");
    assert_eq!(s(&q.x_components[2]), "z3");
    assert_eq!(s(&q.d_components[0]), "z2^2 - z1");
    assert_eq!(s(&q.d_components[1]), "z2");
    let h = q.inverse.as_ref().unwrap();
    assert_eq!(s(&h[0]), "A");
    assert_eq!(s(&h[1]), "E");
    assert_eq!(s(&h[2]), "C");
    verify_parametrization(&t, &[x1, x2, x3], &q, 0).unwrap();
}

#[test]
fn cone_tower_parametrization_via_homogeneity() {
    // [d^2 = x1^2 + x2^2]: homogeneity split then conic
    let reg = VarRegistry::build(&[("x1", VarKind::Base), ("x2", VarKind::Base)]);
    let x1 = reg.lookup("x1").unwrap();
    let x2 = reg.lookup("x2").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let rad = elem(
        &t,
        &(&MPoly::var(&reg, x1) * &MPoly::var(&reg, x1))
            + &(&MPoly::var(&reg, x2) * &MPoly::var(&reg, x2)),
    );
    t.push_step("d", 2, rad);
    let q = match parametrize_tower(&t, &[x1, x2]).unwrap() {
        ParamOutcome::Found(q) => q,
        other => panic!("expected Found, got {other:?}"),
    };
    verify_parametrization(&t, &[x1, x2], &q, 0).unwrap();
    // x2 survives as an identity coordinate
    assert_eq!(s(&q.x_components[1]), "z2");
    // inverse ((A+C)/B, B)
    let h = q.inverse.as_ref().unwrap();
    assert_eq!(s(&h[0]), "(A + C)/B");
    assert_eq!(s(&h[1]), "B");
}

#[test]
fn gcd_inversion_examples() {
    // (z^2-1, z) -> h = B; (z^2, z^3) -> h = B/A
    let reg0 = VarRegistry::build(&[("z", VarKind::Fresh)]);
    let z = reg0.lookup("z").unwrap();
    let (reg1, la) = reg0.with_var("A", VarKind::Fresh);
    let (reg, lb) = reg1.with_var("B", VarKind::Fresh);
    let zv = MPoly::var(&reg, z);
    let comps1 = vec![
        RatFunc::from_poly(&(&zv * &zv) - &MPoly::one(&reg)),
        RatFunc::from_poly(zv.clone()),
    ];
    let h1 = invert_parametrization(&reg, &comps1, &[z], &[la, lb]).unwrap();
    assert_eq!(s(&h1[0]), "B");
    let comps2 = vec![
        RatFunc::from_poly(&zv * &zv),
        RatFunc::from_poly(&(&zv * &zv) * &zv),
    ];
    let h2 = invert_parametrization(&reg, &comps2, &[z], &[la, lb]).unwrap();
    assert_eq!(s(&h2[0]), "B/A");
}

#[test]
fn gcd_inversion_agrees_with_composed_inverse() {
    // on the intro tower: both inverses compose with Q to the identity
    let reg = VarRegistry::build(&[("x", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    t.push_step("d1", 2, elem(&t, MPoly::var(&reg, x)));
    let r2 = elem(&t, &MPoly::var(t.registry(), x) + &MPoly::one(t.registry()));
    t.push_step("d2", 2, r2);
    let q = match parametrize_tower(&t, &[x]).unwrap() {
        ParamOutcome::Found(q) => q,
        other => panic!("expected Found, got {other:?}"),
    };
    let reg_full = q.x_components[0].registry().clone();
    let z = q.z_vars[0];
    let comps: Vec<RatFunc> = q
        .x_components
        .iter()
        .chain(&q.d_components)
        .cloned()
        .collect();
    let h_gcd = invert_parametrization(&reg_full, &comps, &[z], &q.label_vars).unwrap();
    // not necessarily the same expression as the composed inverse, but both
    // must compose to the identity on the curve
    let mut bind = BTreeMap::new();
    for (lv, c) in q.label_vars.iter().zip(&comps) {
        bind.insert(*lv, c.clone());
    }
    assert_eq!(h_gcd[0].substitute(&bind).unwrap(), rf(&reg_full, z));
    let h_comp = &q.inverse.as_ref().unwrap()[0];
    assert_eq!(h_comp.substitute(&bind).unwrap(), rf(&reg_full, z));
}

#[test]
fn random_conics_with_planted_points() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 50 {
        // plant a rational point and a random conic through it
        let reg = VarRegistry::build(&[
            ("u", VarKind::Base),
            ("v", VarKind::Base),
            ("z", VarKind::Fresh),
        ]);
        let u = reg.lookup("u").unwrap();
        let v = reg.lookup("v").unwrap();
        let z = reg.lookup("z").unwrap();
        let u0 = rat_i(rng.random_range(-5..=5));
        let v0 = rat_i(rng.random_range(-5..=5));
        let a = rat_i(rng.random_range(-4..=4));
        let b = rat_i(rng.random_range(-4..=4));
        let c = rat_i(rng.random_range(-4..=4));
        let d = rat_i(rng.random_range(-4..=4));
        let e = rat_i(rng.random_range(-4..=4));
        // f chosen so (u0, v0) lies on the conic
        let f = -(&(&(&a * &u0) * &u0)
            + &(&(&(&b * &u0) * &v0) + &(&(&c * &v0) * &v0)))
            - (&(&d * &u0) + &(&e * &v0));
        let uv = MPoly::var(&reg, u);
        let vv = MPoly::var(&reg, v);
        let q = &(&(&(&uv * &uv).scale(&a) + &(&uv * &vv).scale(&b)) + &(&vv * &vv).scale(&c))
            + &(&(&uv.scale(&d) + &vv.scale(&e)) + &MPoly::constant(&reg, f));
        if q.is_zero() || (a.is_zero() && b.is_zero() && c.is_zero()) {
            continue;
        }
        let p = match parametrize_conic(&q, u, v, z) {
            Ok(p) => p,
            Err(ConicFailure::Degenerate) | Err(ConicFailure::NotAConic) => continue,
            Err(ConicFailure::NoRationalPointFound) => {
                panic!("planted point missed for {q}")
            }
        };
        let mut bind = BTreeMap::new();
        bind.insert(u, p.u.clone());
        bind.insert(v, p.v.clone());
        assert!(
            RatFunc::from_poly(q.clone()).substitute(&bind).unwrap().is_zero(),
            "conic identity fails for {q}"
        );
        assert_eq!(
            p.slope.substitute(&bind).unwrap(),
            rf(&reg, z),
            "slope inverse fails for {q}"
        );
        done += 1;
    }
}

#[test]
fn planted_rational_towers_never_proven_non_rational() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..25 {
        // radicand m(x)^2 * (optional square factor): rational by construction
        let reg = VarRegistry::build(&[("x", VarKind::Base)]);
        let x = reg.lookup("x").unwrap();
        let xv = MPoly::var(&reg, x);
        let mut m = MPoly::zero(&reg);
        for k in 0..=rng.random_range(1..=2u32) {
            let c = rng.random_range(-5..=5i64);
            if c != 0 {
                m.add_term(
                    radform_core::kernel::Mono::unit(1).with_exp(x, k),
                    Rat::from_integer(c.into()),
                );
            }
        }
        if m.is_zero() {
            continue;
        }
        let mut t = RadicalTower::empty(&reg);
        let rad = elem(&t, &(&m * &m) * &(&xv + &MPoly::one(&reg)));
        t.push_step("d", 2, rad);
        match parametrize_tower(&t, &[x]).unwrap() {
            ParamOutcome::ProvenNonRational(w) => {
                panic!("planted rational-ish tower judged non-rational: {w:?}")
            }
            _ => {}
        }
    }
}

#[test]
fn inversion_rejects_improper_parametrization() {
    use radform_core::error::InvertError;
    // z -> (z^2): the map is 2:1, gcd keeps degree 2
    let reg0 = VarRegistry::build(&[("z", VarKind::Fresh)]);
    let z = reg0.lookup("z").unwrap();
    let (reg, la) = reg0.with_var("A", VarKind::Fresh);
    let zv = MPoly::var(&reg, z);
    let comps = vec![RatFunc::from_poly(&zv * &zv)];
    match invert_parametrization(&reg, &comps, &[z], &[la]) {
        Err(InvertError::NotProper { degree: 2 }) => {}
        other => panic!("expected NotProper degree 2, got {other:?}"),
    }
}
