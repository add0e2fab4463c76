//! Tower arithmetic, simplification, degree and tracing-index tests, with
//! the numeric conjugate enumeration as an independent oracle.

use std::collections::BTreeMap;

use radform_core::error::TowerError;
use radform_core::kernel::{rat_i, MPoly, Rat, RatFunc, VarId, VarKind, VarRegistry};
use radform_core::tower::{
    field_degree, numeric_fibre_count, simplify_radicals, tracing_index, RadicalTower, TowerElem,
};

fn reg_x() -> std::sync::Arc<VarRegistry> {
    VarRegistry::build(&[("x", VarKind::Base)])
}

fn elem(t: &RadicalTower, p: MPoly) -> TowerElem {
    t.elem_normalize(p, MPoly::one(t.registry())).unwrap()
}

/// Tower [d1^2 = x, d2^2 = x+1] over Q(x).
fn example_tower() -> (RadicalTower, VarId, VarId, VarId) {
    let reg = reg_x();
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let a1 = elem(&t, MPoly::var(&reg, x));
    let d1 = t.push_step("d", 2, a1);
    let a2 = elem(&t, &MPoly::var(t.registry(), x) + &MPoly::one(t.registry()));
    let d2 = t.push_step("d", 2, a2);
    (t, x, d1, d2)
}

#[test]
fn normal_form_reduces_generator_powers() {
    let (t, x, d1, d2) = example_tower();
    let reg = t.registry();
    // (d1*d2)^2 = x(x+1)
    let prod = &MPoly::var(reg, d1) * &MPoly::var(reg, d2);
    let sq = t.elem_normalize(&prod * &prod, MPoly::one(reg)).unwrap();
    let xv = MPoly::var(reg, x);
    let expect = elem(&t, &(&xv * &xv) + &xv);
    assert_eq!(sq, expect);
    assert!(sq.is_rational(&t));
}

#[test]
fn inversion_rationalizes_denominators() {
    let (t, x, d1, _) = example_tower();
    let reg = t.registry();
    // 1/(1+d1) = (1-d1)/(1-x)
    let one = MPoly::one(reg);
    let e = t
        .elem_normalize(one.clone(), &one + &MPoly::var(reg, d1))
        .unwrap();
    assert!(!e.den.contains_var(d1), "denominator must be generator-free");
    // check by multiplying back
    let back = t
        .elem_mul(
            &e,
            &t.elem_normalize(&one + &MPoly::var(reg, d1), one.clone())
                .unwrap(),
        )
        .unwrap();
    assert!(back.is_one(), "1/(1+d1) * (1+d1) = 1, got {back}");
    let _ = x;
}

#[test]
fn inversion_of_pure_generator() {
    // 1/d = d/(c^2+x^2) over [d^2 = c^2+x^2]
    let reg = VarRegistry::build(&[("x", VarKind::Base), ("c", VarKind::Param)]);
    let x = reg.lookup("x").unwrap();
    let c = reg.lookup("c").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let rad = elem(
        &t,
        &(&MPoly::var(&reg, c) * &MPoly::var(&reg, c))
            + &(&MPoly::var(&reg, x) * &MPoly::var(&reg, x)),
    );
    let d = t.push_step("d", 2, rad.clone());
    let reg = t.registry().clone();
    let inv = t
        .elem_normalize(MPoly::one(&reg), MPoly::var(&reg, d))
        .unwrap();
    let expect = TowerElem {
        num: MPoly::var(&reg, d),
        den: rad.num.clone(),
    };
    assert_eq!(inv, expect);
}

#[test]
fn tower_equations_examples() {
    // [d1^2=x2, d2^2=x1+d1] -> {d1^2 - x2, d2^2 - x1 - d1}
    let reg = VarRegistry::build(&[("x1", VarKind::Base), ("x2", VarKind::Base)]);
    let x1 = reg.lookup("x1").unwrap();
    let x2 = reg.lookup("x2").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let d1 = t.push_step("d", 2, elem(&t, MPoly::var(&reg, x2)));
    let nested = elem(
        &t,
        &MPoly::var(t.registry(), x1) + &MPoly::var(t.registry(), d1),
    );
    let d2 = t.push_step("d", 2, nested);
    let eqs = t.equations();
    let reg = t.registry();
    let d1sq = &MPoly::var(reg, d1) * &MPoly::var(reg, d1);
    let d2sq = &MPoly::var(reg, d2) * &MPoly::var(reg, d2);
    assert_eq!(eqs[0], &d1sq - &MPoly::var(reg, x2));
    assert_eq!(
        eqs[1],
        &(&d2sq - &MPoly::var(reg, x1)) - &MPoly::var(reg, d1)
    );

    // empty tower -> {}
    let t0 = RadicalTower::empty(&reg_x());
    assert!(t0.equations().is_empty());
}

#[test]
fn simplify_extracts_square_factors() {
    // [d^2 = 4x^2(x+1)] -> [d^2 = x+1] with d_old = 2x*d_new
    let reg = reg_x();
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let xv = MPoly::var(&reg, x);
    let rad = elem(
        &t,
        (&(&(&xv * &xv) * &(&xv + &MPoly::one(&reg))).scale(&rat_i(4))).clone(),
    );
    let d = t.push_step("d", 2, rad);
    let s = simplify_radicals(&t).unwrap();
    assert!(s.changed);
    assert!(s.eliminated.is_empty());
    assert_eq!(s.tower.len(), 1);
    let new_rad = &s.tower.steps()[0].radicand;
    let expect = &MPoly::var(s.tower.registry(), x) + &MPoly::one(s.tower.registry());
    assert_eq!(new_rad.num, expect);
    // rewrite: d -> 2x*d
    let rw = &s.rewrites[&d];
    let expect_rw = &(&MPoly::var(s.tower.registry(), x) * &MPoly::var(s.tower.registry(), d))
        .scale(&rat_i(2));
    assert_eq!(&rw.num, expect_rw);
}

#[test]
fn simplify_eliminates_perfect_squares() {
    // [d^2 = x^2] -> empty tower with d = x
    let reg = reg_x();
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let xv = MPoly::var(&reg, x);
    let d = t.push_step("d", 2, elem(&t, &xv * &xv));
    let s = simplify_radicals(&t).unwrap();
    assert!(s.tower.is_empty());
    assert_eq!(s.eliminated, vec![d]);
    assert_eq!(s.rewrites[&d].num, MPoly::var(s.tower.registry(), x));
}

#[test]
fn simplify_merges_proportional_radicands() {
    // [d1^2 = x, d2^2 = 4x] -> [d1^2 = x] with d2 = 2*d1
    let reg = reg_x();
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let d1 = t.push_step("d", 2, elem(&t, MPoly::var(&reg, x)));
    let rad2 = elem(&t, MPoly::var(t.registry(), x).scale(&rat_i(4)));
    let d2 = t.push_step("d", 2, rad2);
    let s = simplify_radicals(&t).unwrap();
    assert_eq!(s.tower.len(), 1);
    assert_eq!(s.eliminated, vec![d2]);
    let rw = &s.rewrites[&d2];
    assert_eq!(rw.num, MPoly::var(s.tower.registry(), d1).scale(&rat_i(2)));
    assert!(s.tower.is_fully_simplified());
}

#[test]
fn field_degree_examples() {
    let reg = reg_x();
    let x = reg.lookup("x").unwrap();
    // [d^2 = x] -> 2
    let mut t1 = RadicalTower::empty(&reg);
    t1.push_step("d", 2, elem(&t1, MPoly::var(&reg, x)));
    assert_eq!(field_degree(&t1).unwrap(), 2);

    // [d1^2=x, d2^2=x+1] -> 4
    let (t2, _, _, _) = example_tower();
    assert_eq!(field_degree(&t2).unwrap(), 4);

    // unsimplified [d1^2=x, d2^2=4x] -> DegenerateTower
    let mut t3 = RadicalTower::empty(&reg);
    t3.push_step("d", 2, elem(&t3, MPoly::var(&reg, x)));
    let rad = elem(&t3, MPoly::var(t3.registry(), x).scale(&rat_i(4)));
    t3.push_step("d", 2, rad);
    match field_degree(&t3) {
        Err(TowerError::DegenerateTower { .. }) => {}
        other => panic!("expected DegenerateTower, got {other:?}"),
    }
}

/// The two radical coefficient pieces of the introductory equation:
/// (14x+12)d1 + (13x+4)d2 viewed over [d1^2=x, d2^2=x+1].
fn intro_coeff(t: &RadicalTower, x: VarId, d1: VarId, d2: VarId) -> TowerElem {
    let reg = t.registry();
    let xv = MPoly::var(reg, x);
    let c1 = &xv.scale(&rat_i(14)) + &MPoly::constant(reg, rat_i(12));
    let c2 = &xv.scale(&rat_i(13)) + &MPoly::constant(reg, rat_i(4));
    let p = &(&c1 * &MPoly::var(reg, d1)) + &(&c2 * &MPoly::var(reg, d2));
    elem(t, p)
}

#[test]
fn tracing_index_examples() {
    let (t, x, d1, d2) = example_tower();
    // full radical coefficient -> regular point, index 1
    let a = intro_coeff(&t, x, d1, d2);
    let rep = tracing_index(&t, &[a.clone()], 7).unwrap();
    assert!(rep.certified);
    assert_eq!(rep.tower_degree, 4);
    assert_eq!(rep.image_degree, 4);
    assert_eq!(rep.index, 1);

    // coefficient d1*d2 -> the two sign-flipped tuples coincide, index 2
    let prod = elem(&t, &MPoly::var(t.registry(), d1) * &MPoly::var(t.registry(), d2));
    let rep2 = tracing_index(&t, &[prod.clone()], 7).unwrap();
    assert!(rep2.certified);
    assert_eq!(rep2.index, 2);

    // [d^2=x], coefficient d -> index 1
    let reg = reg_x();
    let xv = reg.lookup("x").unwrap();
    let mut t1 = RadicalTower::empty(&reg);
    let d = t1.push_step("d", 2, elem(&t1, MPoly::var(&reg, xv)));
    let dd = elem(&t1, MPoly::var(t1.registry(), d));
    let rep3 = tracing_index(&t1, &[dd], 7).unwrap();
    assert!(rep3.certified);
    assert_eq!(rep3.index, 1);

    // numeric conjugate enumeration agrees at three base points
    for x0 in [rat_i(2), rat_i(3), Rat::new(7.into(), 5.into())] {
        let mut base = BTreeMap::new();
        base.insert(x, x0.clone());
        let fibre = numeric_fibre_count(&t, &[a.clone()], &base, 192).unwrap();
        assert_eq!(fibre, rep.index, "fibre mismatch at x={x0}");
        let fibre2 = numeric_fibre_count(&t, &[prod.clone()], &base, 192).unwrap();
        assert_eq!(fibre2, rep2.index, "product fibre mismatch at x={x0}");
    }
}

#[test]
fn tracing_index_invariances() {
    let (t, x, d1, d2) = example_tower();
    let a = intro_coeff(&t, x, d1, d2);
    let b = elem(&t, &(&MPoly::var(t.registry(), x) * &MPoly::var(t.registry(), x)) + &MPoly::var(t.registry(), x));
    // permutation invariance
    let r1 = tracing_index(&t, &[a.clone(), b.clone()], 3).unwrap();
    let r2 = tracing_index(&t, &[b.clone(), a.clone()], 9).unwrap();
    assert_eq!(r1.index, r2.index);
    // same subfield, different generating list: [a1+a2, a1*a2, a1]
    let sum = t.elem_add(&a, &b);
    let prod = t.elem_mul(&a, &b).unwrap();
    let r3 = tracing_index(&t, &[sum, prod, a.clone()], 11).unwrap();
    assert_eq!(r1.index, r3.index);
}

#[test]
fn tracing_index_is_one_with_all_generators_present() {
    // random square-root towers whose coefficient list contains the
    // generators themselves
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let reg = reg_x();
        let x = reg.lookup("x").unwrap();
        let mut t = RadicalTower::empty(&reg);
        let m = rng.random_range(1..=2usize);
        let mut shift = 0i64;
        for _ in 0..m {
            shift += rng.random_range(1..=3i64);
            let rad = elem(
                &t,
                &MPoly::var(t.registry(), x) + &MPoly::constant(t.registry(), rat_i(shift)),
            );
            t.push_step("d", 2, rad);
        }
        let coeffs: Vec<TowerElem> = t
            .generator_vars()
            .iter()
            .map(|&v| elem(&t, MPoly::var(t.registry(), v)))
            .collect();
        let rep = tracing_index(&t, &coeffs, 5).unwrap();
        assert_eq!(rep.index, 1, "tower {t}");
    }
}

#[test]
fn verify_rejects_wrong_parametrization() {
    use radform_core::parametrize::Parametrization;
    use radform_core::tower::{verify_parametrization, VerifyFailure};
    // tower [d^2 = x+1], claimed Q = (z^2, z): z^2 + 1 != z^2
    let reg = reg_x();
    let x = reg.lookup("x").unwrap();
    let mut t = RadicalTower::empty(&reg);
    let rad = elem(&t, &MPoly::var(&reg, x) + &MPoly::one(&reg));
    t.push_step("d", 2, rad);
    let (reg2, z) = t.registry().with_var("z", VarKind::Fresh);
    t.lift_registry(&reg2);
    let zf = RatFunc::var(&reg2, z);
    let q = Parametrization {
        z_vars: vec![z],
        x_components: vec![zf.mul(&zf)],
        d_components: vec![zf.clone()],
        inverse: None,
        label_vars: vec![],
        trace: vec![],
    };
    match verify_parametrization(&t, &[x], &q, 0) {
        Err(VerifyFailure::GeneratorResidual { .. }) => {}
        other => panic!("expected residual failure, got {other:?}"),
    }
    // the correct parametrization passes
    let ok = Parametrization {
        z_vars: vec![z],
        x_components: vec![zf.mul(&zf).sub(&RatFunc::one(&reg2))],
        d_components: vec![zf],
        inverse: None,
        label_vars: vec![],
        trace: vec![],
    };
    verify_parametrization(&t, &[x], &ok, 0).unwrap();
}
