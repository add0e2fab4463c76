//! Spec examples for the kernel operations plus reduced-size runs of the
//! randomized suites (the acceptance harness runs them at full size).

use std::collections::BTreeMap;

use num_traits::Signed;
use radform_core::error::KernelError;
use radform_core::kernel::{
    eval_ratfunc_complex, poly_gcd, rat, rat_i, resultant, squarefree_part, CNum, MPoly, Rat,
    RatFunc, VarKind, VarRegistry,
};
use radform_core::testkit;

fn zreg() -> std::sync::Arc<VarRegistry> {
    VarRegistry::build(&[("z", VarKind::Base)])
}

#[test]
fn gcd_examples() {
    let reg = zreg();
    let z = reg.lookup("z").unwrap();
    let zv = MPoly::var(&reg, z);
    let one = MPoly::one(&reg);
    // (z^2-1, z^2-2z+1) -> z-1
    let p = &(&zv * &zv) - &one;
    let q = &(&(&zv * &zv) - &zv.scale(&rat_i(2))) + &one;
    assert_eq!(poly_gcd(&p, &q), &zv - &one);
    // (x^2+x, x+1) -> x+1
    let a = &(&zv * &zv) + &zv;
    let b = &zv + &one;
    assert_eq!(poly_gcd(&a, &b), b);
    // (p, 1) -> 1
    assert_eq!(poly_gcd(&p, &one), one);
    // gcd(0,0) = 0
    let zero = MPoly::zero(&reg);
    assert!(poly_gcd(&zero, &zero).is_zero());
}

#[test]
fn differentiate_example_with_finite_difference_oracle() {
    let reg = zreg();
    let z = reg.lookup("z").unwrap();
    let zv = MPoly::var(&reg, z);
    let one = MPoly::one(&reg);
    // f = (z^2-1)^2/(4z^2)
    let num = (&(&zv * &zv) - &one).pow(2);
    let den = (&zv * &zv).scale(&rat_i(4));
    let f = RatFunc::new(num, den);
    let df = f.derivative(z);
    // expected (z^2-1)(z^2+1)/(2z^3)
    let expect = RatFunc::new(
        &(&(&zv * &zv) - &one) * &(&(&zv * &zv) + &one),
        (&(&zv * &zv) * &zv).scale(&rat_i(2)),
    );
    assert_eq!(df, expect);
    // symmetric finite-difference oracle at 10 random rational points, exact
    // rational arithmetic: |(f(x+h)-f(x-h))/2h - df(x)| relative < 1e-20
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let h = Rat::new(1.into(), 1_000_000_000_000i64.into());
    for _ in 0..10 {
        let x0 = Rat::new(rng.random_range(1..=50i64).into(), rng.random_range(1..=7i64).into());
        let at = |p: &Rat| -> Rat {
            let mut m = BTreeMap::new();
            m.insert(z, p.clone());
            f.eval_rat(&m).unwrap()
        };
        let plus = at(&(&x0 + &h));
        let minus = at(&(&x0 - &h));
        let slope = (&plus - &minus) / (&h * &rat_i(2));
        let mut m = BTreeMap::new();
        m.insert(z, x0.clone());
        let exact = df.eval_rat(&m).unwrap();
        let rel = ((&slope - &exact) / exact.clone()).abs();
        let bound = Rat::new(1.into(), num_bigint::BigInt::from(10u8).pow(20));
        assert!(rel < bound, "finite difference mismatch at {x0}: {rel}");
    }
    // d/dz z^2 = 2z, parameters are constants
    let preg = VarRegistry::build(&[("z", VarKind::Base), ("c", VarKind::Param)]);
    let z2 = preg.lookup("z").unwrap();
    let c = preg.lookup("c").unwrap();
    let f2 = RatFunc::from_poly(&MPoly::var(&preg, z2) * &MPoly::var(&preg, z2));
    assert_eq!(
        f2.derivative(z2),
        RatFunc::from_poly(MPoly::var(&preg, z2).scale(&rat_i(2)))
    );
    let fc = RatFunc::var(&preg, c);
    assert!(fc.derivative(z2).is_zero());
}

#[test]
fn substitute_examples() {
    let reg = VarRegistry::build(&[("x", VarKind::Base), ("t", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let t = reg.lookup("t").unwrap();
    let xv = RatFunc::var(&reg, x);
    let tv = RatFunc::var(&reg, t);
    // x+1 with x -> t^2  =>  t^2+1
    let mut b = BTreeMap::new();
    b.insert(x, tv.mul(&tv));
    let got = xv.add(&RatFunc::one(&reg)).substitute(&b).unwrap();
    assert_eq!(got, tv.mul(&tv).add(&RatFunc::one(&reg)));
    // 1/x with x -> 0  =>  DenominatorVanishes
    let mut b0 = BTreeMap::new();
    b0.insert(x, RatFunc::zero(&reg));
    match xv.pow(-1).substitute(&b0) {
        Err(KernelError::DenominatorVanishes) => {}
        other => panic!("expected DenominatorVanishes, got {other:?}"),
    }
}

#[test]
fn resultant_examples() {
    let reg = VarRegistry::build(&[("x", VarKind::Base), ("d", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let d = reg.lookup("d").unwrap();
    let xv = MPoly::var(&reg, x);
    let dv = MPoly::var(&reg, d);
    let one = MPoly::one(&reg);
    // Res_d(d^2-x, d-1) = 1-x
    let r1 = resultant(&(&(&dv * &dv) - &xv), &(&dv - &one), d);
    assert_eq!(r1, &one - &xv);
    // Res_d(d^2-x, d^2-x-1) = 1
    let r2 = resultant(
        &(&(&dv * &dv) - &xv),
        &(&(&dv * &dv) - &(&xv + &one)),
        d,
    );
    assert_eq!(r2, one);
    // shared factor -> 0
    let r3 = resultant(&(&(&dv * &dv) - &xv), &(&(&dv * &dv) - &xv), d);
    assert!(r3.is_zero());
}

#[test]
fn squarefree_examples() {
    let reg = zreg();
    let z = reg.lookup("z").unwrap();
    let zv = MPoly::var(&reg, z);
    let one = MPoly::one(&reg);
    // x(x+1)^2 -> x^2+x
    let p = &zv * &(&zv + &one).pow(2);
    assert_eq!(squarefree_part(&p, z), &(&zv * &zv) + &zv);
    // t^2+1 already squarefree
    let q = &(&zv * &zv) + &one;
    assert_eq!(squarefree_part(&q, z), q);
    // (z-1)^4 -> z-1
    let r = (&zv - &one).pow(4);
    assert_eq!(squarefree_part(&r, z), &zv - &one);
}

#[test]
fn eval_numeric_examples() {
    let reg = zreg();
    let z = reg.lookup("z").unwrap();
    let zv = MPoly::var(&reg, z);
    let one = MPoly::one(&reg);
    let prec = 128;
    // (z^2+1)/(2z) at z=1 -> 1
    let f = RatFunc::new(&(&zv * &zv) + &one, zv.scale(&rat_i(2)));
    let mut pt = BTreeMap::new();
    pt.insert(z, CNum::from_rat(&rat_i(1), prec));
    let v = eval_ratfunc_complex(&f, &pt, prec).unwrap();
    assert!((v.to_f64().0 - 1.0).abs() < 1e-25);
    // (z^2-1)^2/(4z^2) at z=2 -> 9/16
    let g = RatFunc::new((&(&zv * &zv) - &one).pow(2), (&zv * &zv).scale(&rat_i(4)));
    let mut p2 = BTreeMap::new();
    p2.insert(z, CNum::from_rat(&rat_i(2), prec));
    let v2 = eval_ratfunc_complex(&g, &p2, prec).unwrap();
    assert!((v2.to_f64().0 - 0.5625).abs() < 1e-25);
    // 1/z at z=0 -> PrecisionLoss
    let h = RatFunc::new(one.clone(), zv.clone());
    let mut p0 = BTreeMap::new();
    p0.insert(z, CNum::zero());
    match eval_ratfunc_complex(&h, &p0, prec) {
        Err(KernelError::PrecisionLoss) => {}
        other => panic!("expected PrecisionLoss, got {other:?}"),
    }
}

#[test]
fn substitute_intro_change() {
    // x with x -> (z^2-1)^2/(4z^2) stays exact
    let reg = VarRegistry::build(&[("x", VarKind::Base), ("z", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let z = reg.lookup("z").unwrap();
    let zv = MPoly::var(&reg, z);
    let r = RatFunc::new(
        (&(&zv * &zv) - &MPoly::one(&reg)).pow(2),
        (&zv * &zv).scale(&rat_i(4)),
    );
    let mut b = BTreeMap::new();
    b.insert(x, r.clone());
    assert_eq!(RatFunc::var(&reg, x).substitute(&b).unwrap(), r);
}

#[test]
fn randomized_suites_smoke() {
    testkit::gcd_divisibility_suite(60, 11).unwrap();
    testkit::leibniz_suite(25, 12).unwrap();
    testkit::chain_rule_numeric_suite(20, 13, 128, -20).unwrap();
    testkit::resultant_vanishing_suite(40, 14).unwrap();
    testkit::squarefree_suite(40, 15).unwrap();
}

#[test]
fn ratfunc_power_split_detects_squares() {
    let reg = zreg();
    let z = reg.lookup("z").unwrap();
    let zv = MPoly::var(&reg, z);
    let one = MPoly::one(&reg);
    // ((z+1)/z)^2 is a perfect square
    let f = RatFunc::new((&zv + &one).pow(2), &zv * &zv);
    let root = f.perfect_power(2).unwrap();
    assert_eq!(root, RatFunc::new(&zv + &one, zv.clone()));
    // z^3+1 is not
    let g = RatFunc::from_poly(&(&(&zv * &zv) * &zv) + &one);
    assert!(g.perfect_power(2).is_none());
}

fn _rat_helpers(_x: Rat) {
    let _ = rat(1, 2);
}
