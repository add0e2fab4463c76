//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p radform-cli --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use radform_core::frontend::{parse_equation, DiffPoly, SymbolTable};
use radform_core::kernel::{rat_i, MPoly, Rat, RatFunc, VarId, VarKind, VarRegistry};
use radform_core::oracle::{numeric_chain_check, OracleConfig};
use radform_core::tower::{numeric_fibre_count, tracing_index, RadicalTower, TowerElem};
use radform_core::transform::{
    normalize_equation, run_pipeline, PipelineOptions, Status, SuppliedSubstitution,
    TransformOutcome,
};

fn ode_symbols(params: &[&str]) -> SymbolTable {
    SymbolTable {
        vars: vec!["x".into()],
        unknowns: vec!["y".into()],
        params: params.iter().map(|s| s.to_string()).collect(),
    }
}

fn pde_symbols(vars: &[&str], unknown: &str) -> SymbolTable {
    SymbolTable {
        vars: vars.iter().map(|s| s.to_string()).collect(),
        unknowns: vec![unknown.to_string()],
        params: vec![],
    }
}

fn run(texts: &[&str], symbols: &SymbolTable, opts: &PipelineOptions) -> TransformOutcome {
    let exprs: Vec<_> = texts
        .iter()
        .map(|t| parse_equation(t, symbols).unwrap())
        .collect();
    run_pipeline(&exprs, symbols, opts).unwrap()
}

fn no_oracle() -> PipelineOptions {
    PipelineOptions {
        run_oracle: false,
        ..PipelineOptions::default()
    }
}

type NamedMono = BTreeMap<String, u32>;
type NamedPoly = BTreeMap<NamedMono, String>;
type CoeffMap = BTreeMap<String, (NamedPoly, NamedPoly)>;

fn named_poly(p: &MPoly) -> NamedPoly {
    let reg = p.registry();
    p.terms()
        .map(|(m, c)| {
            let mut key = BTreeMap::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    key.insert(reg.name(VarId(i)).to_owned(), e);
                }
            }
            (key, c.to_string())
        })
        .collect()
}

fn coeff_map(g: &DiffPoly) -> CoeffMap {
    g.terms
        .iter()
        .map(|(m, c)| {
            let coeff = RatFunc::new(c.num.clone(), c.den.clone());
            (
                m.to_string(),
                (named_poly(coeff.num()), named_poly(coeff.den())),
            )
        })
        .collect()
}

/// Canonical coefficient map of an expected equation given as text over the
/// fresh variables ("equality up to the recorded unit" = equality of the
/// canonical forms).
fn expected_map(text: &str, vars: &[&str], unknowns: &[&str], params: &[&str]) -> CoeffMap {
    let symbols = SymbolTable {
        vars: vars.iter().map(|s| s.to_string()).collect(),
        unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
        params: params.iter().map(|s| s.to_string()).collect(),
    };
    let e = parse_equation(text, &symbols).unwrap();
    let mut pairs: Vec<(&str, VarKind)> =
        params.iter().map(|p| (*p, VarKind::Param)).collect();
    pairs.extend(vars.iter().map(|v| (*v, VarKind::Base)));
    let reg = VarRegistry::build(&pairs);
    let ex = radform_core::frontend::extract_tower(&[e], &symbols, &reg).unwrap();
    assert!(ex.tower.is_empty());
    let (canon, _) = normalize_equation(&ex.equations[0], &ex.tower).unwrap();
    coeff_map(&canon)
}

fn report(criterion: &str, pass: bool, detail: &str, elapsed_s: f64) {
    println!(
        "acceptance {criterion}: {} ({detail}; {elapsed_s:.2}s)",
        if pass { "PASS" } else { "FAIL" }
    );
}

const INTRO_EQ: &str = "((14*x+12)*sqrt(x) + (13*x+4)*sqrt(x+1))*y + 4*(x^2+x)*(y')^2";

#[test]
fn acceptance_01_intro_example_end_to_end() {
    let t0 = Instant::now();
    let out = run(&[INTRO_EQ], &ode_symbols(&[]), &no_oracle());
    let elapsed = t0.elapsed().as_secs_f64();
    let status_ok = out.status == Status::Transformed;
    let back_ok =
        out.back_substitution_texts() == vec!["z = sqrt(x) + sqrt(x + 1)".to_string()];
    let time_ok = elapsed < 5.0;
    // Reference display for this example: coefficients
    // z^12 - 2 z^10 - z^8 + 4 z^6 - z^4 - 2 z^2 + 1 on Y and 16 z^8 on (Y')^2.
    // The chain-rule derivation (criterion 8 oracle, and the independent hand
    // expansion in the transformer tests) gives
    // 27 z^6 + 9 z^4 - 3 z^2 - 1 on Y and 8 z^5 on (Y')^2 for this input, so
    // the two displays are mutually inconsistent; the assertion below pins
    // the reference values and records the discrepancy by failing.
    let want = expected_map(
        "(z^12 - 2*z^10 - z^8 + 4*z^6 - z^4 - 2*z^2 + 1)*Y + 16*z^8*(Y')^2",
        &["z"],
        &["Y"],
        &[],
    );
    let got = coeff_map(&out.transformed[0]);
    let coeffs_ok = got == want;
    let pass = status_ok && back_ok && time_ok && coeffs_ok;
    report(
        "01 intro example end-to-end",
        pass,
        &format!(
            "status {}, back-substitution {}, reference coefficients {}",
            status_ok, back_ok, coeffs_ok
        ),
        elapsed,
    );
    assert!(status_ok, "status was {:?}", out.status);
    assert!(back_ok, "back-substitution {:?}", out.back_substitution_texts());
    assert!(time_ok, "took {elapsed:.2}s");
    assert_eq!(
        got, want,
        "transformed coefficients differ from the reference display"
    );
}

#[test]
fn acceptance_02_shifted_root_example() {
    let t0 = Instant::now();
    let symbols = ode_symbols(&["a"]);
    let out = run(
        &["8*(y')^3*(x+1)^(3/2) - 2*a*(x+1)*y*y' + 2*a*y^2"],
        &symbols,
        &no_oracle(),
    );
    let elapsed = t0.elapsed().as_secs_f64();
    let want = expected_map("(Y')^3 - a*z*Y*Y' + 2*a*Y^2", &["z"], &["Y"], &["a"]);
    let got = coeff_map(&out.transformed[0]);
    let eq_ok = got == want;
    let inv_ok = out.inverse.as_ref().map(|h| h[0].to_string()) == Some("B".into());
    let back_ok = out.back_substitution_texts() == vec!["z = sqrt(x + 1)".to_string()];
    let pass = eq_ok && inv_ok && back_ok;
    report(
        "02 shifted-root example",
        pass,
        &format!("equation {eq_ok}, inverse {inv_ok}, back-substitution {back_ok}"),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn acceptance_03_hyperbola_example() {
    let t0 = Instant::now();
    let symbols = ode_symbols(&["a", "b", "c"]);
    let out = run(
        &["a*y*y'' + b*(y')^2 - y*y'/sqrt(c^2+x^2)"],
        &symbols,
        &no_oracle(),
    );
    let want = expected_map(
        "(a*c^2*z + a*z^3)*Y*diff(Y,z$2) + (b*c^2*z + b*z^3)*(Y')^2 + (2*a*c^2 - c^2 - z^2)*Y*Y'",
        &["z"],
        &["Y"],
        &["a", "b", "c"],
    );
    let got = coeff_map(&out.transformed[0]);
    let auto_ok = got == want && out.status == Status::Transformed;

    // same result through a supplied substitution (generator component
    // derived by the exact-power check)
    let mut subst = SuppliedSubstitution::default();
    subst
        .x_components
        .insert("x".into(), "(z^2 - c^2)/(2*z)".into());
    let opts = PipelineOptions {
        run_oracle: false,
        substitution: Some(subst),
        ..PipelineOptions::default()
    };
    let out2 = run(
        &["a*y*y'' + b*(y')^2 - y*y'/sqrt(c^2+x^2)"],
        &symbols,
        &opts,
    );
    let supplied_ok =
        out2.status == Status::Transformed && coeff_map(&out2.transformed[0]) == want;
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = auto_ok && supplied_ok;
    report(
        "03 hyperbola example",
        pass,
        &format!("auto conic {auto_ok}, supplied substitution {supplied_ok}"),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn acceptance_04_nested_pde_example() {
    let t0 = Instant::now();
    let symbols = pde_symbols(&["x1", "x2", "x3"], "y");
    let out = run(
        &["(-sqrt(x2)*diff(y,x3) + 2*diff(y,x1))*sqrt(x1 + sqrt(x2)) + 2*sqrt(x2)*diff(y,x2) - y^2 - diff(y,x1)"],
        &symbols,
        &no_oracle(),
    );
    let elapsed = t0.elapsed().as_secs_f64();
    let want = expected_map(
        "(2*z2 - 1)*diff(Y,z1) + z2*(z1 - z2^2)*diff(Y,z3) - Y^2 + diff(Y,z2)",
        &["z1", "z2", "z3"],
        &["Y"],
        &[],
    );
    let got = coeff_map(&out.transformed[0]);
    let eq_ok = got == want;
    let hs: Vec<String> = out
        .inverse
        .as_ref()
        .map(|h| h.iter().map(|f| f.to_string()).collect())
        .unwrap_or_default();
    let inv_ok = hs == vec!["A", "E", "C"];
    let pass = eq_ok && inv_ok;
    report(
        "04 nested-radical equation",
        pass,
        &format!("equation {eq_ok}, inverse (A, E, C) {inv_ok}"),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn acceptance_05_cone_example() {
    let t0 = Instant::now();
    let symbols = pde_symbols(&["x1", "x2"], "u");
    // supplied substitution: exact agreement with the reference display
    let mut subst = SuppliedSubstitution::default();
    subst
        .x_components
        .insert("x1".into(), "2*z1*z2/(z1^2 + 1)".into());
    subst
        .x_components
        .insert("x2".into(), "z2*(z1^2 - 1)/(z1^2 + 1)".into());
    subst.d_components.insert("d1".into(), "z2".into());
    let opts = PipelineOptions {
        run_oracle: false,
        substitution: Some(subst),
        ..PipelineOptions::default()
    };
    let out = run(
        &["diff(u,x1)^2 + diff(u,x2)^2 = 1/sqrt(x1^2 + x2^2)"],
        &symbols,
        &opts,
    );
    let want = expected_map(
        "diff(U,z1)^2*(z1^2 + 1)^2 + 4*z2^2*diff(U,z2)^2 - 4*z2",
        &["z1", "z2"],
        &["U"],
        &[],
    );
    let got = coeff_map(&out.transformed[0]);
    let supplied_ok = got == want && out.status == Status::Transformed;

    // auto mode: rationality holds and the oracle stays under 1e-20 even
    // though the parametrization differs by a parameter change
    let auto = run(
        &["diff(u,x1)^2 + diff(u,x2)^2 = 1/sqrt(x1^2 + x2^2)"],
        &symbols,
        &PipelineOptions {
            run_oracle: true,
            seed: 3,
            ..PipelineOptions::default()
        },
    );
    let auto_ok = auto.status == Status::Transformed
        && auto.rationality == Some(true)
        && auto.oracle.as_ref().map(|o| o.pass).unwrap_or(false);
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = supplied_ok && auto_ok;
    report(
        "05 cone equation",
        pass,
        &format!("supplied substitution {supplied_ok}, auto mode {auto_ok}"),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn acceptance_06_jet_matrix_triangularity() {
    let t0 = Instant::now();
    let res = radform_core::testkit::jet_triangularity_suite(25, 606);
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "06 jet matrix triangular, det = (1/r')^(s(s+1)/2), 25 instances",
        res.is_ok(),
        res.as_ref().err().map(|e| e.as_str()).unwrap_or("symbolic equality"),
        elapsed,
    );
    res.unwrap();
}

#[test]
fn acceptance_07_jet_tables_compose_to_identity() {
    let t0 = Instant::now();
    let res = radform_core::testkit::jet_compose_identity_suite(10, 707);
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "07 forward/inverse jet tables compose to identity, 10 instances",
        res.is_ok(),
        res.as_ref().err().map(|e| e.as_str()).unwrap_or("symbolic equality"),
        elapsed,
    );
    res.unwrap();
}

#[test]
fn acceptance_08_chain_rule_oracle_on_fixtures() {
    let t0 = Instant::now();
    let fixtures: Vec<(Vec<&str>, SymbolTable)> = vec![
        (vec![INTRO_EQ], ode_symbols(&[])),
        (
            vec!["8*(y')^3*(x+1)^(3/2) - 2*a*(x+1)*y*y' + 2*a*y^2"],
            ode_symbols(&["a"]),
        ),
        (
            vec!["a*y*y'' + b*(y')^2 - y*y'/sqrt(c^2+x^2)"],
            ode_symbols(&["a", "b", "c"]),
        ),
        (
            vec!["(-sqrt(x2)*diff(y,x3) + 2*diff(y,x1))*sqrt(x1 + sqrt(x2)) + 2*sqrt(x2)*diff(y,x2) - y^2 - diff(y,x1)"],
            pde_symbols(&["x1", "x2", "x3"], "y"),
        ),
        (
            vec!["diff(u,x1)^2 + diff(u,x2)^2 = 1/sqrt(x1^2 + x2^2)"],
            pde_symbols(&["x1", "x2"], "u"),
        ),
    ];
    let mut all = true;
    let mut details = Vec::new();
    for (texts, symbols) in fixtures {
        let out = run(&texts, &symbols, &no_oracle());
        assert_eq!(out.status, Status::Transformed);
        let q = out.parametrization.as_ref().unwrap();
        let cfg = OracleConfig {
            samples: 20,
            precision: 128,
            threshold_log10: -20,
            test_degree: 4,
            seed: 808,
            param_values: BTreeMap::new(),
        };
        let rep = numeric_chain_check(
            &out.original[0],
            &out.pre_normal[0],
            &out.tower,
            q,
            &out.x_vars,
            &cfg,
        )
        .unwrap();
        all &= rep.pass;
        details.push(format!(
            "residual 2^{}",
            rep.max_residual_log2
                .map(|l| l.to_string())
                .unwrap_or_else(|| "-inf".into())
        ));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "08 chain-rule oracle, 20 samples, degree-4 tests, 128 bits, 1e-20",
        all,
        &details.join(", "),
        elapsed,
    );
    assert!(all);
}

#[test]
fn acceptance_09_impossibility_and_no_answer() {
    let t0 = Instant::now();
    let bin = env!("CARGO_BIN_EXE_radform");
    let imp = Command::new(bin)
        .args([
            "transform",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y' - y*sqrt(x^3 - 1)",
            "--no-oracle",
        ])
        .output()
        .unwrap();
    let imp_time = t0.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&imp.stdout);
    let imp_ok = imp.status.code() == Some(10)
        && stdout.contains("tracing index: 1")
        && stdout.contains("certified: true");

    let t1 = Instant::now();
    let na = Command::new(bin)
        .args([
            "transform",
            "--vars",
            "x",
            "--unknowns",
            "y",
            "--eq",
            "y' - y*root(x^5 + x + 1, 5)",
            "--no-oracle",
        ])
        .output()
        .unwrap();
    let na_time = t1.elapsed().as_secs_f64();
    let na_ok = na.status.code() == Some(11);
    let pass = imp_ok && na_ok && imp_time < 5.0 && na_time < 5.0;
    report(
        "09 certified impossibility and no-answer",
        pass,
        &format!(
            "impossible exit 10 with certified index 1: {imp_ok} ({imp_time:.2}s), \
             quintic root exit 11: {na_ok} ({na_time:.2}s)"
        ),
        t0.elapsed().as_secs_f64(),
    );
    assert!(pass);
}

#[test]
fn acceptance_10_tracing_index_units() {
    let t0 = Instant::now();
    // tower [d1^2 = x, d2^2 = x+1]
    let reg = VarRegistry::build(&[("x", VarKind::Base)]);
    let x = reg.lookup("x").unwrap();
    let mut tower = RadicalTower::empty(&reg);
    let rad1 = tower
        .elem_normalize(MPoly::var(&reg, x), MPoly::one(&reg))
        .unwrap();
    let d1 = tower.push_step("d1", 2, rad1);
    let rad2 = tower
        .elem_normalize(
            &MPoly::var(tower.registry(), x) + &MPoly::one(tower.registry()),
            MPoly::one(tower.registry()),
        )
        .unwrap();
    let d2 = tower.push_step("d2", 2, rad2);
    let treg = tower.registry().clone();
    // the introductory radical coefficient
    let coeff = {
        let xv = MPoly::var(&treg, x);
        let p = &(&(&xv.scale(&rat_i(14)) + &MPoly::constant(&treg, rat_i(12)))
            * &MPoly::var(&treg, d1))
            + &(&(&xv.scale(&rat_i(13)) + &MPoly::constant(&treg, rat_i(4)))
                * &MPoly::var(&treg, d2));
        tower.elem_normalize(p, MPoly::one(&treg)).unwrap()
    };
    let rep1 = tracing_index(&tower, &[coeff.clone()], 42).unwrap();
    let prod: TowerElem = tower
        .elem_normalize(
            &MPoly::var(&treg, d1) * &MPoly::var(&treg, d2),
            MPoly::one(&treg),
        )
        .unwrap();
    let rep2 = tracing_index(&tower, &[prod.clone()], 42).unwrap();
    let symbolic_ok =
        rep1.index == 1 && rep1.certified && rep2.index == 2 && rep2.certified;

    // independent brute-force conjugate enumeration at 3 random base points
    let mut numeric_ok = true;
    for x0 in [rat_i(2), rat_i(5), Rat::new(13.into(), 7.into())] {
        let mut base = BTreeMap::new();
        base.insert(x, x0);
        numeric_ok &=
            numeric_fibre_count(&tower, &[coeff.clone()], &base, 192).unwrap() == 1;
        numeric_ok &=
            numeric_fibre_count(&tower, &[prod.clone()], &base, 192).unwrap() == 2;
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = symbolic_ok && numeric_ok;
    report(
        "10 tracing index units",
        pass,
        &format!(
            "coefficient index {} (certified {}), product index {} (certified {}), \
             numeric enumeration agrees: {numeric_ok}",
            rep1.index, rep1.certified, rep2.index, rep2.certified
        ),
        elapsed,
    );
    assert!(pass);
}

#[test]
fn acceptance_11_kernel_property_suites() {
    use radform_core::testkit;
    let t0 = Instant::now();
    let results = [
        ("gcd divisibility/coprimality x1000", testkit::gcd_divisibility_suite(1000, 111)),
        ("Leibniz x200", testkit::leibniz_suite(200, 222)),
        (
            "chain rule numeric x200",
            testkit::chain_rule_numeric_suite(200, 333, 128, -20),
        ),
        (
            "resultant vanishing x200",
            testkit::resultant_vanishing_suite(200, 444),
        ),
        ("squarefree x200", testkit::squarefree_suite(200, 555)),
    ];
    let elapsed = t0.elapsed().as_secs_f64();
    let all = results.iter().all(|(_, r)| r.is_ok());
    let detail: Vec<String> = results
        .iter()
        .map(|(name, r)| format!("{name}: {}", if r.is_ok() { "ok" } else { "failed" }))
        .collect();
    report(
        "11 kernel property suites",
        all,
        &detail.join("; "),
        elapsed,
    );
    for (name, r) in results {
        r.unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
