use blowuplab_core::corrections::*;
use blowuplab_core::monomial::Exponent;
use blowuplab_core::profiles::u_infinity;
use blowuplab_core::ModelParams;
use num_rational::Rational64;
use proptest::prelude::*;

fn params() -> ModelParams {
    ModelParams::five(0.5, 1, 1.0).unwrap()
}

#[test]
fn level_equations_hold_exactly() {
    let p = params();
    for depth in 1..=3 {
        let ladder = build_ladder(&p, depth, depth + 3).unwrap();
        let defect = ladder.exactness_defect(&p).unwrap();
        assert!(defect <= 1e-12, "depth {depth}: defect {defect:e}");
    }
}

#[test]
fn leading_exponents_follow_level_gain() {
    let p = params();
    let ladder = build_ladder(&p, 3, 6).unwrap();
    for (k, theta) in ladder.thetas.iter().enumerate() {
        let (e, _) = theta.leading().unwrap();
        // 34/3 + 22k/3
        assert_eq!(e, Exponent::Exact(Rational64::new(34 + 22 * k as i64, 3)));
    }
}

#[test]
fn first_level_source_coefficient() {
    // S_1 leads with (p + q(1-q)a0/2) U_inf^{p-1} θ0 at exponent 50/3
    let p = params();
    let ladder = build_ladder(&p, 1, 4).unwrap();
    let a0 = ladder.a_coeffs[0];
    let l1 = 1.0f64 / 784.0;
    let theta0_coef = a0 * l1.powf(7.0 / 3.0 + 0.5);
    let oracle = (7.0 / 3.0 + 0.5 * 0.5 * a0 / 2.0) * l1.powf(4.0 / 3.0) * theta0_coef;
    let (e, c) = ladder.sources[1].leading().unwrap();
    assert_eq!(e, Exponent::Exact(Rational64::new(50, 3)));
    assert!((c - oracle).abs() <= 1e-12 * oracle.abs(), "{c} vs {oracle}");
    assert!(7.0 / 3.0 - 0.5 * (0.5 - 1.0) * a0 > 0.0);
}

#[test]
fn shape_bound_near_origin() {
    let p = params();
    let ladder = build_ladder(&p, 3, 6).unwrap();
    let theta = ladder.theta().unwrap();
    let u = u_infinity(&p);
    let mut worst: f64 = 0.0;
    for i in 1..=200 {
        let r = i as f64 / 200.0;
        worst = worst.max((theta.eval(r) / (r.powf(22.0 / 3.0) * u.eval(r))).abs());
    }
    assert!(worst.is_finite() && worst < 1.0);
}

#[test]
fn residual_exponent_grows_with_depth() {
    let p = params();
    let mut last = f64::NEG_INFINITY;
    for depth in 1..=3 {
        let ladder = build_ladder(&p, depth, depth + 3).unwrap();
        let rep = nonlinear_residual(&p, &ladder, 1.0 - 1e-2, (0.5, 2.0)).unwrap();
        let symbolic = residual_exponent(&p, depth as i32).value();
        assert!((rep.fitted_exponent - symbolic).abs() < 1e-3, "{} vs {symbolic}", rep.fitted_exponent);
        assert!(rep.fitted_exponent > last);
        last = rep.fitted_exponent;
    }
}

#[test]
fn symbolic_exponent_matches_algebra() {
    let p = params();
    for depth in 1..=3usize {
        let ladder = build_ladder(&p, depth, depth + 3).unwrap();
        let (e, _) = ladder.residual_source().leading().unwrap();
        assert_eq!(e, residual_exponent(&p, depth as i32));
    }
    assert_eq!(residual_exponent(&p, -1), Exponent::Exact(Rational64::new(28, 3)));
}

#[test]
fn residual_ratio_vanishes_toward_blowup() {
    let p = params();
    let depth = min_depth_for_j(&p, 1);
    let ladder = build_ladder(&p, depth, depth + 3).unwrap();
    let mut prev = f64::INFINITY;
    for k in 2..=5 {
        let rep = nonlinear_residual(&p, &ladder, 1.0 - 10f64.powi(-k), (0.5, 2.0)).unwrap();
        assert!(rep.sup_ratio < prev);
        prev = rep.sup_ratio;
    }
    assert!(prev < 1e-20);
}

#[test]
fn min_depth_is_monotone() {
    let p = params();
    let mut last = 0;
    for j in 1..=30 {
        let d = min_depth_for_j(&p, j);
        assert!(d >= last && d >= 1);
        let gamma = (-3.0 + 65f64.sqrt()) / 2.0;
        assert!(residual_exponent(&p, d as i32).value() > gamma + 2.0 * j as f64);
        last = d;
    }
}

#[test]
fn binomial_tail_matches_direct_sum() {
    use blowuplab_core::model::binomial;
    let e = 7.0 / 3.0;
    for &rho in &[-0.2, 0.3, 0.7] {
        let direct = (1.0f64 + rho).powf(e) - (0..=4).map(|i| binomial(e, i) * rho.powi(i as i32)).sum::<f64>();
        let tail = binomial_tail(e, rho, 4);
        assert!((tail - direct).abs() <= 1e-14, "{tail} vs {direct}");
    }
    // tiny ρ: the direct difference cancels, so compare with the first two omitted terms
    let rho: f64 = 1e-3;
    let leading = binomial(e, 5) * rho.powi(5) + binomial(e, 6) * rho.powi(6);
    let tail = binomial_tail(e, rho, 4);
    assert!((tail - leading).abs() <= 1e-5 * leading.abs());
}

#[test]
fn rejects_bad_depths() {
    let p = params();
    assert!(build_ladder(&p, 0, 3).is_err());
    assert!(build_ladder(&p, 2, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn a0_bracket(k in 1u32..20) {
        let q = k as f64 / 21.0;
        let p = ModelParams::five(q, 1, 1.0).unwrap();
        let a0 = a0_closed_form(&p);
        prop_assert!(a0 < 0.0 && a0 > -1.0 / (1.0 - q));
        let ladder = build_ladder(&p, 1, 3).unwrap();
        prop_assert!((ladder.a_coeffs[0] - a0).abs() <= 1e-10 * a0.abs());
    }
}
