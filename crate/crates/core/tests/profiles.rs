use blowuplab_core::profiles::*;
use blowuplab_core::{Error, ModelParams};
use proptest::prelude::*;

fn params() -> ModelParams {
    ModelParams::five(0.5, 1, 1.0).unwrap()
}

/// `Q'' + 4/r Q' + Q^{7/3}` for `Q = (1 + r²/15)^{-3/2}`, differentiated by hand.
fn talenti_oracle_residual(r: f64) -> f64 {
    let w = 1.0 + r * r / 15.0;
    let q = w.powf(-1.5);
    let dq = -(r / 5.0) * w.powf(-2.5);
    let ddq = -0.2 * w.powf(-2.5) + (r * r / 15.0) * w.powf(-3.5);
    let lap = if r == 0.0 { 5.0 * ddq } else { ddq + 4.0 / r * dq };
    lap + q.powf(7.0 / 3.0)
}

#[test]
fn talenti_closed_form() {
    let p = params();
    assert_eq!(talenti_q(&p, 0.0), 1.0);
    assert!((talenti_q(&p, 15f64.sqrt()) - 2f64.powf(-1.5)).abs() < 1e-15);
    let worst = (0..=10_000).map(|i| talenti_oracle_residual(i as f64 / 100.0).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-9);
    assert!(talenti_residual_sup(&p, 100.0, 10_001) <= 1e-9);
}

#[test]
fn singular_state_for_default_params() {
    let p = params();
    let s = singular_state_constants(&p);
    assert_eq!(s.l1, 1.0 / 784.0);
    assert_eq!(s.beta0, 4.0);
    assert!((s.gamma - (-3.0 + 65f64.sqrt()) / 2.0).abs() <= 1e-12);
    assert!(2.0 < s.gamma && s.gamma < 4.0);
    assert!(u_infinity_residual(&p).unwrap().is_empty());
}

#[test]
fn absorption_profile_tail() {
    let p = params();
    let gamma = singular_state_constants(&p).gamma;
    let u = absorption_profile_u(&p, 200.0, 1e-10).unwrap();
    assert_eq!(u.eval(0.0), 1.0);
    assert!(u.values().windows(2).all(|w| w[1] > w[0]));
    assert!(u.derivs()[1..].iter().all(|&d| d > 0.0));
    assert!((u.meta["gamma_fit"] / gamma - 1.0).abs() < 0.01);
    let doubled = absorption_profile_u(&p, 400.0, 1e-10).unwrap();
    let (b, b2) = (u.meta["B1"], doubled.meta["B1"]);
    assert!(b > 0.0 && ((b2 - b) / b).abs() <= 1e-3, "{b} vs {b2}");
}

#[test]
fn inner_correction_is_bounded() {
    let p = params();
    let t1 = inner_correction_t1(&p, 200.0, 1e-10).unwrap();
    let doubled = inner_correction_t1(&p, 400.0, 1e-10).unwrap();
    let (a, a2) = (t1.meta["A1"], doubled.meta["A1"]);
    assert!(a > 0.0 && ((a2 - a) / a).abs() <= 1e-4, "{a} vs {a2}");
    let mut tail = 0.0f64;
    let mut slope = 0.0f64;
    for (&r, (&v, &d)) in doubled.grid().iter().zip(doubled.values().iter().zip(doubled.derivs())) {
        if r >= 50.0 {
            tail = tail.max((v - a2).abs() / (1.0 / r + 1.0 / (r * r)));
            slope = slope.max(d.abs() * r * r);
        }
    }
    assert!(tail.is_finite() && tail < 100.0, "{tail}");
    assert!(slope.is_finite() && slope < 100.0, "{slope}");
}

#[test]
fn flat_solution_goes_extinct_in_bracket() {
    let p = params();
    let m0: f64 = 1.0 / 784.0;
    let lo = m0.powf(0.5) / 0.5;
    let hi = lo / (1.0 - m0.powf(7.0 / 3.0 - 0.5));
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.001).collect();
    let m = flat_solution_m(&p, m0, &grid, 1e8).unwrap();
    assert_eq!(m.values()[0], m0);
    let te = m.meta["extinction_time"];
    assert!(te >= lo && te <= hi, "{te} not in [{lo}, {hi}]");
    assert!(m.values().windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(*m.values().last().unwrap(), 0.0);
}

#[test]
fn flat_solution_blowup_is_reported() {
    let p = params();
    let grid = [0.0, 0.01, 0.02, 0.03, 0.04];
    assert!(matches!(flat_solution_m(&p, 10.0, &grid, 1e8), Err(Error::Blowup { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gamma_bracket_across_q(k in 1u32..20) {
        let q = k as f64 / 20.0;
        let p = ModelParams::five(q, 1, 1.0).unwrap();
        let s = singular_state_constants(&p);
        prop_assert!(s.beta0 - 2.0 < s.gamma && s.gamma < s.beta0);
        prop_assert!((s.gamma * (s.gamma + 3.0) - q * s.l1.powf(q - 1.0)).abs() <= 1e-9 * s.gamma * s.gamma);
        // exponents cancel exactly; coefficients up to the round-off of L1 = (β₀(β₀+n-2))^{1/(q-1)}
        let res = u_infinity_residual(&p).unwrap();
        let scale = s.l1.powf(q);
        prop_assert!(res.terms().len() <= 1 && res.max_abs_coefficient() <= 1e-13 * scale);
    }
}
