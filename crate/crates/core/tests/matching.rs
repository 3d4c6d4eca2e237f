use blowuplab_core::matching::*;
use blowuplab_core::profiles::{singular_state_constants, ProfileConstants};
use blowuplab_core::ModelParams;

fn constants(p: &ModelParams) -> ProfileConstants {
    let s = singular_state_constants(p);
    ProfileConstants { l1: s.l1, beta0: s.beta0, gamma: s.gamma, a1: 1.7, b1: 0.3, k1: 1.0, m0: s.l1 }
}

fn gamma() -> f64 {
    (-3.0 + 65f64.sqrt()) / 2.0
}

#[test]
fn case_ii_exponents_follow_the_arithmetic() {
    let g = gamma();
    for j in 1..=2u32 {
        let p = ModelParams::five(0.5, j, 1.0).unwrap();
        let rep = match_case_ii(&p, &constants(&p), -2.0).unwrap();
        let jf = j as f64;
        let small = jf / (4.0 - g);
        let big = (4.0 * jf + 4.0 - g) / (4.0 - g);
        assert!((rep.gamma_j.unwrap() - small).abs() <= 1e-12);
        assert!((rep.big_gamma_j.unwrap() - big).abs() <= 1e-12);
        assert!((rep.blowup_rate_exponent - 3.0 * big).abs() <= 1e-12);
        assert!((rep.k.unwrap() - 0.3 / 2.0).abs() <= 1e-15);
    }
    let p = ModelParams::five(0.5, 1, 1.0).unwrap();
    let rep = match_case_ii(&p, &constants(&p), -2.0).unwrap();
    assert!((rep.gamma_j.unwrap() - 0.680796).abs() < 2e-5);
    assert!((rep.big_gamma_j.unwrap() - 3.723174).abs() < 2e-5);
    assert!((rep.blowup_rate_exponent - 11.16952).abs() < 2e-5);
}

#[test]
fn rate_diverges_as_q_approaches_one() {
    let mut last = 0.0;
    for k in 0..10 {
        let q = 0.5 + 0.049 * k as f64;
        let p = ModelParams::five(q, 1, 1.0).unwrap();
        let big = match_case_ii(&p, &constants(&p), 1.0).unwrap().big_gamma_j.unwrap();
        assert!(big > last && big > 1.0);
        last = big;
    }
    assert!(last > 10.0);
}

#[test]
fn case_i_scales() {
    let p = ModelParams::five(0.5, 1, 1.0).unwrap();
    let a1 = 1.7;
    let rep = match_case_i(&p, a1).unwrap();
    assert!((rep.lambda_exponent - 6.0).abs() <= 1e-12);
    let pre = (1.0 / (3.0 * a1)).powi(2) * 0.5f64.powi(6);
    assert!((rep.lambda_prefactor - pre).abs() <= 1e-12 * pre);
}

#[test]
fn scale_set_relations() {
    let p = ModelParams::five(0.5, 1, 1.0).unwrap();
    let c = constants(&p);
    let rep = match_case_ii(&p, &c, -2.0).unwrap();
    let set = scale_set(&p, &rep, c.a1, 0.01).unwrap();
    let v = set.values_at(1.0 - 1e-4).unwrap();
    assert!(v.lambda / v.eta < 1e-3 && v.eta / v.s.sqrt() < 1.0);
    for k in 1..=8 {
        let s = 10f64.powi(-k);
        let v = set.values_at(1.0 - s).unwrap();
        assert!((v.l1 * v.sigma.abs().powf(1.0 / 3.0) - 1.0).abs() < 1e-12);
        // σ = λ λ̇ exactly for the closed forms
        let ll = set.lambda.mul(&set.lambda.time_derivative()).at(v.s);
        assert!((v.sigma / ll - 1.0).abs() < 1e-9, "k = {k}: {}", v.sigma / ll);
    }
    assert!(set.values_at(1.0).is_err());
}

#[test]
fn overlap_exponents_satisfy_identity() {
    let p = ModelParams::five(0.5, 1, 1.0).unwrap();
    let rep = match_case_ii(&p, &constants(&p), -2.0).unwrap();
    let o = semiinner_overlap_exponents(&p, &rep).unwrap();
    let eta = rep.eta_exponent.unwrap();
    let sigma = 4.0 * eta + 1.5 * rep.lambda_exponent;
    let l1 = -sigma / 3.0;
    assert!(((-rep.lambda_exponent + eta + o.q1) - (-o.q2 + l1)).abs() <= 1e-12);
    assert!(semiinner_overlap_exponents(&p.with_j(0), &rep).is_err());
}
