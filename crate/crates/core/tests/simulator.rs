use std::sync::Arc;

use blowuplab_core::ansatz::*;
use blowuplab_core::corrections::{build_ladder, min_depth_for_j};
use blowuplab_core::matching::match_case_ii;
use blowuplab_core::simulator::*;
use blowuplab_core::spectra::SelfSimilarMode;
use blowuplab_core::{Error, ModelParams};
use proptest::prelude::*;

fn params() -> ModelParams {
    ModelParams::five(0.5, 1, 1.0).unwrap()
}

const P: f64 = 7.0 / 3.0;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Extinction time of `v' = v^p - √v` from `v0 < 1`, with `v = w²`.
fn extinction_oracle(v0: f64) -> f64 {
    simpson(|w| 2.0 / (1.0 - w.powf(2.0 * P - 1.0)), 0.0, v0.sqrt(), 20_000)
}

/// Blowup time of `v' = v^p - √v` from `v0 > 1`, with `v = v0 / w³`.
fn blowup_oracle(v0: f64) -> f64 {
    let (vp, vq) = (v0.powf(P), v0.sqrt());
    simpson(|w| 3.0 * v0 * w.powi(3) / (vp - vq * w.powf(3.0 * (P - 0.5))), 0.0, 1.0, 20_000)
}

fn rk4(v0: f64, t: f64, steps: usize) -> f64 {
    let f = |v: f64| v.abs().powf(P) * v.signum() - v.abs().sqrt() * v.signum();
    let h = t / steps as f64;
    let mut v = v0;
    for _ in 0..steps {
        let k1 = f(v);
        let k2 = f(v + 0.5 * h * k1);
        let k3 = f(v + 0.5 * h * k2);
        let k4 = f(v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    v
}

fn small_mesh(r_max: f64, nodes: usize, boundary: Boundary) -> Arc<Mesh> {
    Arc::new(Mesh::graded(r_max, nodes, 2.0, boundary).unwrap())
}

#[test]
fn zero_is_a_fixed_point() {
    let p = params();
    let cfg = SimConfig::default();
    let s = SimState::new(small_mesh(5.0, 100, Boundary::Dirichlet), 0.0, |_| 0.0).unwrap();
    let next = step(&p, &s, &cfg).unwrap();
    assert!(next.u.iter().all(|&v| v == 0.0));
    assert!(next.t > 0.0);
}

#[test]
fn constant_data_follows_the_scalar_ode() {
    let p = params();
    let cfg = SimConfig {
        scheme: Scheme::ExplicitRk,
        boundary: Boundary::Neumann,
        fixed_dt: Some(1e-4),
        ..SimConfig::default()
    };
    for &c in &[0.3, 0.9, 1.7] {
        let pde = SimState::new(small_mesh(3.0, 60, Boundary::Neumann), 0.0, |_| c).unwrap();
        let pde = step(&p, &pde, &cfg).unwrap();
        let ode = step(&p, &SimState::ode(c), &cfg).unwrap();
        assert!(pde.u.iter().all(|&v| v == ode.u[0]));
        let oracle = rk4(c, 1e-4, 1000);
        assert!((ode.u[0] - oracle).abs() <= 1e-8, "{} vs {oracle}", ode.u[0]);
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn ode_extinction_lands_in_bracket() {
    let p = params();
    let (lo, hi) = extinction_bounds(&p, 0.5);
    assert!((lo - 1.41421).abs() < 1e-5 && (hi - 1.96593).abs() < 1e-4);
    let out = run_extinction(&p, &SimState::ode(0.5), &SimConfig::ode(), 3.0).unwrap();
    assert_eq!(out.verdict, Verdict::Extinct);
    assert!(out.event_time >= lo && out.event_time <= hi);
    let oracle = extinction_oracle(0.5);
    assert!((out.event_time - oracle).abs() <= 1e-4, "{} vs {oracle}", out.event_time);
    assert!(out.event_time <= oracle + 1e-9);
    assert!(out.event_time + out.event_time_error >= oracle - 1e-6);
    assert!(out.trace.windows(2).all(|w| w[1].sup <= w[0].sup));
}

#[test]
fn absorption_only_reproduces_exact_law() {
    let p = params();
    let cfg = SimConfig { terms: Terms::absorption_only(), ..SimConfig::ode() };
    // u = ((1-q)(T-t))^{1/(1-q)} with T = 1
    let exact = |t: f64| (0.5 * (1.0 - t)).powi(2);
    let mut s = SimState::ode(exact(0.0));
    for &t in &[0.25, 0.5, 0.75, 0.95] {
        s = advance_to(&p, &s, &cfg, t).unwrap();
        assert!((s.u[0] - exact(t)).abs() <= 1e-6, "t = {t}: {} vs {}", s.u[0], exact(t));
    }
}

#[test]
fn gaussian_goes_extinct_before_ode_bound() {
    let p = params();
    let cfg = SimConfig::default();
    let s = SimState::new(Arc::new(cfg.mesh().unwrap()), 0.0, |r| 0.5 * (-r * r).exp()).unwrap();
    let out = run_extinction(&p, &s, &cfg, 2.0).unwrap();
    assert_eq!(out.verdict, Verdict::Extinct);
    assert!(out.event_time <= 1.96593, "{}", out.event_time);
    assert!(out.final_state.sup() <= 1e-10);
    let ode = extinction_oracle(0.5);
    assert!(out.event_time < ode);
    assert!(out.trace.windows(2).all(|w| w[1].sup <= w[0].sup * (1.0 + 1e-9)));
}

#[test]
fn ode_blowup_is_type_one() {
    let p = params();
    let out = run_blowup(&p, &SimState::ode(10.0), &SimConfig::ode(), 1.0).unwrap();
    assert_eq!(out.verdict, Verdict::Blowup);
    let pure = 0.75 * 10f64.powf(-4.0 / 3.0);
    assert!((pure - 0.034815).abs() < 5e-6);
    assert!(out.event_time > pure);
    let oracle = blowup_oracle(10.0);
    assert!((out.event_time - oracle).abs() <= 1e-8 * oracle, "{} vs {oracle}", out.event_time);
    let rate = out.fitted_rate.unwrap();
    assert!((rate + 0.75).abs() <= 0.02 * 0.75, "rate {rate}");
    let c = out.type_one_constant.unwrap();
    let target = (P - 1.0).powf(-1.0 / (P - 1.0));
    assert!((c - target).abs() <= 0.03 * target, "{c} vs {target}");
    assert!(out.final_state.sup() >= 1e8);
}

#[test]
fn larger_data_blows_up_sooner() {
    let p = params();
    let mut last = f64::INFINITY;
    for &v0 in &[5.0, 10.0, 20.0, 40.0] {
        let out = run_blowup(&p, &SimState::ode(v0), &SimConfig::ode(), 1.0).unwrap();
        assert!(out.event_time < last);
        last = out.event_time;
    }
}

#[test]
fn heat_kernel_decay() {
    let p = params();
    let cfg = SimConfig { terms: Terms::linear(), rtol: 1e-7, ..SimConfig::default() };
    // u0 = heat kernel at time 1/4, scaled to 1 at the origin
    let mut s = SimState::new(Arc::new(cfg.mesh().unwrap()), 0.0, |r| (-r * r).exp()).unwrap();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for &t in &[0.25, 0.5, 1.0, 2.0] {
        s = advance_to(&p, &s, &cfg, t).unwrap();
        let exact = (0.25f64 / (0.25 + t)).powf(2.5);
        assert!((s.sup() / exact - 1.0).abs() <= 1e-3, "t = {t}: {} vs {exact}", s.sup());
        x.push(0.25 + t);
        y.push(s.sup());
    }
    let fit = blowuplab_core::fit::power_law_fit(&x, &y).unwrap();
    assert!((fit.slope + 2.5).abs() < 1e-2, "slope {}", fit.slope);
}

#[test]
fn refinement_reduces_spatial_error() {
    let p = params();
    let exact = 0.5f64.powf(2.5);
    let mut errs = Vec::new();
    for &nodes in &[26usize, 51, 101] {
        let cfg = SimConfig {
            scheme: Scheme::ExplicitRk,
            terms: Terms::linear(),
            r_max: 10.0,
            nodes,
            grading: 0.0,
            rtol: 1e-10,
            ..SimConfig::default()
        };
        let s = SimState::new(Arc::new(cfg.mesh().unwrap()), 0.0, |r| (-r * r).exp()).unwrap();
        let s = advance_to(&p, &s, &cfg, 0.25).unwrap();
        errs.push((s.u[0] - exact).abs());
    }
    assert!(errs[0] > 2.0 * errs[1] && errs[1] > 2.0 * errs[2], "{errs:?}");
}

#[test]
fn mass_changes_only_through_the_boundary() {
    let p = params();
    for scheme in [Scheme::ExplicitRk, Scheme::Imex] {
        let cfg = SimConfig {
            scheme,
            terms: Terms::linear(),
            r_max: 2.0,
            nodes: 200,
            grading: 0.0,
            ..SimConfig::default()
        };
        let s0 = SimState::new(Arc::new(cfg.mesh().unwrap()), 0.0, |r| (-r * r).exp()).unwrap();
        let s = advance_to(&p, &s0, &cfg, 0.2).unwrap();
        let drift = s.mass() - s0.mass();
        assert!(drift < -1e-3 * s0.mass(), "flux should be visible");
        assert!((drift - s.stats.boundary_flux).abs() <= 1e-6 * s0.mass());
    }
    // Neumann conserves
    let cfg = SimConfig { terms: Terms::linear(), boundary: Boundary::Neumann, r_max: 3.0, nodes: 200, ..SimConfig::default() };
    let s0 = SimState::new(Arc::new(cfg.mesh().unwrap()), 0.0, |r| (-r * r).exp()).unwrap();
    let s = advance_to(&p, &s0, &cfg, 0.5).unwrap();
    assert!((s.mass() - s0.mass()).abs() <= 1e-12 * s0.mass());
}

#[test]
fn odd_symmetry_is_exact() {
    let p = params();
    for scheme in [Scheme::ExplicitRk, Scheme::Imex] {
        let cfg = SimConfig { scheme, r_max: 6.0, nodes: 120, grading: 0.0, ..SimConfig::default() };
        let mesh = Arc::new(cfg.mesh().unwrap());
        let f = |r: f64| 0.8 * (1.0 - r * r) * (-r * r).exp();
        let a = SimState::new(mesh.clone(), 0.0, f).unwrap();
        let b = SimState::new(mesh, 0.0, |r| -f(r)).unwrap();
        let a = advance_to(&p, &a, &cfg, 0.1).unwrap();
        let b = advance_to(&p, &b, &cfg, 0.1).unwrap();
        assert!(a.u.iter().zip(&b.u).all(|(x, y)| *x == -*y));
    }
}

#[test]
fn run_preconditions() {
    let p = params();
    let cfg = SimConfig::ode();
    assert!(matches!(run_extinction(&p, &SimState::ode(1.2), &cfg, 5.0), Err(Error::Domain(_))));
    assert!(matches!(run_extinction(&p, &SimState::ode(0.5), &cfg, 1.5), Err(Error::Horizon(_))));
    assert!(matches!(run_blowup(&p, &SimState::ode(0.5), &cfg, 1.0), Err(Error::Domain(_))));
    assert!(matches!(run_blowup(&p, &SimState::ode(10.0), &cfg, 0.01), Err(Error::Horizon(_))));
    let out = run(&p, &SimState::ode(10.0), &cfg, 0.01).unwrap();
    assert_eq!(out.verdict, Verdict::HorizonReached);
}

#[test]
fn frozen_singular_state_drifts_with_focusing_source() {
    // u0 = -U_∞ cut off outside r3; the absorption balances ΔU_∞, so the
    // focusing term drives the deviation: Duhamel gives δu ≈ -Δt U_∞^p
    let p = params();
    let cfg = SimConfig {
        scheme: Scheme::ExplicitRk,
        boundary: Boundary::Neumann,
        r_max: 2.0,
        nodes: 400,
        grading: 0.0,
        ..SimConfig::default()
    };
    let mesh = Arc::new(cfg.mesh().unwrap());
    let u_inf = |r: f64| r.powi(4) / 784.0;
    let s0 = SimState::new(mesh.clone(), 0.0, |r| -u_inf(r) * smooth_cutoff(r / 0.5).0).unwrap();
    let dt = 1e-5;
    let fixed = SimConfig { fixed_dt: Some(0.25 * mesh.explicit_step_bound() * cfg.cfl), ..cfg.clone() };
    let full = advance_to(&p, &s0, &fixed, dt).unwrap();
    let unforced = SimConfig { terms: Terms { focusing: false, ..Terms::default() }, ..fixed };
    let base = advance_to(&p, &s0, &unforced, dt).unwrap();
    let a0 = blowuplab_core::corrections::a0_closed_form(&p);
    for (i, &r) in mesh.nodes().iter().enumerate() {
        if !(0.3..=0.45).contains(&r) {
            continue;
        }
        let dev = full.u[i] - base.u[i];
        let predicted = -dt * u_inf(r).powf(P);
        assert_eq!(dev.signum(), a0.signum());
        assert!((dev - predicted).abs() <= 0.05 * predicted.abs(), "r = {r}: {dev:e} vs {predicted:e}");
    }
}

fn ansatz_field() -> AnsatzField {
    let p = params();
    let prof = AnsatzProfiles::compute(&p, 400.0, 1e-10).unwrap();
    let dj = SelfSimilarMode::new(&p, 1).d_coefficient();
    let rep = match_case_ii(&p, &prof.constants, dj).unwrap();
    let depth = min_depth_for_j(&p, 1);
    let ladder = build_ladder(&p, depth, depth + 3).unwrap();
    build_ansatz(&p, prof, &rep, &ladder, dj, 0.01).unwrap()
}

#[test]
fn ansatz_comparison() {
    let p = params();
    let field = ansatz_field();
    // the grading resolves the inner scale λ(0) ≈ 2.7e-3
    let t0 = 0.0;
    let cfg = SimConfig { boundary: Boundary::Neumann, grading: 12.0, ..SimConfig::default() };
    let mesh = Arc::new(cfg.mesh().unwrap());
    let u0: Vec<f64> = mesh.nodes().iter().map(|&r| field.eval(r, t0).unwrap()).collect();
    let s0 = SimState::from_values(mesh, t0, u0).unwrap();
    let at_start = compare_with_ansatz(&field, std::slice::from_ref(&s0));
    assert!(!at_start.is_empty());
    assert!(at_start.iter().all(|d| d.relative == 0.0 && d.mean == 0.0));
    let s1 = advance_to(&p, &s0, &cfg, t0 + 1e-6).unwrap();
    let later = compare_with_ansatz(&field, &[s1]);
    let outer = later.iter().find(|d| d.region == Region::Outer).unwrap();
    assert!(outer.relative < 1e-4, "{outer:?}");
    // states past the blowup time are skipped
    let mut gone = s0;
    gone.t = 1.0;
    assert!(compare_with_ansatz(&field, &[gone]).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn comparison_principle(a in 0.1f64..0.9, da in 0.0f64..0.5, w in 0.5f64..2.0, dw in 0.0f64..1.0) {
        let p = params();
        let cfg = SimConfig { scheme: Scheme::ExplicitRk, r_max: 8.0, nodes: 120, ..SimConfig::default() };
        let mesh = Arc::new(cfg.mesh().unwrap());
        let cfg = SimConfig { fixed_dt: Some(cfg.cfl * mesh.explicit_step_bound()), ..cfg };
        let mut lo = SimState::new(mesh.clone(), 0.0, |r| a * (-r * r / w).exp()).unwrap();
        let mut hi = SimState::new(mesh, 0.0, |r| (a + da) * (-r * r / (w + dw)).exp()).unwrap();
        for _ in 0..400 {
            lo = step(&p, &lo, &cfg).unwrap();
            hi = step(&p, &hi, &cfg).unwrap();
            prop_assert_eq!(lo.t, hi.t);
            prop_assert!(lo.sup() <= hi.sup() + 1e-8);
        }
    }
}
