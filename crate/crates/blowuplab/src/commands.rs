//! One function per subcommand: compute, then fill an [`Artifacts`] set.

use std::sync::Arc;

use blowuplab_core::ansatz::{build_ansatz_with, AnsatzProfiles, AnsatzTerms, CutoffFamily};
use blowuplab_core::corrections::{build_ladder, min_depth_for_j, nonlinear_residual, residual_exponent};
use blowuplab_core::matching::{match_case_i, match_case_ii, scale_set, semiinner_overlap_exponents, TimePower};
use blowuplab_core::monomial::{Exponent, MonomialSum};
use blowuplab_core::profiles::{
    absorption_profile_u, inner_correction_t1, profile_constants, singular_state_constants, talenti_q_derivs,
    talenti_residual_sup, u_infinity_residual,
};
use blowuplab_core::simulator::{self, extinction_bounds, Boundary, Scheme, SimConfig, SimState};
use blowuplab_core::spectra::{
    ball_eigen, ball_eigenvalues_fd_extrapolated, extract_dj_ej, selfsimilar_eigen, selfsimilar_eigenvalue_shooting,
    weighted_inner, SelfSimilarMode,
};
use blowuplab_core::{Error, RadialTable, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{Artifacts, Cell};

/// Artifacts plus a short human-readable summary for stdout.
pub struct CommandOutput {
    pub artifacts: Artifacts,
    pub summary: Vec<String>,
}

fn table_rows(table: &RadialTable) -> impl Iterator<Item = Vec<Cell>> + '_ {
    table
        .grid()
        .iter()
        .zip(table.values().iter().zip(table.derivs()))
        .map(|(&r, (&v, &d))| vec![r.into(), v.into(), d.into()])
}

fn exponent_json(e: &Exponent) -> Value {
    json!({ "symbolic": e.to_string(), "value": e.value(), "exact": e.is_exact() })
}

fn monomials_json(sum: &MonomialSum) -> Value {
    sum.terms()
        .iter()
        .map(|(e, c)| json!({ "exponent": exponent_json(e), "coefficient": c }))
        .collect()
}

fn time_power_json(tp: &TimePower) -> Value {
    json!({ "prefactor": tp.prefactor, "exponent": tp.exponent })
}

/// `T - 10^{-k}` for `k_min ≤ k ≤ k_max`.
fn approach_times(cfg: &RunConfig) -> Vec<f64> {
    (cfg.int("k_min")..=cfg.int("k_max")).map(|k| cfg.t - 10f64.powi(-(k as i32))).collect()
}

pub fn profiles(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    let s = singular_state_constants(&p);
    let (r_max, tol) = (cfg.float("r_max"), cfg.float("tol"));
    let samples = cfg.usize("talenti_samples").max(2);
    let q_max = cfg.float("talenti_r_max");
    let q_grid: Vec<f64> = (0..samples).map(|i| q_max * i as f64 / (samples - 1) as f64).collect();
    let q_table = RadialTable::from_fn(q_grid, |r| {
        let (v, d, _) = talenti_q_derivs(&p, r);
        (v, d)
    })?;
    let residual_sup = talenti_residual_sup(&p, q_max, samples);
    let u_inf_terms = u_infinity_residual(&p)?;
    let (u, t1) = rayon::join(|| absorption_profile_u(&p, r_max, tol), || inner_correction_t1(&p, r_max, tol));
    let (u, t1) = (u?, t1?);

    let mut a = Artifacts::new();
    let header = ["r", "value", "deriv"];
    a.add_csv("q.csv", &header, table_rows(&q_table));
    a.add_csv("u.csv", &header, table_rows(&u));
    a.add_csv("t1.csv", &header, table_rows(&t1));
    a.add_json(
        "profiles.json",
        &json!({
            "singular_state": { "L1": s.l1, "beta0": s.beta0, "gamma": s.gamma },
            "talenti_residual_sup": residual_sup,
            "u_infinity_residual": monomials_json(&u_inf_terms),
            "U": u.meta,
            "T1": t1.meta,
        }),
    );
    let summary = vec![
        format!("sup |ΔQ + Q^p| on [0, {q_max}] = {residual_sup:e}"),
        format!("gamma = {}, fitted tail exponent = {}", s.gamma, u.meta["gamma_fit"]),
        format!("B1 = {}, A1 = {}", u.meta["B1"], t1.meta["A1"]),
    ];
    Ok(CommandOutput { artifacts: a, summary })
}

pub fn spectrum_ball(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    let count = cfg.usize("count").max(1);
    let tol = cfg.float("tol");
    let radii: Vec<f64> = (0..=cfg.int("doublings")).map(|k| cfg.float("radius") * 2f64.powi(k as i32)).collect();
    let fd_max = cfg.float("fd_max_radius");
    let (h0, levels) = (cfg.float("fd_spacing"), cfg.usize("fd_levels"));
    let results: Vec<_> = radii
        .par_iter()
        .map(|&r| {
            let eig = ball_eigen(&p, r, count, tol)?;
            let fd = (r <= fd_max).then(|| ball_eigenvalues_fd_extrapolated(&p, r, count, h0, levels));
            Ok((r, eig, fd))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sweep = Vec::new();
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (r, eig, fd) in &results {
        let mu: Vec<f64> = eig.iter().map(|e| e.eigenvalue).collect();
        sweep.push(json!({
            "R": r,
            "mu": mu,
            "mu_fd_extrapolated": fd,
            "sign_changes": eig.iter().map(|e| e.sign_changes()).collect::<Vec<_>>(),
        }));
        summary.push(format!("R = {r}: mu = {mu:?}"));
        for e in eig {
            let f = &e.eigenfunction;
            for (&x, (&v, &d)) in f.grid().iter().zip(f.values().iter().zip(f.derivs())) {
                rows.push(vec![Cell::from(*r), Cell::from(e.index), x.into(), v.into(), d.into()]);
            }
        }
    }
    let mut a = Artifacts::new();
    a.add_json("ball_sweep.json", &sweep);
    a.add_csv("ball_eigenpairs.csv", &["R", "index", "r", "value", "deriv"], rows);
    Ok(CommandOutput { artifacts: a, summary })
}

pub fn spectrum_selfsimilar(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    let gamma = singular_state_constants(&p).gamma;
    let modes = cfg.usize("modes").max(1);
    let s_max = cfg.float("shooting_s_max");
    let per_mode: Vec<_> = (0..modes)
        .into_par_iter()
        .map(|j| {
            let eig = selfsimilar_eigen(&p, j)?;
            let shot = selfsimilar_eigenvalue_shooting(&p, j, s_max)?;
            let (d, e) = extract_dj_ej(&eig)?;
            Ok((eig, shot, d, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let mode_fns: Vec<SelfSimilarMode> = (0..modes).map(|j| SelfSimilarMode::new(&p, j)).collect();
    let z_max = cfg.float("z_max");
    let gram: Vec<Vec<f64>> = mode_fns
        .par_iter()
        .map(|a| mode_fns.iter().map(|b| weighted_inner(p.dim(), |z| a.eval(z), |z| b.eval(z), z_max)).collect())
        .collect();

    let mut listing = Vec::new();
    let mut summary = Vec::new();
    for (j, ((eig, shot, d, e), m)) in per_mode.iter().zip(&mode_fns).enumerate() {
        listing.push(json!({
            "j": j,
            "eigenvalue": eig.eigenvalue,
            "closed_form": gamma / 2.0 + j as f64,
            "shooting": shot,
            "sign_changes": eig.sign_changes(),
            "growth_exponent": 2.0 * j as f64 + gamma,
            "D_j": m.d_coefficient(),
            "E_j": m.e_coefficient(),
            "D_j_fitted": d,
            "E_j_fitted": e,
        }));
        summary.push(format!("j = {j}: mu = {}, shooting = {shot}", eig.eigenvalue));
    }
    let samples = cfg.usize("samples").max(2);
    let z_plot = cfg.float("plot_z_max");
    let mut rows = Vec::new();
    for (j, m) in mode_fns.iter().enumerate() {
        for i in 0..samples {
            let z = z_plot * i as f64 / (samples - 1) as f64;
            rows.push(vec![Cell::from(j), z.into(), m.eval(z).into(), m.eval_deriv(z).into()]);
        }
    }
    let mut a = Artifacts::new();
    a.add_json("selfsimilar.json", &json!({ "gamma": gamma, "modes": listing, "gram_matrix": gram, "z_max": z_max }));
    a.add_csv("selfsimilar_modes.csv", &["j", "z", "value", "deriv"], rows);
    Ok(CommandOutput { artifacts: a, summary })
}

pub fn matching(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    let c = profile_constants(&p, cfg.float("r_max"), cfg.float("tol"))?;
    let constants = json!({
        "L1": c.l1, "beta0": c.beta0, "gamma": c.gamma, "A1": c.a1, "B1": c.b1, "k1": c.k1, "M0": c.m0,
    });
    let mut a = Artifacts::new();
    let summary = if cfg.text("case") == "I" {
        let rep = match_case_i(&p, c.a1)?;
        a.add_json(
            "match.json",
            &json!({
                "case": "I",
                "lambda": time_power_json(&rep.lambda()),
                "blowup_rate_exponent": rep.blowup_rate_exponent,
                "constants": constants,
            }),
        );
        vec![format!("case I: lambda ~ {} (T-t)^{}", rep.lambda_prefactor, rep.lambda_exponent)]
    } else {
        let dj = cfg.float("d_j");
        let rep = match_case_ii(&p, &c, dj)?;
        let scales = scale_set(&p, &rep, c.a1, cfg.float("b"))?;
        let overlap = match semiinner_overlap_exponents(&p, &rep) {
            Ok(o) => json!({ "q1": o.q1, "q2": o.q2, "total": o.total, "in_unit_square": o.in_unit_square }),
            Err(Error::Domain(_)) => Value::Null,
            Err(e) => return Err(e),
        };
        let big = rep.big_gamma_j.unwrap_or(f64::NAN);
        a.add_json(
            "match.json",
            &json!({
                "case": "II",
                "J": p.j(),
                "gamma_J": rep.gamma_j,
                "Gamma_J": rep.big_gamma_j,
                "blowup_rate_exponent": rep.blowup_rate_exponent,
                "K": rep.k,
                "D_J": dj,
                "lambda": time_power_json(&scales.lambda),
                "eta": time_power_json(&scales.eta),
                "sigma": time_power_json(&scales.sigma),
                "l1": time_power_json(&scales.l1),
                "l2": time_power_json(&scales.l2),
                "overlap_exponents": overlap,
                "constants": constants,
            }),
        );
        vec![
            format!("gamma_J = {}", rep.gamma_j.unwrap_or(f64::NAN)),
            format!("Gamma_J = {big}"),
            format!("blowup rate exponent = {}", rep.blowup_rate_exponent),
        ]
    };
    Ok(CommandOutput { artifacts: a, summary })
}

pub fn corrections(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    let depth = usize::try_from(cfg.int("depth")).map_err(|_| Error::Domain("depth must be nonnegative".into()))?;
    let order = usize::try_from(cfg.int("taylor_order")).map_err(|_| Error::Domain("taylor_order must be nonnegative".into()))?;
    let ladder = build_ladder(&p, depth, order)?;
    let defect = ladder.exactness_defect(&p)?;
    let annulus = (cfg.float("z_lo"), cfg.float("z_hi"));
    let samples = approach_times(cfg)
        .into_iter()
        .map(|t| {
            let r = nonlinear_residual(&p, &ladder, t, annulus)?;
            Ok(json!({ "t": t, "sup_ratio": r.sup_ratio, "fitted_exponent": r.fitted_exponent }))
        })
        .collect::<Result<Vec<_>>>()?;
    let levels: Vec<Value> = ladder
        .thetas
        .iter()
        .zip(&ladder.a_coeffs)
        .enumerate()
        .map(|(k, (theta, a_k))| json!({ "k": k, "a_k": a_k, "terms": monomials_json(theta) }))
        .collect();
    let symbolic = residual_exponent(&p, ladder.depth);
    let mut a = Artifacts::new();
    a.add_json(
        "corrections.json",
        &json!({
            "depth": ladder.depth,
            "taylor_order": ladder.taylor_order,
            "min_depth_for_J": min_depth_for_j(&p, p.j().max(1)),
            "levels": levels,
            "residual": {
                "exactness_defect": defect,
                "exponent": exponent_json(&symbolic),
                "algebraic_part": monomials_json(ladder.residual_source()),
                "annulus": [annulus.0, annulus.1],
                "samples": samples,
            },
        }),
    );
    let summary = vec![
        format!("depth {depth}, Taylor order {order}, a_0 = {}", ladder.a_coeffs[0]),
        format!("level equation defect {defect:e}, residual exponent {symbolic}"),
    ];
    Ok(CommandOutput { artifacts: a, summary })
}

pub fn ansatz(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    p.require_matchable()?;
    let prof = AnsatzProfiles::compute(&p, cfg.float("profile_r_max"), cfg.float("tol"))?;
    let dj = SelfSimilarMode::new(&p, p.j() as usize).d_coefficient();
    let rep = match_case_ii(&p, &prof.constants, dj)?;
    let depth = usize::try_from(cfg.int("depth")).map_err(|_| Error::Domain("depth must be nonnegative".into()))?;
    let order = usize::try_from(cfg.int("taylor_order")).map_err(|_| Error::Domain("taylor_order must be nonnegative".into()))?;
    let ladder = build_ladder(&p, depth, order)?;
    let cut = CutoffFamily::new(&p, cfg.float("r0"), cfg.float("r3"))?;
    let field = build_ansatz_with(&p, prof, &rep, &ladder, dj, cfg.float("b"), cut, AnsatzTerms::default())?;
    let samples = cfg.usize("samples").max(2);
    let r_max = cfg.float("r_max");

    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for t in approach_times(cfg) {
        let lambda = field.scales.values_at(t)?.lambda;
        let r_lo = (1e-2 * lambda).min(0.5 * r_max);
        let mut grid = vec![0.0];
        grid.extend((0..samples).map(|i| r_lo * (r_max / r_lo).powf(i as f64 / (samples - 1) as f64)));
        let sampled = grid
            .par_iter()
            .map(|&r| Ok((r, field.eval(r, t)?, field.residual_at(r, t)?, field.region(r, t)?)))
            .collect::<Result<Vec<_>>>()?;
        for (r, u, res, region) in sampled {
            rows.push(vec![r.into(), t.into(), u.into(), res.into(), region.as_str().into()]);
        }
        let (inner, outer) = field.mismatch(t)?;
        diagnostics.push(json!({
            "t": t,
            "lambda": lambda,
            "seams": field.seams(t)?,
            "seam_jump": field.seam_jump(t)?,
            "inner_mismatch": inner,
            "outer_mismatch": outer,
        }));
    }
    let mut a = Artifacts::new();
    a.add_csv("ansatz.csv", &["r", "t", "u", "residual", "region_tag"], rows);
    a.add_json("ansatz.json", &json!({ "times": diagnostics, "Gamma_J": rep.big_gamma_j }));
    let summary = diagnostics
        .iter()
        .map(|d| format!("t = {}: seam jump {}, mismatch ({}, {})", d["t"], d["seam_jump"], d["inner_mismatch"], d["outer_mismatch"]))
        .collect();
    Ok(CommandOutput { artifacts: a, summary })
}

/// Simulator settings from the resolved configuration.
pub fn sim_config(cfg: &RunConfig) -> SimConfig {
    SimConfig {
        scheme: if cfg.text("scheme") == "imex" { Scheme::Imex } else { Scheme::ExplicitRk },
        boundary: if cfg.text("boundary") == "neumann" { Boundary::Neumann } else { Boundary::Dirichlet },
        eps_ext: cfg.float("eps_ext"),
        m_blow: cfg.float("m_blow"),
        r_max: cfg.float("r_max"),
        nodes: cfg.usize("nodes"),
        grading: cfg.float("grading"),
        cfl: cfg.float("cfl"),
        rtol: cfg.float("rtol"),
        atol: cfg.float("atol"),
        dt_init: cfg.float("dt_init"),
        dt_min: cfg.float("dt_min"),
        max_steps: cfg.usize("max_steps"),
        ..SimConfig::default()
    }
}

pub fn simulate(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = cfg.params()?;
    let sc = sim_config(cfg);
    let amp = cfg.float("amplitude");
    let width = cfg.float("width");
    let ode = cfg.text("mode") == "ode";
    let state = if ode {
        SimState::ode(amp)
    } else {
        let mesh = Arc::new(sc.mesh()?);
        if cfg.text("initial") == "gaussian" {
            SimState::new(mesh, 0.0, |r| amp * (-(r / width) * (r / width)).exp())?
        } else {
            SimState::new(mesh, 0.0, |_| amp)?
        }
    };
    let out = simulator::run(&p, &state, &sc, cfg.float("horizon"))?;
    let bounds = (ode && amp > 0.0 && amp < 1.0).then(|| {
        let (lo, hi) = extinction_bounds(&p, amp);
        json!({ "lower": lo, "upper": hi })
    });
    let mut a = Artifacts::new();
    a.add_csv("trace.csv", &["t", "sup", "dt"], out.trace.iter().map(|tp| vec![tp.t.into(), tp.sup.into(), tp.dt.into()]));
    a.add_json(
        "outcome.json",
        &json!({
            "verdict": out.verdict.as_str(),
            "event_time": out.event_time,
            "event_time_error": out.event_time_error,
            "fitted_rate": out.fitted_rate,
            "type_one_constant": out.type_one_constant,
            "ode_constant": (p.p() - 1.0).powf(-1.0 / (p.p() - 1.0)),
            "extinction_bounds": bounds,
            "steps": out.final_state.stats.steps,
            "rejected_steps": out.final_state.stats.rejected,
            "boundary_flux": out.final_state.stats.boundary_flux,
            "final_time": out.final_state.t,
            "final_sup": out.final_state.sup(),
            "nodes": out.final_state.mesh.len(),
        }),
    );
    let summary = vec![format!("verdict {} at t = {}", out.verdict.as_str(), out.event_time)];
    Ok(CommandOutput { artifacts: a, summary })
}
