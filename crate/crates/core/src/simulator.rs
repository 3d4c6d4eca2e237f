//! Radial method-of-lines solver for `u_t = Δu + |u|^{p-1}u - |u|^{q-1}u`.
//!
//! Space is a finite-volume discretization of `r^{1-n}(r^{n-1}u_r)_r` on a
//! graded mesh. At the origin it reduces to `2n(u_1 - u_0)/h²`, the ghost-point
//! form of `n u_rr`. Time stepping is adaptive by step doubling. Two schemes are
//! offered: SSPRK3 for everything, or an IMEX Euler step that is implicit in
//! diffusion and in the linearized focusing term. The absorption
//! `sign(u)|u|^q` is always evaluated explicitly.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::ansatz::{AnsatzField, Region};
use crate::error::{domain, Error, Result};
use crate::fit::power_law_fit;
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ExplicitRk,
    Imex,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::ExplicitRk => "explicit-rk",
            Scheme::Imex => "imex",
        }
    }

    fn order(&self) -> i32 {
        match self {
            Scheme::ExplicitRk => 3,
            Scheme::Imex => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `u(R_max) = 0`.
    Dirichlet,
    /// `u_r(R_max) = 0`.
    Neumann,
}

/// Which parts of the right-hand side are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terms {
    pub diffusion: bool,
    pub focusing: bool,
    pub absorption: bool,
}

impl Default for Terms {
    fn default() -> Self {
        Terms { diffusion: true, focusing: true, absorption: true }
    }
}

impl Terms {
    pub fn linear() -> Self {
        Terms { diffusion: true, focusing: false, absorption: false }
    }

    pub fn absorption_only() -> Self {
        Terms { diffusion: false, focusing: false, absorption: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub boundary: Boundary,
    pub terms: Terms,
    pub eps_ext: f64,
    pub m_blow: f64,
    pub r_max: f64,
    pub nodes: usize,
    /// `r_i = R sinh(κ i/(N-1)) / sinh κ`; larger κ concentrates nodes at 0.
    pub grading: f64,
    pub cfl: f64,
    pub rtol: f64,
    pub atol: f64,
    pub dt_init: f64,
    /// Relative step floor; below `dt_min·max(1, t)` the run reports underflow.
    pub dt_min: f64,
    /// Disables error control when set.
    pub fixed_dt: Option<f64>,
    pub max_steps: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            scheme: Scheme::Imex,
            boundary: Boundary::Dirichlet,
            terms: Terms::default(),
            eps_ext: 1e-10,
            m_blow: 1e8,
            r_max: 20.0,
            nodes: 2000,
            grading: 4.0,
            cfl: 0.4,
            rtol: 1e-6,
            atol: 1e-14,
            dt_init: 1e-6,
            dt_min: 1e-15,
            fixed_dt: None,
            max_steps: 5_000_000,
        }
    }
}

impl SimConfig {
    /// Scalar ODE settings: explicit, tight tolerance.
    pub fn ode() -> Self {
        SimConfig { scheme: Scheme::ExplicitRk, rtol: 1e-10, ..SimConfig::default() }
    }

    pub fn mesh(&self) -> Result<Mesh> {
        Mesh::graded(self.r_max, self.nodes, self.grading, self.boundary)
    }
}

/// Node positions with precomputed finite-volume weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    r: Vec<f64>,
    vol: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    /// Face weight `r_{m-1/2}^{n-1}/h` between the last unknown and the boundary node.
    flux_face: f64,
    boundary: Boundary,
    n: f64,
}

impl Mesh {
    pub fn graded(r_max: f64, nodes: usize, grading: f64, boundary: Boundary) -> Result<Mesh> {
        if nodes < 3 || !(r_max > 0.0) || !(grading >= 0.0) {
            return Err(domain("mesh needs at least 3 nodes, R_max > 0 and grading >= 0"));
        }
        let m = (nodes - 1) as f64;
        let r = (0..nodes)
            .map(|i| {
                let x = i as f64 / m;
                if grading == 0.0 {
                    r_max * x
                } else {
                    r_max * (grading * x).sinh() / grading.sinh()
                }
            })
            .collect();
        Mesh::from_nodes(r, 5, boundary)
    }

    pub fn from_nodes(r: Vec<f64>, n: u32, boundary: Boundary) -> Result<Mesh> {
        if r.len() < 2 || r[0] != 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("mesh must start at 0 and increase strictly"));
        }
        let nf = n as f64;
        let k = r.len();
        let face = |i: usize| 0.5 * (r[i] + r[i + 1]);
        let mut vol = vec![0.0; k];
        let mut left = vec![0.0; k];
        let mut right = vec![0.0; k];
        for i in 0..k {
            let lo = if i == 0 { 0.0 } else { face(i - 1) };
            let hi = if i + 1 == k { r[k - 1] } else { face(i) };
            vol[i] = (hi.powf(nf) - lo.powf(nf)) / nf;
            if i > 0 {
                left[i] = lo.powf(nf - 1.0) / ((r[i] - r[i - 1]) * vol[i]);
            }
            if i + 1 < k {
                right[i] = hi.powf(nf - 1.0) / ((r[i + 1] - r[i]) * vol[i]);
            }
        }
        let flux_face = face(k - 2).powf(nf - 1.0) / (r[k - 1] - r[k - 2]);
        Ok(Mesh { r, vol, left, right, flux_face, boundary, n: nf })
    }

    /// A single node with no spatial coupling: the scalar ODE.
    pub fn point() -> Mesh {
        Mesh {
            r: vec![0.0],
            vol: vec![1.0],
            left: vec![0.0],
            right: vec![0.0],
            flux_face: 0.0,
            boundary: Boundary::Neumann,
            n: 5.0,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of evolved values; the Dirichlet node is pinned to zero.
    fn unknowns(&self) -> usize {
        match self.boundary {
            Boundary::Dirichlet if self.r.len() > 1 => self.r.len() - 1,
            _ => self.r.len(),
        }
    }

    /// `Σ V_i u_i` over the evolved nodes (without the sphere area factor).
    pub fn mass(&self, u: &[f64]) -> f64 {
        (0..self.unknowns()).map(|i| self.vol[i] * u[i]).sum()
    }

    /// Outward diffusive flux through the Dirichlet face; zero otherwise.
    fn boundary_flux(&self, u: &[f64]) -> f64 {
        match self.boundary {
            Boundary::Dirichlet if self.r.len() > 1 => {
                let m = self.r.len() - 2;
                self.flux_face * (0.0 - u[m])
            }
            _ => 0.0,
        }
    }

    fn laplacian_into(&self, u: &[f64], out: &mut [f64]) {
        let m = self.unknowns();
        for i in 0..m {
            let mut acc = 0.0;
            if i > 0 {
                acc += self.left[i] * (u[i - 1] - u[i]);
            }
            if i + 1 < self.r.len() {
                acc += self.right[i] * (u[i + 1] - u[i]);
            }
            out[i] = acc;
        }
    }

    /// Forward-Euler stability bound `1 / max(a_i + c_i)`.
    pub fn explicit_step_bound(&self) -> f64 {
        let worst = (0..self.unknowns()).map(|i| self.left[i] + self.right[i]).fold(0.0, f64::max);
        if worst == 0.0 {
            f64::INFINITY
        } else {
            1.0 / worst
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimStats {
    pub steps: usize,
    pub rejected: usize,
    /// `∫ F dt` for the Dirichlet face flux, integrated with the scheme's own weights.
    pub boundary_flux: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub sup: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub mesh: Arc<Mesh>,
    pub u: Vec<f64>,
    pub t: f64,
    pub dt: f64,
    pub stats: SimStats,
}

impl SimState {
    pub fn new(mesh: Arc<Mesh>, t0: f64, u0: impl Fn(f64) -> f64) -> Result<SimState> {
        let u = mesh.nodes().iter().map(|&r| u0(r)).collect();
        SimState::from_values(mesh, t0, u)
    }

    pub fn from_values(mesh: Arc<Mesh>, t0: f64, mut u: Vec<f64>) -> Result<SimState> {
        if u.len() != mesh.len() || u.iter().any(|v| !v.is_finite()) {
            return Err(domain("initial data must be finite and match the mesh"));
        }
        if mesh.unknowns() < mesh.len() {
            let last = u.len() - 1;
            u[last] = 0.0;
        }
        Ok(SimState { mesh, u, t: t0, dt: SimConfig::default().dt_init, stats: SimStats::default() })
    }

    /// Spatially constant data without coupling: `v' = f(v)`.
    pub fn ode(v0: f64) -> SimState {
        SimState {
            mesh: Arc::new(Mesh::point()),
            u: vec![v0],
            t: 0.0,
            dt: SimConfig::default().dt_init,
            stats: SimStats::default(),
        }
    }

    pub fn sup(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mass(&self) -> f64 {
        self.mesh.mass(&self.u)
    }

    fn trace_point(&self) -> TracePoint {
        TracePoint { t: self.t, sup: self.sup(), dt: self.dt }
    }
}

fn reaction(params: &ModelParams, terms: Terms, u: f64) -> f64 {
    let mut f = 0.0;
    if terms.focusing {
        f += params.focusing().value(u);
    }
    if terms.absorption {
        f -= params.absorbing().value(u);
    }
    f
}

/// Right-hand side and boundary flux.
fn rhs(params: &ModelParams, terms: Terms, mesh: &Mesh, u: &[f64], out: &mut [f64]) -> f64 {
    let m = mesh.unknowns();
    if terms.diffusion {
        mesh.laplacian_into(u, out);
    } else {
        out[..m].iter_mut().for_each(|v| *v = 0.0);
    }
    for i in 0..m {
        out[i] += reaction(params, terms, u[i]);
    }
    if terms.diffusion {
        mesh.boundary_flux(u)
    } else {
        0.0
    }
}

fn ssprk3(params: &ModelParams, terms: Terms, mesh: &Mesh, u: &[f64], dt: f64) -> (Vec<f64>, f64) {
    let m = mesh.unknowns();
    let mut k = vec![0.0; u.len()];
    let f0 = rhs(params, terms, mesh, u, &mut k);
    let mut u1 = u.to_vec();
    for i in 0..m {
        u1[i] = u[i] + dt * k[i];
    }
    let f1 = rhs(params, terms, mesh, &u1, &mut k);
    let mut u2 = u.to_vec();
    for i in 0..m {
        u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * k[i]);
    }
    let f2 = rhs(params, terms, mesh, &u2, &mut k);
    let mut out = u.to_vec();
    for i in 0..m {
        out[i] = u[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * k[i]);
    }
    (out, dt * (f0 / 6.0 + f1 / 6.0 + 2.0 * f2 / 3.0))
}

/// `(I - dt L - dt D) u⁺ = u + dt (f_p(u) - D u - f_q(u))` with `D = f_p'(u)`.
fn imex_euler(params: &ModelParams, terms: Terms, mesh: &Mesh, u: &[f64], dt: f64) -> (Vec<f64>, f64) {
    let m = mesh.unknowns();
    let p = params.p();
    let mut sub = vec![0.0; m];
    let mut diag = vec![1.0; m];
    let mut sup = vec![0.0; m];
    let mut b = vec![0.0; m];
    for i in 0..m {
        let ui = u[i];
        let mut rhs_i = ui;
        if terms.focusing {
            let d = p * ui.abs().powf(p - 1.0);
            diag[i] -= dt * d;
            rhs_i += dt * (params.focusing().value(ui) - d * ui);
        }
        if terms.absorption {
            rhs_i -= dt * params.absorbing().value(ui);
        }
        if terms.diffusion {
            if i > 0 {
                sub[i] = -dt * mesh.left[i];
                diag[i] += dt * mesh.left[i];
            }
            if i + 1 < mesh.len() {
                diag[i] += dt * mesh.right[i];
                if i + 1 < m {
                    sup[i] = -dt * mesh.right[i];
                }
            }
        }
        b[i] = rhs_i;
    }
    let x = thomas(&sub, &diag, &sup, &b);
    let mut out = u.to_vec();
    out[..m].copy_from_slice(&x);
    let flux = if terms.diffusion { dt * mesh.boundary_flux(&out) } else { 0.0 };
    (out, flux)
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let den = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / den;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

fn attempt(params: &ModelParams, cfg: &SimConfig, mesh: &Mesh, u: &[f64], dt: f64) -> (Vec<f64>, f64) {
    match cfg.scheme {
        Scheme::ExplicitRk => ssprk3(params, cfg.terms, mesh, u, dt),
        Scheme::Imex => imex_euler(params, cfg.terms, mesh, u, dt),
    }
}

fn sup_of(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest step the explicit scheme may take on this mesh.
fn dt_cap(cfg: &SimConfig, mesh: &Mesh) -> f64 {
    match cfg.scheme {
        Scheme::ExplicitRk if cfg.terms.diffusion => cfg.cfl * mesh.explicit_step_bound(),
        _ => f64::INFINITY,
    }
}

fn step_bounded(params: &ModelParams, state: &SimState, cfg: &SimConfig, t_stop: f64) -> Result<SimState> {
    let mesh = &*state.mesh;
    let cap = dt_cap(cfg, mesh);
    let mut next = state.clone();
    if let Some(h) = cfg.fixed_dt {
        let dt = h.min(t_stop - state.t);
        let (u, flux) = attempt(params, cfg, mesh, &state.u, dt);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepSizeUnderflow { time: state.t, step: dt });
        }
        next.u = u;
        next.t = state.t + dt;
        next.dt = h;
        next.stats.steps += 1;
        next.stats.boundary_flux += flux;
        return Ok(next);
    }
    let order = cfg.scheme.order();
    let mut dt = state.dt.min(cap);
    loop {
        let remaining = t_stop - state.t;
        let last = dt >= remaining;
        let h = if last { remaining } else { dt };
        let (big, _) = attempt(params, cfg, mesh, &state.u, h);
        let (half, f1) = attempt(params, cfg, mesh, &state.u, 0.5 * h);
        let (small, f2) = attempt(params, cfg, mesh, &half, 0.5 * h);
        let scale = cfg.atol + cfg.rtol * state.sup().max(sup_of(&small));
        let err = big.iter().zip(&small).fold(0.0, |m, (a, b)| m.max((a - b).abs())) / scale;
        let factor = if err.is_finite() && err > 0.0 { 0.9 * err.powf(-1.0 / (order + 1) as f64) } else { 0.0 };
        if err.is_finite() && err <= 1.0 && small.iter().all(|v| v.is_finite()) {
            next.u = small;
            next.t = if last { t_stop } else { state.t + h };
            next.dt = if last && h < dt { dt } else { (h * factor.clamp(0.2, 4.0)).min(cap) };
            if err == 0.0 {
                next.dt = (4.0 * h).min(cap);
            }
            next.stats.steps += 1;
            next.stats.boundary_flux += f1 + f2;
            return Ok(next);
        }
        next.stats.rejected += 1;
        dt = h * if err.is_finite() { factor.clamp(0.1, 0.5) } else { 0.25 };
        if dt < cfg.dt_min * state.t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { time: state.t, step: dt });
        }
    }
}

/// One accepted adaptive step (or one fixed step when `fixed_dt` is set).
pub fn step(params: &ModelParams, state: &SimState, cfg: &SimConfig) -> Result<SimState> {
    step_bounded(params, state, cfg, f64::INFINITY)
}

/// Advances to exactly `t_end`, shortening the final step. Crossing `m_blow`
/// is an error here; use [`run`] to classify it.
pub fn advance_to(params: &ModelParams, state: &SimState, cfg: &SimConfig, t_end: f64) -> Result<SimState> {
    let mut s = state.clone();
    while s.t < t_end {
        s = step_bounded(params, &s, cfg, t_end)?;
        let sup = s.sup();
        if sup >= cfg.m_blow {
            return Err(Error::Blowup { time: s.t, value: sup });
        }
        if s.stats.steps > cfg.max_steps {
            return Err(Error::Convergence(alloc::format!("step budget exhausted at t = {}", s.t)));
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Extinct,
    Blowup,
    HorizonReached,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Extinct => "extinct",
            Verdict::Blowup => "blowup",
            Verdict::HorizonReached => "horizon_reached",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub event_time: f64,
    /// Extinction: time for the pure-absorption ODE to empty `ε_ext`.
    /// Blowup: gap between the extrapolated and the last observed time.
    pub event_time_error: f64,
    pub fitted_rate: Option<f64>,
    /// `(T_est - t)^{1/(p-1)} sup|u|` over the last decade.
    pub type_one_constant: Option<f64>,
    pub trace: Vec<TracePoint>,
    pub final_state: SimState,
}

/// Runs until extinction, blowup or the horizon, whichever comes first.
pub fn run(params: &ModelParams, state: &SimState, cfg: &SimConfig, horizon: f64) -> Result<RunOutcome> {
    let mut s = state.clone();
    let mut trace = vec![s.trace_point()];
    let q = params.q();
    loop {
        let sup = s.sup();
        if sup <= cfg.eps_ext {
            return Ok(RunOutcome {
                verdict: Verdict::Extinct,
                event_time: s.t,
                event_time_error: cfg.eps_ext.powf(1.0 - q) / (1.0 - q),
                fitted_rate: None,
                type_one_constant: None,
                trace,
                final_state: s,
            });
        }
        if sup >= cfg.m_blow {
            return blowup_outcome(params, cfg, trace, s);
        }
        if s.t >= horizon {
            return Ok(RunOutcome {
                verdict: Verdict::HorizonReached,
                event_time: s.t,
                event_time_error: 0.0,
                fitted_rate: None,
                type_one_constant: None,
                trace,
                final_state: s,
            });
        }
        match step_bounded(params, &s, cfg, horizon) {
            Ok(next) => s = next,
            Err(Error::StepSizeUnderflow { .. }) if sup > 1.0 => return blowup_outcome(params, cfg, trace, s),
            Err(e) => return Err(e),
        }
        trace.push(s.trace_point());
        if s.stats.steps > cfg.max_steps {
            return Err(Error::Convergence(alloc::format!("step budget exhausted at t = {}", s.t)));
        }
    }
}

fn blowup_outcome(params: &ModelParams, cfg: &SimConfig, trace: Vec<TracePoint>, s: SimState) -> Result<RunOutcome> {
    let fit = fit_blowup(&trace, s.sup().min(cfg.m_blow), params.p()).ok();
    let last = s.t;
    Ok(RunOutcome {
        verdict: Verdict::Blowup,
        event_time: fit.map_or(last, |f| f.t_est),
        event_time_error: fit.map_or(0.0, |f| f.t_est - last),
        fitted_rate: fit.map(|f| f.rate),
        type_one_constant: fit.map(|f| f.constant),
        trace,
        final_state: s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupFit {
    pub t_est: f64,
    pub rate: f64,
    pub constant: f64,
}

/// Time at which `sup` first reaches `level`, interpolating `log sup` linearly.
fn crossing(trace: &[TracePoint], level: f64) -> Option<f64> {
    let k = trace.iter().position(|p| p.sup >= level)?;
    if k == 0 {
        return None;
    }
    let (a, b) = (trace[k - 1], trace[k]);
    let w = (level.ln() - a.sup.ln()) / (b.sup.ln() - a.sup.ln());
    Some(a.t + w * (b.t - a.t))
}

/// Aitken extrapolation of the blowup time from the crossings of `top/100`,
/// `top/10` and `top`, then a log-log fit of the last decade.
pub fn fit_blowup(trace: &[TracePoint], top: f64, p: f64) -> Result<BlowupFit> {
    let miss = || Error::Fit(alloc::format!("trace does not span two decades below {top:e}"));
    let t1 = crossing(trace, top / 100.0).ok_or_else(miss)?;
    let t2 = crossing(trace, top / 10.0).ok_or_else(miss)?;
    let t3 = crossing(trace, top).ok_or_else(miss)?;
    let (d1, d2) = (t2 - t1, t3 - t2);
    if !(d1 > d2 && d2 > 0.0) {
        return Err(Error::Fit("crossing gaps are not contracting".into()));
    }
    let t_est = t3 + d2 * d2 / (d1 - d2);
    let (x, y): (Vec<f64>, Vec<f64>) = trace
        .iter()
        .filter(|pt| pt.sup >= top / 10.0 && pt.sup <= top && pt.t < t_est)
        .map(|pt| (t_est - pt.t, pt.sup))
        .unzip();
    if x.len() < 3 {
        return Err(miss());
    }
    let line = power_law_fit(&x, &y)?;
    let beta = 1.0 / (p - 1.0);
    let constant = x.iter().zip(&y).map(|(s, v)| s.powf(beta) * v).sum::<f64>() / x.len() as f64;
    Ok(BlowupFit { t_est, rate: line.slope, constant })
}

/// Bracket for the extinction time of `v' = v^p - v^q` from `v(0) = a < 1`.
pub fn extinction_bounds(params: &ModelParams, a: f64) -> (f64, f64) {
    let (p, q) = (params.p(), params.q());
    let lo = a.powf(1.0 - q) / (1.0 - q);
    (lo, lo / (1.0 - a.powf(p - q)))
}

/// Extinction run; the horizon must contain the ODE upper bound.
pub fn run_extinction(params: &ModelParams, state: &SimState, cfg: &SimConfig, horizon: f64) -> Result<RunOutcome> {
    let a = state.sup();
    if !(a < 1.0) {
        return Err(domain(alloc::format!("extinction needs sup|u0| < 1, got {a}")));
    }
    let (_, hi) = extinction_bounds(params, a);
    if horizon - state.t < hi {
        return Err(Error::Horizon(alloc::format!("horizon {horizon} is shorter than the extinction bound {hi}")));
    }
    let out = run(params, state, cfg, horizon)?;
    if out.verdict != Verdict::Extinct {
        return Err(Error::Horizon(alloc::format!("no extinction before t = {}", out.event_time)));
    }
    Ok(out)
}

pub fn run_blowup(params: &ModelParams, state: &SimState, cfg: &SimConfig, horizon: f64) -> Result<RunOutcome> {
    let a = state.sup();
    if !(a > 1.0) {
        return Err(domain(alloc::format!("blowup needs sup|u0| > 1, got {a}")));
    }
    let out = run(params, state, cfg, horizon)?;
    if out.verdict != Verdict::Blowup {
        return Err(Error::Horizon(alloc::format!("no blowup before t = {horizon}")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionDeviation {
    pub t: f64,
    pub region: Region,
    /// `max |u_sim - u_ansatz| / max |u_ansatz|` over the region's nodes.
    pub relative: f64,
    /// Mean signed deviation `u_sim - u_ansatz`.
    pub mean: f64,
    pub samples: usize,
}

/// Region-wise deviation of simulated states from the ansatz at the same times.
/// States at or past the blowup time are skipped.
pub fn compare_with_ansatz(field: &AnsatzField, states: &[SimState]) -> Vec<RegionDeviation> {
    const REGIONS: [Region; 4] = [Region::Inner, Region::Semiinner, Region::Selfsimilar, Region::Outer];
    let mut out = Vec::new();
    for s in states {
        // (max dev, max ref, sum dev, count)
        let mut acc = [(0.0f64, 0.0f64, 0.0f64, 0usize); 4];
        for (&r, &u) in s.mesh.nodes().iter().zip(&s.u) {
            let (Ok(a), Ok(region)) = (field.eval(r, s.t), field.region(r, s.t)) else {
                continue;
            };
            let k = REGIONS.iter().position(|&g| g == region).unwrap_or(3);
            let slot = &mut acc[k];
            slot.0 = slot.0.max((u - a).abs());
            slot.1 = slot.1.max(a.abs());
            slot.2 += u - a;
            slot.3 += 1;
        }
        for (k, &(dev, reference, sum, n)) in acc.iter().enumerate() {
            if n == 0 {
                continue;
            }
            out.push(RegionDeviation {
                t: s.t,
                region: REGIONS[k],
                relative: if reference > 0.0 { dev / reference } else { dev },
                mean: sum / n as f64,
                samples: n,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_stencil_is_n_times_second_derivative() {
        let mesh = Mesh::from_nodes(vec![0.0, 0.1, 0.2, 0.3], 5, Boundary::Neumann).unwrap();
        let u: Vec<f64> = mesh.nodes().iter().map(|r| r * r).collect();
        let mut out = vec![0.0; 4];
        mesh.laplacian_into(&u, &mut out);
        // Δ r² = 2n
        assert!((out[0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn thomas_solves_small_system() {
        let x = thomas(&[0.0, -1.0, -1.0], &[2.0, 2.0, 2.0], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 1.0]);
        assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }
}
