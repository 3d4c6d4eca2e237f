//! Stationary profiles and the constants that drive the matching.

use alloc::vec::Vec;

use num_rational::Rational64;
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::fit::{decay_fit, least_squares, power_law_fit};
use crate::model::ModelParams;
use crate::monomial::{Exponent, MonomialSum};
use crate::ode::Dopri45;
use crate::quad::integrate_breaks;
use crate::spectra::{fundamental_system, FundamentalSystem};
use crate::table::{geometric_grid, RadialTable};

/// Constants of the singular steady state and of the profile tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConstants {
    pub l1: f64,
    pub beta0: f64,
    pub gamma: f64,
    pub a1: f64,
    pub b1: f64,
    pub k1: f64,
    pub m0: f64,
}

/// The part of [`ProfileConstants`] available in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularConstants {
    pub l1: f64,
    pub beta0: f64,
    pub gamma: f64,
}

fn s_of(params: &ModelParams, r: f64) -> f64 {
    let n = params.dim();
    r * r / (n * (n - 2.0))
}

/// Talenti bubble `Q(r) = (1 + r²/(n(n-2)))^{-(n-2)/2}`.
pub fn talenti_q(params: &ModelParams, r: f64) -> f64 {
    let n = params.dim();
    (1.0 + s_of(params, r)).powf(-(n - 2.0) / 2.0)
}

/// `(Q, Q', Q'')` in closed form.
pub fn talenti_q_derivs(params: &ModelParams, r: f64) -> (f64, f64, f64) {
    let n = params.dim();
    let s = s_of(params, r);
    let base = (1.0 + s).powf(-n / 2.0);
    let q = base * (1.0 + s);
    let dq = -r / n * base;
    let ddq = base / (1.0 + s) * (s - (1.0 + s) / n);
    (q, dq, ddq)
}

/// `Λ_y Q = (n-2)/2 Q + r Q'` and its derivative.
pub fn lambda_q(params: &ModelParams, r: f64) -> (f64, f64) {
    let n = params.dim();
    let s = s_of(params, r);
    let base = (1.0 + s).powf(-n / 2.0);
    let shape = (n - 2.0) / 2.0 - r * r / (2.0 * n);
    let value = base * shape;
    let deriv = -r / (n - 2.0) * base / (1.0 + s) * shape - r / n * base;
    (value, deriv)
}

/// `lim r^{n-2} Λ_y Q(r) = -(n(n-2))^{n/2} / (2n)`.
pub fn lambda_q_tail(params: &ModelParams) -> f64 {
    let n = params.dim();
    -(n * (n - 2.0)).powf(n / 2.0) / (2.0 * n)
}

/// `V = f'(Q) = p Q^{p-1} = p (1+s)^{-2}`.
pub fn potential(params: &ModelParams, r: f64) -> f64 {
    let s = s_of(params, r);
    params.p() / ((1.0 + s) * (1.0 + s))
}

/// `sup |Q'' + (n-1)/r Q' + Q^p|` over `samples` equispaced radii in `[0, r_max]`.
pub fn talenti_residual_sup(params: &ModelParams, r_max: f64, samples: usize) -> f64 {
    let n = params.dim();
    let p = params.p();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let r = r_max * i as f64 / (samples - 1) as f64;
        let (q, dq, ddq) = talenti_q_derivs(params, r);
        let radial = if r == 0.0 { (n - 1.0) * ddq } else { (n - 1.0) / r * dq };
        worst = worst.max((ddq + radial + q.powf(p)).abs());
    }
    worst
}

pub fn singular_state_constants(params: &ModelParams) -> SingularConstants {
    let n = params.dim();
    let q = params.q();
    let beta0 = params.beta0();
    let c = beta0 * (beta0 + n - 2.0);
    let e = 1.0 / (q - 1.0);
    // integer exponents (q = 1/2 gives -2) are evaluated exactly
    let l1 = if e.fract() == 0.0 && e.abs() <= 64.0 { c.powi(e as i32) } else { c.powf(e) };
    // q L1^{q-1} = q c
    let gamma = 0.5 * (-(n - 2.0) + ((n - 2.0) * (n - 2.0) + 4.0 * q * c).sqrt());
    SingularConstants { l1, beta0, gamma }
}

/// `q L1^{q-1} = q β₀(β₀+n-2)`, the strength of the inverse-square potential.
pub fn inverse_square_strength(params: &ModelParams) -> f64 {
    let n = params.dim();
    let beta0 = params.beta0();
    params.q() * beta0 * (beta0 + n - 2.0)
}

/// `β₀` as an exact exponent when `q` is rational.
pub fn beta0_exponent(params: &ModelParams) -> Exponent {
    match params.q_exact() {
        Some(q) => Exponent::Exact(Rational64::from_integer(2) / (Rational64::from_integer(1) - q)),
        None => Exponent::Real(params.beta0()),
    }
}

/// `U_∞ = L1 |x|^{β₀}` as a one-term monomial sum.
pub fn u_infinity(params: &ModelParams) -> MonomialSum {
    let c = singular_state_constants(params);
    MonomialSum::monomial(c.l1, beta0_exponent(params))
}

/// `Δ U_∞ - U_∞^q` computed inside the monomial algebra.
pub fn u_infinity_residual(params: &ModelParams) -> Result<MonomialSum> {
    let u = u_infinity(params);
    let (e, c) = u.leading().expect("U_inf has one term");
    let q = match params.q_exact() {
        Some(q) => Exponent::Exact(q),
        None => Exponent::Real(params.q()),
    };
    let power = MonomialSum::monomial(c.powf(params.q()), e.mul(q));
    u.laplacian(params.n()).sub(&power)
}

/// Largest relative discrepancy between consecutive table nodes and a fresh
/// integration of `y'' = rhs(r, y, y')` from the previous node.
pub fn ode_defect(table: &RadialTable, rhs: impl Fn(f64, f64, f64) -> f64, rtol: f64) -> Result<f64> {
    let solver = Dopri45::with_tol(rtol, rtol * 1e-3);
    let g = table.grid();
    let v = table.values();
    let d = table.derivs();
    let mut worst: f64 = 0.0;
    for i in 1..g.len() - 1 {
        let out = solver.solve_at(
            |r, y, dy| {
                dy[0] = y[1];
                dy[1] = rhs(r, y[0], y[1]);
            },
            g[i],
            &[v[i], d[i]],
            &[g[i + 1]],
        )?;
        worst = worst.max((out[0][0] - v[i + 1]).abs() / (1.0 + v[i + 1].abs()));
    }
    Ok(worst)
}

/// Fitted tail data of the absorption profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UTail {
    pub gamma_fit: f64,
    pub b1: f64,
    pub c1: f64,
    pub k1: f64,
}

/// Solves `U'' + (n-1)/r U' = U^q`, `U(0) = 1`, `U'(0) = 0` on `[0, r_max]`.
///
/// `meta` carries `gamma_fit` (log-log slope of `U - U_∞` on `[50, r_max]`),
/// `B1`, `C1`, `k1` from `(U - U_∞) r^{-γ} ≈ B1 + C1 r^{-k1}` with the analytic
/// `γ`, and `fit_rms`.
pub fn absorption_profile_u(params: &ModelParams, r_max: f64, tol: f64) -> Result<RadialTable> {
    if r_max < 100.0 {
        return Err(domain("absorption profile needs r_max >= 100"));
    }
    let n = params.dim();
    let q = params.q();
    let grid = geometric_grid(1e-3, r_max, 1.02);
    let r0 = grid[1];
    let u0 = 1.0 + r0 * r0 / (2.0 * n) + q * r0.powi(4) / (8.0 * n * (n + 2.0));
    let du0 = r0 / n + q * r0.powi(3) / (2.0 * n * (n + 2.0));
    let solver = Dopri45::with_tol(tol, tol * 1e-3);
    let states = solver.solve_at(
        |r, y, dy| {
            dy[0] = y[1];
            dy[1] = y[0].abs().powf(q) - (n - 1.0) / r * y[1];
        },
        r0,
        &[u0, du0],
        &grid[1..],
    )?;
    let mut values = alloc::vec![1.0];
    let mut derivs = alloc::vec![0.0];
    for s in &states {
        values.push(s[0]);
        derivs.push(s[1]);
    }
    let table = RadialTable::new(grid, values, derivs)?;
    let tail = fit_u_tail(params, &table, 50.0)?;
    Ok(table
        .with_meta("gamma_fit", tail.gamma_fit)
        .with_meta("B1", tail.b1)
        .with_meta("C1", tail.c1)
        .with_meta("k1", tail.k1))
}

/// Two-stage tail fit of `U - U_∞ ≈ B1 r^γ + C1 r^{γ-k1}` on `[r_lo, r_max]`.
pub fn fit_u_tail(params: &ModelParams, table: &RadialTable, r_lo: f64) -> Result<UTail> {
    let c = singular_state_constants(params);
    let mut xs = Vec::new();
    let mut diff = Vec::new();
    for (&r, &u) in table.grid().iter().zip(table.values()) {
        if r >= r_lo {
            xs.push(r);
            diff.push(u - c.l1 * r.powf(c.beta0));
        }
    }
    if xs.len() < 8 {
        return Err(Error::Fit("too few tail samples for the profile fit".into()));
    }
    let slope = power_law_fit(&xs, &diff)?.slope;
    if (slope - c.gamma).abs() > 0.01 * c.gamma {
        return Err(Error::Convergence(alloc::format!(
            "tail exponent {slope} is not within 1% of gamma = {}",
            c.gamma
        )));
    }
    let scaled: Vec<f64> = xs.iter().zip(&diff).map(|(r, d)| d / r.powf(c.gamma)).collect();
    let fit = decay_fit(&xs, &scaled, 0.3, 4.0)?;
    Ok(UTail { gamma_fit: slope, b1: fit.limit, c1: fit.amplitude, k1: fit.rate })
}

/// Profile table continued past its last node by a fitted power-law tail.
///
/// The tail is `Σ c_i r^{e_i}` plus a decaying patch that removes the jump at
/// the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedProfile {
    pub table: RadialTable,
    tail: Vec<(f64, f64)>,
    patch: f64,
    patch_exponent: f64,
}

impl ExtendedProfile {
    pub fn new(table: RadialTable, tail: Vec<(f64, f64)>, patch_exponent: f64) -> Self {
        let r = table.r_max();
        let model: f64 = tail.iter().map(|(c, e)| c * r.powf(*e)).sum();
        let patch = table.eval(r) - model;
        ExtendedProfile { table, tail, patch, patch_exponent }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= self.table.r_max() {
            return self.table.eval(r);
        }
        let model: f64 = self.tail.iter().map(|(c, e)| c * r.powf(*e)).sum();
        model + self.patch * (r / self.table.r_max()).powf(self.patch_exponent)
    }

    pub fn eval_deriv(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= self.table.r_max() {
            return self.table.eval_with_deriv(r).1;
        }
        let model: f64 = self.tail.iter().map(|(c, e)| c * e * r.powf(*e - 1.0)).sum();
        let rm = self.table.r_max();
        model + self.patch * self.patch_exponent / rm * (r / rm).powf(self.patch_exponent - 1.0)
    }

    pub fn patch(&self) -> f64 {
        self.patch
    }
}

/// `U` with its tail `U_∞ + B1 r^γ + C1 r^{γ-k1}` beyond the table.
pub fn extend_u(params: &ModelParams, table: RadialTable) -> Result<ExtendedProfile> {
    let c = singular_state_constants(params);
    let get = |k: &str| {
        table
            .meta
            .get(k)
            .copied()
            .ok_or_else(|| Error::Fit(alloc::format!("profile table lacks `{k}`")))
    };
    let (b1, c1, k1) = (get("B1")?, get("C1")?, get("k1")?);
    let tail = alloc::vec![(c.l1, c.beta0), (b1, c.gamma), (c1, c.gamma - k1)];
    Ok(ExtendedProfile::new(table, tail, c.gamma - k1 - 1.0))
}

/// Solution of `H_y T1 = -Λ_y Q` by variation of parameters over the
/// fundamental system `(Z1, Z2)`:
///
/// ```text
/// T1 = (Z1 ∫₀ʳ Z1 Z2 s^{n-1} ds - Z2 ∫₀ʳ Z1² s^{n-1} ds) / W
/// ```
///
/// which is the bounded solution with `T1(0) = 0`. `meta` carries `A1` from a
/// tail fit `A1 + c1/r + c2/r² + (c3 + c3_log ln r)/r³ + c4/r⁴` on
/// `[50, r_max]` with `c1 = z_∞/2` fixed, the coefficients, and
/// `A1_quadrature = ‖Λ_y Q‖² / ((n-2)|z_∞|)`. The logarithm comes from the
/// resonance of the source with `Z1 ~ r^{-3}`.
pub fn inner_correction_t1(params: &ModelParams, r_max: f64, tol: f64) -> Result<RadialTable> {
    let fs = fundamental_system(params, r_max, tol)?;
    t1_from_fundamental_system(params, &fs)
}

pub fn t1_from_fundamental_system(params: &ModelParams, fs: &FundamentalSystem) -> Result<RadialTable> {
    let n = params.dim();
    let w = fs.wronskian;
    let z2 = &fs.z2;
    let grid = z2.grid();
    let r_head = grid[0];
    // heads on [0, r_head] from Z1 ≈ (n-2)/2, Z2 ≈ a1 r^{-(n-2)}
    let z10 = (n - 2.0) / 2.0;
    let mut i1 = z10 * z10 * r_head.powf(n) / n;
    let mut i2 = fs.a1 * z10 * r_head * r_head / 2.0;
    let z1sq = |r: f64| {
        let z = lambda_q(params, r).0;
        z * z * r.powf(n - 1.0)
    };
    let z1z2 = |r: f64| lambda_q(params, r).0 * z2.eval(r) * r.powf(n - 1.0);
    let mut out_grid = alloc::vec![0.0];
    let mut values = alloc::vec![0.0];
    let mut derivs = alloc::vec![0.0];
    for k in 0..grid.len() {
        let r = grid[k];
        if k > 0 {
            let seg = [grid[k - 1], r];
            i1 += integrate_breaks(z1sq, &seg, 8);
            i2 += integrate_breaks(z1z2, &seg, 8);
        }
        let (z1, dz1) = lambda_q(params, r);
        let (zz2, dz2) = (z2.values()[k], z2.derivs()[k]);
        out_grid.push(r);
        values.push((z1 * i2 - zz2 * i1) / w);
        derivs.push((dz1 * i2 - dz2 * i1) / w);
    }
    let table = RadialTable::new(out_grid, values, derivs)?;
    let fit = fit_t1_tail(params, &table, 50.0)?;
    let a1q = a1_quadrature(params);
    Ok(table
        .with_meta("A1", fit[0])
        .with_meta("c1", fit[1])
        .with_meta("c2", fit[2])
        .with_meta("c3", fit[3])
        .with_meta("c3_log", fit[4])
        .with_meta("A1_quadrature", a1q))
}

fn fit_t1_tail(params: &ModelParams, table: &RadialTable, r_lo: f64) -> Result<Vec<f64>> {
    // the r^{-(n-4)} coefficient is forced by the source: -2(n-4)c1 = z_∞
    let n = params.dim();
    let c1 = lambda_q_tail(params) / (2.0 * (n - 4.0));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&r, &v) in table.grid().iter().zip(table.values()) {
        if r >= r_lo {
            let r3 = r * r * r;
            rows.push(alloc::vec![1.0, 1.0 / (r * r), 1.0 / r3, r.ln() / r3, 1.0 / (r3 * r)]);
            rhs.push(v - c1 * r.powf(-(n - 4.0)));
        }
    }
    let c = least_squares(&rows, &rhs)?.0;
    Ok(alloc::vec![c[0], c1, c[1], c[2], c[3]])
}

/// `‖Λ_y Q‖²_{L²(r^{n-1}dr)} / ((n-2)|z_∞|)`, the limit of `T1` at infinity.
pub fn a1_quadrature(params: &ModelParams) -> f64 {
    let n = params.dim();
    let zinf = lambda_q_tail(params);
    let r_cut = 1e4;
    let breaks = geometric_grid(0.05, r_cut, 1.25);
    let integrand = |r: f64| {
        let z = lambda_q(params, r).0;
        z * z * r.powf(n - 1.0)
    };
    // Z1² r^{n-1} = z∞² r^{-(n-3)} (1 + O(r^{-2})) past the cut
    let body = integrate_breaks(integrand, &breaks, 12);
    let tail = zinf * zinf * r_cut.powf(-(n - 4.0)) / (n - 4.0);
    (body + tail) / ((n - 2.0) * zinf.abs())
}

/// Independent route to `T1`: forward shooting from `T1(0) = T1'(0) = 0`.
pub fn t1_by_shooting(params: &ModelParams, r_max: f64, tol: f64) -> Result<RadialTable> {
    let n = params.dim();
    let grid = geometric_grid(1e-3, r_max, 1.02);
    let r0 = grid[1];
    // T1 = -(n-2)/(4n) r² + O(r⁴) near the origin, from Λ_yQ(0) = (n-2)/2
    let c2 = -(n - 2.0) / (4.0 * n);
    let solver = Dopri45::with_tol(tol, tol * 1e-6);
    let states = solver.solve_at(
        |r, y, dy| {
            dy[0] = y[1];
            dy[1] = -(n - 1.0) / r * y[1] - potential(params, r) * y[0] - lambda_q(params, r).0;
        },
        r0,
        &[c2 * r0 * r0, 2.0 * c2 * r0],
        &grid[1..],
    )?;
    let mut values = alloc::vec![0.0];
    let mut derivs = alloc::vec![0.0];
    for s in &states {
        values.push(s[0]);
        derivs.push(s[1]);
    }
    RadialTable::new(grid, values, derivs)
}

/// `T1` with the tail `A1 + c1/r + c2/r² + c3/r³` beyond the table; the
/// logarithm is frozen at the table edge.
pub fn extend_t1(table: RadialTable) -> Result<ExtendedProfile> {
    let get = |k: &str| {
        table
            .meta
            .get(k)
            .copied()
            .ok_or_else(|| Error::Fit(alloc::format!("profile table lacks `{k}`")))
    };
    let c3 = get("c3")? + get("c3_log")? * table.r_max().ln();
    let tail = alloc::vec![(get("A1")?, 0.0), (get("c1")?, -1.0), (get("c2")?, -2.0), (c3, -3.0)];
    Ok(ExtendedProfile::new(table, tail, -4.0))
}

/// Solves `M' = M^p - M^q`, `M(0) = m0`, at the (increasing) times `t_grid`.
///
/// The equation is integrated in `w = M^{1-q}`, for which the extinction is a
/// transversal zero crossing; after extinction `M ≡ 0`.
pub fn flat_solution_m(params: &ModelParams, m0: f64, t_grid: &[f64], guard: f64) -> Result<RadialTable> {
    if !(m0 > 0.0) {
        return Err(domain("flat solution needs M0 > 0"));
    }
    let p = params.p();
    let q = params.q();
    let e = (p - q) / (1.0 - q);
    let rhs = move |_: f64, y: &[f64], dy: &mut [f64]| dy[0] = (1.0 - q) * (y[0].max(0.0).powf(e) - 1.0);
    let w_guard = guard.powf(1.0 - q);
    let solver = Dopri45::with_tol(1e-12, 1e-14);
    let mut t = 0.0;
    let mut y = alloc::vec![m0.powf(1.0 - q)];
    let mut h = 0.0;
    let mut extinct_at: Option<f64> = None;
    let mut values = Vec::with_capacity(t_grid.len());
    let mut derivs = Vec::with_capacity(t_grid.len());
    let mut rhs_mut = rhs;
    for &target in t_grid {
        if extinct_at.is_none() && target > t {
            let (outcome, h_next) =
                solver.run(&mut rhs_mut, &mut t, &mut y, target, h, |_, y| y[0] <= 0.0 || y[0] > w_guard)?;
            h = h_next;
            if y[0] > w_guard {
                return Err(Error::Blowup { time: t, value: y[0].powf(1.0 / (1.0 - q)) });
            }
            if outcome == crate::ode::Outcome::Stopped {
                // the crossing is transversal: w' = -(1-q) at w = 0
                extinct_at = Some(t + y[0] / (1.0 - q));
            }
        }
        let m = if extinct_at.is_some_and(|te| target >= te) || y[0] <= 0.0 {
            0.0
        } else {
            y[0].powf(1.0 / (1.0 - q))
        };
        values.push(m);
        derivs.push(if m == 0.0 { 0.0 } else { m.powf(p) - m.powf(q) });
    }
    let mut table = RadialTable::new(t_grid.to_vec(), values, derivs)?;
    if let Some(te) = extinct_at {
        table.meta.insert("extinction_time".into(), te);
    }
    Ok(table)
}

/// Every constant needed by matching and the ansatz.
pub fn profile_constants(params: &ModelParams, r_max: f64, tol: f64) -> Result<ProfileConstants> {
    let s = singular_state_constants(params);
    let u = absorption_profile_u(params, r_max, tol)?;
    let t1 = inner_correction_t1(params, r_max, tol)?;
    Ok(ProfileConstants {
        l1: s.l1,
        beta0: s.beta0,
        gamma: s.gamma,
        a1: t1.meta["A1"],
        b1: u.meta["B1"],
        k1: u.meta["k1"],
        m0: s.l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn default_params() -> ModelParams {
        ModelParams::five(0.5, 1, 1.0).unwrap()
    }

    #[test]
    fn talenti_values() {
        let p = default_params();
        assert_eq!(talenti_q(&p, 0.0), 1.0);
        assert_relative_eq!(talenti_q(&p, 15f64.sqrt()), 2f64.powf(-1.5), max_relative = 1e-14);
        assert!(talenti_residual_sup(&p, 100.0, 10_001) <= 1e-9);
    }

    #[test]
    fn lambda_q_matches_definition() {
        let p = default_params();
        for &r in &[0.0, 0.3, 1.0, 4.0, 30.0] {
            let (q, dq, _) = talenti_q_derivs(&p, r);
            assert_relative_eq!(lambda_q(&p, r).0, 1.5 * q + r * dq, max_relative = 1e-13, epsilon = 1e-15);
        }
        // r³ Λ_yQ → z∞
        let r = 1e5;
        assert_relative_eq!(lambda_q(&p, r).0 * r.powi(3), lambda_q_tail(&p), max_relative = 1e-8);
    }

    #[test]
    fn constants_for_default_params() {
        let c = singular_state_constants(&default_params());
        assert_relative_eq!(c.l1, 1.0 / 784.0, max_relative = 1e-15);
        assert_relative_eq!(c.gamma, (-3.0 + 65f64.sqrt()) / 2.0, max_relative = 1e-14);
        assert!(c.gamma > 2.0 && c.gamma < 4.0);
        assert_eq!(c.beta0, 4.0);
    }

    #[test]
    fn u_infinity_is_exact() {
        let r = u_infinity_residual(&default_params()).unwrap();
        assert!(r.is_zero(), "{:?}", r);
    }

    proptest::proptest! {
        #[test]
        fn gamma_bracket_and_ordering(q1 in 0.01f64..0.98, dq in 0.001f64..0.01) {
            let q2 = q1 + dq;
            let a = singular_state_constants(&ModelParams::five(q1, 1, 1.0).unwrap());
            let b = singular_state_constants(&ModelParams::five(q2, 1, 1.0).unwrap());
            for c in [a, b] {
                proptest::prop_assert!(c.beta0 - 2.0 < c.gamma && c.gamma < c.beta0);
            }
            proptest::prop_assert!(b.gamma > a.gamma);
        }
    }

    #[test]
    fn flat_solution_extinction_bracket() {
        let p = default_params();
        let m0 = 1.0 / 784.0;
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.0005).collect();
        let m = flat_solution_m(&p, m0, &times, 1e8).unwrap();
        assert_eq!(m.values()[0], m0);
        let te = m.meta["extinction_time"];
        let lo = m0.powf(0.5) / 0.5;
        let hi = lo / (1.0 - m0.powf(p.p() - 0.5));
        assert!(te >= lo && te <= hi, "{te} not in [{lo}, {hi}]");
        assert!(m.values().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn flat_solution_blows_up() {
        let p = default_params();
        let err = flat_solution_m(&p, 10.0, &[0.0, 0.05], 1e8).unwrap_err();
        assert!(matches!(err, Error::Blowup { .. }));
    }
}
