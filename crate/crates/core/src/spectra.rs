//! The two linearized eigenvalue problems.
//!
//! * Ball problem: `-(Δ + p Q^{p-1}) ψ = μ ψ` on radial functions in `B_R`
//!   with `ψ(R) = 0`, solved by Prüfer-angle shooting and cross-checked by a
//!   second-order finite-difference matrix with Richardson extrapolation.
//! * Self-similar problem: `-(Δ - z/2·∇ - q L1^{q-1}|z|^{-2}) e = μ e` in
//!   `L²_ρ`, `ρ = e^{-|z|²/4}`, whose eigenfunctions are `|z|^γ` times
//!   generalized Laguerre polynomials in `|z|²/4`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::fit::least_squares;
use crate::model::ModelParams;
use crate::ode::Dopri45;
use crate::profiles::{inverse_square_strength, lambda_q, lambda_q_tail, potential, singular_state_constants};
use crate::quad::integrate_breaks;
use crate::table::{geometric_grid, RadialTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    UnitAtOrigin,
    UnitL2,
    UnitWeighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub index: usize,
    pub eigenvalue: f64,
    pub eigenfunction: RadialTable,
    pub normalization: Normalization,
}

impl EigenResult {
    /// Sign changes of the sampled eigenfunction, ignoring exact zeros.
    pub fn sign_changes(&self) -> usize {
        count_sign_changes(self.eigenfunction.values())
    }
}

pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for &v in values {
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// `Z1 = Λ_y Q` and a second radial solution `Z2` of `H_y Z = 0`, normalized
/// so that `Z2 → a2 = 1` at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSystem {
    pub z1: RadialTable,
    pub z2: RadialTable,
    pub a1: f64,
    pub a2: f64,
    /// `r^{n-1}(Z1 Z2' - Z1' Z2)`, constant by Abel's identity.
    pub wronskian: f64,
    /// Largest relative deviation of the sampled Wronskian from `wronskian`.
    pub wronskian_spread: f64,
}

/// Builds the fundamental system on `[1e-3, r_max]` (geometric grid, ratio
/// 1.005). `Z2` is integrated inwards from `r_max`, started on the
/// asymptotic series `1 + c r^{-2} + d r^{-4}`.
pub fn fundamental_system(params: &ModelParams, r_max: f64, tol: f64) -> Result<FundamentalSystem> {
    if r_max < 100.0 {
        return Err(domain("fundamental system needs r_max >= 100"));
    }
    let n = params.dim();
    let p = params.p();
    let k = n * (n - 2.0);
    let c = p * k * k / (2.0 * n - 8.0);
    let d = if params.n() == 6 { 0.0 } else { (p * k * k * c - 2.0 * p * k * k * k) / (4.0 * (n - 6.0)) };
    let rm = r_max;
    let y0 = [1.0 + c / (rm * rm) + d / rm.powi(4), -2.0 * c / rm.powi(3) - 4.0 * d / rm.powi(5)];
    let mut grid = geometric_grid(1e-3, r_max, 1.005);
    grid.remove(0);
    let backwards: Vec<f64> = grid.iter().rev().copied().collect();
    let solver = Dopri45::with_tol(tol, 0.0);
    let states = solver.solve_at(
        |r, y, dy| {
            dy[0] = y[1];
            dy[1] = -(n - 1.0) / r * y[1] - potential(params, r) * y[0];
        },
        rm,
        &y0,
        &backwards,
    )?;
    let m = grid.len();
    let mut z2v = alloc::vec![0.0; m];
    let mut z2d = alloc::vec![0.0; m];
    for (i, s) in states.iter().enumerate() {
        z2v[m - 1 - i] = s[0];
        z2d[m - 1 - i] = s[1];
    }
    let z1 = RadialTable::from_fn(grid.clone(), |r| lambda_q(params, r))?;
    let z2 = RadialTable::new(grid.clone(), z2v, z2d)?;
    let w_expected = (n - 2.0) * lambda_q_tail(params);
    let mut spread: f64 = 0.0;
    for i in 0..m {
        let r = grid[i];
        let w = r.powf(n - 1.0) * (z1.values()[i] * z2.derivs()[i] - z1.derivs()[i] * z2.values()[i]);
        spread = spread.max((w / w_expected - 1.0).abs());
    }
    if !(spread < 1e-3) {
        return Err(Error::Convergence(alloc::format!("Wronskian drifts by {spread}")));
    }
    // a1 from r^{n-2} Z2 ≈ a1 + b r² on the innermost nodes
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for i in 0..m {
        let r = grid[i];
        if r <= 1e-2 {
            rows.push(alloc::vec![1.0, r * r]);
            rhs.push(z2.values()[i] * r.powf(n - 2.0));
        }
    }
    let a1 = least_squares(&rows, &rhs)?.0[0];
    // a2 from Z2 ≈ a2 + c' r^{-2} on [r_max/2, r_max]
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for i in 0..m {
        let r = grid[i];
        if r >= r_max / 2.0 {
            rows.push(alloc::vec![1.0, 1.0 / (r * r), 1.0 / r.powi(4)]);
            rhs.push(z2.values()[i]);
        }
    }
    let a2 = least_squares(&rows, &rhs)?.0[0];
    if a1 == 0.0 || a2 == 0.0 {
        return Err(Error::Convergence("degenerate fundamental system".into()));
    }
    Ok(FundamentalSystem { z1, z2, a1, a2, wronskian: w_expected, wronskian_spread: spread })
}

fn prufer_angle(params: &ModelParams, radius: f64, mu: f64, tol: f64) -> Result<f64> {
    let n = params.dim();
    let r0 = 1e-6;
    let v0 = potential(params, 0.0) + mu;
    let psi = 1.0 - v0 * r0 * r0 / (2.0 * n);
    let dpsi = -v0 * r0 / n;
    let theta0 = psi.atan2(dpsi);
    let solver = Dopri45::with_tol(tol, tol);
    let out = solver.solve_at(
        |r, y, dy| {
            let (s, c) = y[0].sin_cos();
            dy[0] = c * c + (n - 1.0) / r * s * c + (potential(params, r) + mu) * s * s;
        },
        r0,
        &[theta0],
        &[radius],
    )?;
    Ok(out[0][0])
}

/// Eigenvalue `μ_i^{(R)}` by bisection on `θ(R; μ) = iπ`.
pub fn ball_eigenvalue(params: &ModelParams, radius: f64, index: usize, tol: f64) -> Result<f64> {
    let target = index as f64 * PI;
    let mut lo = -params.p() - 1.0;
    if prufer_angle(params, radius, lo, tol)? >= target {
        return Err(Error::Convergence("lower Prüfer bracket failed".into()));
    }
    let mut hi = 1.0 / (radius * radius);
    let mut grow = 0;
    while prufer_angle(params, radius, hi, tol)? < target {
        lo = hi;
        hi *= 4.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::Convergence("upper Prüfer bracket failed".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if prufer_angle(params, radius, mid, tol)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Eigenfunction with `ψ(0) = 1`, by shooting from both ends and matching at
/// `min(R/2, 5)`.
pub fn ball_eigenfunction(params: &ModelParams, radius: f64, mu: f64, tol: f64) -> Result<RadialTable> {
    let n = params.dim();
    let r_match = (radius / 2.0).min(5.0);
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -(n - 1.0) / r * y[1] - (potential(params, r) + mu) * y[0];
    };
    let r0 = 1e-4;
    let v0 = potential(params, 0.0) + mu;
    let mut left_grid: Vec<f64> = geometric_grid(r0, r_match, 1.02);
    left_grid.remove(0);
    let solver = Dopri45::with_tol(tol, tol * 1e-3);
    let left = solver.solve_at(rhs, r0, &[1.0 - v0 * r0 * r0 / (2.0 * n), -v0 * r0 / n], &left_grid)?;
    let steps = ((radius - r_match) / 0.05).ceil().max(4.0) as usize;
    let right_grid: Vec<f64> = (0..=steps)
        .map(|i| radius - (radius - r_match) * i as f64 / steps as f64)
        .collect();
    let right = solver.solve_at(rhs, radius, &[0.0, -1.0], &right_grid)?;
    let psi_l = left.last().unwrap()[0];
    let psi_r = right.last().unwrap()[0];
    if psi_r == 0.0 {
        return Err(Error::Convergence("matching point is a node".into()));
    }
    let scale = psi_l / psi_r;
    let mut grid = alloc::vec![0.0];
    let mut values = alloc::vec![1.0];
    let mut derivs = alloc::vec![0.0];
    for (r, s) in left_grid.iter().zip(&left) {
        grid.push(*r);
        values.push(s[0]);
        derivs.push(s[1]);
    }
    for (r, s) in right_grid.iter().zip(&right).rev().skip(1) {
        grid.push(*r);
        values.push(s[0] * scale);
        derivs.push(s[1] * scale);
    }
    let dl = left.last().unwrap()[1];
    let dr = right.last().unwrap()[1] * scale;
    let table = RadialTable::new(grid, values, derivs)?;
    Ok(table.with_meta("derivative_jump", (dl - dr).abs() / (1.0 + dl.abs())))
}

/// First `count` Dirichlet eigenpairs of `-H_y` on the ball of radius `R`.
pub fn ball_eigen(params: &ModelParams, radius: f64, count: usize, tol: f64) -> Result<Vec<EigenResult>> {
    if !(radius > 1.0) || count == 0 || count > 6 {
        return Err(domain("ball problem needs R > 1 and 1 <= count <= 6"));
    }
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let mu = ball_eigenvalue(params, radius, i, tol)?;
        let table = ball_eigenfunction(params, radius, mu, tol)?;
        let result = EigenResult {
            index: i,
            eigenvalue: mu,
            eigenfunction: table,
            normalization: Normalization::UnitAtOrigin,
        };
        if result.sign_changes() != i - 1 {
            return Err(Error::Convergence(alloc::format!(
                "eigenfunction {i} has {} sign changes",
                result.sign_changes()
            )));
        }
        if let Some(prev) = out.last().map(|r: &EigenResult| r.eigenvalue) {
            if !(mu > prev) {
                return Err(Error::Convergence("Prüfer bracketing did not separate eigenvalues".into()));
            }
        }
        out.push(result);
    }
    Ok(out)
}

/// Smallest `count` eigenvalues of the Liouville-transformed problem
/// `-v'' + ((n-1)(n-3)/(4r²) - V) v = μ v`, `v = r^{(n-1)/2} ψ`, discretized by
/// second-order differences on `N` interior nodes of `(0, R)`.
pub fn ball_eigenvalues_fd(params: &ModelParams, radius: f64, count: usize, intervals: usize) -> Vec<f64> {
    let n = params.dim();
    let h = radius / intervals as f64;
    let m = intervals - 1;
    let inv = 1.0 / (h * h);
    let diag: Vec<f64> = (1..=m)
        .map(|i| {
            let r = i as f64 * h;
            2.0 * inv + (n - 1.0) * (n - 3.0) / (4.0 * r * r) - potential(params, r)
        })
        .collect();
    let off2 = inv * inv;
    // eigenvalues below x
    let count_below = |x: f64| {
        let mut neg = 0;
        let mut d = 1.0;
        for (i, &a) in diag.iter().enumerate() {
            d = if i == 0 { a - x } else { a - x - off2 / d };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                neg += 1;
            }
        }
        neg
    };
    let lower = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b)) - 2.0 * inv;
    let upper = diag.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) + 2.0 * inv;
    (1..=count)
        .map(|k| {
            let (mut lo, mut hi) = (lower, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(mid) >= k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Richardson extrapolation of [`ball_eigenvalues_fd`] over `levels` grids
/// with spacing `h0, h0/2, …`.
pub fn ball_eigenvalues_fd_extrapolated(
    params: &ModelParams,
    radius: f64,
    count: usize,
    h0: f64,
    levels: usize,
) -> Vec<f64> {
    let base = (radius / h0).ceil() as usize;
    let rows: Vec<Vec<f64>> = (0..levels)
        .map(|k| ball_eigenvalues_fd(params, radius, count, base << k))
        .collect();
    (0..count)
        .map(|i| {
            let mut t: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            for k in 1..levels {
                let f = 4f64.powi(k as i32);
                for j in (k..levels).rev() {
                    t[j] += (t[j] - t[j - 1]) / (f - 1.0);
                }
            }
            t[levels - 1]
        })
        .collect()
}

/// Closed-form eigenfunction `e_j = N |z|^γ L_j^{(α)}(|z|²/4)`, `α = γ + n/2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarMode {
    pub j: usize,
    pub gamma: f64,
    pub alpha: f64,
    pub dim: f64,
    pub norm: f64,
    pub eigenvalue: f64,
}

impl SelfSimilarMode {
    pub fn new(params: &ModelParams, j: usize) -> Self {
        let gamma = singular_state_constants(params).gamma;
        let n = params.dim();
        let alpha = gamma + n / 2.0 - 1.0;
        let omega = 2.0 * PI.powf(n / 2.0) / libm::tgamma(n / 2.0);
        let log_norm2 = omega.ln()
            + (2.0 * gamma + n - 1.0) * 2f64.ln()
            + libm::lgamma(j as f64 + alpha + 1.0)
            - libm::lgamma(j as f64 + 1.0);
        SelfSimilarMode {
            j,
            gamma,
            alpha,
            dim: n,
            norm: (-0.5 * log_norm2).exp(),
            eigenvalue: gamma / 2.0 + j as f64,
        }
    }

    /// `(L_j^{(α)}(s), d/ds L_j^{(α)}(s))`; the derivative is `-L_{j-1}^{(α+1)}`.
    pub fn laguerre(&self, s: f64) -> (f64, f64) {
        let value = laguerre(self.j, self.alpha, s);
        let deriv = if self.j == 0 { 0.0 } else { -laguerre(self.j - 1, self.alpha + 1.0, s) };
        (value, deriv)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let z = z.abs();
        self.norm * z.powf(self.gamma) * self.laguerre(z * z / 4.0).0
    }

    pub fn eval_deriv(&self, z: f64) -> f64 {
        let z = z.abs();
        if z == 0.0 {
            return 0.0;
        }
        let (l, dl) = self.laguerre(z * z / 4.0);
        self.norm * (self.gamma * z.powf(self.gamma - 1.0) * l + z.powf(self.gamma) * dl * z / 2.0)
    }

    /// Small-`z` coefficient `D_j = N Γ(j+α+1)/(j! Γ(α+1))`.
    pub fn d_coefficient(&self) -> f64 {
        let j = self.j as f64;
        self.norm * (libm::lgamma(j + self.alpha + 1.0) - libm::lgamma(j + 1.0) - libm::lgamma(self.alpha + 1.0)).exp()
    }

    /// Large-`z` coefficient `E_j = N (-1)^j / (j! 4^j)`.
    pub fn e_coefficient(&self) -> f64 {
        let j = self.j as f64;
        let sign = if self.j.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * self.norm * (-libm::lgamma(j + 1.0) - j * 4f64.ln()).exp()
    }

    /// `A e + μ e` at `z`, with `A = Δ - z/2·∇ - c|z|^{-2}`, from the closed form.
    pub fn operator_residual(&self, params: &ModelParams, z: f64) -> f64 {
        let h = 2e-3 * z;
        let e = |x: f64| self.eval(x);
        let d2 = (-e(z + 2.0 * h) + 16.0 * e(z + h) - 30.0 * e(z) + 16.0 * e(z - h) - e(z - 2.0 * h))
            / (12.0 * h * h);
        let d1 = self.eval_deriv(z);
        let c = inverse_square_strength(params);
        d2 + (self.dim - 1.0) / z * d1 - z / 2.0 * d1 - c / (z * z) * e(z) + self.eigenvalue * e(z)
    }
}

/// Generalized Laguerre polynomial by the three-term recurrence.
pub fn laguerre(k: usize, alpha: f64, s: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut l0, mut l1) = (1.0, 1.0 + alpha - s);
    for i in 1..k {
        let fi = i as f64;
        let l2 = ((2.0 * fi + 1.0 + alpha - s) * l1 - (fi + alpha) * l0) / (fi + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Weighted inner product `(f, g)_ρ` of radial functions on `ℝⁿ`.
pub fn weighted_inner(dim: f64, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, z_max: f64) -> f64 {
    let omega = 2.0 * PI.powf(dim / 2.0) / libm::tgamma(dim / 2.0);
    let mut breaks = alloc::vec![0.0];
    let mut z = 0.25;
    while z < z_max {
        breaks.push(z);
        z += 0.25;
    }
    breaks.push(z_max);
    omega * integrate_breaks(|z| f(z) * g(z) * (-z * z / 4.0).exp() * z.powf(dim - 1.0), &breaks, 10)
}

/// Eigenvalue of the weighted problem by shooting in the Kummer variable.
///
/// With `e = z^γ w(s)`, `s = z²/4`, the problem becomes
/// `s w'' + (b - s) w' - a w = 0`, `b = γ + n/2`, `a = γ/2 - μ`. The regular
/// solution grows like `e^s / Γ(a)` unless `a` is a nonpositive integer, so the
/// eigenvalues are the sign changes of `w(s_max; μ)`.
pub fn selfsimilar_eigenvalue_shooting(params: &ModelParams, j: usize, s_max: f64) -> Result<f64> {
    let gamma = singular_state_constants(params).gamma;
    let b = gamma + params.dim() / 2.0;
    let shoot = |mu: f64| -> Result<f64> {
        let a = gamma / 2.0 - mu;
        let s0 = 1e-3;
        // three terms of the Kummer series M(a, b, s)
        let t1 = a / b;
        let t2 = a * (a + 1.0) / (b * (b + 1.0) * 2.0);
        let w0 = 1.0 + t1 * s0 + t2 * s0 * s0;
        let dw0 = t1 + 2.0 * t2 * s0;
        let solver = Dopri45::with_tol(1e-12, 1e-300);
        let out = solver.solve_at(
            |s, y, dy| {
                dy[0] = y[1];
                dy[1] = (a * y[0] - (b - s) * y[1]) / s;
            },
            s0,
            &[w0, dw0],
            &[s_max],
        )?;
        Ok(out[0][0])
    };
    // scan upward from 0 for the (j+1)-th sign change
    let step = 0.1;
    let mut mu = 0.0;
    let mut f_prev = shoot(mu)?;
    let mut found = 0;
    loop {
        let next = mu + step;
        let f_next = shoot(next)?;
        if (f_next > 0.0) != (f_prev > 0.0) {
            if found == j {
                let (mut lo, mut hi, mut flo) = (mu, next, f_prev);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let fm = shoot(mid)?;
                    if (fm > 0.0) == (flo > 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
            found += 1;
        }
        mu = next;
        f_prev = f_next;
        if mu > gamma / 2.0 + j as f64 + 10.0 {
            return Err(Error::Convergence("no sign change found while shooting".into()));
        }
    }
}

/// Eigenpair `(μ_j, e_j)` of the self-similar problem, `‖e_j‖_ρ = 1`,
/// tabulated on `[0, 40]`.
pub fn selfsimilar_eigen(params: &ModelParams, j: usize) -> Result<EigenResult> {
    let mode = SelfSimilarMode::new(params, j);
    let grid = geometric_grid(1e-3, 40.0, 1.01);
    let table = RadialTable::from_fn(grid, |z| (mode.eval(z), mode.eval_deriv(z)))?
        .with_meta("gamma", mode.gamma)
        .with_meta("alpha", mode.alpha)
        .with_meta("norm", mode.norm);
    Ok(EigenResult { index: j, eigenvalue: mode.eigenvalue, eigenfunction: table, normalization: Normalization::UnitWeighted })
}

/// Fits `D_j` on the small-`z` window and `E_j` on the large-`z` window of
/// the tabulated eigenfunction.
pub fn extract_dj_ej(eig: &EigenResult) -> Result<(f64, f64)> {
    let gamma = *eig
        .eigenfunction
        .meta
        .get("gamma")
        .ok_or_else(|| Error::Fit("eigenfunction table lacks gamma".into()))?;
    let j = eig.index as f64;
    let t = &eig.eigenfunction;
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for (&z, &v) in t.grid().iter().zip(t.values()) {
        if z > 0.0 && z <= 0.05 {
            rows.push(alloc::vec![1.0, z * z, z.powi(4)]);
            rhs.push(v / z.powf(gamma));
        }
    }
    let (c, rms) = least_squares(&rows, &rhs)?;
    if rms > 1e-10 * (1.0 + c[0].abs()) {
        return Err(Error::Fit(alloc::format!("small-z window residual {rms}")));
    }
    let dj = c[0];
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for (&z, &v) in t.grid().iter().zip(t.values()) {
        if z >= 20.0 {
            let mut row = alloc::vec![1.0];
            for k in 1..=eig.index {
                row.push(z.powi(-2 * k as i32));
            }
            rows.push(row);
            rhs.push(v / z.powf(gamma + 2.0 * j));
        }
    }
    let ej = least_squares(&rows, &rhs)?.0[0];
    Ok((dj, ej))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> ModelParams {
        ModelParams::five(0.5, 1, 1.0).unwrap()
    }

    #[test]
    fn laguerre_matches_explicit_polynomials() {
        let p = params();
        let a = SelfSimilarMode::new(&p, 0).alpha;
        for &s in &[0.0, 0.7, 3.0, 11.0] {
            let l2 = SelfSimilarMode::new(&p, 2).laguerre(s);
            let exact = ((a + 1.0) * (a + 2.0) - 2.0 * (a + 2.0) * s + s * s) / 2.0;
            assert_relative_eq!(l2.0, exact, max_relative = 1e-12, epsilon = 1e-12);
            assert_relative_eq!(l2.1, (-2.0 * (a + 2.0) + 2.0 * s) / 2.0, max_relative = 1e-12, epsilon = 1e-12);
            let l1 = SelfSimilarMode::new(&p, 1).laguerre(s);
            assert_relative_eq!(l1.0, 1.0 + a - s, max_relative = 1e-12, epsilon = 1e-12);
            assert_eq!(l1.1, -1.0);
        }
        // L_3 derivative against a centered difference
        let m = SelfSimilarMode::new(&p, 3);
        let h = 1e-5;
        let fd = (m.laguerre(2.0 + h).0 - m.laguerre(2.0 - h).0) / (2.0 * h);
        assert_relative_eq!(m.laguerre(2.0).1, fd, max_relative = 1e-7);
    }

    #[test]
    fn first_eigenvalue_and_coefficients() {
        let p = params();
        let e0 = selfsimilar_eigen(&p, 0).unwrap();
        assert_relative_eq!(e0.eigenvalue, 1.265564437074637, max_relative = 1e-12);
        let (d0, e0c) = extract_dj_ej(&e0).unwrap();
        assert_relative_eq!(d0, e0c, max_relative = 1e-9);
        let m = SelfSimilarMode::new(&p, 0);
        assert_relative_eq!(d0, m.d_coefficient(), max_relative = 1e-9);
    }

    #[test]
    fn counting_sign_changes() {
        assert_eq!(count_sign_changes(&[1.0, 0.0, -1.0, -2.0, 3.0]), 2);
    }
}
