//! Matched-asymptotics exponents, prefactors and time-dependent scales.
//!
//! Every scale is a pure power of `s = T - t`, stored as a [`TimePower`] so
//! that exponent identities can be checked exactly and values are only
//! formed at the very end.

use num_traits::Float;

use crate::error::{domain, Result};
use crate::model::ModelParams;
use crate::profiles::ProfileConstants;

/// `prefactor · (T - t)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePower {
    pub prefactor: f64,
    pub exponent: f64,
}

impl TimePower {
    pub fn new(prefactor: f64, exponent: f64) -> Self {
        TimePower { prefactor, exponent }
    }

    pub fn at(&self, s: f64) -> f64 {
        self.prefactor * s.powf(self.exponent)
    }

    /// `d/dt` of `P s^k` with `s = T - t`.
    pub fn time_derivative(&self) -> TimePower {
        TimePower::new(-self.exponent * self.prefactor, self.exponent - 1.0)
    }

    pub fn mul(&self, other: &TimePower) -> TimePower {
        TimePower::new(self.prefactor * other.prefactor, self.exponent + other.exponent)
    }

    /// Real power; the prefactor must be positive unless `k` is an integer.
    pub fn powf(&self, k: f64) -> TimePower {
        TimePower::new(self.prefactor.powf(k), self.exponent * k)
    }

    pub fn abs(&self) -> TimePower {
        TimePower::new(self.prefactor.abs(), self.exponent)
    }

    pub fn scale(&self, c: f64) -> TimePower {
        TimePower::new(self.prefactor * c, self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingCase {
    I,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingReport {
    pub case: MatchingCase,
    /// `γ_J = J / (β₀ - γ)` (case II only).
    pub gamma_j: Option<f64>,
    /// `Γ_J = (Jβ₀ + β₀ - γ) / (β₀ - γ)` (case II only).
    pub big_gamma_j: Option<f64>,
    pub lambda_prefactor: f64,
    pub lambda_exponent: f64,
    pub eta_exponent: Option<f64>,
    /// `K = -B1 / D_J` (case II only).
    pub k: Option<f64>,
    /// Exponent `e` in `‖u(t)‖_∞ ~ (T-t)^{-e}`, i.e. `(n-2)/2` times the `λ` exponent.
    pub blowup_rate_exponent: f64,
    pub dim: u32,
    pub beta0: f64,
}

impl MatchingReport {
    pub fn lambda(&self) -> TimePower {
        TimePower::new(self.lambda_prefactor, self.lambda_exponent)
    }
}

/// Case (I): the inner bubble glued to the exact extinction profile
/// `((1-q)(T-t))^{1/(1-q)}`.
pub fn match_case_i(params: &ModelParams, a1: f64) -> Result<MatchingReport> {
    params.require_matchable()?;
    if !(a1 > 0.0) {
        return Err(domain("A1 must be positive"));
    }
    let n = params.dim();
    let q = params.q();
    let ratio = (2.0 - q) / (1.0 - q);
    let k = 2.0 / (6.0 - n);
    let prefactor = ((6.0 - n) / (2.0 * (2.0 - q) * a1)).powf(k) * (1.0 - q).powf(ratio * k);
    let exponent = ratio * k;
    Ok(MatchingReport {
        case: MatchingCase::I,
        gamma_j: None,
        big_gamma_j: None,
        lambda_prefactor: prefactor,
        lambda_exponent: exponent,
        eta_exponent: None,
        k: None,
        blowup_rate_exponent: (n - 2.0) / 2.0 * exponent,
        dim: params.n(),
        beta0: params.beta0(),
    })
}

/// Case (II): the inner bubble glued to `-U_∞ - Θ_J` through the
/// semi-inner profile `η^{β₀} U(x/η)`.
pub fn match_case_ii(params: &ModelParams, constants: &ProfileConstants, dj: f64) -> Result<MatchingReport> {
    params.require_matchable()?;
    let j = params.j();
    if j == 0 {
        return Err(domain("case II matching needs J >= 1"));
    }
    if dj == 0.0 {
        return Err(domain("D_J must be nonzero"));
    }
    if !(constants.a1 > 0.0) {
        return Err(domain("A1 must be positive"));
    }
    let n = params.dim();
    let beta0 = params.beta0();
    let gap = beta0 - constants.gamma;
    if !(gap > 0.0) {
        return Err(domain("2/(1-q) - gamma must be positive"));
    }
    let jf = j as f64;
    let gamma_j = jf / gap;
    let big_gamma = (jf * beta0 + gap) / gap;
    let exponent = 2.0 * big_gamma / (6.0 - n);
    let prefactor = ((6.0 - n) / (2.0 * constants.a1 * big_gamma)).powf(2.0 / (6.0 - n));
    Ok(MatchingReport {
        case: MatchingCase::II,
        gamma_j: Some(gamma_j),
        big_gamma_j: Some(big_gamma),
        lambda_prefactor: prefactor,
        lambda_exponent: exponent,
        eta_exponent: Some(gamma_j),
        k: Some(-constants.b1 / dj),
        blowup_rate_exponent: (n - 2.0) / (6.0 - n) * big_gamma,
        dim: params.n(),
        beta0,
    })
}

/// Closed-form scales `λ, η, σ, l1, l2` of the case (II) construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSet {
    pub lambda: TimePower,
    pub eta: TimePower,
    pub sigma: TimePower,
    pub l1: TimePower,
    pub l2: TimePower,
    pub t_blow: f64,
}

impl ScaleSet {
    /// `s = T - t`, rejecting `t >= T`.
    pub fn remaining(&self, t: f64) -> Result<f64> {
        let s = self.t_blow - t;
        if !(s > 0.0) {
            return Err(domain(alloc::format!("time {t} is not before the blowup time {}", self.t_blow)));
        }
        Ok(s)
    }

    pub fn values_at(&self, t: f64) -> Result<ScaleValues> {
        let s = self.remaining(t)?;
        Ok(ScaleValues {
            lambda: self.lambda.at(s),
            eta: self.eta.at(s),
            sigma: self.sigma.at(s),
            l1: self.l1.at(s),
            l2: self.l2.at(s),
            s,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleValues {
    pub lambda: f64,
    pub eta: f64,
    pub sigma: f64,
    pub l1: f64,
    pub l2: f64,
    pub s: f64,
}

pub fn scale_set(params: &ModelParams, report: &MatchingReport, a1: f64, b: f64) -> Result<ScaleSet> {
    if report.case != MatchingCase::II {
        return Err(domain("scale set is defined for case II only"));
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(domain("cutoff exponent b must lie in (0, 1)"));
    }
    let n = params.dim();
    let lambda = report.lambda();
    let eta = TimePower::new(1.0, report.eta_exponent.unwrap_or(0.0));
    let sigma = eta
        .powf(params.beta0())
        .mul(&lambda.powf((n - 2.0) / 2.0))
        .scale(-1.0 / a1);
    let l1 = sigma.abs().powf(-1.0 / (n - 2.0));
    let l2 = TimePower::new(1.0, -b);
    Ok(ScaleSet { lambda, eta, sigma, l1, l2, t_blow: params.blowup_time() })
}

/// Exponents `(q1, q2)` with `λ^{-1} η (T-t)^{q1} = (T-t)^{-q2} l1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapExponents {
    pub q1: f64,
    pub q2: f64,
    /// `q1 + q2`, forced by the scales.
    pub total: f64,
    /// Whether the symmetric split lies in `(0, 1)²` (requires `total < 2`).
    pub in_unit_square: bool,
}

/// Splits the forced total `q1 + q2` symmetrically.
pub fn semiinner_overlap_exponents(params: &ModelParams, report: &MatchingReport) -> Result<OverlapExponents> {
    if report.case != MatchingCase::II || params.j() == 0 {
        return Err(domain("overlap exponents need a case II report with J >= 1"));
    }
    let n = params.dim();
    let eta = report.eta_exponent.unwrap_or(0.0);
    let sigma = params.beta0() * eta + (n - 2.0) / 2.0 * report.lambda_exponent;
    let l1 = -sigma / (n - 2.0);
    let total = report.lambda_exponent - eta + l1;
    if !(total > 0.0) {
        return Err(domain(alloc::format!("no positive overlap exponents (q1 + q2 = {total})")));
    }
    let half = total / 2.0;
    Ok(OverlapExponents { q1: half, q2: half, total, in_unit_square: half < 1.0 })
}
