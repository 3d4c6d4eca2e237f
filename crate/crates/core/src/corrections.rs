//! Corrections `θ₀ … θ_L` to the singular steady state in the self-similar
//! region, built exactly in the monomial algebra.
//!
//! With `u = -(U_∞ + θ)` and `θ = θ₀ + … + θ_L`, each level solves
//! `(Δ - q L1^{q-1}|x|^{-2}) θ_k + S_k = 0` where `S_0 = f(U_∞)` and
//! `S_k` collects the Taylor terms generated by the previous levels.

use alloc::vec::Vec;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Float, ToPrimitive};

use crate::error::{domain, Error, Result};
use crate::fit::power_law_fit;
use crate::model::{binomial, ModelParams};
use crate::monomial::{Exponent, MonomialSum};
use crate::profiles::{beta0_exponent, inverse_square_strength, singular_state_constants};
use crate::spectra::SelfSimilarMode;

/// Relative size below which an inexact indicial denominator counts as zero.
const RESONANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionLadder {
    pub thetas: Vec<MonomialSum>,
    pub a_coeffs: Vec<f64>,
    /// `S_0 … S_{L+1}`; the last entry is the algebraic part of the residual.
    pub sources: Vec<MonomialSum>,
    pub taylor_order: usize,
    /// `-1` for the empty ladder `θ = 0`.
    pub depth: i32,
}

impl CorrectionLadder {
    /// The sentinel `θ = 0`, whose residual is `f(U_∞)`.
    pub fn empty(params: &ModelParams) -> Result<Self> {
        Ok(CorrectionLadder {
            thetas: Vec::new(),
            a_coeffs: Vec::new(),
            sources: alloc::vec![focusing_source(params)?],
            taylor_order: 0,
            depth: -1,
        })
    }

    pub fn theta(&self) -> Result<MonomialSum> {
        let mut out = MonomialSum::zero();
        for t in &self.thetas {
            out = out.add(t)?;
        }
        Ok(out)
    }

    /// Algebraic part `S_{L+1}` of the residual.
    pub fn residual_source(&self) -> &MonomialSum {
        self.sources.last().expect("ladder always stores S_0")
    }

    /// Largest coefficient-wise defect of the level equations, relative to
    /// the largest coefficient involved.
    pub fn exactness_defect(&self, params: &ModelParams) -> Result<f64> {
        let c = inverse_square_strength(params);
        let mut worst: f64 = 0.0;
        for (k, theta) in self.thetas.iter().enumerate() {
            let lap = theta.laplacian(params.n());
            let pot = theta.shift(c, Exponent::int(-2));
            let defect = lap.sub(&pot)?.add(&self.sources[k])?;
            let scale = lap.max_abs_coefficient().max(self.sources[k].max_abs_coefficient());
            if scale > 0.0 {
                worst = worst.max(defect.max_abs_coefficient() / scale);
            }
        }
        Ok(worst)
    }
}

fn q_exponent(params: &ModelParams) -> Exponent {
    match params.q_exact() {
        Some(q) => Exponent::Exact(q),
        None => Exponent::Real(params.q()),
    }
}

fn p_exponent(params: &ModelParams) -> Exponent {
    Exponent::Exact(params.p_exact())
}

/// `f(U_∞) = L1^p |x|^{β₀ p}`.
pub fn focusing_source(params: &ModelParams) -> Result<MonomialSum> {
    taylor_coefficient(params, p_exponent(params), 0)
}

/// `g^{(i)}(U_∞)/i!` for `g(u) = u^e`, as a monomial: `C(e,i) L1^{e-i} |x|^{β₀(e-i)}`.
fn taylor_coefficient(params: &ModelParams, e: Exponent, i: u32) -> Result<MonomialSum> {
    let l1 = singular_state_constants(params).l1;
    let ev = e.value();
    let c = binomial(ev, i) * l1.powf(ev - i as f64);
    let expo = beta0_exponent(params).mul(e.sub(Exponent::int(i as i64)));
    Ok(MonomialSum::monomial(c, expo))
}

/// `δ = β₀(p - q)`, the gain in exponent per ladder level.
pub fn level_gain(params: &ModelParams) -> Exponent {
    beta0_exponent(params).mul(p_exponent(params).sub(q_exponent(params)))
}

/// Leading exponent of `θ₀`: `2p/(1-q) + 2`.
pub fn theta0_exponent(params: &ModelParams) -> Exponent {
    beta0_exponent(params).mul(p_exponent(params)).add(Exponent::int(2))
}

/// Indicial denominator `α(α+n-2) - q L1^{q-1}`, exact when possible.
fn indicial_denominator(params: &ModelParams, alpha: Exponent) -> Result<f64> {
    let n = params.n() as i64;
    if let (Exponent::Exact(a), Some(q)) = (alpha, params.q_exact()) {
        let one = Rational64::from_integer(1);
        let exact = (|| {
            let b0 = Rational64::from_integer(2).checked_div(&(one - q))?;
            let nm2 = Rational64::from_integer(n - 2);
            let strength = q.checked_mul(&b0)?.checked_mul(&(b0.checked_add(&nm2)?))?;
            a.checked_mul(&(a.checked_add(&nm2)?))?.checked_sub(&strength)
        })();
        if let Some(d) = exact {
            if d == Rational64::from_integer(0) {
                return Err(Error::Resonance { exponent: alpha.value() });
            }
            return Ok(d.to_f64().unwrap_or(f64::NAN));
        }
    }
    let a = alpha.value();
    let c = inverse_square_strength(params);
    let d = a * (a + n as f64 - 2.0) - c;
    if d.abs() <= RESONANCE_TOL * (c + a * a).max(1.0) {
        return Err(Error::Resonance { exponent: a });
    }
    Ok(d)
}

/// Solves `(Δ - q L1^{q-1}|x|^{-2}) θ = -rhs` term by term.
pub fn indicial_solve(params: &ModelParams, rhs: &MonomialSum) -> Result<MonomialSum> {
    let mut out = MonomialSum::zero().with_cap(rhs.cap());
    for &(e, c) in rhs.terms() {
        let alpha = e.add(Exponent::int(2));
        let d = indicial_denominator(params, alpha)?;
        out = out.add(&MonomialSum::monomial(-c / d, alpha))?;
    }
    Ok(out)
}

/// `a₀` from `-a₀^{-1} = L1^{1-q} β(β+n-2) - q`, `β = 2p/(1-q) + 2`.
pub fn a0_closed_form(params: &ModelParams) -> f64 {
    let n = params.dim();
    let b0 = params.beta0();
    let beta = b0 * params.p() + 2.0;
    -1.0 / (beta * (beta + n - 2.0) / (b0 * (b0 + n - 2.0)) - params.q())
}

/// Taylor polynomials `P_f(x) = Σ_{i=1}^N F_i x^i` and `P_g(x) = Σ_{i=2}^N G_i x^i`
/// evaluated at a monomial sum, returned as `P_f - P_g`.
fn taylor_source(params: &ModelParams, theta: &MonomialSum, order: usize) -> Result<MonomialSum> {
    let p = p_exponent(params);
    let q = q_exponent(params);
    let mut out = MonomialSum::zero();
    let mut power = MonomialSum::monomial(1.0, Exponent::int(0));
    for i in 1..=order as u32 {
        power = power.mul(theta)?;
        if power.is_empty() {
            break;
        }
        let fi = taylor_coefficient(params, p, i)?;
        out = out.add(&power.mul(&fi)?)?;
        if i >= 2 {
            let gi = taylor_coefficient(params, q, i)?;
            out = out.sub(&power.mul(&gi)?)?;
        }
    }
    Ok(out)
}

/// Builds `θ₀ … θ_L` with Taylor order `N`.
pub fn build_ladder(params: &ModelParams, depth: usize, taylor_order: usize) -> Result<CorrectionLadder> {
    if depth < 1 {
        return Err(domain("ladder depth must be at least 1"));
    }
    if taylor_order < depth + 2 {
        return Err(domain("Taylor order must satisfy N ≥ L + 2"));
    }
    let s0 = focusing_source(params)?;
    let theta0 = indicial_solve(params, &s0)?;
    let l1 = singular_state_constants(params).l1;
    let base = l1.powf(params.p() + 1.0 - params.q());
    let (_, c0) = theta0.leading().ok_or_else(|| Error::Convergence("θ₀ vanished".into()))?;
    let a0 = c0 / base;

    let mut thetas = alloc::vec![theta0.clone()];
    let mut a_coeffs = alloc::vec![a0];
    let mut sources = alloc::vec![s0];
    // partial sums Θ_{k-1}, Θ_{k-2} and their Taylor images
    let mut partial = theta0;
    let mut image_prev = MonomialSum::zero();
    let gain = level_gain(params);
    let lead0 = theta0_exponent(params);
    for k in 1..=depth + 1 {
        let image = taylor_source(params, &partial, taylor_order)?;
        let s_k = image.sub(&image_prev)?;
        sources.push(s_k.clone());
        if k > depth {
            break;
        }
        let theta_k = indicial_solve(params, &s_k)?;
        let expected = lead0.add(gain.scale(k as i64));
        let (e, c) = theta_k
            .leading()
            .ok_or_else(|| Error::Convergence(alloc::format!("θ_{k} vanished")))?;
        if !e.same(&expected) {
            return Err(Error::Convergence(alloc::format!(
                "θ_{k} leads with exponent {e}, expected {expected}"
            )));
        }
        a_coeffs.push(c / (a0 * base));
        partial = partial.add(&theta_k)?;
        thetas.push(theta_k);
        image_prev = image;
    }
    Ok(CorrectionLadder { thetas, a_coeffs, sources, taylor_order, depth: depth as i32 })
}

/// Leading exponent of the residual of a depth-`L` ladder, `β₀p + (L+1)δ`.
pub fn residual_exponent(params: &ModelParams, depth: i32) -> Exponent {
    let base = beta0_exponent(params).mul(p_exponent(params));
    base.add(level_gain(params).scale(depth as i64 + 1))
}

/// Smallest `L ≥ 1` whose residual exponent exceeds `γ + 2J`.
pub fn min_depth_for_j(params: &ModelParams, j: u32) -> usize {
    let target = singular_state_constants(params).gamma + 2.0 * j as f64;
    let mut depth = 1;
    while residual_exponent(params, depth as i32).value() <= target {
        depth += 1;
    }
    depth
}

/// `(1+ρ)^e - Σ_{i=0}^N C(e,i) ρ^i`, summed directly from the series when
/// `ρ` is small so that no cancellation occurs.
pub fn binomial_tail(e: f64, rho: f64, order: usize) -> f64 {
    if rho.abs() < 0.5 {
        let mut term = binomial(e, order as u32) * rho.powi(order as i32);
        let mut sum = 0.0;
        for i in order..order + 400 {
            term *= (e - i as f64) / (i as f64 + 1.0) * rho;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let partial: f64 = (0..=order as u32).map(|i| binomial(e, i) * rho.powi(i as i32)).sum();
        (1.0 + rho).powf(e) - partial
    }
}

/// `Δ(U_∞+θ) + f(U_∞+θ) - f₂(U_∞+θ)` at radius `r > 0`.
pub fn pointwise_residual(params: &ModelParams, ladder: &CorrectionLadder, theta: &MonomialSum, r: f64) -> f64 {
    let alg = ladder.residual_source().eval(r);
    if ladder.thetas.is_empty() {
        return alg;
    }
    let u_inf = singular_state_constants(params).l1 * r.powf(params.beta0());
    let rho = theta.eval(r) / u_inf;
    let n = ladder.taylor_order;
    alg + u_inf.powf(params.p()) * binomial_tail(params.p(), rho, n)
        - u_inf.powf(params.q()) * binomial_tail(params.q(), rho, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub sup_ratio: f64,
    pub fitted_exponent: f64,
}

/// Residual against `Θ_J = (T-t)^{γ/2+J} e_J(z)` on the annulus
/// `z_lo ≤ |z| ≤ z_hi` (self-similar units), plus the log-log slope of `|E|`
/// in `|x|` across the same annulus.
pub fn nonlinear_residual(
    params: &ModelParams,
    ladder: &CorrectionLadder,
    t: f64,
    annulus: (f64, f64),
) -> Result<ResidualReport> {
    let tau = params.blowup_time() - t;
    if !(tau > 0.0) {
        return Err(domain("time must precede the blowup time"));
    }
    let (z_lo, z_hi) = annulus;
    if !(z_lo > 0.0 && z_hi > z_lo) {
        return Err(domain("annulus must satisfy 0 < z_lo < z_hi"));
    }
    let mode = SelfSimilarMode::new(params, params.j() as usize);
    let theta = ladder.theta()?;
    let gamma = singular_state_constants(params).gamma;
    let amp = tau.powf(0.5 * gamma + params.j() as f64);
    let samples = 65;
    let mut rs = Vec::with_capacity(samples);
    let mut es = Vec::with_capacity(samples);
    let mut sup: f64 = 0.0;
    for i in 0..samples {
        let z = z_lo * (z_hi / z_lo).powf(i as f64 / (samples - 1) as f64);
        let r = z * tau.sqrt();
        let e = pointwise_residual(params, ladder, &theta, r);
        sup = sup.max(e.abs() / (amp * mode.eval(z)).abs());
        rs.push(r);
        es.push(e);
    }
    let fit = power_law_fit(&rs, &es)?;
    Ok(ResidualReport { sup_ratio: sup, fitted_exponent: fit.slope })
}
