//! The glued approximate solution
//!
//! ```text
//! u = λ^{-a} Q χ₂ + λ^{-a} σ T1 χ₁ - U_c (1-χ₁) - (θ + Θ_J)(1-χ₂) χ₃,
//! U_c = η^{β₀} U(ξ) χ₂ + U_∞ (1-χ₂) χ₄ + M(t)(1-χ₄),
//! ```
//!
//! with `a = (n-2)/2`, its PDE residual, matching diagnostics and the weight
//! envelopes used to measure remainders.

use alloc::vec::Vec;

use num_traits::Float;

use crate::corrections::{binomial_tail, CorrectionLadder};
use crate::error::{domain, Error, Result};
use crate::matching::{scale_set, MatchingReport, ScaleSet, TimePower};
use crate::model::ModelParams;
use crate::monomial::MonomialSum;
use crate::profiles::{
    absorption_profile_u, extend_t1, extend_u, flat_solution_m, inverse_square_strength, singular_state_constants,
    talenti_q_derivs, ExtendedProfile, ProfileConstants,
};
use crate::spectra::SelfSimilarMode;
use crate::table::RadialTable;

/// Quintic smoothstep cut-off: 1 on `[0,1]`, 0 on `[2,∞)`, `C²` in between.
/// Returns `(χ, χ', χ'')`.
pub fn smooth_cutoff(r: f64) -> (f64, f64, f64) {
    if r <= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    if r >= 2.0 {
        return (0.0, 0.0, 0.0);
    }
    let x = r - 1.0;
    let s = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    let ds = 30.0 * x * x * (1.0 - x) * (1.0 - x);
    let dds = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    (1.0 - s, -ds, -dds)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFamily {
    pub r_in: f64,
    pub r_mid: f64,
    pub r0: f64,
    pub r3: f64,
}

impl CutoffFamily {
    /// `R_in = R_mid = -log T`.
    pub fn new(params: &ModelParams, r0: f64, r3: f64) -> Result<Self> {
        if !(r0 > 0.0 && r3 > 0.0) {
            return Err(domain("cut-off radii must be positive"));
        }
        let r_in = -params.blowup_time().ln();
        Ok(CutoffFamily { r_in, r_mid: r_in, r0, r3 })
    }

    /// `log R_in`; only meaningful for `T < 1/e`.
    pub fn r1(&self) -> f64 {
        self.r_in.ln()
    }

    pub fn sq(&self) -> f64 {
        self.r_mid.sqrt()
    }
}

/// A radial function of `(r, t)` together with `∂_r`, `Δ` and `∂_t`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Jet {
    v: f64,
    r: f64,
    lap: f64,
    t: f64,
}

impl Jet {
    fn constant(v: f64) -> Jet {
        Jet { v, ..Jet::default() }
    }

    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, r: self.r + o.r, lap: self.lap + o.lap, t: self.t + o.t }
    }

    fn neg(self) -> Jet {
        Jet { v: -self.v, r: -self.r, lap: -self.lap, t: -self.t }
    }

    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            r: self.r * o.v + self.v * o.r,
            lap: self.lap * o.v + self.v * o.lap + 2.0 * self.r * o.r,
            t: self.t * o.v + self.v * o.t,
        }
    }

    fn one_minus(self) -> Jet {
        Jet::constant(1.0).add(self.neg())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    Inner,
    Semiinner,
    Selfsimilar,
    Outer,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Inner => "inner",
            Region::Semiinner => "semiinner",
            Region::Selfsimilar => "selfsimilar",
            Region::Outer => "outer",
        }
    }
}

/// Profiles that enter the ansatz.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzProfiles {
    pub constants: ProfileConstants,
    pub u: ExtendedProfile,
    pub t1: ExtendedProfile,
}

impl AnsatzProfiles {
    pub fn compute(params: &ModelParams, r_max: f64, tol: f64) -> Result<Self> {
        let s = singular_state_constants(params);
        let u_table = absorption_profile_u(params, r_max, tol)?;
        let t1_table = crate::profiles::inner_correction_t1(params, r_max, tol)?;
        let constants = ProfileConstants {
            l1: s.l1,
            beta0: s.beta0,
            gamma: s.gamma,
            a1: t1_table.meta["A1"],
            b1: u_table.meta["B1"],
            k1: u_table.meta["k1"],
            m0: s.l1,
        };
        Ok(AnsatzProfiles { constants, u: extend_u(params, u_table)?, t1: extend_t1(t1_table)? })
    }
}

/// Which correction terms are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzTerms {
    pub ladder: bool,
    pub theta_j: bool,
}

impl Default for AnsatzTerms {
    fn default() -> Self {
        AnsatzTerms { ladder: true, theta_j: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzField {
    params: ModelParams,
    pub profiles: AnsatzProfiles,
    pub report: MatchingReport,
    pub scales: ScaleSet,
    pub cutoffs: CutoffFamily,
    theta: MonomialSum,
    theta_lap: MonomialSum,
    mode: SelfSimilarMode,
    /// `B1 / D_J`.
    theta_j_amplitude: f64,
    m_table: RadialTable,
    extinction: f64,
    pub b: f64,
}

/// Builds the field; the cut-off radii default to `r₀ = 0.1`, `r₃ = 0.5`.
pub fn build_ansatz(
    params: &ModelParams,
    profiles: AnsatzProfiles,
    report: &MatchingReport,
    ladder: &CorrectionLadder,
    dj: f64,
    b: f64,
) -> Result<AnsatzField> {
    build_ansatz_with(params, profiles, report, ladder, dj, b, CutoffFamily::new(params, 0.1, 0.5)?, AnsatzTerms::default())
}

#[allow(clippy::too_many_arguments)]
pub fn build_ansatz_with(
    params: &ModelParams,
    profiles: AnsatzProfiles,
    report: &MatchingReport,
    ladder: &CorrectionLadder,
    dj: f64,
    b: f64,
    cutoffs: CutoffFamily,
    terms: AnsatzTerms,
) -> Result<AnsatzField> {
    if dj == 0.0 {
        return Err(domain("D_J must be nonzero"));
    }
    let scales = scale_set(params, report, profiles.constants.a1, b)?;
    let theta = if terms.ladder { ladder.theta()? } else { MonomialSum::zero() };
    let theta_lap = theta.laplacian(params.n());
    let mode = SelfSimilarMode::new(params, params.j() as usize);
    let amp = if terms.theta_j { profiles.constants.b1 / dj } else { 0.0 };
    let t_end = params.blowup_time();
    let count = 4001;
    let grid: Vec<f64> = (0..count).map(|i| t_end * i as f64 / (count - 1) as f64).collect();
    let m_table = flat_solution_m(params, profiles.constants.m0, &grid, 1e12)?;
    let extinction = m_table.meta.get("extinction_time").copied().unwrap_or(f64::INFINITY);
    Ok(AnsatzField {
        params: *params,
        profiles,
        report: *report,
        scales,
        cutoffs,
        theta,
        theta_lap,
        mode,
        theta_j_amplitude: amp,
        m_table,
        extinction,
        b,
    })
}

struct Scales {
    s: f64,
    lambda: f64,
    lambda_dot: f64,
    sigma: f64,
    sigma_dot: f64,
    /// `σ - λλ̇`, formed from the closed forms before evaluation.
    sigma_defect: f64,
    eta: f64,
    eta_dot: f64,
    s1: f64,
    s1_dot: f64,
    s2: f64,
    s2_dot: f64,
}

fn diff_at(a: &TimePower, b: &TimePower, s: f64) -> f64 {
    if (a.exponent - b.exponent).abs() <= 1e-12 * a.exponent.abs().max(1.0) {
        (a.prefactor - b.prefactor) * s.powf(a.exponent)
    } else {
        a.at(s) - b.at(s)
    }
}

impl AnsatzField {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `M(t)`, zero after extinction.
    pub fn flat_value(&self, t: f64) -> f64 {
        if t >= self.extinction {
            return 0.0;
        }
        self.m_table.eval(t.max(0.0)).max(0.0)
    }

    pub fn extinction_time(&self) -> f64 {
        self.extinction
    }

    fn scales_at(&self, t: f64) -> Result<Scales> {
        let s = self.scales.remaining(t)?;
        if t < 0.0 {
            return Err(domain("ansatz is defined for t in [0, T)"));
        }
        let sc = &self.scales;
        let lambda_dot = sc.lambda.time_derivative();
        let lld = sc.lambda.mul(&lambda_dot);
        let s1 = sc.lambda.mul(&sc.l1);
        let s2 = sc.eta.mul(&sc.l2);
        Ok(Scales {
            s,
            lambda: sc.lambda.at(s),
            lambda_dot: lambda_dot.at(s),
            sigma: sc.sigma.at(s),
            sigma_dot: sc.sigma.time_derivative().at(s),
            sigma_defect: diff_at(&sc.sigma, &lld, s),
            eta: sc.eta.at(s),
            eta_dot: sc.eta.time_derivative().at(s),
            s1: s1.at(s),
            s1_dot: s1.time_derivative().at(s),
            s2: s2.at(s),
            s2_dot: s2.time_derivative().at(s),
        })
    }

    /// `χ(r / s(t))` as a jet.
    fn cutoff(&self, r: f64, s: f64, s_dot: f64) -> Jet {
        let n = self.params.dim();
        let rho = r / s;
        let (c, dc, ddc) = smooth_cutoff(rho);
        let radial = if r > 0.0 { (n - 1.0) / r * dc / s } else { 0.0 };
        Jet { v: c, r: dc / s, lap: ddc / (s * s) + radial, t: -dc * rho * s_dot / s }
    }

    pub fn region(&self, r: f64, t: f64) -> Result<Region> {
        let sc = self.scales_at(t)?;
        let r = r.abs();
        Ok(if r < sc.s1 {
            Region::Inner
        } else if r < sc.s2 {
            Region::Semiinner
        } else if r < self.cutoffs.r3 {
            Region::Selfsimilar
        } else {
            Region::Outer
        })
    }

    /// Radii where a cut-off switches on or off, or a profile table ends.
    pub fn seams(&self, t: f64) -> Result<Vec<f64>> {
        let sc = self.scales_at(t)?;
        let r3 = self.cutoffs.r3;
        let mut v = alloc::vec![
            sc.s1,
            2.0 * sc.s1,
            sc.s2,
            2.0 * sc.s2,
            r3,
            2.0 * r3,
            1.0,
            2.0,
            sc.lambda * self.profiles.t1.table.r_max(),
            sc.eta * self.profiles.u.table.r_max(),
        ];
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(v)
    }

    pub fn eval(&self, r: f64, t: f64) -> Result<f64> {
        let sc = self.scales_at(t)?;
        Ok(self.parts(r.abs(), t, &sc).value())
    }

    fn parts(&self, r: f64, t: f64, sc: &Scales) -> Parts {
        let p = &self.params;
        let n = p.dim();
        let a = 0.5 * (n - 2.0);
        let pe = p.p();
        let q = p.q();
        let beta0 = p.beta0();
        let consts = &self.profiles.constants;

        // inner bubble and its correction
        let y = r / sc.lambda;
        let (qv, dq, _) = talenti_q_derivs(p, y);
        let lq = a * qv + y * dq;
        let t1 = self.profiles.t1.eval(y);
        let dt1 = self.profiles.t1.eval_deriv(y);
        let lt1 = a * t1 + y * dt1;
        let la = sc.lambda.powf(-a);
        let qb = Jet {
            v: la * qv,
            r: la / sc.lambda * dq,
            lap: -la / (sc.lambda * sc.lambda) * qv.powf(pe),
            t: -la / sc.lambda * sc.lambda_dot * lq,
        };
        let tb = Jet {
            v: la * sc.sigma * t1,
            r: la / sc.lambda * sc.sigma * dt1,
            lap: la / (sc.lambda * sc.lambda) * sc.sigma * (-pe * qv.powf(pe - 1.0) * t1 - lq),
            t: la * sc.sigma_dot * t1 - la / sc.lambda * sc.lambda_dot * sc.sigma * lt1,
        };

        // semi-inner profile
        let xi = r / sc.eta;
        let uv = self.profiles.u.eval(xi);
        let du = self.profiles.u.eval_deriv(xi);
        let eb = sc.eta.powf(beta0);
        let ub = Jet {
            v: eb * uv,
            r: eb / sc.eta * du,
            lap: eb / (sc.eta * sc.eta) * uv.abs().powf(q),
            t: eb * sc.eta_dot / sc.eta * (beta0 * uv - xi * du),
        };

        // singular state, ladder, self-similar mode
        let l1 = consts.l1;
        let u_inf = Jet {
            v: l1 * r.powf(beta0),
            r: beta0 * l1 * r.powf(beta0 - 1.0),
            lap: l1.powf(q) * r.powf(beta0 * q),
            t: 0.0,
        };
        let th = if self.theta.is_empty() || r == 0.0 {
            Jet::default()
        } else {
            Jet { v: self.theta.eval(r), r: self.theta.eval_deriv(r), lap: self.theta_lap.eval(r), t: 0.0 }
        };
        let big_theta = if self.theta_j_amplitude == 0.0 {
            Jet::default()
        } else {
            let k = self.theta_j_amplitude;
            let mu = self.mode.eigenvalue;
            let root = sc.s.sqrt();
            let z = r / root;
            let e = self.mode.eval(z);
            let de = self.mode.eval_deriv(z);
            let c = inverse_square_strength(p);
            let lap_e = if z > 0.0 { 0.5 * z * de + c / (z * z) * e - mu * e } else { 0.0 };
            let tm = sc.s.powf(mu - 1.0);
            Jet { v: k * tm * sc.s * e, r: k * tm * sc.s / root * de, lap: k * tm * lap_e, t: k * tm * (-mu * e + 0.5 * z * de) }
        };

        let m = self.flat_value(t);
        let m_jet = Jet { v: m, r: 0.0, lap: 0.0, t: if m > 0.0 { m.powf(pe) - m.powf(q) } else { 0.0 } };

        let c1 = self.cutoff(r, sc.s1, sc.s1_dot);
        let c2 = self.cutoff(r, sc.s2, sc.s2_dot);
        let c3 = self.cutoff(r, self.cutoffs.r3, 0.0);
        let c4 = self.cutoff(r, 1.0, 0.0);

        let uc = c2.mul(ub).add(c2.one_minus().mul(c4).mul(u_inf)).add(c4.one_minus().mul(m_jet));
        let rest = c1.one_minus().mul(uc).add(c2.one_minus().mul(c3).mul(th.add(big_theta))).neg();
        Parts { qb, tb, c1, c2, rest, lq, sigma_defect: sc.sigma_defect, lambda: sc.lambda, la }
    }

    /// `∂_t u - Δu - f(u) + f₂(u)` at `(r, t)`, with the cancellations of the
    /// inner equations carried out symbolically.
    pub fn residual_at(&self, r: f64, t: f64) -> Result<f64> {
        let sc = self.scales_at(t)?;
        let parts = self.parts(r.abs(), t, &sc);
        Ok(parts.residual(&self.params, sc.sigma))
    }

    /// Residual sampled on `[r_lo, r_hi]`, `samples` points, geometric when
    /// `r_lo > 0`.
    pub fn pde_residual(&self, t: f64, window: (f64, f64), samples: usize) -> Result<RadialTable> {
        let (lo, hi) = window;
        if !(lo >= 0.0 && hi > lo) || samples < 3 {
            return Err(domain("residual window must satisfy 0 <= r_lo < r_hi"));
        }
        let grid: Vec<f64> = (0..samples)
            .map(|i| {
                let f = i as f64 / (samples - 1) as f64;
                if lo > 0.0 {
                    lo * (hi / lo).powf(f)
                } else {
                    lo + (hi - lo) * f
                }
            })
            .collect();
        let values: Vec<f64> = grid.iter().map(|&r| self.residual_at(r, t)).collect::<Result<_>>()?;
        let mut derivs = alloc::vec![0.0; samples];
        for i in 0..samples {
            let (a, b) = (i.saturating_sub(1), (i + 1).min(samples - 1));
            derivs[i] = (values[b] - values[a]) / (grid[b] - grid[a]);
        }
        RadialTable::new(grid, values, derivs)
    }

    /// Value and radial derivative.
    pub fn eval_with_deriv(&self, r: f64, t: f64) -> Result<(f64, f64)> {
        let sc = self.scales_at(t)?;
        let parts = self.parts(r.abs(), t, &sc);
        Ok((parts.value(), parts.deriv()))
    }

    /// Largest jump of the field across its seams at time `t`, probing
    /// `r(1 ± 1e-9)`, relative to `max |u|` on `[r/2, 2r]`.
    pub fn seam_jump(&self, t: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for r in self.seams(t)? {
            let eps = 1e-9 * r;
            let a = self.eval(r - eps, t)?;
            let b = self.eval(r + eps, t)?;
            let mut scale: f64 = 0.0;
            for i in 0..=32 {
                let x = 0.5 * r * 4f64.powf(i as f64 / 32.0);
                scale = scale.max(self.eval(x, t)?.abs());
            }
            if scale > 0.0 {
                worst = worst.max((a - b).abs() / scale);
            }
        }
        Ok(worst)
    }

    /// Continuity on a geometric grid of `points` nodes over `[r_lo, r_hi]`:
    /// the largest trapezoid defect `|Δu - h (u'_i + u'_{i+1})/2|`, relative to
    /// `h max(|u'_i|, |u'_{i+1}|)` plus a floor at `1e-12 max|u|`. Smooth data
    /// give `O(h²)`; a jump gives `O(1)`.
    pub fn max_grid_jump(&self, t: f64, window: (f64, f64), points: usize) -> Result<f64> {
        let (lo, hi) = window;
        if !(lo > 0.0 && hi > lo) || points < 2 {
            return Err(domain("continuity window must satisfy 0 < r_lo < r_hi"));
        }
        let grid: Vec<f64> = (0..points).map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64)).collect();
        let vals: Vec<(f64, f64)> = grid.iter().map(|&r| self.eval_with_deriv(r, t)).collect::<Result<_>>()?;
        let floor = 1e-12 * vals.iter().fold(0.0f64, |m, v| m.max(v.0.abs()));
        let mut worst: f64 = 0.0;
        for i in 0..points - 1 {
            let h = grid[i + 1] - grid[i];
            let (u0, d0) = vals[i];
            let (u1, d1) = vals[i + 1];
            let defect = (u1 - u0 - 0.5 * h * (d0 + d1)).abs();
            worst = worst.max(defect / (h * d0.abs().max(d1.abs()) + floor));
        }
        Ok(worst)
    }

    /// Matching diagnostics at time `t`:
    /// inner/semi-inner at the overlap point `|y| = l1 (T-t)^{-q2}`,
    /// `|λ^{-a}(Q + σT1) + η^{β₀}U(ξ)| / η^{β₀}`, and semi-inner/self-similar
    /// at `|ξ| = l2`, `|η^{β₀}U(ξ) - U_∞ - Θ_J| / |Θ_J|`.
    pub fn mismatch(&self, t: f64) -> Result<(f64, f64)> {
        let sc = self.scales_at(t)?;
        let p = &self.params;
        let a = 0.5 * (p.dim() - 2.0);
        let beta0 = p.beta0();
        let overlap = crate::matching::semiinner_overlap_exponents(p, &self.report)?;
        let y = self.scales.l1.at(sc.s) * sc.s.powf(-overlap.q2);
        let xi = y * sc.lambda / sc.eta;
        // λ^{-a}/η^{β₀} and σ λ^{-a}/η^{β₀} from the closed forms
        let ratio = self.scales.lambda.powf(-a).mul(&self.scales.eta.powf(-beta0));
        let q = crate::profiles::talenti_q(p, y);
        let inner = (ratio.at(sc.s) * q + ratio.mul(&self.scales.sigma).at(sc.s) * self.profiles.t1.eval(y)
            + self.profiles.u.eval(xi))
        .abs();

        let l2 = self.scales.l2.at(sc.s);
        let x = l2 * sc.eta;
        let ub = sc.eta.powf(beta0) * self.profiles.u.eval(l2);
        let u_inf = self.profiles.constants.l1 * x.powf(beta0);
        let mu = self.mode.eigenvalue;
        let theta_j = self.theta_j_amplitude * sc.s.powf(mu) * self.mode.eval(x / sc.s.sqrt());
        if theta_j == 0.0 {
            return Err(Error::Domain("mismatch needs the Θ_J term".into()));
        }
        let outer = ((ub - u_inf - theta_j) / theta_j).abs();
        Ok((inner, outer))
    }

    /// `B1 (T-t)^{γ/2+J} e_J(z) / D_J`.
    pub fn theta_j(&self, r: f64, t: f64) -> Result<f64> {
        let s = self.scales.remaining(t)?;
        Ok(self.theta_j_amplitude * s.powf(self.mode.eigenvalue) * self.mode.eval(r / s.sqrt()))
    }

    pub fn theta(&self, r: f64) -> f64 {
        if r == 0.0 {
            0.0
        } else {
            self.theta.eval(r.abs())
        }
    }
}

struct Parts {
    qb: Jet,
    tb: Jet,
    c1: Jet,
    c2: Jet,
    rest: Jet,
    lq: f64,
    sigma_defect: f64,
    lambda: f64,
    la: f64,
}

impl Parts {
    fn value(&self) -> f64 {
        self.c2.v * self.qb.v + self.c1.v * self.tb.v + self.rest.v
    }

    fn deriv(&self) -> f64 {
        self.c2.r * self.qb.v + self.c2.v * self.qb.r + self.c1.r * self.tb.v + self.c1.v * self.tb.r + self.rest.r
    }

    fn residual(&self, params: &ModelParams, sigma: f64) -> f64 {
        let pe = params.p();
        let f = params.focusing();
        let f2 = params.absorbing();
        let (c1, c2, qb, tb) = (self.c1, self.c2, self.qb, self.tb);
        let u = self.value();
        let scale = self.la / (self.lambda * self.lambda);

        // ∂_t(χ₂ λ^{-a}Q) + χ₁ λ^{-a-2} σ ΛQ, using σ = λλ̇ where both cut-offs agree
        let lld = sigma - self.sigma_defect;
        let coeff = if c1.v == c2.v { c1.v * self.sigma_defect } else { c1.v * sigma - c2.v * lld };
        let x = scale * self.lq * coeff;

        // χ₂ f(Qb) + χ₁ f'(Qb) Tb - f(u)
        let fq = if qb.v > 0.0 { qb.v.powf(pe) } else { 0.0 };
        let fpq = if qb.v > 0.0 { pe * qb.v.powf(pe - 1.0) } else { 0.0 };
        let big = c2.v * qb.v;
        let rem = u - big;
        let y = if big > 0.0 && (rem / big).abs() < 0.5 {
            let rho = rem / big;
            fq * (c2.v - c2.v.powf(pe)) + fpq * tb.v * c1.v * (1.0 - c2.v.powf(pe - 1.0))
                - pe * c2.v.powf(pe - 1.0) * qb.v.powf(pe - 1.0) * self.rest.v
                - big.powf(pe) * binomial_tail(pe, rho, 1)
        } else {
            c2.v * fq + c1.v * fpq * tb.v - f.value(u)
        };

        let rest_t = c2.t * qb.v + c1.t * tb.v + c1.v * tb.t + self.rest.t;
        // χ₂ΔQb and χ₁ΔTb are already inside `x` and `y`
        let rest_lap = 2.0 * c2.r * qb.r + qb.v * c2.lap + 2.0 * c1.r * tb.r + tb.v * c1.lap + self.rest.lap;
        x + y + rest_t - rest_lap + f2.value(u)
    }
}

/// Weight envelopes `W(x,t)` and `V(ξ,t)` with the seam radius `l_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightEnvelope {
    pub d1: f64,
    pub r1: f64,
    /// `γ + 2J + 3d₁ - 2/(1-q)`.
    pub seam_exponent: f64,
    pub l2: f64,
    pub b_out: f64,
    gamma: f64,
    mu: f64,
    beta0: f64,
    big_l1: f64,
    eta_exponent: f64,
    t_blow: f64,
}

pub fn weight_envelopes(params: &ModelParams, report: &MatchingReport, d1: f64, r1: f64) -> Result<WeightEnvelope> {
    if !(d1 > 0.0 && d1 < 1.0) {
        return Err(domain("d1 must lie in (0, 1)"));
    }
    if !(r1 > 1.0) {
        return Err(domain("R1 must exceed 1"));
    }
    let s = singular_state_constants(params);
    let j = params.j() as f64;
    let e = s.gamma + 2.0 * j + 3.0 * d1 - s.beta0;
    if !(e > 0.0) {
        return Err(domain(alloc::format!("seam equation has no positive solution (exponent {e})")));
    }
    Ok(WeightEnvelope {
        d1,
        r1,
        seam_exponent: e,
        l2: s.l1.powf(1.0 / e),
        b_out: d1 / (2.0 * e),
        gamma: s.gamma,
        mu: 0.5 * s.gamma + j,
        beta0: s.beta0,
        big_l1: s.l1,
        eta_exponent: report.eta_exponent.unwrap_or(0.0),
        t_blow: params.blowup_time(),
    })
}

impl WeightEnvelope {
    pub fn l_out(&self, t: f64) -> f64 {
        self.l2 * (self.t_blow - t).powf(-0.5 + self.b_out)
    }

    /// Branch index (1..=4) and value of `W`.
    pub fn branch(&self, r: f64, t: f64) -> (u8, f64) {
        let s = self.t_blow - t;
        let z = r / s.sqrt();
        let lead = s.powf(self.d1 + self.mu);
        if z < 1.0 {
            (1, lead * z.powf(self.gamma))
        } else if z < self.l_out(t) {
            (2, lead * z.powf(self.gamma + 2.0 * (self.mu - 0.5 * self.gamma) + 3.0 * self.d1))
        } else if r < 1.0 {
            (3, self.big_l1 * r.powf(self.beta0))
        } else {
            (4, self.big_l1 / r)
        }
    }

    pub fn w(&self, r: f64, t: f64) -> f64 {
        self.branch(r, t).1
    }

    pub fn v(&self, xi: f64, t: f64) -> f64 {
        (self.t_blow - t).powf(self.d1) * (1.0 + xi * xi).powf(0.5 * self.gamma)
    }

    /// `ξ = x / η(t)`.
    pub fn xi(&self, r: f64, t: f64) -> f64 {
        r / (self.t_blow - t).powf(self.eta_exponent)
    }

    /// Largest relative jump of `W` across `|z| = 1`, `|z| = l_out`, `|x| = 1`.
    pub fn seam_jumps(&self, t: f64) -> [f64; 3] {
        let s = self.t_blow - t;
        let seams = [s.sqrt(), self.l_out(t) * s.sqrt(), 1.0];
        let mut out = [0.0; 3];
        for (o, &r) in out.iter_mut().zip(&seams) {
            let a = self.w(r * (1.0 - 1e-12), t);
            let b = self.w(r * (1.0 + 1e-12), t);
            *o = (a - b).abs() / a.abs().max(b.abs());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_shape() {
        assert_eq!(smooth_cutoff(0.5), (1.0, 0.0, 0.0));
        assert_eq!(smooth_cutoff(2.5), (0.0, 0.0, 0.0));
        let (c, d, _) = smooth_cutoff(1.5);
        assert!((c - 0.5).abs() < 1e-15 && d < 0.0);
        // C² at both ends
        for &r in &[1.0 + 1e-7, 2.0 - 1e-7] {
            let (_, d, dd) = smooth_cutoff(r);
            assert!(d.abs() < 1e-12 && dd.abs() < 1e-5);
        }
    }

    #[test]
    fn cutoff_is_monotone() {
        let mut last = 1.0;
        for i in 0..=3000 {
            let (c, _, _) = smooth_cutoff(i as f64 / 1000.0);
            assert!(c <= last && (0.0..=1.0).contains(&c));
            last = c;
        }
    }
}
