//! Dormand–Prince 5(4) integrator with adaptive step size.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri45 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri45 {
    fn default() -> Self {
        Dopri45 {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 0.0,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

/// Why [`Dopri45::run`] returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Reached,
    Stopped,
}

impl Dopri45 {
    pub fn with_tol(rtol: f64, atol: f64) -> Self {
        Dopri45 { rtol, atol, ..Default::default() }
    }

    /// Integrates from `t0` and returns the state at each point of `outputs`
    /// (monotone in the direction of integration).
    pub fn solve_at<F>(&self, mut f: F, t0: f64, y0: &[f64], outputs: &[f64]) -> Result<Vec<Vec<f64>>>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let mut t = t0;
        let mut y = y0.to_vec();
        let mut h = self.h_init;
        let mut out = Vec::with_capacity(outputs.len());
        for &target in outputs {
            if target != t {
                let (outcome, h_next) = self.run(&mut f, &mut t, &mut y, target, h, |_, _| false)?;
                debug_assert_eq!(outcome, Outcome::Reached);
                h = h_next;
            }
            out.push(y.clone());
        }
        Ok(out)
    }

    /// Advances `(t, y)` towards `t_end`, calling `stop` after every accepted
    /// step. Returns the reason and the last proposed step size.
    pub fn run<F, S>(
        &self,
        f: &mut F,
        t: &mut f64,
        y: &mut Vec<f64>,
        t_end: f64,
        h_start: f64,
        mut stop: S,
    ) -> Result<(Outcome, f64)>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        S: FnMut(f64, &[f64]) -> bool,
    {
        let dim = y.len();
        let dir = if t_end >= *t { 1.0 } else { -1.0 };
        let span = (t_end - *t).abs();
        if span == 0.0 {
            return Ok((Outcome::Reached, h_start));
        }
        let mut k = vec![vec![0.0; dim]; 7];
        let mut tmp = vec![0.0; dim];
        let mut ynew = vec![0.0; dim];
        f(*t, y, &mut k[0]);
        let mut h = if h_start > 0.0 { h_start } else { self.initial_step(f, *t, y, &k[0], dir) };
        h = h.min(self.h_max).min(span);
        let mut steps = 0usize;
        let mut last_err: f64 = 1e-4;
        loop {
            let remaining = (t_end - *t).abs();
            if remaining <= 1e-15 * (1.0 + t.abs()) {
                *t = t_end;
                return Ok((Outcome::Reached, h));
            }
            let mut hs = h.min(remaining);
            let hit_end = hs >= remaining;
            if hit_end {
                hs = remaining;
            }
            let hd = dir * hs;
            let tc = *t;
            let stage = |coef: &[(usize, f64)], tmp: &mut Vec<f64>, k: &Vec<Vec<f64>>| {
                for i in 0..dim {
                    let mut acc = y[i];
                    for &(j, a) in coef {
                        acc += hd * a * k[j][i];
                    }
                    tmp[i] = acc;
                }
            };
            stage(&[(0, A21)], &mut tmp, &k);
            f(tc + C2 * hd, &tmp, &mut k[1]);
            stage(&[(0, A31), (1, A32)], &mut tmp, &k);
            f(tc + C3 * hd, &tmp, &mut k[2]);
            stage(&[(0, A41), (1, A42), (2, A43)], &mut tmp, &k);
            f(tc + C4 * hd, &tmp, &mut k[3]);
            stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &mut tmp, &k);
            f(tc + C5 * hd, &tmp, &mut k[4]);
            stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &mut tmp, &k);
            f(tc + hd, &tmp, &mut k[5]);
            stage(&[(0, B1), (2, B3), (3, B4), (4, B5), (5, B6)], &mut ynew, &k);
            let t_new = if hit_end { t_end } else { tc + hd };
            f(t_new, &ynew, &mut k[6]);

            let mut err = 0.0;
            let mut finite = true;
            for i in 0..dim {
                let e = hd
                    * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i]
                        + E7 * k[6][i]);
                let sc = self.atol + self.rtol * y[i].abs().max(ynew[i].abs());
                err += (e / sc) * (e / sc);
                finite &= ynew[i].is_finite() && k[6][i].is_finite();
            }
            let err = (err / dim as f64).sqrt();
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::Convergence(alloc::format!(
                    "integrator exceeded {} steps at t = {}",
                    self.max_steps,
                    *t
                )));
            }
            if finite && err <= 1.0 {
                *t = t_new;
                core::mem::swap(y, &mut ynew);
                k.swap(0, 6);
                // PI controller
                let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * last_err.powf(0.4 / 5.0);
                last_err = err.max(1e-4);
                h = (hs * fac.clamp(0.2, 5.0)).min(self.h_max);
                if stop(*t, y) {
                    return Ok((Outcome::Stopped, h));
                }
                if hit_end {
                    return Ok((Outcome::Reached, h));
                }
            } else {
                let fac = if finite { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.25 };
                h = hs * fac;
                if h < self.h_min * (1.0 + t.abs()) {
                    return Err(Error::StepSizeUnderflow { time: *t, step: h });
                }
            }
        }
    }

    fn initial_step<F>(&self, f: &mut F, t: f64, y: &[f64], f0: &[f64], dir: f64) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let dim = y.len();
        let sc: Vec<f64> = y.iter().map(|v| self.atol + self.rtol * v.abs()).collect();
        let d0 = rms(y, &sc);
        let d1 = rms(f0, &sc);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1: Vec<f64> = (0..dim).map(|i| y[i] + dir * h0 * f0[i]).collect();
        let mut f1 = vec![0.0; dim];
        f(t + dir * h0, &y1, &mut f1);
        let diff: Vec<f64> = (0..dim).map(|i| f1[i] - f0[i]).collect();
        let d2 = rms(&diff, &sc) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }
}

fn rms(v: &[f64], sc: &[f64]) -> f64 {
    let s: f64 = v.iter().zip(sc).map(|(a, b)| (a / b) * (a / b)).sum();
    (s / v.len() as f64).sqrt()
}
