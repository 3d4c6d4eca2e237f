//! Small dense least-squares fits.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};

/// Solves `min ‖A c − b‖₂` by Householder QR. `a` holds `rows` rows of
/// `cols` entries each. Returns the coefficients and the residual RMS.
pub fn least_squares(a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    if rows < cols || cols == 0 {
        return Err(Error::Fit(alloc::format!("{rows} samples cannot fix {cols} coefficients")));
    }
    // column-major copy
    let mut m: Vec<Vec<f64>> = (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect();
    let mut rhs = b.to_vec();
    for k in 0..cols {
        let norm = m[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Fit("rank-deficient design matrix".into()));
        }
        let alpha = if m[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = m[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in m.iter_mut().skip(k) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let s = 2.0 * dot / vnorm2;
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        let dot: f64 = v.iter().zip(&rhs[k..]).map(|(x, y)| x * y).sum();
        let s = 2.0 * dot / vnorm2;
        for (c, vi) in rhs[k..].iter_mut().zip(&v) {
            *c -= s * vi;
        }
    }
    let mut coef = alloc::vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = rhs[k];
        for j in k + 1..cols {
            s -= m[j][k] * coef[j];
        }
        let diag = m[k][k];
        if diag.abs() < 1e-300 {
            return Err(Error::Fit("singular triangular factor".into()));
        }
        coef[k] = s / diag;
    }
    let mut ss = 0.0;
    for (row, bi) in a.iter().zip(b) {
        let pred: f64 = row.iter().zip(&coef).map(|(x, c)| x * c).sum();
        ss += (pred - bi) * (pred - bi);
    }
    Ok((coef, (ss / rows as f64).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

pub fn line_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let a: Vec<Vec<f64>> = x.iter().map(|&xi| alloc::vec![1.0, xi]).collect();
    let (c, rms) = least_squares(&a, y)?;
    Ok(LineFit { slope: c[1], intercept: c[0], rms })
}

/// Fits `log|y| = log C + k log x`; nonpositive samples are rejected.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let mut lx = Vec::with_capacity(x.len());
    let mut ly = Vec::with_capacity(x.len());
    for (&xi, &yi) in x.iter().zip(y) {
        if xi <= 0.0 || yi == 0.0 || !yi.is_finite() {
            return Err(Error::Fit(alloc::format!("cannot take logarithms at ({xi}, {yi})")));
        }
        lx.push(xi.ln());
        ly.push(yi.abs().ln());
    }
    line_fit(&lx, &ly)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub limit: f64,
    pub amplitude: f64,
    pub rate: f64,
    pub rms: f64,
}

/// Fits `y ≈ B + C x^{-k}` by variable projection: for each trial `k` the
/// linear coefficients are solved exactly and `k` is chosen by golden-section
/// search on `[k_lo, k_hi]`.
pub fn decay_fit(x: &[f64], y: &[f64], k_lo: f64, k_hi: f64) -> Result<DecayFit> {
    let eval = |k: f64| -> Result<(Vec<f64>, f64)> {
        let a: Vec<Vec<f64>> = x.iter().map(|&xi| alloc::vec![1.0, xi.powf(-k)]).collect();
        least_squares(&a, y)
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (k_lo, k_hi);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = eval(x1)?.1;
    let mut f2 = eval(x2)?.1;
    for _ in 0..120 {
        if hi - lo < 1e-10 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = eval(x1)?.1;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = eval(x2)?.1;
        }
    }
    let k = 0.5 * (lo + hi);
    let (c, rms) = eval(k)?;
    Ok(DecayFit { limit: c[0], amplitude: c[1], rate: k, rms })
}
