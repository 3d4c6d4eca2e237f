//! Gauss–Legendre quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

/// Nodes and weights on `[-1, 1]`, computed by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; m];
    let mut weights = alloc::vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal sub-intervals of `[a, b]`, `m` points each.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, m: usize) -> f64 {
    let (x, w) = gauss_legendre(m);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + 0.5 * h;
        let mut s = 0.0;
        for j in 0..m {
            s += w[j] * f(mid + 0.5 * h * x[j]);
        }
        total += 0.5 * h * s;
    }
    total
}

/// Composite rule over consecutive breakpoints.
pub fn integrate_breaks(f: impl Fn(f64) -> f64, breaks: &[f64], m: usize) -> f64 {
    let (x, w) = gauss_legendre(m);
    let mut total = 0.0;
    for seg in breaks.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut s = 0.0;
        for j in 0..m {
            s += w[j] * f(mid + half * x[j]);
        }
        total += half * s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_for_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert_relative_eq!(s, 2.0 / 15.0, max_relative = 1e-14);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn composite_gaussian() {
        let v = integrate(|x| (-x * x).exp(), 0.0, 10.0, 40, 10);
        assert_relative_eq!(v, PI.sqrt() / 2.0, max_relative = 1e-14);
    }
}
