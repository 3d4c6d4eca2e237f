//! Problem parameters and the two power nonlinearities.

use num_rational::Rational64;
use num_traits::Float;

use crate::error::{domain, Error, Result};

/// The tuple `(n, p, q, J, T)`.
///
/// `p = (n+2)/(n-2)` is always derived, never supplied. When `q` is a short
/// rational (for instance `0.5`), an exact copy is kept so that exponent
/// arithmetic in the correction ladder can be done without rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: u32,
    q: f64,
    j: u32,
    t_blow: f64,
    q_exact: Option<Rational64>,
}

impl ModelParams {
    pub fn new(n: u32, q: f64, j: u32, t_blow: f64) -> Result<Self> {
        if n < 5 {
            return Err(domain(alloc::format!("dimension n = {n} must be at least 5")));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(domain(alloc::format!("absorption exponent q = {q} outside (0, 1)")));
        }
        if !(t_blow > 0.0) || !t_blow.is_finite() {
            return Err(domain(alloc::format!("blowup time T = {t_blow} must be positive")));
        }
        Ok(ModelParams {
            n,
            q,
            j,
            t_blow,
            q_exact: rational_from_f64(q, 1_000_000),
        })
    }

    /// Default dimension `n = 5`.
    pub fn five(q: f64, j: u32, t_blow: f64) -> Result<Self> {
        Self::new(5, q, j, t_blow)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    pub fn p(&self) -> f64 {
        (self.dim() + 2.0) / (self.dim() - 2.0)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn blowup_time(&self) -> f64 {
        self.t_blow
    }

    pub fn p_exact(&self) -> Rational64 {
        Rational64::new(self.n as i64 + 2, self.n as i64 - 2)
    }

    pub fn q_exact(&self) -> Option<Rational64> {
        self.q_exact
    }

    /// `β₀ = 2/(1-q)`, the homogeneity of the singular steady state.
    pub fn beta0(&self) -> f64 {
        2.0 / (1.0 - self.q)
    }

    pub fn focusing(&self) -> Nonlinearity {
        Nonlinearity::focusing(self.p())
    }

    pub fn absorbing(&self) -> Nonlinearity {
        Nonlinearity::absorbing(self.q)
    }

    /// Rejects `n = 6`, where the matching exponents divide by `6 - n`.
    pub fn require_matchable(&self) -> Result<()> {
        if self.n == 6 {
            return Err(domain("matching is undefined for n = 6 (division by 6 - n)"));
        }
        Ok(())
    }

    pub fn with_j(mut self, j: u32) -> Self {
        self.j = j;
        self
    }
}

/// Finds `a/b` with `b <= max_den` whose nearest double is exactly `x`.
pub fn rational_from_f64(x: f64, max_den: i64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        if (h2 as f64) / (k2 as f64) == x {
            return Some(Rational64::new(h2, k2));
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityKind {
    /// `f(u) = |u|^{p-1} u`
    Focusing,
    /// `f₂(u) = |u|^{q-1} u`
    Absorbing,
}

/// Odd power nonlinearity `|u|^{e-1} u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonlinearity {
    pub kind: NonlinearityKind,
    pub exponent: f64,
}

impl Nonlinearity {
    pub fn focusing(p: f64) -> Self {
        Nonlinearity { kind: NonlinearityKind::Focusing, exponent: p }
    }

    pub fn absorbing(q: f64) -> Self {
        Nonlinearity { kind: NonlinearityKind::Absorbing, exponent: q }
    }

    pub fn value(&self, u: f64) -> f64 {
        if u == 0.0 {
            0.0
        } else {
            u.signum() * u.abs().powf(self.exponent)
        }
    }

    /// `i`-th derivative. At `u ≠ 0` this is the falling factorial of the
    /// exponent times `|u|^{e-i}`, with the sign dictated by oddness.
    pub fn derivative(&self, order: u32, u: f64) -> Result<f64> {
        if order == 0 {
            return Ok(self.value(u));
        }
        let e = self.exponent;
        let ff = falling_factorial(e, order);
        if u == 0.0 {
            if e - order as f64 > 0.0 {
                return Ok(0.0);
            }
            return Err(Error::Singularity(alloc::format!(
                "derivative of order {order} of |u|^{{{e}-1}}u at u = 0"
            )));
        }
        let mag = ff * u.abs().powf(e - order as f64);
        // f^{(i)} is odd for even i and even for odd i
        if u < 0.0 && order.is_multiple_of(2) {
            Ok(-mag)
        } else {
            Ok(mag)
        }
    }
}

/// `e (e-1) ⋯ (e-k+1)`.
pub fn falling_factorial(e: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (e - i as f64))
}

/// Generalized binomial coefficient `e choose k`.
pub fn binomial(e: f64, k: u32) -> f64 {
    let mut out = 1.0;
    for i in 0..k {
        out *= (e - i as f64) / (i as f64 + 1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn p_is_critical_for_n5() {
        let params = ModelParams::five(0.5, 1, 1.0).unwrap();
        assert_relative_eq!(params.p(), 7.0 / 3.0, max_relative = 1e-15);
        assert_eq!(params.p_exact(), Rational64::new(7, 3));
        assert_eq!(params.q_exact(), Some(Rational64::new(1, 2)));
    }

    #[test]
    fn q_near_one_is_admissible() {
        let params = ModelParams::five(0.999, 1, 1.0).unwrap();
        assert_relative_eq!(params.p(), 7.0 / 3.0, max_relative = 1e-15);
        assert_eq!(params.q_exact(), Some(Rational64::new(999, 1000)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(ModelParams::five(1.2, 1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::five(0.0, 1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(4, 0.5, 1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::five(0.5, 1, -1.0), Err(Error::Domain(_))));
        assert!(ModelParams::new(6, 0.5, 1, 1.0).unwrap().require_matchable().is_err());
    }

    #[test]
    fn nonlinearity_values() {
        let f = Nonlinearity::focusing(7.0 / 3.0);
        assert_relative_eq!(f.derivative(0, 2.0).unwrap(), 5.039684199579493, max_relative = 1e-14);
        let f2 = Nonlinearity::absorbing(0.5);
        assert_eq!(f2.derivative(0, -1.0).unwrap(), -1.0);
        assert!(matches!(f2.derivative(1, 0.0), Err(Error::Singularity(_))));
        assert_eq!(f.derivative(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_parity() {
        let f = Nonlinearity::focusing(7.0 / 3.0);
        for order in 0..5 {
            let a = f.derivative(order, 1.7).unwrap();
            let b = f.derivative(order, -1.7).unwrap();
            let expected = if order % 2 == 0 { -a } else { a };
            assert_relative_eq!(b, expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn rational_recovery() {
        assert_eq!(rational_from_f64(0.25, 1000), Some(Rational64::new(1, 4)));
        assert_eq!(rational_from_f64(1.0 / 3.0, 1000), Some(Rational64::new(1, 3)));
        assert_eq!(rational_from_f64(0.37, 1000), Some(Rational64::new(37, 100)));
        assert_eq!(rational_from_f64(core::f64::consts::PI, 1000), None);
    }

    proptest::proptest! {
        #[test]
        fn odd_and_sign_preserving(u in -50.0f64..50.0, q in 0.01f64..0.99) {
            let f = Nonlinearity::focusing(7.0 / 3.0);
            let f2 = Nonlinearity::absorbing(q);
            proptest::prop_assert!(f.value(u) * u >= 0.0);
            proptest::prop_assert!(f2.value(u) * u >= 0.0);
            proptest::prop_assert_eq!(f.value(-u), -f.value(u));
            let params = ModelParams::five(q, 1, 1.0).unwrap();
            let gap = params.p() - q;
            proptest::prop_assert!(gap > params.p() - 1.0 && gap < params.p());
        }

        #[test]
        fn first_derivative_matches_central_difference(u in 0.1f64..10.0) {
            let f = Nonlinearity::focusing(7.0 / 3.0);
            let h = 1e-5;
            let fd = (f.value(u + h) - f.value(u - h)) / (2.0 * h);
            let exact = f.derivative(1, u).unwrap();
            // C h^2 with C ~ f'''(u)/6 plus rounding of order eps f(u)/h
            let bound = 1e-9 * (1.0 + u * u) + 1e-16 * f.value(u).abs() / h * 10.0;
            proptest::prop_assert!((exact - fd).abs() <= bound, "{} vs {}", exact, fd);
        }
    }
}
