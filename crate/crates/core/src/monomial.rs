//! Finite sums `Σ c_α |x|^α` with real exponents.
//!
//! Exponents are kept as exact rationals whenever the inputs allow it, so that
//! merging like terms and detecting indicial resonances never relies on a
//! floating point comparison.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::Rational64;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the number of stored monomials.
pub const DEFAULT_CAP: usize = 500;

/// Relative tolerance used to merge two exponents when at least one is inexact.
const REAL_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub enum Exponent {
    Exact(Rational64),
    Real(f64),
}

#[allow(clippy::should_implement_trait)]
impl Exponent {
    pub fn int(k: i64) -> Self {
        Exponent::Exact(Rational64::from_integer(k))
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Exponent::Real(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exponent::Exact(_))
    }

    pub fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => match checked_add(a, b) {
                Some(s) => Exponent::Exact(s),
                None => Exponent::Real(a.to_f64().unwrap() + b.to_f64().unwrap()),
            },
            (a, b) => Exponent::Real(a.value() + b.value()),
        }
    }

    pub fn neg(self) -> Exponent {
        match self {
            Exponent::Exact(a) => Exponent::Exact(-a),
            Exponent::Real(x) => Exponent::Real(-x),
        }
    }

    pub fn sub(self, other: Exponent) -> Exponent {
        self.add(other.neg())
    }

    pub fn scale(self, k: i64) -> Exponent {
        match self {
            Exponent::Exact(a) => match a.numer().checked_mul(k) {
                Some(num) => Exponent::Exact(Rational64::new(num, *a.denom())),
                None => Exponent::Real(a.to_f64().unwrap() * k as f64),
            },
            Exponent::Real(x) => Exponent::Real(x * k as f64),
        }
    }

    pub fn mul(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => {
                let num = a.numer().checked_mul(*b.numer());
                let den = a.denom().checked_mul(*b.denom());
                match (num, den) {
                    (Some(n), Some(d)) => Exponent::Exact(Rational64::new(n, d)),
                    _ => Exponent::Real(self.value() * other.value()),
                }
            }
            (a, b) => Exponent::Real(a.value() * b.value()),
        }
    }

    /// Equality in the sense used for merging terms.
    pub fn same(&self, other: &Exponent) -> bool {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => a == b,
            (a, b) => {
                let (x, y) = (a.value(), b.value());
                (x - y).abs() <= REAL_MERGE_TOL * (1.0 + x.abs().max(y.abs()))
            }
        }
    }

    fn order(&self, other: &Exponent) -> Ordering {
        if self.same(other) {
            return Ordering::Equal;
        }
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => a.cmp(b),
            (a, b) => a.value().partial_cmp(&b.value()).unwrap_or(Ordering::Equal),
        }
    }
}

fn checked_add(a: Rational64, b: Rational64) -> Option<Rational64> {
    let den = a.denom().checked_mul(*b.denom())?;
    let num = a
        .numer()
        .checked_mul(*b.denom())?
        .checked_add(b.numer().checked_mul(*a.denom())?)?;
    Some(Rational64::new(num, den))
}

impl PartialEq for Exponent {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exponent::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Sorted (ascending exponent) list of monomials with nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSum {
    terms: Vec<(Exponent, f64)>,
    cap: usize,
}

impl Default for MonomialSum {
    fn default() -> Self {
        MonomialSum::zero()
    }
}

impl MonomialSum {
    pub fn zero() -> Self {
        MonomialSum { terms: Vec::new(), cap: DEFAULT_CAP }
    }

    pub fn monomial(coeff: f64, exponent: Exponent) -> Self {
        let mut s = MonomialSum::zero();
        if coeff != 0.0 {
            s.terms.push((exponent, coeff));
        }
        s
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn terms(&self) -> &[(Exponent, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term with the smallest exponent, which dominates as `|x| → 0`.
    pub fn leading(&self) -> Option<(Exponent, f64)> {
        self.terms.first().copied()
    }

    pub fn coefficient(&self, exponent: Exponent) -> f64 {
        self.terms
            .iter()
            .find(|(e, _)| e.same(&exponent))
            .map(|(_, c)| *c)
            .unwrap_or(0.0)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, (_, c)| m.max(c.abs()))
    }

    fn insert(&mut self, exponent: Exponent, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        match self.terms.binary_search_by(|(e, _)| e.order(&exponent)) {
            Ok(i) => {
                self.terms[i].1 += coeff;
                if self.terms[i].1 == 0.0 {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (exponent, coeff)),
        }
    }

    fn checked(self) -> Result<Self> {
        if self.terms.len() > self.cap {
            return Err(Error::Overflow { terms: self.terms.len(), cap: self.cap });
        }
        Ok(self)
    }

    pub fn add(&self, other: &MonomialSum) -> Result<MonomialSum> {
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        for &(e, c) in &other.terms {
            out.insert(e, c);
        }
        out.checked()
    }

    pub fn sub(&self, other: &MonomialSum) -> Result<MonomialSum> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> MonomialSum {
        if k == 0.0 {
            return MonomialSum { terms: Vec::new(), cap: self.cap };
        }
        MonomialSum {
            terms: self.terms.iter().map(|&(e, c)| (e, c * k)).collect(),
            cap: self.cap,
        }
    }

    /// Multiplies every term by `coeff |x|^shift`.
    pub fn shift(&self, coeff: f64, shift: Exponent) -> MonomialSum {
        if coeff == 0.0 {
            return MonomialSum { terms: Vec::new(), cap: self.cap };
        }
        MonomialSum {
            terms: self.terms.iter().map(|&(e, c)| (e.add(shift), c * coeff)).collect(),
            cap: self.cap,
        }
    }

    pub fn mul(&self, other: &MonomialSum) -> Result<MonomialSum> {
        let mut out = MonomialSum { terms: Vec::new(), cap: self.cap.min(other.cap) };
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                out.insert(ea.add(eb), ca * cb);
            }
            if out.terms.len() > out.cap {
                return out.checked();
            }
        }
        out.checked()
    }

    pub fn powi(&self, k: u32) -> Result<MonomialSum> {
        let mut out = MonomialSum::monomial(1.0, Exponent::int(0)).with_cap(self.cap);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Radial Laplacian in dimension `n`: `|x|^α ↦ α(α+n-2)|x|^{α-2}`.
    pub fn laplacian(&self, n: u32) -> MonomialSum {
        let mut out = MonomialSum { terms: Vec::new(), cap: self.cap };
        let two = Exponent::int(2);
        for &(e, c) in &self.terms {
            let a = e.value();
            out.insert(e.sub(two), c * a * (a + n as f64 - 2.0));
        }
        out
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms.iter().map(|&(e, c)| c * r.powf(e.value())).sum()
    }

    /// First radial derivative.
    pub fn eval_deriv(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(e, c)| {
                let a = e.value();
                c * a * r.powf(a - 1.0)
            })
            .sum()
    }

    /// Drops terms whose magnitude is below `rel` times the largest one.
    pub fn prune(&self, rel: f64) -> MonomialSum {
        let m = self.max_abs_coefficient();
        MonomialSum {
            terms: self.terms.iter().copied().filter(|(_, c)| c.abs() > rel * m).collect(),
            cap: self.cap,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }
}
