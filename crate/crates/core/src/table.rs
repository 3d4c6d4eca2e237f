use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain, Result};

/// A radial function sampled on a strictly increasing grid, with its first
/// derivative, interpolated by cubic Hermite polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    grid: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    pub meta: BTreeMap<String, f64>,
}

impl RadialTable {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() || grid.len() != derivs.len() {
            return Err(domain("table columns must have equal length of at least 2"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("table grid must be strictly increasing"));
        }
        Ok(RadialTable { grid, values, derivs, meta: BTreeMap::new() })
    }

    /// Samples a closed-form function and its derivative.
    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let (values, derivs) = grid.iter().map(|&r| f(r)).unzip();
        Self::new(grid, values, derivs)
    }

    pub fn with_meta(mut self, key: &str, value: f64) -> Self {
        self.meta.insert(key.into(), value);
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.grid[0]
    }

    pub fn r_max(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min() && r <= self.r_max()
    }

    fn locate(&self, r: f64) -> usize {
        match self.grid.binary_search_by(|g| g.partial_cmp(&r).unwrap_or(core::cmp::Ordering::Less)) {
            Ok(i) => i.min(self.grid.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.grid.len() - 2),
        }
    }

    /// Value and derivative at `r`. Outside the grid the end value is
    /// continued linearly along the end derivative.
    pub fn eval_with_deriv(&self, r: f64) -> (f64, f64) {
        let last = self.grid.len() - 1;
        if r <= self.grid[0] {
            return (self.values[0] + self.derivs[0] * (r - self.grid[0]), self.derivs[0]);
        }
        if r >= self.grid[last] {
            return (self.values[last] + self.derivs[last] * (r - self.grid[last]), self.derivs[last]);
        }
        let i = self.locate(r);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let s = (r - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let value = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
        let dh00 = 6.0 * s2 - 6.0 * s;
        let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
        let dh01 = -6.0 * s2 + 6.0 * s;
        let dh11 = 3.0 * s2 - 2.0 * s;
        let deriv = (dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1) / h;
        (value, deriv)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.eval_with_deriv(r).0
    }

    /// Largest discrepancy between the stored derivative and the centered
    /// difference of the values at interior nodes, relative to `1 + |u'|`.
    pub fn derivative_consistency(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..self.grid.len() - 1 {
            let fd = (self.values[i + 1] - self.values[i - 1]) / (self.grid[i + 1] - self.grid[i - 1]);
            worst = worst.max((fd - self.derivs[i]).abs() / (1.0 + self.derivs[i].abs()));
        }
        worst
    }

    pub fn map_values(&self, f: impl Fn(f64, f64, f64) -> (f64, f64)) -> RadialTable {
        let (values, derivs) = (0..self.grid.len())
            .map(|i| f(self.grid[i], self.values[i], self.derivs[i]))
            .unzip();
        RadialTable { grid: self.grid.clone(), values, derivs, meta: self.meta.clone() }
    }
}

/// `{0} ∪ {r_first · ratio^k}` up to and including `r_max`.
pub fn geometric_grid(r_first: f64, r_max: f64, ratio: f64) -> Vec<f64> {
    let mut g = alloc::vec![0.0];
    let mut r = r_first;
    while r < r_max * (1.0 - 1e-12) {
        g.push(r);
        r *= ratio;
    }
    g.push(r_max);
    g
}
