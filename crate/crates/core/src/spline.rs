//! Sampled real functions with a fixed interpolant: a not-a-knot cubic
//! spline, or a quintic Hermite interpolant when derivatives at the knots
//! are known.
//!
//! Values, derivatives and integrals of one function are always answered
//! by the same interpolant; there is no switching between schemes.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::solve_tridiagonal;

/// Relative slack allowed when a query lands just outside the grid.
const EDGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    grid: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives of the spline at the knots.
    curvature: Vec<f64>,
    /// Knot slopes of the quintic Hermite interpolant (empty for splines).
    slopes: Vec<f64>,
    /// Integral of the spline from `grid[0]` to each knot.
    cumulative: Vec<f64>,
    /// Integral of the spline from each knot to the last knot, accumulated
    /// from the right so rapidly decaying tails keep their relative
    /// precision.
    tail: Vec<f64>,
}

impl SampledFn {
    /// Builds the interpolant. Needs at least four strictly increasing,
    /// finite knots.
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidSamples("grid and values differ in length".into()));
        }
        if grid.len() < 4 {
            return Err(Error::InvalidSamples("at least four samples are required".into()));
        }
        if let Some(i) = grid.iter().chain(&values).position(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples(alloc::format!("non-finite sample at index {}", i % grid.len())));
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSamples(alloc::format!(
                "grid not strictly increasing at index {}",
                i + 1
            )));
        }
        let curvature = not_a_knot_curvature(&grid, &values)?;
        Ok(Self::assemble(grid, values, curvature, Vec::new()))
    }

    /// Quintic Hermite interpolant through known values and slopes. Knot
    /// second derivatives are taken from `second` or, when absent, from a
    /// spline through the slopes.
    pub fn hermite(grid: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>, second: Option<Vec<f64>>) -> Result<Self> {
        let base = Self::new(grid, values)?;
        let slope_fn = SampledFn::new(base.grid.clone(), slopes)?;
        let second = match second {
            Some(s) if s.len() != base.grid.len() || s.iter().any(|v| !v.is_finite()) => {
                return Err(Error::InvalidSamples("second derivatives do not match the grid".into()));
            }
            Some(s) => s,
            None => base.grid.iter().map(|&x| slope_fn.derivative(x)).collect::<Result<_>>()?,
        };
        let SampledFn { grid, values, .. } = base;
        Ok(Self::assemble(grid, values, second, slope_fn.values))
    }

    fn assemble(grid: Vec<f64>, values: Vec<f64>, curvature: Vec<f64>, slopes: Vec<f64>) -> Self {
        let mut f = SampledFn { grid, values, curvature, slopes, cumulative: Vec::new(), tail: Vec::new() };
        let pieces = f.interval_integrals();
        let mut acc = 0.0;
        f.cumulative.push(0.0);
        for p in &pieces {
            acc += p;
            f.cumulative.push(acc);
        }
        acc = 0.0;
        f.tail = alloc::vec![0.0; pieces.len() + 1];
        for (i, p) in pieces.iter().enumerate().rev() {
            acc += p;
            f.tail[i] = acc;
        }
        f
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Vec<f64>, f: F) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    /// Uniform grid with `points` nodes on `[a, b]`, endpoints exact.
    pub fn uniform_grid(a: f64, b: f64, points: usize) -> Vec<f64> {
        let m = points.max(2) - 1;
        (0..=m)
            .map(|i| if i == m { b } else { a + (b - a) * i as f64 / m as f64 })
            .collect()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Applies `f` pointwise to the samples and re-interpolates with a cubic
    /// spline.
    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<Self> {
        let values = self.grid.iter().zip(&self.values).map(|(&x, &y)| f(x, y)).collect();
        Self::new(self.grid.clone(), values)
    }

    fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let (a, b) = self.domain();
        let slack = EDGE_SLACK * (b - a).max(1.0);
        if !(x >= a - slack && x <= b + slack) {
            return Err(Error::Domain { what: "evaluation point", value: x });
        }
        let x = x.clamp(a, b);
        let idx = self.grid.partition_point(|&g| g <= x).clamp(1, self.grid.len() - 1) - 1;
        Ok((idx, x))
    }

    /// Value, first and second derivative at `x`.
    pub fn jet(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (i, x) = self.locate(x)?;
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        if !self.slopes.is_empty() {
            let c = self.quintic(i);
            let s = (x - x0) / h;
            let v = horner(&c, s);
            let d1: [f64; 5] = core::array::from_fn(|k| (k + 1) as f64 * c[k + 1]);
            let d2: [f64; 4] = core::array::from_fn(|k| ((k + 2) * (k + 1)) as f64 * c[k + 2]);
            return Ok((v, horner(&d1, s) / h, horner(&d2, s) / (h * h)));
        }
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let dd = a * m0 + b * m1;
        Ok((v, d, dd))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|j| j.0)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|j| j.1)
    }

    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|j| j.2)
    }

    /// Exact integral of the spline over `[lo, hi]` (`lo <= hi`).
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        Ok(self.antiderivative(hi)? - self.antiderivative(lo)?)
    }

    /// `∫_x^{end}` of the spline, accurate relative to the tail itself.
    pub fn tail_integral(&self, x: f64) -> Result<f64> {
        let (i, x) = self.locate(x)?;
        let within = self.partial(i, x);
        let piece = self.tail[i] - self.tail[i + 1];
        Ok(self.tail[i + 1] + (piece - within))
    }

    fn antiderivative(&self, x: f64) -> Result<f64> {
        let (i, x) = self.locate(x)?;
        Ok(self.cumulative[i] + self.partial(i, x))
    }

    /// Integral over `[grid[i], x]` within interval `i`.
    fn partial(&self, i: usize, x: f64) -> f64 {
        let h = self.grid[i + 1] - self.grid[i];
        let b = (x - self.grid[i]) / h;
        if !self.slopes.is_empty() {
            let c = self.quintic(i);
            let anti: [f64; 7] = core::array::from_fn(|k| if k == 0 { 0.0 } else { c[k - 1] / k as f64 });
            return h * horner(&anti, b);
        }
        let c = 1.0 - b;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        h * ((b - 0.5 * b * b) * y0
                + 0.5 * b * b * y1
                + (-(c.powi(4)) / 4.0 + c * c / 2.0 - 0.25) * m0 * h * h / 6.0
                + (b.powi(4) / 4.0 - b * b / 2.0) * m1 * h * h / 6.0)
    }

    /// Coefficients in `s = (x - x_i)/h` of the quintic on interval `i`.
    fn quintic(&self, i: usize) -> [f64; 6] {
        let h = self.grid[i + 1] - self.grid[i];
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (p0, p1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let (q0, q1) = (self.curvature[i] * h * h, self.curvature[i + 1] * h * h);
        // The cubic, quartic and quintic coefficients match value, slope and
        // second derivative at s = 1.
        let e0 = y1 - y0 - p0 - 0.5 * q0;
        let e1 = p1 - p0 - q0;
        let e2 = q1 - q0;
        [
            y0,
            p0,
            0.5 * q0,
            10.0 * e0 - 4.0 * e1 + 0.5 * e2,
            -15.0 * e0 + 7.0 * e1 - e2,
            6.0 * e0 - 3.0 * e1 + 0.5 * e2,
        ]
    }

    fn interval_integrals(&self) -> Vec<f64> {
        if !self.slopes.is_empty() {
            return (0..self.grid.len() - 1).map(|i| self.partial(i, self.grid[i + 1])).collect();
        }
        (0..self.grid.len() - 1)
            .map(|i| {
                let h = self.grid[i + 1] - self.grid[i];
                h * (self.values[i] + self.values[i + 1]) / 2.0
                    - h * h * h * (self.curvature[i] + self.curvature[i + 1]) / 24.0
            })
            .collect()
    }
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * s + v)
}

/// Knot second derivatives for the not-a-knot spline. The end conditions
/// are substituted into the first and last interior rows so the remaining
/// system is tridiagonal and diagonally dominant.
fn not_a_knot_curvature(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let m = n - 2;
    let mut lower = alloc::vec![0.0; m - 1];
    let mut diag = alloc::vec![0.0; m];
    let mut upper = alloc::vec![0.0; m - 1];
    let mut rhs = alloc::vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        diag[k] = 2.0 * (h[i - 1] + h[i]);
        rhs[k] = 6.0 * (d[i] - d[i - 1]);
        if k > 0 {
            lower[k - 1] = h[i - 1];
        }
        if k + 1 < m {
            upper[k] = h[i];
        }
    }
    let (h0, h1) = (h[0], h[1]);
    diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
    if m > 1 {
        upper[0] = (h1 * h1 - h0 * h0) / h1;
    }
    let (ha, hb) = (h[n - 3], h[n - 2]);
    if m > 1 {
        diag[m - 1] = (ha + hb) * (2.0 * ha + hb) / ha;
        lower[m - 2] = (ha * ha - hb * hb) / ha;
    } else {
        // n == 3 cannot occur (n >= 4 is enforced), kept for clarity.
        diag[0] += hb * (ha + hb) / ha;
    }
    let inner = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
    let mut out = alloc::vec![0.0; n];
    out[1..n - 1].copy_from_slice(&inner);
    out[0] = ((h0 + h1) * out[1] - h0 * out[2]) / h1;
    out[n - 1] = ((ha + hb) * out[n - 2] - hb * out[n - 3]) / ha;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let grid = alloc::vec![0.0, 0.3, 0.5, 1.1, 1.4, 2.0];
        let f = SampledFn::from_fn(grid, |x| 1.0 - 2.0 * x + 0.5 * x * x * x).unwrap();
        for &x in &[0.0, 0.17, 0.8, 1.33, 2.0] {
            let (v, d, dd) = f.jet(x).unwrap();
            assert!((v - (1.0 - 2.0 * x + 0.5 * x * x * x)).abs() < 1e-12);
            assert!((d - (-2.0 + 1.5 * x * x)).abs() < 1e-11);
            assert!((dd - 3.0 * x).abs() < 1e-10);
        }
        assert!((f.integral(0.0, 2.0).unwrap() - (2.0 - 4.0 + 2.0)).abs() < 1e-12);
        assert!((f.integral(0.17, 1.33).unwrap()
            - ((1.33 - 0.17) - (1.33f64.powi(2) - 0.17f64.powi(2)) + (1.33f64.powi(4) - 0.17f64.powi(4)) / 8.0))
            .abs()
            < 1e-12);
    }

    #[test]
    fn hermite_reproduces_quintics_and_knot_data() {
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) - 0.3 * x.powi(5);
        let dp = |x: f64| -2.0 + 1.5 * x * x - 1.5 * x.powi(4);
        let ddp = |x: f64| 3.0 * x - 6.0 * x.powi(3);
        let grid = alloc::vec![0.0, 0.3, 0.7, 1.2, 2.0];
        let vals = grid.iter().map(|&x| p(x)).collect();
        let slopes = grid.iter().map(|&x| dp(x)).collect();
        let second = grid.iter().map(|&x| ddp(x)).collect();
        let f = SampledFn::hermite(grid, vals, slopes, Some(second)).unwrap();
        for &x in &[0.0, 0.11, 0.5, 1.0, 1.77, 2.0] {
            let (v, d, dd) = f.jet(x).unwrap();
            assert!((v - p(x)).abs() < 1e-13 && (d - dp(x)).abs() < 1e-12 && (dd - ddp(x)).abs() < 1e-11);
        }
        let exact = |x: f64| x - x * x + x.powi(4) / 8.0 - 0.05 * x.powi(6);
        assert!((f.integral(0.2, 1.9).unwrap() - (exact(1.9) - exact(0.2))).abs() < 1e-13);
        assert!((f.tail_integral(0.2).unwrap() - (exact(2.0) - exact(0.2))).abs() < 1e-13);

        // Without second derivatives the slopes still pin the knot values.
        let grid = SampledFn::uniform_grid(0.0, 1.0, 21);
        let g = SampledFn::hermite(
            grid.clone(),
            grid.iter().map(|x| x.exp()).collect(),
            grid.iter().map(|x| x.exp()).collect(),
            None,
        )
        .unwrap();
        for &x in &grid {
            let (v, d, dd) = g.jet(x).unwrap();
            assert!((v - x.exp()).abs() < 1e-15 && (d - x.exp()).abs() < 1e-14 && (dd - x.exp()).abs() < 1e-4, "{x} {v} {d} {dd}");
        }
    }

    #[test]
    fn tail_integrals_keep_relative_precision() {
        let f = SampledFn::from_fn(SampledFn::uniform_grid(0.0, 20.0, 4001), |x| (-3.0 * x).exp()).unwrap();
        for &x in &[0.0, 7.3, 16.0, 19.99] {
            let exact = ((-3.0 * x).exp() - (-60.0f64).exp()) / 3.0;
            assert!((f.tail_integral(x).unwrap() / exact - 1.0).abs() < 1e-8);
        }
        assert!((f.tail_integral(3.0).unwrap() - f.integral(3.0, 20.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledFn::new(alloc::vec![0.0, 1.0, 1.0, 2.0], alloc::vec![0.0; 4]).is_err());
        assert!(SampledFn::new(alloc::vec![0.0, 1.0, 2.0], alloc::vec![0.0; 3]).is_err());
        assert!(SampledFn::new(alloc::vec![0.0, 1.0, 2.0, 3.0], alloc::vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let f = SampledFn::from_fn(SampledFn::uniform_grid(0.0, 1.0, 11), |x| x).unwrap();
        assert!(matches!(f.eval(1.5), Err(Error::Domain { .. })));
        assert!(f.eval(1.0 + 1e-14).is_ok());
    }

    #[test]
    fn smooth_functions_converge() {
        let f = SampledFn::from_fn(SampledFn::uniform_grid(0.0, 3.0, 3001), f64::sin).unwrap();
        let (v, d, dd) = f.jet(1.2345).unwrap();
        assert!((v - 1.2345f64.sin()).abs() < 1e-12);
        assert!((d - 1.2345f64.cos()).abs() < 1e-9);
        assert!((dd + 1.2345f64.sin()).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn interpolates_the_knots(vals in prop::collection::vec(-10.0f64..10.0, 4..30)) {
            let grid: Vec<f64> = (0..vals.len()).map(|i| i as f64 * 0.7 + (i as f64).sqrt()).collect();
            let f = SampledFn::new(grid.clone(), vals.clone()).unwrap();
            for (x, y) in grid.iter().zip(&vals) {
                prop_assert!((f.eval(*x).unwrap() - y).abs() < 1e-9);
            }
        }
    }
}
