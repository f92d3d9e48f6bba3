//! Quasi-spherical lapse equations under rotational symmetry.
//!
//! Over a background `ḡ = dt^2 + R(t)^2 γ_std` the quasi-spherical metric
//! `u^2 dt^2 + R(t)^2 γ_std` has scalar curvature `S` exactly when
//!
//! `H̄ u' = ½(u - u^3) R_γ̄ - ½ u R_ḡ + ½ u^3 S`,
//!
//! with `H̄ = (n-1)R'/R`, `R_γ̄ = (n-1)(n-2)/R^2` and `R_ḡ` the scalar
//! curvature of the background. Flat and hyperbolic backgrounds take
//! `S = R_ḡ`; the path backgrounds take a positive constant `S`.
//!
//! Flat and hyperbolic solutions are integrated in the deficit variable
//! `w = u - 1`, which decays like `r^{2-n}` and `e^{-nρ}` respectively and
//! would otherwise be lost to cancellation long before the asymptotic
//! constants can be read off.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{BandMetric, Dimension};
use crate::masses::{deficit_profile, deficit_tail_integral};
use crate::numerics::{least_squares, rk4};
use crate::spline::SampledFn;

/// Default fixed RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// The lapse must stay inside `[U_MIN, U_MAX]`.
pub const U_MIN: f64 = 1e-8;
pub const U_MAX: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Background {
    /// `dr^2 + r^2 γ_std`.
    Euclidean,
    /// `dρ^2 + κ^{-2} sinh^2(κρ) γ_std`.
    Hyperbolic { kappa: f64 },
    /// `dt^2 + e^{2 a2 t}((1-t)c + t) γ_std`, joining `c γ_std` at `t = 0`
    /// to `e^{2 a2} γ_std` at `t = 1`, with `S` the minimum of `R_γ̄`.
    RoundPath { a2: f64, c: f64 },
    /// Same path with prescribed scalar curvature `S = δ0`; requires
    /// `R_γ̄ >= 2 δ0` along the path.
    PscPath { a2: f64, c: f64, delta0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsProblem {
    pub n: Dimension,
    pub background: Background,
    pub start: f64,
    pub end: f64,
    pub u0: f64,
    pub step: f64,
}

impl QsProblem {
    pub fn new(n: Dimension, background: Background, start: f64, end: f64, u0: f64) -> Self {
        QsProblem { n, background, start, end, u0, step: DEFAULT_STEP }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Path problem on `[0, 1]` with the initial lapse `H̄(0)/H2` fixed by
    /// the outer mean curvature `H2`.
    pub fn path(n: Dimension, background: Background, h2: f64) -> Result<Self> {
        if !(h2 > 0.0) {
            return Err(Error::Parameter("path problems need H2 > 0".into()));
        }
        let path = RoundPath::from_background(n, &background)?;
        Ok(Self::new(n, background, 0.0, 1.0, path.mean_curvature(0.0) / h2))
    }

    fn validate(&self) -> Result<()> {
        if !(self.u0 > 0.0) || !self.u0.is_finite() {
            return Err(Error::Parameter(alloc::format!("initial lapse must be positive, got {}", self.u0)));
        }
        if !(self.end > self.start) {
            return Err(Error::Parameter("start slice must precede end slice".into()));
        }
        if !(self.step > 0.0) {
            return Err(Error::Parameter("step must be positive".into()));
        }
        Ok(())
    }
}

fn guard(t: f64, u: f64, last_good: &mut f64) -> Result<()> {
    if !(U_MIN..=U_MAX).contains(&u) || !u.is_finite() {
        return Err(Error::Blowup { last_good: *last_good, value: u });
    }
    *last_good = t;
    Ok(())
}

/// Integrates `w' = -(1+w) w (2+w) c(t)` (the flat/hyperbolic equation in
/// the deficit variable) and returns the nodes and deficits.
fn integrate_deficit<C: Fn(f64) -> f64>(p: &QsProblem, coeff: C) -> Result<(Vec<f64>, Vec<f64>)> {
    p.validate()?;
    let mut last = p.start;
    rk4(
        |t, w| -(1.0 + w) * w * (2.0 + w) * coeff(t),
        p.start,
        p.u0 - 1.0,
        p.end,
        p.step,
        |t, w| guard(t, 1.0 + w, &mut last),
    )
}

/// Assembles the band with Hermite interpolants: the lapse slopes come from
/// the ODE and the radius jet is exact, so curvature evaluated at the nodes
/// carries no interpolation error.
fn band_from_deficit<D, J>(n: Dimension, ts: Vec<f64>, ws: Vec<f64>, slope: D, radius: J) -> Result<BandMetric>
where
    D: Fn(f64, f64) -> f64,
    J: Fn(f64) -> (f64, f64, f64),
{
    let slopes: Vec<f64> = ts.iter().zip(&ws).map(|(&t, &w)| slope(t, w)).collect();
    let lapse = SampledFn::hermite(ts.clone(), ws.iter().map(|w| 1.0 + w).collect(), slopes.clone(), None)?;
    let deficit = SampledFn::hermite(ts.clone(), ws, slopes, None)?;
    BandMetric::new(n, lapse, radius_fn(&ts, radius)?)?.with_lapse_deficit(deficit)
}

fn radius_fn<J: Fn(f64) -> (f64, f64, f64)>(ts: &[f64], radius: J) -> Result<SampledFn> {
    let jets: Vec<_> = ts.iter().map(|&t| radius(t)).collect();
    SampledFn::hermite(
        ts.to_vec(),
        jets.iter().map(|j| j.0).collect(),
        jets.iter().map(|j| j.1).collect(),
        Some(jets.iter().map(|j| j.2).collect()),
    )
}

/// Flat background: `u' = (u - u^3)(n-2)/(2r)` on `r ∈ [start, end]`.
pub fn qs_euclidean_solve(p: &QsProblem) -> Result<BandMetric> {
    if p.background != Background::Euclidean {
        return Err(Error::Parameter("qs_euclidean_solve needs the Euclidean background".into()));
    }
    if !(p.start > 0.0) {
        return Err(Error::Parameter("start radius must be positive".into()));
    }
    let k = p.n.as_f64() - 2.0;
    let (ts, ws) = integrate_deficit(p, |r| k / (2.0 * r))?;
    band_from_deficit(p.n, ts, ws, |r, w| -(1.0 + w) * w * (2.0 + w) * k / (2.0 * r), |r| (r, 1.0, 0.0))
}

/// Closed-form flat solution `u = (1 - 2m r^{2-n})^{-1/2}` with
/// `m = (r0^{n-2}/2)(1 - u0^{-2})`.
pub fn qs_euclidean_mass(n: Dimension, r0: f64, u0: f64) -> f64 {
    0.5 * r0.powi(n.get() as i32 - 2) * (1.0 - 1.0 / (u0 * u0))
}

/// Hyperbolic background:
/// `u' = (u - u^3)(R_ρ + n(n-1))/(2 H_ρ)` with `H_ρ = (n-1) coth ρ` and
/// `R_ρ = (n-1)(n-2)/sinh^2 ρ` (for `κ = 1`; other κ by scaling).
pub fn qs_hyperbolic_solve(p: &QsProblem) -> Result<BandMetric> {
    let kappa = match p.background {
        Background::Hyperbolic { kappa } if kappa > 0.0 => kappa,
        _ => return Err(Error::Parameter("qs_hyperbolic_solve needs a hyperbolic background with κ > 0".into())),
    };
    if !(p.start > 0.0) {
        return Err(Error::Parameter("start slice must have ρ > 0".into()));
    }
    let unit = QsProblem { start: kappa * p.start, end: kappa * p.end, step: kappa * p.step, ..*p };
    let coeff = hyperbolic_coefficient(p.n);
    let (ss, ws) = integrate_deficit(&unit, &coeff)?;
    let mut ts: Vec<f64> = ss.iter().map(|s| s / kappa).collect();
    let last = ts.len() - 1;
    ts[0] = p.start;
    ts[last] = p.end;
    band_from_deficit(
        p.n,
        ts,
        ws,
        |t, w| -(1.0 + w) * w * (2.0 + w) * kappa * coeff(kappa * t),
        |t| ((kappa * t).sinh() / kappa, (kappa * t).cosh(), kappa * (kappa * t).sinh()),
    )
}

fn hyperbolic_coefficient(n: Dimension) -> impl Fn(f64) -> f64 {
    let nf = n.as_f64();
    move |rho: f64| {
        let s = rho.sinh();
        let r_rho = (nf - 1.0) * (nf - 2.0) / (s * s);
        let h_rho = (nf - 1.0) / rho.tanh();
        (r_rho + nf * (nf - 1.0)) / (2.0 * h_rho)
    }
}

/// `c0 = u0^2/(1 - u0^2) / (sinh^{n-2} ρ2 cosh^2 ρ2)`; infinite for `u0 = 1`.
pub fn qs_c0(n: Dimension, rho2: f64, u0: f64) -> Result<f64> {
    if !(u0 > 0.0) || !(rho2 > 0.0) {
        return Err(Error::Parameter("closed form needs u0 > 0 and ρ2 > 0".into()));
    }
    if u0 == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(u0 * u0 / (1.0 - u0 * u0) / (rho2.sinh().powi(n.get() as i32 - 2) * rho2.cosh().powi(2)))
}

/// `u(ρ)` from `u^2 = 1 - 1/(1 + c0 sinh^{n-2} ρ cosh^2 ρ)`.
pub fn qs_closed_form_hyperbolic(n: Dimension, rho2: f64, u0: f64, rho: f64) -> Result<f64> {
    Ok(1.0 + qs_closed_form_deficit(n, rho2, u0, rho)?)
}

/// `u(ρ) - 1` from the closed form, without cancellation.
pub fn qs_closed_form_deficit(n: Dimension, rho2: f64, u0: f64, rho: f64) -> Result<f64> {
    let c0 = qs_c0(n, rho2, u0)?;
    if c0.is_infinite() {
        return Ok(0.0);
    }
    let phi = crate::geometry::qs_phi(n, c0, rho);
    let u2 = 1.0 - 1.0 / (1.0 + phi);
    if !(u2 > 0.0) || !(rho > 0.0) {
        return Err(Error::Domain { what: "closed-form lapse (u^2 <= 0)", value: rho });
    }
    Ok(-(1.0 / (1.0 + phi)) / (1.0 + u2.sqrt()))
}

/// Constant `C(n)` in `lim (u - 1) e^{nρ} = -C(n)/c0`, as measured by
/// [`measure_expansion_constant`] and frozen here, indexed by `n - 3`.
pub const EXPANSION_CONSTANT: [f64; 5] = [4.0, 8.0, 16.0, 32.0, 64.0];

pub fn expansion_constant(n: Dimension) -> f64 {
    EXPANSION_CONSTANT[n.get() - 3]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionConstants {
    /// `lim (u - 1) e^{nρ}`.
    pub limit_u: f64,
    /// `lim (U - ρ) e^{nρ}` with `U = ρ - ∫_ρ^∞ (u - 1)`.
    pub limit_big_u: f64,
    pub residual_u: f64,
    pub residual_big_u: f64,
}

/// Fits `a + b e^{-ρ}` to `(u - 1)e^{nρ}` and `(U - ρ)e^{nρ}` at
/// `ρ ∈ {ρmax - 8, ρmax - 4, ρmax}`.
pub fn extract_expansion_constants(g: &BandMetric) -> Result<ExpansionConstants> {
    let (a, b) = g.domain();
    if b - a < 8.5 {
        return Err(Error::Extraction("band too short to extrapolate (need ρmax - ρ0 > 8)".into()));
    }
    let n = g.dimension().as_f64();
    let deficit = deficit_profile(g)?;
    let mut rows = Vec::new();
    let (mut yu, mut yv) = (Vec::new(), Vec::new());
    for &rho in &[b - 8.0, b - 4.0, b] {
        let scale = (n * rho).exp();
        rows.push(alloc::vec![1.0, (-rho).exp()]);
        yu.push(deficit.eval(rho)? * scale);
        yv.push(-deficit_tail_integral(g, &deficit, rho)? * scale);
    }
    let (cu, ru) = least_squares(&rows, &yu)?;
    let (cv, rv) = least_squares(&rows, &yv)?;
    let (limit_u, limit_big_u) = (cu[0], cv[0]);
    let tol = 1e-6 * (1.0 + limit_u.abs());
    if !limit_u.is_finite() || !limit_big_u.is_finite() || (limit_big_u + limit_u / n).abs() > tol {
        return Err(Error::Extraction(alloc::format!(
            "inconsistent limits: (U - ρ)e^(nρ) -> {limit_big_u:e}, -(u - 1)e^(nρ)/n -> {:e}",
            -limit_u / n
        )));
    }
    Ok(ExpansionConstants { limit_u, limit_big_u, residual_u: ru, residual_big_u: rv })
}

/// Measures `C(n) = -c0 · lim (u - 1)e^{nρ}` at two values of `c0` and
/// returns the mean together with their relative discrepancy.
pub fn measure_expansion_constant(n: Dimension, rho_max: f64, step: f64) -> Result<(f64, f64)> {
    let rho2 = 1.0f64.asinh();
    let mut values = [0.0; 2];
    for (v, &u0) in values.iter_mut().zip(&[0.5, 0.8]) {
        let c0 = qs_c0(n, rho2, u0)?;
        let p = QsProblem::new(n, Background::Hyperbolic { kappa: 1.0 }, rho2, rho_max, u0).with_step(step);
        let g = qs_hyperbolic_solve(&p)?;
        *v = -c0 * extract_expansion_constants(&g)?.limit_u;
    }
    let mean = 0.5 * (values[0] + values[1]);
    Ok((mean, (values[0] - values[1]).abs() / mean.abs()))
}

/// Geometry of the round path `R(t) = e^{a2 t} sqrt((1-t)c + t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundPath {
    pub n: Dimension,
    pub a2: f64,
    pub c: f64,
}

impl RoundPath {
    pub fn from_background(n: Dimension, bg: &Background) -> Result<Self> {
        let (a2, c) = match *bg {
            Background::RoundPath { a2, c } | Background::PscPath { a2, c, .. } => (a2, c),
            _ => return Err(Error::Parameter("not a path background".into())),
        };
        if !(c > 0.0) {
            return Err(Error::Parameter("path endpoint c γ_std needs c > 0".into()));
        }
        let path = RoundPath { n, a2, c };
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            if !(path.log_slope(t) > 0.0) {
                return Err(Error::Parameter(alloc::format!(
                    "a2 = {a2} too small: e^(2 a2 t)γ(t) is not increasing at t = {t}"
                )));
            }
        }
        Ok(path)
    }

    fn p(&self, t: f64) -> f64 {
        (1.0 - t) * self.c + t
    }

    /// `(ln R)'`.
    fn log_slope(&self, t: f64) -> f64 {
        self.a2 + (1.0 - self.c) / (2.0 * self.p(t))
    }

    /// `(R, R', R'')`.
    pub fn jet(&self, t: f64) -> (f64, f64, f64) {
        let r = (self.a2 * t).exp() * self.p(t).sqrt();
        let l1 = self.log_slope(t);
        let l2 = -(1.0 - self.c).powi(2) / (2.0 * self.p(t).powi(2));
        (r, r * l1, r * (l1 * l1 + l2))
    }

    pub fn mean_curvature(&self, t: f64) -> f64 {
        self.n.slice_dim() * self.log_slope(t)
    }

    pub fn slice_scalar(&self, t: f64) -> f64 {
        let k = self.n.slice_dim();
        k * (k - 1.0) / self.jet(t).0.powi(2)
    }

    /// Smallest slice scalar curvature along the path.
    pub fn min_slice_scalar(&self) -> f64 {
        (0..=1000).map(|i| self.slice_scalar(i as f64 / 1000.0)).fold(f64::INFINITY, f64::min)
    }
}

/// Solves `H̄ u' = ½(u - u^3)R_γ̄ - ½uR_ḡ + ½u^3 S` over the background
/// `dt^2 + R(t)^2 γ_std`, where `radius(t) = (R, R', R'')` with `R' > 0`.
pub fn qs_round_solve<J, S>(n: Dimension, radius: J, forcing: S, t0: f64, t1: f64, u0: f64, step: f64) -> Result<BandMetric>
where
    J: Fn(f64) -> (f64, f64, f64),
    S: Fn(f64) -> f64,
{
    let k = n.slice_dim();
    let rhs = |t: f64, u: f64| {
        let (r, dr, ddr) = radius(t);
        let h_bar = k * dr / r;
        let r_gamma = k * (k - 1.0) / (r * r);
        let r_bg = k * (k - 1.0) * (1.0 - dr * dr) / (r * r) - 2.0 * k * ddr / r;
        (0.5 * (u - u * u * u) * r_gamma - 0.5 * u * r_bg + 0.5 * u * u * u * forcing(t)) / h_bar
    };
    let mut last = t0;
    let (ts, us) = rk4(rhs, t0, u0, t1, step, |t, u| guard(t, u, &mut last))?;
    let slopes = ts.iter().zip(&us).map(|(&t, &u)| rhs(t, u)).collect();
    let lapse = SampledFn::hermite(ts.clone(), us, slopes, None)?;
    BandMetric::new(n, lapse, radius_fn(&ts, &radius)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSolution {
    pub band: BandMetric,
    /// Prescribed scalar curvature of the band (`K` or `δ0`).
    pub scalar_curvature: f64,
    /// `H̄(0)`, the mean curvature the initial slice would have with `u = 1`.
    pub h_bar_start: f64,
    /// Mean curvature of the final slice, `H̄(1)/u(1)`.
    pub h_prime: f64,
    pub sup_u: f64,
}

/// Round path extension on `t ∈ [0, 1]` starting from `u(0) = p.u0`.
pub fn qs_path_solve(p: &QsProblem) -> Result<PathSolution> {
    p.validate()?;
    if p.start != 0.0 || p.end != 1.0 {
        return Err(Error::Parameter("path problems live on t ∈ [0, 1]".into()));
    }
    let path = RoundPath::from_background(p.n, &p.background)?;
    let s = match p.background {
        Background::RoundPath { .. } => path.min_slice_scalar(),
        Background::PscPath { delta0, .. } => {
            let min = path.min_slice_scalar();
            if !(delta0 > 0.0) || min < 2.0 * delta0 {
                return Err(Error::Parameter(alloc::format!(
                    "PSC path needs δ0 > 0 and R_γ̄ >= 2δ0 (min R_γ̄ = {min}, δ0 = {delta0})"
                )));
            }
            delta0
        }
        _ => unreachable!("checked by RoundPath::from_background"),
    };
    let band = qs_round_solve(p.n, |t| path.jet(t), |_| s, 0.0, 1.0, p.u0, p.step)?;
    let u1 = *band.lapse().values().last().unwrap_or(&f64::NAN);
    Ok(PathSolution {
        scalar_curvature: s,
        h_bar_start: path.mean_curvature(0.0),
        h_prime: path.mean_curvature(1.0) / u1,
        sup_u: band.lapse().max_value(),
        band,
    })
}
