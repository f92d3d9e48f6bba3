//! Bending the mean curvature of the top boundary down to a target value
//! inside a thin collar, keeping the boundary metric fixed.
//!
//! With `σ <= 0` the signed proper distance to the top slice, the new band
//! has slices `(1 + mλ(σ))^2 r₁^2 γ_std` and the old lapse. Here
//! `m = (H₁ - H)/(n-1)` and `λ = -σ - (Λc/2)σ^2` on `[-t₁, 0]`, blended to
//! zero on `[-t₀, -t₁]` by a quintic that is `C^2` at both ends.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use super::Chart;
use crate::error::{Error, Result};
use crate::geometry::{scalar_curvature_at, slice_geometry, BandMetric, Jet};

/// Relative slack on the edge of the bending region, so the node at
/// `σ = -t₁` is not lost to rounding in the chart.
const EDGE: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarSpec {
    /// `t₁`: proper depth of the bending region.
    pub depth: f64,
    /// `t₀ - t₁`: width of the blend back to `g₁`.
    pub blend: f64,
    /// `Λc`; `None` selects the smallest value with `min R ≥ margin` on the
    /// bending region.
    pub lambda_c: Option<f64>,
    pub margin: f64,
    /// Nodes placed in the collar `[-t₀, 0]`.
    pub samples: usize,
}

impl CollarSpec {
    pub fn new(depth: f64) -> Self {
        CollarSpec { depth, blend: depth, lambda_c: None, margin: 1e-3, samples: 4001 }
    }

    pub fn with_lambda_c(mut self, lambda_c: f64) -> Self {
        self.lambda_c = Some(lambda_c);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollarBend {
    pub band: BandMetric,
    pub m: f64,
    pub lambda_c: f64,
    pub boundary_mean_curvature: f64,
    /// Minimum of the scalar curvature over `[-t₁, 0]`.
    pub min_collar_scalar: f64,
    /// Minimum over the blend `[-t₀, -t₁]`.
    pub min_blend_scalar: f64,
}

#[derive(Clone, Copy)]
struct Lambda {
    t0: f64,
    t1: f64,
    lc: f64,
    poly: [f64; 3],
}

impl Lambda {
    fn new(t0: f64, t1: f64, lc: f64) -> Self {
        let d = t0 - t1;
        let a_ = t1 - 0.5 * lc * t1 * t1;
        let b_ = (-1.0 + lc * t1) * d;
        let c_ = -lc * d * d;
        let c = 0.5 * (c_ + 12.0 * a_ - 6.0 * b_);
        let b = b_ - 3.0 * a_ - 2.0 * c;
        let a = a_ - b - c;
        Lambda { t0, t1, lc, poly: [a, b, c] }
    }

    /// `(λ, λ_σ, λ_σσ)`.
    fn jet(&self, sigma: f64) -> (f64, f64, f64) {
        if sigma >= -self.t1 {
            (-sigma - 0.5 * self.lc * sigma * sigma, -1.0 - self.lc * sigma, -self.lc)
        } else if sigma > -self.t0 {
            let d = self.t0 - self.t1;
            let x = (sigma + self.t0) / d;
            let [a, b, c] = self.poly;
            let p = x * x * x * (a + b * x + c * x * x);
            let dp = x * x * (3.0 * a + 4.0 * b * x + 5.0 * c * x * x);
            let ddp = x * (6.0 * a + 12.0 * b * x + 20.0 * c * x * x);
            (p, dp / d, ddp / (d * d))
        } else {
            (0.0, 0.0, 0.0)
        }
    }
}

/// `g₁` data at one collar node, in the proper-distance variable.
struct Node {
    sigma: f64,
    scalar: f64,
    slice_scalar: f64,
    mean: f64,
}

fn bent_scalar(n: f64, m: f64, l: (f64, f64, f64), nd: &Node) -> f64 {
    let (lam, dl, ddl) = l;
    let phi = 1.0 + m * lam;
    nd.scalar - 2.0 * (n - 1.0) * m * ddl / phi - (n - 1.0) * (n - 2.0) * m * m * dl * dl / (phi * phi)
        - m * lam * (2.0 + m * lam) * nd.slice_scalar / (phi * phi)
        - 2.0 * n * m * dl * nd.mean / phi
}

/// Bends the top mean curvature of `g1` to `target_h < H₁`.
pub fn collar_bend(g1: &BandMetric, target_h: f64, spec: &CollarSpec) -> Result<CollarBend> {
    let n = g1.dimension();
    let h1 = g1.upper_mean_curvature()?;
    if !(target_h <= h1) {
        return Err(Error::Precondition(alloc::format!("collar bending lowers H: target {target_h} > H₁ = {h1}")));
    }
    let m = (h1 - target_h) / n.slice_dim();
    if m == 0.0 {
        return Ok(CollarBend {
            band: g1.clone(),
            m,
            lambda_c: 0.0,
            boundary_mean_curvature: h1,
            min_collar_scalar: f64::NAN,
            min_blend_scalar: f64::NAN,
        });
    }
    let (t1, t0) = (spec.depth, spec.depth + spec.blend);
    let (a, b) = g1.domain();
    let chart = Chart::new(g1, b)?;
    if !(t1 > 0.0 && spec.blend > 0.0) || chart.s(a)? > -t0 {
        return Err(Error::Parameter(alloc::format!("collar of depth {t0} does not fit in the band")));
    }
    let tc = chart.t(-t0)?;
    let samples = spec.samples.max(16);
    let collar_t: Vec<f64> = (0..samples)
        .map(|i| if i + 1 == samples { b } else { tc + (b - tc) * i as f64 / (samples - 1) as f64 })
        .collect();
    let mut nodes = Vec::with_capacity(samples);
    for &t in &collar_t {
        let sg = slice_geometry(g1, t)?;
        nodes.push(Node {
            sigma: chart.s(t)?.min(0.0),
            scalar: scalar_curvature_at(g1, t)?,
            slice_scalar: sg.slice_scalar,
            mean: sg.mean_curvature,
        });
    }
    let nf = n.as_f64();
    let min_over = |lam: &Lambda, lo: f64, hi: f64| {
        nodes
            .iter()
            .filter(|nd| nd.sigma >= lo * EDGE && nd.sigma <= hi)
            .map(|nd| bent_scalar(nf, m, lam.jet(nd.sigma), nd))
            .fold(f64::INFINITY, f64::min)
    };
    let phi_bound = 2.0 * (1.0 + m * t1) / (m * t1 * t1);
    let lc = match spec.lambda_c {
        Some(lc) => lc,
        None => smallest_lambda_c(|lc| min_over(&Lambda::new(t0, t1, lc), -t1, 0.0) >= spec.margin, phi_bound)
            .ok_or_else(|| {
                Error::Construction(alloc::format!(
                    "no Λc below the degeneracy bound {phi_bound:e} makes R ≥ {} in the collar",
                    spec.margin
                ))
            })?,
    };
    finish(g1, m, Lambda::new(t0, t1, lc), &collar_t, &nodes)
}

/// Bisection for the threshold of a predicate assumed monotone in `Λc`.
fn smallest_lambda_c<P: Fn(f64) -> bool>(passes: P, bound: f64) -> Option<f64> {
    if passes(0.0) {
        return Some(0.0);
    }
    let mut hi = 1.0;
    while !passes(hi) {
        hi *= 2.0;
        if hi >= bound {
            return None;
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn finish(g1: &BandMetric, m: f64, lam: Lambda, collar_t: &[f64], nodes: &[Node]) -> Result<CollarBend> {
    let n = g1.dimension();
    let nf = n.as_f64();
    let tc = collar_t[0];
    let gap = 0.5 * (collar_t[1] - collar_t[0]);
    let mut grid: Vec<f64> = g1.grid().iter().copied().filter(|&t| t < tc - gap).collect();
    let mut jets: Vec<Jet> = grid.iter().map(|&t| g1.jet(t)).collect::<Result<_>>()?;
    for (&t, nd) in collar_t.iter().zip(nodes) {
        let j = g1.jet(t)?;
        let (l, ls, lss) = lam.jet(nd.sigma);
        let phi = 1.0 + m * l;
        if !(phi > 0.0) {
            return Err(Error::Construction(alloc::format!("degenerate conformal factor 1 + mλ = {phi:e} at σ = {}", nd.sigma)));
        }
        let dphi = m * ls * j.u;
        let ddphi = m * (lss * j.u * j.u + ls * j.du);
        grid.push(t);
        jets.push(Jet {
            u: j.u,
            du: j.du,
            r: phi * j.r,
            dr: dphi * j.r + phi * j.dr,
            ddr: ddphi * j.r + 2.0 * dphi * j.dr + phi * j.ddr,
        });
    }
    let band = BandMetric::from_jets(n, grid, &jets)?;
    let min_collar_scalar = nodes
        .iter()
        .filter(|nd| nd.sigma >= -lam.t1 * EDGE)
        .map(|nd| bent_scalar(nf, m, lam.jet(nd.sigma), nd))
        .fold(f64::INFINITY, f64::min);
    let min_blend_scalar = nodes
        .iter()
        .filter(|nd| nd.sigma < -lam.t1 * EDGE)
        .map(|nd| bent_scalar(nf, m, lam.jet(nd.sigma), nd))
        .fold(f64::INFINITY, f64::min);
    Ok(CollarBend {
        boundary_mean_curvature: band.upper_mean_curvature()?,
        band,
        m,
        lambda_c: lam.lc,
        min_collar_scalar,
        min_blend_scalar,
    })
}
