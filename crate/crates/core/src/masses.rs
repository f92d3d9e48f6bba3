//! Quasi-local and global mass functionals.
//!
//! Normalizations: the Hawking and Brown–York masses use the `1/(16π)` and
//! `1/(8π)` conventions of dimension three; the ADM mass is normalized so
//! that the Schwarzschild metric `(1 - 2m r^{2-n})^{-1} dr^2 + r^2 γ_std`
//! has mass `m` in every dimension.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::bartnik::{embed_axisym, AxisymBartnikData, BartnikData, RoundBartnikData};
use crate::error::{Error, Result};
use crate::geometry::{slice_geometry, BandMetric, BandTag, Dimension};
use crate::numerics::least_squares;
use crate::spline::SampledFn;

fn require_three(n: Dimension) -> Result<()> {
    if n.get() == 3 {
        Ok(())
    } else {
        Err(Error::WrongDimension { expected: 3, found: n.get() })
    }
}

/// `m_H = sqrt(|Σ|/16π) (1 - ∫H^2/16π)`.
pub fn hawking_mass(data: &BartnikData) -> Result<f64> {
    require_three(data.dimension())?;
    let (area, willmore) = match data {
        BartnikData::Round(d) => (d.area(), d.mean_curvature * d.mean_curvature * d.area()),
        BartnikData::Axisym(d) => {
            let h = d.mean_curvature();
            (d.area()?, d.integrate(|i| h[i] * h[i])?)
        }
    };
    Ok((area / (16.0 * PI)).sqrt() * (1.0 - willmore / (16.0 * PI)))
}

/// `m_BY = (1/8π) ∫ (H_0 - H) dμ` with `H_0` the mean curvature of the
/// isometric embedding into `R^3`.
pub fn brown_york_mass(data: &BartnikData) -> Result<f64> {
    require_three(data.dimension())?;
    match data {
        BartnikData::Round(d) => Ok((2.0 / d.radius - d.mean_curvature) * d.area() / (8.0 * PI)),
        BartnikData::Axisym(d) => {
            let h0 = embed_axisym(d)?;
            let (h0, h) = (h0.values(), d.mean_curvature());
            Ok(d.integrate(|i| h0[i] - h[i])? / (8.0 * PI))
        }
    }
}

/// `∫ H dμ_γ`.
pub fn total_mean_curvature(data: &BartnikData) -> Result<f64> {
    match data {
        BartnikData::Round(d) => Ok(d.mean_curvature * d.area()),
        BartnikData::Axisym(d) => {
            let h = d.mean_curvature();
            d.integrate(|i| h[i])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MassReport {
    pub hawking: Option<f64>,
    pub brown_york: Option<f64>,
    pub total_mean_curvature: f64,
    pub adm: Option<f64>,
    pub mass_aspect_trace: Option<f64>,
    pub area: f64,
}

/// Evaluates every boundary functional that applies to `data`. The
/// Brown–York mass is left out when its precondition (embeddability with
/// positive Gauss curvature) fails.
pub fn mass_report(data: &BartnikData) -> Result<MassReport> {
    let area = match data {
        BartnikData::Round(d) => d.area(),
        BartnikData::Axisym(d) => d.area()?,
    };
    let three = data.dimension().get() == 3;
    let brown_york = match brown_york_mass(data) {
        Ok(m) => Some(m),
        Err(Error::NotEmbeddable { .. }) | Err(Error::NonPositiveGaussCurvature { .. }) | Err(Error::WrongDimension { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MassReport {
        hawking: if three { Some(hawking_mass(data)?) } else { None },
        brown_york,
        total_mean_curvature: total_mean_curvature(data)?,
        adm: None,
        mass_aspect_trace: None,
        area,
    })
}

/// Result of the ADM tail fit.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmFit {
    pub mass: f64,
    /// RMS residual of the fit `m(r) ≈ m_∞ + b/r` over the tail.
    pub residual: f64,
    /// Flux-form estimates `r^{n-2}((u/r')^2 - 1)/2` at three tail radii.
    pub flux: Vec<(f64, f64)>,
}

/// Mass function `m(t) = (r^{n-2}/2)(1 - (r'/u)^2)`, constant on exact
/// Schwarzschild.
pub fn mass_function(g: &BandMetric, t: f64) -> Result<f64> {
    let j = g.jet(t)?;
    let k = g.dimension().get() as i32 - 2;
    let a = j.dr / j.u;
    Ok(0.5 * j.r.powi(k) * (1.0 - a * a))
}

/// ADM mass of an asymptotically flat end represented by the outer part of
/// a band, by fitting the Schwarzschild tail.
pub fn adm_mass_from_tail(g: &BandMetric) -> Result<AdmFit> {
    match g.tag() {
        Some(BandTag::Schwarzschild { mass }) => {
            return Ok(AdmFit { mass: *mass, residual: 0.0, flux: Vec::new() });
        }
        Some(BandTag::Euclidean) => return Ok(AdmFit { mass: 0.0, residual: 0.0, flux: Vec::new() }),
        _ => {}
    }
    let grid = g.grid();
    let len = grid.len();
    let start = len - (len / 5).max(8).min(len);
    let k = g.dimension().get() as i32 - 2;
    let mut rows = Vec::new();
    let mut ms = Vec::new();
    for &t in &grid[start..] {
        let j = g.jet(t)?;
        let a2 = (j.dr / j.u).powi(2);
        if !(a2 > 0.25 && a2 < 4.0) {
            return Err(Error::NotAsymptoticallyFlat(alloc::format!(
                "(r'/u)^2 = {a2:e} at t = {t} is not close to 1"
            )));
        }
        rows.push(alloc::vec![1.0, 1.0 / j.r.powi(k)]);
        ms.push(0.5 * j.r.powi(k) * (1.0 - a2));
    }
    let (coef, residual) = least_squares(&rows, &ms)?;
    let scale = ms.iter().fold(1e-12f64, |m, v| m.max(v.abs()));
    if residual > 1e-3 * scale || !coef[0].is_finite() {
        return Err(Error::NotAsymptoticallyFlat(alloc::format!(
            "mass function does not settle (fit residual {residual:e})"
        )));
    }
    let mut flux = Vec::new();
    for &idx in &[start, (start + len - 1) / 2, len - 1] {
        let j = g.jet(grid[idx])?;
        flux.push((j.r, 0.5 * j.r.powi(k) * ((j.u / j.dr).powi(2) - 1.0)));
    }
    Ok(AdmFit { mass: coef[0], residual, flux })
}

/// Brown–York type functional of the leaves `Σ_t`, normalized by
/// `(n-1) ω_{n-1}` so that in dimension three it is the usual `1/(8π)`
/// Brown–York mass: `(1/((n-1)ω)) ∫ (H_0 - H) dμ = r^{n-2} - r^{n-1} H/(n-1)`.
pub fn leaf_brown_york(g: &BandMetric) -> Result<SampledFn> {
    let k = g.dimension().slice_dim();
    let mut vals = Vec::with_capacity(g.grid().len());
    for &t in g.grid() {
        let j = g.jet(t)?;
        let h = slice_geometry(g, t)?.mean_curvature;
        vals.push(j.r.powf(k - 1.0) - j.r.powf(k) * h / k);
    }
    SampledFn::new(g.grid().to_vec(), vals)
}

/// Large-radius limit of the leaf functional, fitting `a + b/r + c/r^2` at
/// the outer end of the band.
pub fn leaf_brown_york_limit(g: &BandMetric) -> Result<f64> {
    let profile = leaf_brown_york(g)?;
    let grid = g.grid();
    let len = grid.len();
    let start = len - (len / 5).max(8).min(len);
    let mut rows = Vec::new();
    let mut ys = Vec::new();
    for (i, &t) in grid.iter().enumerate().skip(start) {
        let r = g.radius().values()[i];
        rows.push(alloc::vec![1.0, 1.0 / r, 1.0 / (r * r)]);
        ys.push(profile.eval(t)?);
    }
    Ok(least_squares(&rows, &ys)?.0[0])
}

/// Hyperbolic mass aspect read off a quasi-spherical band
/// `u^2 dρ^2 + sinh^2 ρ γ_std` with constant scalar curvature `-n(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassAspect {
    /// `Tr_{γ_std} h`.
    pub trace: f64,
    /// `ω_{n-1} · trace`.
    pub mass_integral: f64,
    /// Fitted limit of `(sinh^2 ρ / sinh^2 U - 1)/r^n`, one component.
    pub component_limit: f64,
    pub residual: f64,
}

/// `∫_ρ^∞ (u - 1) dρ'`, with the part beyond the band closed off by the
/// `e^{-nρ}` decay of the lapse deficit.
pub(crate) fn deficit_tail_integral(g: &BandMetric, deficit: &SampledFn, rho: f64) -> Result<f64> {
    let (_, end) = g.domain();
    let n = g.dimension().as_f64();
    Ok(deficit.tail_integral(rho)? + deficit.eval(end)? / n)
}

pub(crate) fn deficit_profile(g: &BandMetric) -> Result<SampledFn> {
    let mut vals = Vec::with_capacity(g.grid().len());
    for &t in g.grid() {
        vals.push(g.lapse_deficit(t)?);
    }
    SampledFn::new(g.grid().to_vec(), vals)
}

/// Extracts the mass aspect of the conformal compactification. With
/// `U(ρ) = ρ - ∫_ρ^∞ (u - 1)` and `r = 2 artanh(e^{-U})` the metric reads
/// `sinh^{-2} r (dr^2 + (1 + L r^n + ...) γ_std)` near `r = 0`; each
/// component of the aspect is `n L` and the trace is `n(n-1)L`.
pub fn hyperbolic_mass_aspect(g: &BandMetric) -> Result<MassAspect> {
    let (a, b) = g.domain();
    for &t in &[a, 0.5 * (a + b), b] {
        let (_, r) = g.components(t)?;
        if (r / t.sinh() - 1.0).abs() > 1e-8 {
            return Err(Error::Precondition("band is not written over the hyperbolic foliation r = sinh ρ".into()));
        }
    }
    if b - a < 9.0 {
        return Err(Error::Extraction("band too short for conformal-infinity extraction".into()));
    }
    let n = g.dimension();
    let deficit = deficit_profile(g)?;
    let mut rows = Vec::new();
    let mut ys = Vec::new();
    for &rho in &[b - 8.0, b - 4.0, b] {
        let delta = -deficit_tail_integral(g, &deficit, rho)?;
        let q = 2.0 * (0.5 * delta).sinh().powi(2) + delta.sinh() / rho.tanh();
        let ratio = -(2.0 * q + q * q) / (1.0 + q).powi(2);
        let r = 2.0 * (-(rho + delta)).exp().atanh();
        rows.push(alloc::vec![1.0, (-rho).exp()]);
        ys.push(ratio / r.powi(n.get() as i32));
    }
    let (coef, residual) = least_squares(&rows, &ys)?;
    let limit = coef[0];
    if !limit.is_finite() || residual > 1e-6 * (1.0 + limit.abs()) {
        return Err(Error::Extraction(alloc::format!("mass-aspect limit did not converge (residual {residual:e})")));
    }
    let trace = n.as_f64() * n.slice_dim() * limit;
    Ok(MassAspect { trace, mass_integral: n.sphere_area() * trace, component_limit: limit, residual })
}

/// Hawking, Brown–York and total mean curvature of round data in one go.
pub fn round_masses(d: &RoundBartnikData) -> Result<MassReport> {
    mass_report(&BartnikData::Round(*d))
}

/// Same for axisymmetric data.
pub fn axisym_masses(d: &AxisymBartnikData) -> Result<MassReport> {
    mass_report(&BartnikData::Axisym(d.clone()))
}
