//! Variable-mass Schwarzschild bands between two round data.

#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::bartnik::RoundBartnikData;
use crate::error::{Error, Result};
use crate::geometry::{scalar_curvature_at, slice_geometry, BandMetric, BandTag, Dimension, MassProfile};

/// Tolerance on the reproduced boundary mean curvatures.
const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzschildBand {
    pub band: BandMetric,
    pub radii: (f64, f64),
    pub masses: (f64, f64),
    pub min_scalar: f64,
    /// Largest deviation of the curvature engine from `2(n-1)m'/r^{n-1}`.
    pub formula_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)] // built once per call
pub enum BandOutcome {
    Feasible(SchwarzschildBand),
    /// Names the violated hypothesis, `"V₁ < V₂"` or `"m₁ ≤ m₂"`.
    Infeasible { violated: &'static str, masses: (f64, f64), radii: (f64, f64) },
}

impl BandOutcome {
    pub fn feasible(&self) -> Option<&SchwarzschildBand> {
        match self {
            BandOutcome::Feasible(b) => Some(b),
            BandOutcome::Infeasible { .. } => None,
        }
    }
}

fn mass(n: Dimension, r: f64, h: f64) -> f64 {
    let x = h * r / n.slice_dim();
    0.5 * r.powi(n.get() as i32 - 2) * (1.0 - x * x)
}

/// Band `(1 - 2m(r)/r^{n-2})^{-1} dr^2 + r^2 γ_std` on `[r₁, r₂]` joining the
/// round data of areas `V_i` and mean curvatures `H_i`, with `m` a monotone
/// cubic from `m₁` to `m₂`, kept clear of horizons.
pub fn schwarzschild_band(n: Dimension, v1: f64, h1: f64, v2: f64, h2: f64, points: usize) -> Result<BandOutcome> {
    for (name, v) in [("V₁", v1), ("H₁", h1), ("V₂", v2), ("H₂", h2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Parameter(alloc::format!("{name} must be positive, got {v}")));
        }
    }
    let k = n.slice_dim();
    let (r1, r2) = ((v1 / n.sphere_area()).powf(1.0 / k), (v2 / n.sphere_area()).powf(1.0 / k));
    let (m1, m2) = (mass(n, r1, h1), mass(n, r2, h2));
    if !(v1 < v2) {
        return Ok(BandOutcome::Infeasible { violated: "V₁ < V₂", masses: (m1, m2), radii: (r1, r2) });
    }
    if !(m1 <= m2) {
        return Ok(BandOutcome::Infeasible { violated: "m₁ ≤ m₂", masses: (m1, m2), radii: (r1, r2) });
    }
    // Outside r_h = (2 m₂)^{1/(n-2)} no mass up to m₂ forms a horizon, so
    // the ramp is moved past the midpoint of [r_h, r₂] when it would start
    // further in.
    let ramp_start = if m2 > 0.0 {
        let rh = (2.0 * m2).powf(1.0 / (n.as_f64() - 2.0));
        r1.max(0.5 * (rh + r2))
    } else {
        r1
    };
    let tag = if m1 == m2 {
        BandTag::Schwarzschild { mass: m1 }
    } else {
        BandTag::VariableMass(MassProfile::Smoothstep { r_lo: ramp_start, r_hi: r2, m_lo: m1, m_hi: m2 })
    };
    let profile = match tag {
        BandTag::VariableMass(p) => p,
        _ => MassProfile::Affine { m0: m1, slope: 0.0 },
    };
    let points = points.max(16);
    if m1 != m2 && r2 - ramp_start < 4.0 * (r2 - r1) / (points - 1) as f64 {
        return Err(Error::Construction(alloc::format!(
            "mass ramp on [{ramp_start}, {r2}] is narrower than four grid cells; use more points"
        )));
    }
    // Horizon check on a grid four times finer than the output.
    let exponent = n.get() as i32 - 2;
    for i in 0..=4 * points {
        let r = r1 + (r2 - r1) * i as f64 / (4 * points) as f64;
        let f = 1.0 - 2.0 * profile.jet(r).0 / r.powi(exponent);
        if !(f > 0.0) {
            return Err(Error::Construction(alloc::format!("horizon crossing: 1 - 2m/r^(n-2) = {f:e} at r = {r}")));
        }
    }
    let band = BandMetric::tagged(n, tag, r1, r2, points)?;
    let (hl, hu) = (slice_geometry(&band, r1)?.mean_curvature, slice_geometry(&band, r2)?.mean_curvature);
    if (hl - h1).abs() > BOUNDARY_TOL * (1.0 + h1) || (hu - h2).abs() > BOUNDARY_TOL * (1.0 + h2) {
        return Err(Error::Construction(alloc::format!(
            "boundary mean curvature not reproduced: ({hl}, {hu}) vs ({h1}, {h2})"
        )));
    }
    let mut min_scalar = f64::INFINITY;
    let mut formula_residual = 0.0f64;
    for &r in band.grid() {
        let s = scalar_curvature_at(&band, r)?;
        let expected = 2.0 * k * profile.jet(r).1 / r.powf(k);
        formula_residual = formula_residual.max((s - expected).abs());
        min_scalar = min_scalar.min(s);
    }
    Ok(BandOutcome::Feasible(SchwarzschildBand { band, radii: (r1, r2), masses: (m1, m2), min_scalar, formula_residual }))
}

/// Same construction from round Bartnik data.
pub fn schwarzschild_band_round(d1: &RoundBartnikData, d2: &RoundBartnikData, points: usize) -> Result<BandOutcome> {
    if d1.n != d2.n {
        return Err(Error::Parameter("data of different dimensions".into()));
    }
    schwarzschild_band(d1.n, d1.area(), d1.mean_curvature, d2.area(), d2.mean_curvature, points)
}
