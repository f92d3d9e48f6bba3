//! Rotationally symmetric band metrics `g = u(t)^2 dt^2 + r(t)^2 γ_std` and
//! their curvature.
//!
//! Curvature is available through two independent routes:
//!
//! * [`scalar_curvature_band`] evaluates the warped-product formula
//!   `R = k(k-1)(1 - (r'/u)^2)/r^2 - 2k/(u r) · d/dt(r'/u)` (with `k = n-1`)
//!   from analytic jets (tagged metrics) or spline derivatives.
//! * [`scalar_curvature_fd`] only samples the metric components
//!   `g_tt = u^2` and `g_θθ = r^2`, differentiates them by central
//!   differences with one Richardson level and assembles `R` from the
//!   component form of the same tensor identity.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{richardson_central, richardson_one_sided};
use crate::spline::SampledFn;

/// Ambient dimension `n` with `3 <= n <= 7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(u8);

impl Dimension {
    pub const THREE: Dimension = Dimension(3);

    pub fn new(n: usize) -> Result<Self> {
        if (3..=7).contains(&n) {
            Ok(Dimension(n as u8))
        } else {
            Err(Error::DimensionOutOfRange(n))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// Dimension of the slices, `n - 1`.
    pub fn slice_dim(self) -> f64 {
        self.as_f64() - 1.0
    }

    /// Conformal Laplacian constant `c(n) = 4(n-1)/(n-2)`.
    pub fn conformal_constant(self) -> f64 {
        4.0 * (self.as_f64() - 1.0) / (self.as_f64() - 2.0)
    }

    /// Area of the unit sphere `S^{n-1}`.
    pub fn sphere_area(self) -> f64 {
        crate::numerics::unit_sphere_area(self.get() - 1)
    }
}

/// Mass profile `m(r)` of a variable-mass Schwarzschild band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassProfile {
    /// `m(r) = m0 + slope · r`.
    Affine { m0: f64, slope: f64 },
    /// Cubic smoothstep from `m_lo` at `r_lo` to `m_hi` at `r_hi` with zero
    /// end slopes. Monotone whenever `m_lo <= m_hi`.
    Smoothstep { r_lo: f64, r_hi: f64, m_lo: f64, m_hi: f64 },
}

impl MassProfile {
    /// `(m, m', m'')` at radius `r`.
    pub fn jet(&self, r: f64) -> (f64, f64, f64) {
        match *self {
            MassProfile::Affine { m0, slope } => (m0 + slope * r, slope, 0.0),
            MassProfile::Smoothstep { r_lo, r_hi, m_lo, m_hi } => {
                let w = r_hi - r_lo;
                let s = ((r - r_lo) / w).clamp(0.0, 1.0);
                let dm = m_hi - m_lo;
                let inside = r > r_lo && r < r_hi;
                let d1 = if inside { dm * 6.0 * s * (1.0 - s) / w } else { 0.0 };
                let d2 = if inside { dm * (6.0 - 12.0 * s) / (w * w) } else { 0.0 };
                (m_lo + dm * s * s * (3.0 - 2.0 * s), d1, d2)
            }
        }
    }
}

/// Analytic family a band belongs to. When present the tag, not the
/// samples, is the source of truth for values and derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandTag {
    /// `u = 1`, `r = t`.
    Euclidean,
    /// `u = 1`, `r = sinh(κt)/κ`.
    Hyperbolic { kappa: f64 },
    /// `t = r`, `u = (1 - 2m r^{2-n})^{-1/2}`.
    Schwarzschild { mass: f64 },
    /// `t = r`, `u = (1 - 2m(r) r^{2-n})^{-1/2}`.
    VariableMass(MassProfile),
    /// `t = ρ`, `r = sinh ρ`,
    /// `u^2 = 1 - 1/(1 + c0 sinh^{n-2}ρ cosh^2 ρ)`.
    HyperbolicQs { c0: f64, u0: f64, rho2: f64 },
}

/// Lapse, its derivative and the slice radius with two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub u: f64,
    pub du: f64,
    pub r: f64,
    pub dr: f64,
    pub ddr: f64,
}

/// Mean curvature (increasing-`t` normal), principal curvature and
/// intrinsic scalar curvature of the slice `Σ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceGeometry {
    pub mean_curvature: f64,
    pub principal_curvature: f64,
    pub slice_scalar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandMetric {
    n: Dimension,
    lapse: SampledFn,
    radius: SampledFn,
    tag: Option<BandTag>,
    lapse_deficit: Option<SampledFn>,
}

impl BandMetric {
    /// Sampled band without an analytic tag.
    pub fn new(n: Dimension, lapse: SampledFn, radius: SampledFn) -> Result<Self> {
        if lapse.domain() != radius.domain() {
            return Err(Error::InvalidSamples("lapse and radius are sampled on different domains".into()));
        }
        if lapse.values().iter().any(|&u| !(u > 0.0)) {
            return Err(Error::InvalidSamples("lapse must be positive".into()));
        }
        if radius.values().iter().any(|&r| !(r > 0.0)) {
            return Err(Error::InvalidSamples("slice radius must be positive".into()));
        }
        Ok(BandMetric { n, lapse, radius, tag: None, lapse_deficit: None })
    }

    pub fn from_fns<U, R>(n: Dimension, grid: Vec<f64>, u: U, r: R) -> Result<Self>
    where
        U: Fn(f64) -> f64,
        R: Fn(f64) -> f64,
    {
        let lapse = SampledFn::from_fn(grid.clone(), u)?;
        let radius = SampledFn::from_fn(grid, r)?;
        Self::new(n, lapse, radius)
    }

    /// Band of an analytic family sampled on `points` uniform nodes.
    pub fn tagged(n: Dimension, tag: BandTag, a: f64, b: f64, points: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::Parameter("band domain must satisfy a < b".into()));
        }
        let grid = SampledFn::uniform_grid(a, b, points.max(4));
        let mut jets = Vec::with_capacity(grid.len());
        for &t in &grid {
            let j = analytic_jet(n, &tag, t)?;
            jets.push(j);
        }
        let lapse = SampledFn::new(grid.clone(), jets.iter().map(|j| j.u).collect())?;
        let radius = SampledFn::new(grid, jets.iter().map(|j| j.r).collect())?;
        let mut band = Self::new(n, lapse, radius)?;
        band.tag = Some(tag);
        Ok(band)
    }

    pub fn euclidean(n: Dimension, a: f64, b: f64, points: usize) -> Result<Self> {
        Self::tagged(n, BandTag::Euclidean, a, b, points)
    }

    pub fn hyperbolic(n: Dimension, kappa: f64, a: f64, b: f64, points: usize) -> Result<Self> {
        Self::tagged(n, BandTag::Hyperbolic { kappa }, a, b, points)
    }

    pub fn schwarzschild(n: Dimension, mass: f64, r_lo: f64, r_hi: f64, points: usize) -> Result<Self> {
        Self::tagged(n, BandTag::Schwarzschild { mass }, r_lo, r_hi, points)
    }

    pub fn variable_mass(n: Dimension, profile: MassProfile, r_lo: f64, r_hi: f64, points: usize) -> Result<Self> {
        Self::tagged(n, BandTag::VariableMass(profile), r_lo, r_hi, points)
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }

    pub fn lapse(&self) -> &SampledFn {
        &self.lapse
    }

    pub fn radius(&self) -> &SampledFn {
        &self.radius
    }

    pub fn tag(&self) -> Option<&BandTag> {
        self.tag.as_ref()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.lapse.domain()
    }

    pub fn grid(&self) -> &[f64] {
        self.lapse.grid()
    }

    /// Attaches accurately resolved samples of `u - 1`, used where the
    /// lapse itself is too close to one for `f64` to resolve its decay.
    pub fn with_lapse_deficit(mut self, deficit: SampledFn) -> Result<Self> {
        if deficit.domain() != self.domain() {
            return Err(Error::InvalidSamples("lapse deficit sampled on a different domain".into()));
        }
        self.lapse_deficit = Some(deficit);
        Ok(self)
    }

    /// Band interpolating known jets with quintic Hermite splines, so the
    /// curvature at the nodes is exact up to rounding.
    pub fn from_jets(n: Dimension, grid: Vec<f64>, jets: &[Jet]) -> Result<Self> {
        if grid.len() != jets.len() {
            return Err(Error::InvalidSamples("grid and jets differ in length".into()));
        }
        let lapse = SampledFn::hermite(grid.clone(), jets.iter().map(|j| j.u).collect(), jets.iter().map(|j| j.du).collect(), None)?;
        let radius = SampledFn::hermite(
            grid,
            jets.iter().map(|j| j.r).collect(),
            jets.iter().map(|j| j.dr).collect(),
            Some(jets.iter().map(|j| j.ddr).collect()),
        )?;
        Self::new(n, lapse, radius)
    }

    /// Drops the analytic tag so every query goes through the splines.
    pub fn untagged(&self) -> Self {
        BandMetric { tag: None, ..self.clone() }
    }

    /// The sub-band over `[lo, hi]` resampled on `points` uniform nodes.
    pub fn restricted(&self, lo: f64, hi: f64, points: usize) -> Result<Self> {
        self.check_domain(lo)?;
        self.check_domain(hi)?;
        if let Some(tag) = self.tag {
            return Self::tagged(self.n, tag, lo, hi, points);
        }
        let grid = SampledFn::uniform_grid(lo, hi, points.max(4));
        let lapse = SampledFn::new(grid.clone(), grid.iter().map(|&t| self.lapse.eval(t)).collect::<Result<_>>()?)?;
        let radius = SampledFn::new(grid.clone(), grid.iter().map(|&t| self.radius.eval(t)).collect::<Result<_>>()?)?;
        let mut band = Self::new(self.n, lapse, radius)?;
        if let Some(d) = &self.lapse_deficit {
            let vals = grid.iter().map(|&t| d.eval(t)).collect::<Result<_>>()?;
            band.lapse_deficit = Some(SampledFn::new(grid, vals)?);
        }
        Ok(band)
    }

    /// The metric `λ^2 g` (sampled; the analytic tag is dropped).
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let lapse = self.lapse.map(|_, u| lambda * u)?;
        let radius = self.radius.map(|_, r| lambda * r)?;
        Self::new(self.n, lapse, radius)
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let (a, b) = self.domain();
        let slack = 1e-12 * (b - a).max(1.0);
        if t >= a - slack && t <= b + slack {
            Ok(())
        } else {
            Err(Error::Domain { what: "slice parameter", value: t })
        }
    }

    /// Lapse and radius jets at `t`.
    pub fn jet(&self, t: f64) -> Result<Jet> {
        self.check_domain(t)?;
        match &self.tag {
            Some(tag) => analytic_jet(self.n, tag, t),
            None => {
                let (u, du, _) = self.lapse.jet(t)?;
                let (r, dr, ddr) = self.radius.jet(t)?;
                Ok(Jet { u, du, r, dr, ddr })
            }
        }
    }

    /// Values of `u` and `r` only (no derivatives); used by the
    /// finite-difference oracle.
    pub fn components(&self, t: f64) -> Result<(f64, f64)> {
        match &self.tag {
            Some(tag) => {
                self.check_domain(t)?;
                let j = analytic_jet(self.n, tag, t)?;
                Ok((j.u, j.r))
            }
            None => Ok((self.lapse.eval(t)?, self.radius.eval(t)?)),
        }
    }

    /// `u(t) - 1`, resolved without cancellation where possible.
    pub fn lapse_deficit(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        match self.tag {
            Some(BandTag::Euclidean) | Some(BandTag::Hyperbolic { .. }) => Ok(0.0),
            Some(BandTag::Schwarzschild { mass }) => {
                let f = 1.0 - 2.0 * mass * t.powf(2.0 - self.n.as_f64());
                let s = f.sqrt();
                Ok((1.0 - f) / (s * (1.0 + s)))
            }
            Some(BandTag::HyperbolicQs { c0, .. }) => {
                let phi = qs_phi(self.n, c0, t);
                let u = (1.0 - 1.0 / (1.0 + phi)).sqrt();
                Ok(-(1.0 / (1.0 + phi)) / (1.0 + u))
            }
            _ => match &self.lapse_deficit {
                Some(d) => d.eval(t),
                None => Ok(self.lapse.eval(t)? - 1.0),
            },
        }
    }

    /// Proper length `∫ u dt` between two slices.
    pub fn proper_distance(&self, lo: f64, hi: f64) -> Result<f64> {
        self.lapse.integral(lo, hi)
    }

    /// Mean curvature of the bottom slice with respect to the normal
    /// pointing into the band.
    pub fn lower_mean_curvature(&self) -> Result<f64> {
        Ok(slice_geometry(self, self.domain().0)?.mean_curvature)
    }

    /// Mean curvature of the top slice with respect to the outward normal.
    pub fn upper_mean_curvature(&self) -> Result<f64> {
        Ok(slice_geometry(self, self.domain().1)?.mean_curvature)
    }

    pub fn lower_radius(&self) -> f64 {
        self.radius.values()[0]
    }

    pub fn upper_radius(&self) -> f64 {
        *self.radius.values().last().unwrap_or(&f64::NAN)
    }
}

pub(crate) fn qs_phi(n: Dimension, c0: f64, rho: f64) -> f64 {
    c0 * rho.sinh().powi(n.get() as i32 - 2) * rho.cosh().powi(2)
}

fn analytic_jet(n: Dimension, tag: &BandTag, t: f64) -> Result<Jet> {
    let nf = n.as_f64();
    let jet = match *tag {
        BandTag::Euclidean => Jet { u: 1.0, du: 0.0, r: t, dr: 1.0, ddr: 0.0 },
        BandTag::Hyperbolic { kappa } => Jet {
            u: 1.0,
            du: 0.0,
            r: (kappa * t).sinh() / kappa,
            dr: (kappa * t).cosh(),
            ddr: kappa * (kappa * t).sinh(),
        },
        BandTag::Schwarzschild { mass } => schwarzschild_jet(nf, t, (mass, 0.0, 0.0))?,
        BandTag::VariableMass(profile) => schwarzschild_jet(nf, t, profile.jet(t))?,
        BandTag::HyperbolicQs { c0, .. } => {
            let phi = qs_phi(n, c0, t);
            let u2 = 1.0 - 1.0 / (1.0 + phi);
            if !(u2 > 0.0) {
                return Err(Error::Domain { what: "hyperbolic quasi-spherical slice (u^2 <= 0)", value: t });
            }
            let u = u2.sqrt();
            let log_phi_prime = (nf - 2.0) / t.tanh() + 2.0 * t.tanh();
            Jet {
                u,
                du: u * log_phi_prime / (2.0 * (1.0 + phi)),
                r: t.sinh(),
                dr: t.cosh(),
                ddr: t.sinh(),
            }
        }
    };
    if !(jet.u > 0.0 && jet.r > 0.0) || !jet.u.is_finite() {
        return Err(Error::Domain { what: "analytic band slice", value: t });
    }
    Ok(jet)
}

fn schwarzschild_jet(nf: f64, r: f64, (m, dm, _): (f64, f64, f64)) -> Result<Jet> {
    let f = 1.0 - 2.0 * m * r.powf(2.0 - nf);
    if !(f > 0.0) {
        return Err(Error::Domain { what: "Schwarzschild slice inside the horizon", value: r });
    }
    let df = -2.0 * dm * r.powf(2.0 - nf) - 2.0 * m * (2.0 - nf) * r.powf(1.0 - nf);
    Ok(Jet { u: f.powf(-0.5), du: -0.5 * f.powf(-1.5) * df, r, dr: 1.0, ddr: 0.0 })
}

/// Slice quantities at `t` with the increasing-`t` orientation.
pub fn slice_geometry(g: &BandMetric, t: f64) -> Result<SliceGeometry> {
    let j = g.jet(t)?;
    let k = g.n.slice_dim();
    let principal = j.dr / (j.u * j.r);
    Ok(SliceGeometry {
        mean_curvature: k * principal,
        principal_curvature: principal,
        slice_scalar: k * (k - 1.0) / (j.r * j.r),
    })
}

/// Scalar curvature at a single slice from the closed formula.
pub fn scalar_curvature_at(g: &BandMetric, t: f64) -> Result<f64> {
    let j = g.jet(t)?;
    Ok(scalar_from_jet(g.n, &j))
}

pub(crate) fn scalar_from_jet(n: Dimension, j: &Jet) -> f64 {
    let k = n.slice_dim();
    let a = j.dr / j.u;
    let da = j.ddr / j.u - j.dr * j.du / (j.u * j.u);
    k * (k - 1.0) * (1.0 - a * a) / (j.r * j.r) - 2.0 * k * da / (j.u * j.r)
}

/// Scalar curvature profile on the band's grid from the closed formula.
pub fn scalar_curvature_band(g: &BandMetric) -> Result<SampledFn> {
    let mut values = Vec::with_capacity(g.grid().len());
    for &t in g.grid() {
        let r = scalar_curvature_at(g, t)?;
        if !r.is_finite() {
            return Err(Error::Resolution(alloc::format!("non-finite scalar curvature at t = {t}")));
        }
        values.push(r);
    }
    SampledFn::new(g.grid().to_vec(), values)
}

/// Scalar curvature assembled from finite differences of the metric
/// components `φ = u^2`, `ψ = r^2`:
///
/// `R = k(k-1)/ψ - k(k-1)ψ'^2/(4ψ^2 φ) - kψ''/(ψφ) + kψ'(ψ'φ + ψφ')/(2ψ^2φ^2)`.
pub fn scalar_curvature_fd(g: &BandMetric, h: f64) -> Result<SampledFn> {
    let (a, b) = g.domain();
    if !(h > 0.0) || 6.0 * h > b - a {
        return Err(Error::Resolution(alloc::format!("finite-difference step {h} too large for the band")));
    }
    let mut values = Vec::with_capacity(g.grid().len());
    for &t in g.grid() {
        let coarse = fd_scalar_once(g, t, h, a, b)?;
        let fine = fd_scalar_once(g, t, 0.5 * h, a, b)?;
        let r = (4.0 * fine - coarse) / 3.0;
        let disagreement = (fine - coarse).abs();
        if !r.is_finite() || disagreement > 1e-2 * (1.0 + r.abs()) {
            return Err(Error::Resolution(alloc::format!(
                "Richardson disagreement {disagreement:e} at t = {t} with step {h}"
            )));
        }
        values.push(r);
    }
    SampledFn::new(g.grid().to_vec(), values)
}

fn fd_scalar_once(g: &BandMetric, t: f64, h: f64, a: f64, b: f64) -> Result<f64> {
    let k = g.n.slice_dim();
    let phi = |s: f64| g.components(s).map(|(u, _)| u * u);
    let psi = |s: f64| g.components(s).map(|(_, r)| r * r);
    let (p0, q0) = (phi(t)?, psi(t)?);
    let (dp, dq, ddq) = if t - h >= a && t + h <= b {
        let (pm, pp) = (phi(t - h)?, phi(t + h)?);
        let (qm, qp) = (psi(t - h)?, psi(t + h)?);
        ((pp - pm) / (2.0 * h), (qp - qm) / (2.0 * h), (qp - 2.0 * q0 + qm) / (h * h))
    } else {
        let s = if t - h < a { 1.0 } else { -1.0 };
        let p1 = phi(t + s * h)?;
        let p2 = phi(t + 2.0 * s * h)?;
        let q1 = psi(t + s * h)?;
        let q2 = psi(t + 2.0 * s * h)?;
        let q3 = psi(t + 3.0 * s * h)?;
        (
            s * (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * h),
            s * (-3.0 * q0 + 4.0 * q1 - q2) / (2.0 * h),
            (2.0 * q0 - 5.0 * q1 + 4.0 * q2 - q3) / (h * h),
        )
    };
    Ok(k * (k - 1.0) / q0 - k * (k - 1.0) * dq * dq / (4.0 * q0 * q0 * p0) - k * ddq / (q0 * p0)
        + k * dq * (dq * p0 + q0 * dp) / (2.0 * q0 * q0 * p0 * p0))
}

/// Per-slice curvature data and the defect of the Gauss identity
/// `R = R̄ - 2 u^{-1} ∂_t H - H^2 - |A|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub t: Vec<f64>,
    pub mean_curvature: Vec<f64>,
    pub principal_curvature: Vec<f64>,
    pub slice_scalar: Vec<f64>,
    pub scalar: Vec<f64>,
    pub gauss_residual: Vec<f64>,
}

impl CurvatureReport {
    pub fn max_gauss_residual(&self) -> f64 {
        self.gauss_residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn min_scalar(&self) -> f64 {
        self.scalar.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_scalar(&self) -> f64 {
        self.scalar.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluates slice geometry and scalar curvature on the band grid. The
/// derivative `∂_t H` in the Gauss identity is taken by Richardson
/// differences of the mean curvature itself.
pub fn curvature_report(g: &BandMetric) -> Result<CurvatureReport> {
    let (a, b) = g.domain();
    let h = (1e-4 * (b - a)).min(1e-3);
    let k = g.n.slice_dim();
    let mean = |s: f64| slice_geometry(g, s).map(|sg| sg.mean_curvature).unwrap_or(f64::NAN);
    let len = g.grid().len();
    let mut rep = CurvatureReport {
        t: Vec::with_capacity(len),
        mean_curvature: Vec::with_capacity(len),
        principal_curvature: Vec::with_capacity(len),
        slice_scalar: Vec::with_capacity(len),
        scalar: Vec::with_capacity(len),
        gauss_residual: Vec::with_capacity(len),
    };
    for &t in g.grid() {
        let sg = slice_geometry(g, t)?;
        let j = g.jet(t)?;
        let r = scalar_from_jet(g.n, &j);
        let (dh, _, _) = if t - h >= a && t + h <= b {
            richardson_central(mean, t, h)
        } else {
            // The one-sided stencil is only third order after extrapolation.
            richardson_one_sided(mean, t, 0.1 * h, if t - h < a { 1.0 } else { -1.0 })
        };
        let gauss = sg.slice_scalar
            - 2.0 * dh / j.u
            - sg.mean_curvature * sg.mean_curvature
            - k * sg.principal_curvature * sg.principal_curvature;
        rep.t.push(t);
        rep.mean_curvature.push(sg.mean_curvature);
        rep.principal_curvature.push(sg.principal_curvature);
        rep.slice_scalar.push(sg.slice_scalar);
        rep.scalar.push(r);
        rep.gauss_residual.push(r - gauss);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n3() -> Dimension {
        Dimension::THREE
    }

    #[test]
    fn dimension_range() {
        assert!(Dimension::new(2).is_err());
        assert!(Dimension::new(8).is_err());
        assert_eq!(Dimension::new(7).unwrap().get(), 7);
        assert!((Dimension::new(3).unwrap().conformal_constant() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn euclidean_slice() {
        let g = BandMetric::euclidean(n3(), 1.0, 3.0, 101).unwrap();
        let s = slice_geometry(&g, 2.0).unwrap();
        assert!((s.mean_curvature - 1.0).abs() < 1e-15);
        assert!((s.slice_scalar - 0.5).abs() < 1e-15);
        assert!(matches!(slice_geometry(&g, 3.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn schwarzschild_slice() {
        let g = BandMetric::schwarzschild(n3(), 1.0, 3.0, 10.0, 201).unwrap();
        let s = slice_geometry(&g, 4.0).unwrap();
        // (n-1) sqrt(1 - 2m/r) / r
        assert!((s.mean_curvature - 0.5 * 0.5f64.sqrt()).abs() < 1e-14);
        assert!((s.mean_curvature - 0.353_553_390_593_273_8).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_slice() {
        let g = BandMetric::hyperbolic(n3(), 1.0, 0.5, 2.0, 101).unwrap();
        let s = slice_geometry(&g, 1.0).unwrap();
        assert!((s.mean_curvature - 2.0 / 1.0f64.tanh()).abs() < 1e-14);
    }

    #[test]
    fn model_curvatures() {
        let flat = BandMetric::euclidean(n3(), 1.0, 2.0, 51).unwrap();
        assert!(scalar_curvature_band(&flat).unwrap().values().iter().all(|r| r.abs() < 1e-13));
        let schw = BandMetric::schwarzschild(Dimension::new(5).unwrap(), 0.7, 2.0, 4.0, 51).unwrap();
        assert!(scalar_curvature_band(&schw).unwrap().values().iter().all(|r| r.abs() < 1e-11));
        let hyp = BandMetric::hyperbolic(Dimension::new(4).unwrap(), 2.0, 0.3, 1.5, 51).unwrap();
        // -n(n-1)κ^2
        assert!(scalar_curvature_band(&hyp).unwrap().values().iter().all(|r| (r + 48.0).abs() < 1e-10));
    }

    #[test]
    fn variable_mass_curvature() {
        // 2(n-1) m'(r) / r^{n-1} with m = r/10
        let g = BandMetric::variable_mass(n3(), MassProfile::Affine { m0: 0.0, slope: 0.1 }, 1.0, 2.0, 101).unwrap();
        let r = scalar_curvature_at(&g, 1.5).unwrap();
        assert!((r - 0.4 / (1.5 * 1.5)).abs() < 1e-12);
        let fd = scalar_curvature_fd(&g, 1e-3).unwrap();
        for (&t, v) in fd.grid().iter().zip(fd.values()) {
            assert!((v - 0.4 / (t * t)).abs() < 1e-5);
        }
    }

    #[test]
    fn fd_oracle_agrees_with_engine() {
        let n = Dimension::new(4).unwrap();
        // Strictly inside the smoothstep ramp, where the profile is analytic.
        let g = BandMetric::variable_mass(
            n,
            MassProfile::Smoothstep { r_lo: 2.0, r_hi: 3.0, m_lo: 0.5, m_hi: 1.0 },
            2.05,
            2.95,
            91,
        )
        .unwrap();
        let exact = scalar_curvature_band(&g).unwrap();
        let fd = scalar_curvature_fd(&g, 1e-3).unwrap();
        for (a, b) in exact.values().iter().zip(fd.values()) {
            assert!((a - b).abs() < 1e-5 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn fd_step_too_large() {
        let g = BandMetric::euclidean(n3(), 1.0, 2.0, 11).unwrap();
        assert!(matches!(scalar_curvature_fd(&g, 0.5), Err(Error::Resolution(_))));
    }

    #[test]
    fn gauss_identity_on_tagged_band() {
        let g = BandMetric::tagged(n3(), BandTag::HyperbolicQs { c0: 1.0, u0: 0.0, rho2: 0.5 }, 0.5, 3.0, 201).unwrap();
        let rep = curvature_report(&g).unwrap();
        assert!(rep.max_gauss_residual() < 1e-6, "{}", rep.max_gauss_residual());
    }

    #[test]
    fn sampled_band_matches_tag() {
        let g = BandMetric::schwarzschild(n3(), 1.0, 3.0, 10.0, 2001).unwrap();
        let s = g.untagged();
        for &t in &[3.0, 4.1, 7.77, 10.0] {
            let a = slice_geometry(&g, t).unwrap().mean_curvature;
            let b = slice_geometry(&s, t).unwrap().mean_curvature;
            assert!((a - b).abs() < 1e-8);
        }
        let rep = curvature_report(&s).unwrap();
        assert!(rep.max_gauss_residual() < 1e-4, "{}", rep.max_gauss_residual());
    }

    #[test]
    fn deficit_is_resolved_far_out() {
        let g = BandMetric::tagged(n3(), BandTag::HyperbolicQs { c0: 1.0, u0: 0.0, rho2: 1.0 }, 1.0, 30.0, 101).unwrap();
        let w = g.lapse_deficit(30.0).unwrap();
        // u - 1 ≈ -1/(2Φ), Φ ≈ e^{3ρ}/8
        assert!(w < 0.0 && (w / (-4.0 * (-90.0f64).exp()) - 1.0).abs() < 1e-6);
    }

    proptest::proptest! {
        #[test]
        fn scaling_covariance(lambda in 0.2f64..5.0, m in 0.1f64..1.0) {
            let g = BandMetric::variable_mass(n3(), MassProfile::Affine { m0: m, slope: 0.05 }, 3.0, 6.0, 301)
                .unwrap();
            let s = g.scaled(lambda).unwrap();
            for &t in &[3.5, 4.5, 5.5] {
                let r0 = scalar_curvature_at(&g, t).unwrap();
                let r1 = scalar_curvature_at(&s, t).unwrap();
                proptest::prop_assert!((r1 * lambda * lambda - r0).abs() < 1e-6 * (1.0 + r0.abs()));
                let h0 = slice_geometry(&g, t).unwrap().mean_curvature;
                let h1 = slice_geometry(&s, t).unwrap().mean_curvature;
                proptest::prop_assert!((h1 * lambda - h0).abs() < 1e-8);
            }
        }
    }
}
