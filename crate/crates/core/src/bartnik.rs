//! Bartnik boundary data: round spheres and axisymmetric 2-spheres, plus
//! the isometric embedding of the latter into `R^3` as surfaces of
//! revolution.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::spline::SampledFn;

/// Round data `(S^{n-1}, r^2 γ_std, H)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundBartnikData {
    pub n: Dimension,
    pub radius: f64,
    pub mean_curvature: f64,
}

impl RoundBartnikData {
    pub fn new(n: Dimension, radius: f64, mean_curvature: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(alloc::format!("area radius must be positive, got {radius}")));
        }
        if !mean_curvature.is_finite() {
            return Err(Error::Parameter("mean curvature must be finite".into()));
        }
        Ok(RoundBartnikData { n, radius, mean_curvature })
    }

    /// Round data in dimension three.
    pub fn sphere(radius: f64, mean_curvature: f64) -> Result<Self> {
        Self::new(Dimension::THREE, radius, mean_curvature)
    }

    pub fn area(&self) -> f64 {
        self.n.sphere_area() * self.radius.powi(self.n.get() as i32 - 1)
    }

    /// Mean curvature of the round sphere of this radius in flat space.
    pub fn euclidean_mean_curvature(&self) -> f64 {
        self.n.slice_dim() / self.radius
    }

    /// The data of `(λ^2 γ, H/λ)`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.n, lambda * self.radius, self.mean_curvature / lambda)
    }
}

/// Axisymmetric data on `S^2`: `γ = f(θ)^2 dθ^2 + h(θ)^2 dφ^2` with a
/// mean-curvature profile `H(θ)`, stored on a uniform θ-grid with an odd
/// number of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymBartnikData {
    theta: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
    h: Vec<f64>,
    dh: Vec<f64>,
    ddh: Vec<f64>,
    mean_curvature: Vec<f64>,
}

/// Relative tolerance for the pole-closure conditions.
const POLE_TOL: f64 = 1e-6;

impl AxisymBartnikData {
    /// Samples analytic profiles. `f_jet(θ) = (f, f')`,
    /// `h_jet(θ) = (h, h', h'')`.
    pub fn from_profiles<F, G, M>(f_jet: F, h_jet: G, mean: M, points: usize) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64),
        G: Fn(f64) -> (f64, f64, f64),
        M: Fn(f64) -> f64,
    {
        let theta = uniform_theta(points)?;
        let mut d = AxisymBartnikData {
            theta: theta.clone(),
            f: Vec::new(),
            df: Vec::new(),
            h: Vec::new(),
            dh: Vec::new(),
            ddh: Vec::new(),
            mean_curvature: theta.iter().map(|&t| mean(t)).collect(),
        };
        for &t in &theta {
            let (f, df) = f_jet(t);
            let (h, dh, ddh) = h_jet(t);
            d.f.push(f);
            d.df.push(df);
            d.h.push(h);
            d.dh.push(dh);
            d.ddh.push(ddh);
        }
        d.validate()?;
        Ok(d)
    }

    /// Builds data from sampled profiles on an arbitrary strictly
    /// increasing grid covering `[0, π]`. Derivatives come from cubic
    /// splines and everything is resampled onto a uniform grid.
    pub fn from_samples(theta: Vec<f64>, f: Vec<f64>, h: Vec<f64>, mean: Vec<f64>) -> Result<Self> {
        if theta.len() < 5 {
            return Err(Error::InvalidSamples("axisymmetric profiles need at least five samples".into()));
        }
        let (a, b) = (theta[0], theta[theta.len() - 1]);
        if a.abs() > 1e-9 || (b - PI).abs() > 1e-9 {
            return Err(Error::InvalidSamples("profile grid must cover [0, π]".into()));
        }
        let fs = SampledFn::new(theta.clone(), f)?;
        let hs = SampledFn::new(theta.clone(), h)?;
        let ms = SampledFn::new(theta.clone(), mean)?;
        let points = theta.len() | 1;
        let grid = uniform_theta(points)?;
        let mut d = AxisymBartnikData {
            theta: grid.clone(),
            f: Vec::new(),
            df: Vec::new(),
            h: Vec::new(),
            dh: Vec::new(),
            ddh: Vec::new(),
            mean_curvature: Vec::new(),
        };
        for &t in &grid {
            let (f, df, _) = fs.jet(t)?;
            let (h, dh, ddh) = hs.jet(t)?;
            d.f.push(f);
            d.df.push(df);
            d.h.push(h);
            d.dh.push(dh);
            d.ddh.push(ddh);
            d.mean_curvature.push(ms.eval(t)?);
        }
        d.validate()?;
        Ok(d)
    }

    /// The round sphere of area radius `r` with constant mean curvature.
    pub fn round(radius: f64, mean_curvature: f64, points: usize) -> Result<Self> {
        Self::from_profiles(
            |_| (radius, 0.0),
            |t| (radius * t.sin(), radius * t.cos(), -radius * t.sin()),
            |_| mean_curvature,
            points,
        )
    }

    fn validate(&self) -> Result<()> {
        let last = self.theta.len() - 1;
        let all = self.f.iter().chain(&self.df).chain(&self.h).chain(&self.dh).chain(&self.ddh);
        if all.chain(&self.mean_curvature).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples("non-finite profile value".into()));
        }
        if let Some(i) = self.f.iter().position(|&f| !(f > 0.0)) {
            return Err(Error::InvalidSamples(alloc::format!("f must be positive (theta = {})", self.theta[i])));
        }
        if let Some(i) = (1..last).find(|&i| !(self.h[i] > 0.0)) {
            return Err(Error::InvalidSamples(alloc::format!(
                "h must be positive away from the poles (theta = {})",
                self.theta[i]
            )));
        }
        let scale = self.f[0].max(self.f[last]);
        let closure = [
            self.h[0].abs(),
            self.h[last].abs(),
            (self.dh[0] - self.f[0]).abs(),
            (self.dh[last] + self.f[last]).abs(),
        ];
        if closure.iter().any(|&c| c > POLE_TOL * scale) {
            return Err(Error::InvalidSamples(
                "pole closure violated: need h = 0, h'(0) = f(0), h'(π) = -f(π)".into(),
            ));
        }
        Ok(())
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn mean_curvature(&self) -> &[f64] {
        &self.mean_curvature
    }

    pub fn spacing(&self) -> f64 {
        self.theta[1] - self.theta[0]
    }

    /// Replaces the mean-curvature profile.
    pub fn with_mean_curvature<M: Fn(f64) -> f64>(&self, mean: M) -> Self {
        AxisymBartnikData { mean_curvature: self.theta.iter().map(|&t| mean(t)).collect(), ..self.clone() }
    }

    /// `2π ∫ F(θ) f h dθ` by composite Simpson.
    pub fn integrate<F: Fn(usize) -> f64>(&self, integrand: F) -> Result<f64> {
        let vals: Vec<f64> = (0..self.theta.len()).map(|i| integrand(i) * self.f[i] * self.h[i]).collect();
        Ok(2.0 * PI * crate::numerics::simpson(&vals, self.spacing())?)
    }

    pub fn area(&self) -> Result<f64> {
        self.integrate(|_| 1.0)
    }

    /// Gauss curvature `K = -(h'' f - h' f')/(f^3 h)`; pole values by
    /// quadratic extrapolation from the interior.
    pub fn gauss_curvature(&self) -> Vec<f64> {
        let mut k: Vec<f64> = (0..self.theta.len())
            .map(|i| {
                let f = self.f[i];
                -(self.ddh[i] * f - self.dh[i] * self.df[i]) / (f * f * f * self.h[i])
            })
            .collect();
        fill_poles(&mut k);
        k
    }

    /// Area radius when the metric is exactly round.
    pub fn round_radius(&self) -> Option<f64> {
        let r = self.f[0];
        let round = self.f.iter().all(|&f| (f - r).abs() <= 1e-12 * r)
            && self.theta.iter().zip(&self.h).all(|(&t, &h)| (h - r * t.sin()).abs() <= 1e-12 * r);
        round.then_some(r)
    }
}

fn uniform_theta(points: usize) -> Result<Vec<f64>> {
    if points < 5 || points.is_multiple_of(2) {
        return Err(Error::InvalidSamples("θ-grid needs an odd number (>= 5) of nodes".into()));
    }
    Ok(SampledFn::uniform_grid(0.0, PI, points))
}

/// Replaces the two pole entries by quadratic extrapolation from the
/// three nearest interior nodes.
fn fill_poles(v: &mut [f64]) {
    let n = v.len();
    v[0] = 3.0 * v[1] - 3.0 * v[2] + v[3];
    v[n - 1] = 3.0 * v[n - 2] - 3.0 * v[n - 3] + v[n - 4];
}

/// Either kind of Bartnik data.
#[derive(Debug, Clone, PartialEq)]
pub enum BartnikData {
    Round(RoundBartnikData),
    Axisym(AxisymBartnikData),
}

impl BartnikData {
    pub fn dimension(&self) -> Dimension {
        match self {
            BartnikData::Round(d) => d.n,
            BartnikData::Axisym(_) => Dimension::THREE,
        }
    }
}

impl From<RoundBartnikData> for BartnikData {
    fn from(d: RoundBartnikData) -> Self {
        BartnikData::Round(d)
    }
}

impl From<AxisymBartnikData> for BartnikData {
    fn from(d: AxisymBartnikData) -> Self {
        BartnikData::Axisym(d)
    }
}

/// Mean curvature `H_0(θ)` of the surface of revolution with profile
/// `ρ = h(θ)`, `z' = sqrt(f^2 - h'^2)`, which is isometric to `γ`.
pub fn embed_axisym(data: &AxisymBartnikData) -> Result<SampledFn> {
    let len = data.theta.len();
    let mut defect_min = (0.0, f64::INFINITY);
    let mut mean = Vec::with_capacity(len);
    for i in 0..len {
        let (f, df, h, dh, ddh) = (data.f[i], data.df[i], data.h[i], data.dh[i], data.ddh[i]);
        let defect = f * f - dh * dh;
        if defect < defect_min.1 {
            defect_min = (data.theta[i], defect);
        }
        // At the poles the closure check already bounds h' - f; sampled
        // profiles overshoot there by spline error.
        let pole = i == 0 || i == len - 1;
        if !pole && defect < -1e-10 * f * f {
            return Err(Error::NotEmbeddable { theta: data.theta[i], defect });
        }
        if pole {
            mean.push(0.0);
            continue;
        }
        let w = defect.max(0.0).sqrt();
        let meridian = (dh * df - ddh * f) / (w * f * f);
        let parallel = w / (h * f);
        mean.push(meridian + parallel);
    }
    let gauss = data.gauss_curvature();
    if let Some(i) = gauss.iter().position(|&k| !(k > 0.0)) {
        return Err(Error::NonPositiveGaussCurvature { theta: data.theta[i], curvature: gauss[i] });
    }
    fill_poles(&mut mean);
    if mean.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotEmbeddable { theta: defect_min.0, defect: defect_min.1 });
    }
    SampledFn::new(data.theta.clone(), mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_embeds_with_constant_curvature() {
        for &r in &[1.0, 3.0] {
            let d = AxisymBartnikData::round(r, 0.0, 201).unwrap();
            let h0 = embed_axisym(&d).unwrap();
            for v in h0.values() {
                assert!((v - 2.0 / r).abs() < 1e-8, "{v}");
            }
        }
    }

    #[test]
    fn pole_closure_is_enforced() {
        let bad = AxisymBartnikData::from_profiles(|_| (1.0, 0.0), |t| (0.9 * t.sin(), 0.9 * t.cos(), -0.9 * t.sin()), |_| 1.0, 101);
        assert!(matches!(bad, Err(Error::InvalidSamples(_))));
        assert!(AxisymBartnikData::round(1.0, 1.0, 100).is_err());
    }

    #[test]
    fn sampled_sphere_embeds_despite_pole_overshoot() {
        let theta: Vec<f64> = (0..=200).map(|i| PI * i as f64 / 200.0).collect();
        let h = theta.iter().map(|t| t.sin()).collect();
        let d = AxisymBartnikData::from_samples(theta, alloc::vec![1.0; 201], h, alloc::vec![2.0; 201]).unwrap();
        let mean = embed_axisym(&d).unwrap();
        let err: Vec<f64> = mean.values().iter().map(|m| (m - 2.0).abs()).collect();
        // Pole values are extrapolated from the interior.
        assert!(err[1..200].iter().all(|&e| e < 5e-5), "{err:?}");
        assert!(err[0] < 5e-4 && err[200] < 5e-4);
    }

    #[test]
    fn non_embeddable_profile() {
        // Pole closure holds but |h'| exceeds f on the flanks.
        let d = AxisymBartnikData::from_profiles(
            |_| (1.0, 0.0),
            |t| {
                let (s, c) = (t.sin(), t.cos());
                (s * (1.0 + 0.4 * s * s), c * (1.0 + 1.2 * s * s), -s * (1.0 + 1.2 * s * s) + 2.4 * s * c * c)
            },
            |_| 1.0,
            101,
        )
        .unwrap();
        assert!(matches!(embed_axisym(&d), Err(Error::NotEmbeddable { .. })));
    }

    #[test]
    fn dumbbell_has_negative_gauss_curvature() {
        // Surface of revolution with a waist: ρ = sinθ (1 - 0.45 sin^2θ), z' = sinθ.
        let rho = |t: f64| t.sin() * (1.0 - 0.45 * t.sin().powi(2));
        let drho = |t: f64| {
            let (s, c) = (t.sin(), t.cos());
            c * (1.0 - 1.35 * s * s)
        };
        let ddrho = |t: f64| {
            let (s, c) = (t.sin(), t.cos());
            -s * (1.0 - 1.35 * s * s) - 2.7 * s * c * c
        };
        let d = AxisymBartnikData::from_profiles(
            |t| {
                let f = (drho(t).powi(2) + t.sin().powi(2)).sqrt();
                let df = (drho(t) * ddrho(t) + t.sin() * t.cos()) / f;
                (f, df)
            },
            |t| (rho(t), drho(t), ddrho(t)),
            |_| 1.0,
            201,
        )
        .unwrap();
        assert!(matches!(embed_axisym(&d), Err(Error::NonPositiveGaussCurvature { .. })));
    }
}
