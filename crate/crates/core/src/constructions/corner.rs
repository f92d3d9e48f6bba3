//! Gluing two bands along a common slice and smoothing the resulting corner.
//!
//! Both bands are rewritten in the proper-distance chart `s` centred on the
//! interface (`s < 0` below, `s > 0` above), where the glued metric is
//! `ds^2 + r(s)^2 γ_std` with `r` continuous and `r'` jumping by
//! `r(H₊ - H₋)/(n-1)`. The smoothed radius is
//! `r_δ = r + χ(s/δ)(r * φ_ε - r)` with `ε = δ^2/100`, a mollifier `φ` equal
//! to one on `[-1/3, 1/3]` and a cutoff `χ` equal to one on `[-1/4, 1/4]`
//! and to zero outside `[-1/2, 1/2]`.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use super::Chart;
use crate::error::{Error, Result};
use crate::geometry::{BandMetric, Jet};
use crate::numerics::{gauss_legendre, integrate_gl, smooth_step};

/// Relative tolerance on the interface radii.
const RADIUS_TOL: f64 = 1e-12;

/// Exponent in the mollifier transition `S(((1 - |x|)·3/2)^k)`, chosen so
/// that the mollifier has unit integral.
const MOLLIFIER_EXPONENT: f64 = 2.534_980_819_366_85;

/// Gauss–Legendre order used for all collar quadratures.
const GL_ORDER: usize = 8;
/// Panels per smooth piece in the convolution.
const CONV_PANELS: usize = 4;
/// Panels per smooth piece in collar integrals.
const COLLAR_PANELS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct CorneredMetric {
    pub lower: BandMetric,
    pub upper: BandMetric,
    /// Slice radius of the interface.
    pub radius: f64,
    /// Mean curvature of the interface seen from the lower band.
    pub h_minus: f64,
    /// Mean curvature of the interface seen from the upper band.
    pub h_plus: f64,
    /// `H₋ ≥ H₊`, the condition for the glued metric to have
    /// nonnegative distributional curvature along the interface.
    pub admissible: bool,
}

impl CorneredMetric {
    /// `H₋ - H₊`.
    pub fn jump(&self) -> f64 {
        self.h_minus - self.h_plus
    }
}

/// Glues the top of `lower` to the bottom of `upper`.
pub fn glue_with_corner(lower: &BandMetric, upper: &BandMetric) -> Result<CorneredMetric> {
    if lower.dimension() != upper.dimension() {
        return Err(Error::Parameter("bands of different dimensions".into()));
    }
    let (rl, ru) = (lower.upper_radius(), upper.lower_radius());
    if (rl - ru).abs() > RADIUS_TOL * rl.abs().max(ru.abs()) {
        return Err(Error::Interface { lower: rl, upper: ru });
    }
    let h_minus = lower.upper_mean_curvature()?;
    let h_plus = upper.lower_mean_curvature()?;
    Ok(CorneredMetric {
        lower: lower.clone(),
        upper: upper.clone(),
        radius: rl,
        h_minus,
        h_plus,
        admissible: h_minus >= h_plus,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedCorner {
    /// Smoothed band in the proper-distance chart (`u ≡ 1`, interface at 0).
    pub band: BandMetric,
    pub delta: f64,
    pub epsilon: f64,
    /// `sup |R_δ|` over the collar `|s| ≤ δ/2`.
    pub sup_scalar_collar: f64,
    /// `sup |R_δ|` outside the collar.
    pub sup_scalar_outside: f64,
    /// `∫_collar |min(R_δ, 0)|^{n/2} dV_δ`.
    pub negative_part: f64,
    /// `∫_collar (R_δ dV_δ - R₀ dV₀)`.
    pub spike_integral: f64,
    /// `2(H₋ - H₊)·|Σ|`, the distributional curvature of the corner.
    pub expected_spike: f64,
}

/// `φ(x)` on `[-1, 1]` (not scaled).
pub(crate) fn mollifier(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 / 3.0 {
        1.0
    } else if a >= 1.0 {
        0.0
    } else {
        smooth_step(((1.0 - a) * 1.5).powf(MOLLIFIER_EXPONENT)).0
    }
}

/// `χ(x)` with first and second derivatives.
fn cutoff(x: f64) -> (f64, f64, f64) {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let (s, ds, dds) = smooth_step((0.5 - x.abs()) * 4.0);
    (s, -4.0 * sign * ds, 16.0 * dds)
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Lower,
    Upper,
}

struct Glued<'a> {
    lower: Chart<'a>,
    upper: Chart<'a>,
    k: f64,
}

impl Glued<'_> {
    fn jet(&self, s: f64, side: Side) -> Result<(f64, f64, f64)> {
        match side {
            Side::Lower => self.lower.radius_jet(s.min(0.0)),
            Side::Upper => self.upper.radius_jet(s.max(0.0)),
        }
    }

    fn side(s: f64) -> Side {
        if s < 0.0 {
            Side::Lower
        } else {
            Side::Upper
        }
    }

    /// `(r*φ_ε, r'*φ_ε, r''*φ_ε)` at `s`, integrating each smooth piece of
    /// the integrand separately. The result is divided by the discrete mass
    /// of `φ_ε` on the same nodes, so quadrature error in the steep parts of
    /// the mollifier does not bias the average.
    fn convolve(&self, s: f64, eps: f64, rule: &(Vec<f64>, Vec<f64>)) -> Result<[f64; 3]> {
        let mut cuts: Vec<f64> = alloc::vec![-eps, -eps / 3.0, eps / 3.0, eps];
        if s.abs() < eps {
            cuts.push(s);
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        let mut acc = [0.0; 3];
        let mut mass = 0.0;
        for w in cuts.windows(2) {
            // y > s means s - y < 0, the lower band.
            let side = if 0.5 * (w[0] + w[1]) > s { Side::Lower } else { Side::Upper };
            let width = (w[1] - w[0]) / CONV_PANELS as f64;
            for p in 0..CONV_PANELS {
                let mid = w[0] + (p as f64 + 0.5) * width;
                for (x, wt) in rule.0.iter().zip(&rule.1) {
                    let y = mid + 0.5 * width * x;
                    let weight = 0.5 * width * wt * mollifier(y / eps);
                    if weight == 0.0 {
                        continue;
                    }
                    let j = self.jet(s - y, side)?;
                    acc[0] += weight * j.0;
                    acc[1] += weight * j.1;
                    acc[2] += weight * j.2;
                    mass += weight;
                }
            }
        }
        Ok(acc.map(|v| v / mass))
    }

    fn kink(&self) -> Result<f64> {
        Ok(self.jet(0.0, Side::Upper)?.1 - self.jet(0.0, Side::Lower)?.1)
    }

    fn scalar(&self, r: f64, dr: f64, ddr: f64) -> f64 {
        self.k * (self.k - 1.0) * (1.0 - dr * dr) / (r * r) - 2.0 * self.k * ddr / r
    }
}

struct Smoother<'a> {
    glued: Glued<'a>,
    delta: f64,
    eps: f64,
    kink: f64,
    rule: (Vec<f64>, Vec<f64>),
}

impl Smoother<'_> {
    /// Radius jet of the smoothed metric at `s`; `side` picks the one-sided
    /// original values at `s = 0`.
    fn jet(&self, s: f64, side: Side) -> Result<(f64, f64, f64)> {
        let r = self.glued.jet(s, side)?;
        if s.abs() >= 0.5 * self.delta {
            return Ok(r);
        }
        let [m, dm, mut ddm] = self.glued.convolve(s, self.eps, &self.rule)?;
        ddm += self.kink * mollifier(s / self.eps) / self.eps;
        let (c, dc, ddc) = cutoff(s / self.delta);
        let d = self.delta;
        Ok((
            r.0 + c * (m - r.0),
            r.1 + dc / d * (m - r.0) + c * (dm - r.1),
            r.2 + ddc / (d * d) * (m - r.0) + 2.0 * dc / d * (dm - r.1) + c * (ddm - r.2),
        ))
    }

    fn scalar(&self, s: f64, side: Side) -> Result<(f64, f64)> {
        let (r, dr, ddr) = self.jet(s, side)?;
        Ok((self.glued.scalar(r, dr, ddr), r))
    }
}

/// Positive half of the graded output grid: spacing `ε/40` up to `2ε`,
/// then geometric growth by 1.05 capped at `δ/400` inside `|s| ≤ δ` and at
/// `far` beyond.
fn half_grid(eps: f64, delta: f64, far: f64, end: f64) -> Vec<f64> {
    let mut out = alloc::vec![0.0];
    let mut h = eps / 40.0;
    let mut s = 0.0;
    loop {
        let cap = if s < delta { delta / 400.0 } else { far };
        if s >= 2.0 * eps {
            h = (h * 1.05).min(cap);
        }
        s += h;
        if s >= end - 0.3 * h {
            break;
        }
        out.push(s);
    }
    out.push(end);
    out
}

/// Smooths an admissible corner on a collar of width `δ`.
pub fn mollify_corner(c: &CorneredMetric, delta: f64) -> Result<MollifiedCorner> {
    if !c.admissible {
        return Err(Error::Precondition(alloc::format!(
            "corner is not admissible: H₋ = {} < H₊ = {}",
            c.h_minus,
            c.h_plus
        )));
    }
    let lower = Chart::new(&c.lower, c.lower.domain().1)?;
    let upper = Chart::new(&c.upper, c.upper.domain().0)?;
    let (len_lo, len_up) = (-lower.range().0, upper.range().1);
    if !(delta > 0.0) || delta > len_lo.min(len_up) {
        return Err(Error::Parameter(alloc::format!(
            "δ = {delta} must lie in (0, {}] (shorter proper length of the two bands)",
            len_lo.min(len_up)
        )));
    }
    let n = c.lower.dimension();
    let k = n.slice_dim();
    let eps = delta * delta / 100.0;
    let glued = Glued { lower, upper, k };
    let kink = glued.kink()?;
    let sm = Smoother { glued, delta, eps, kink, rule: gauss_legendre(GL_ORDER) };

    let far = (delta / 400.0).max((len_lo + len_up) / 2000.0);
    let pos = half_grid(eps, delta, far, len_up);
    let neg = half_grid(eps, delta, far, len_lo);
    let mut grid: Vec<f64> = neg.iter().rev().map(|s| -s).collect();
    grid.pop();
    grid.extend_from_slice(&pos);

    let mut jets = Vec::with_capacity(grid.len());
    let (mut sup_in, mut sup_out) = (0.0f64, 0.0f64);
    for &s in &grid {
        let (r, dr, ddr) = sm.jet(s, Glued::side(s))?;
        let scalar = sm.glued.scalar(r, dr, ddr);
        if s.abs() <= 0.5 * delta {
            sup_in = sup_in.max(scalar.abs());
        } else {
            sup_out = sup_out.max(scalar.abs());
        }
        jets.push(Jet { u: 1.0, du: 0.0, r, dr, ddr });
    }
    let band = BandMetric::from_jets(n, grid, &jets)?;

    // Collar integrals, split where any ingredient changes formula.
    let omega = n.sphere_area();
    let half = 0.5 * delta;
    let cuts = [-half, -0.5 * half, -eps, -eps / 3.0, 0.0, eps / 3.0, eps, 0.5 * half, half];
    let mut failure = None;
    let mut negative_part = 0.0;
    let mut spike_integral = 0.0;
    for w in cuts.windows(2) {
        let side = if w[0] < 0.0 { Side::Lower } else { Side::Upper };
        negative_part += integrate_gl(
            |s| match sm.scalar(s, side) {
                Ok((scalar, r)) => scalar.min(0.0).abs().powf(0.5 * n.as_f64()) * omega * r.powf(k),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            w[0],
            w[1],
            COLLAR_PANELS,
            &sm.rule,
        );
        spike_integral += integrate_gl(
            |s| {
                let smooth = sm.scalar(s, side);
                let orig = sm.glued.jet(s, side);
                match (smooth, orig) {
                    (Ok((rd, r_d)), Ok((r0, dr0, ddr0))) => {
                        omega * (rd * r_d.powf(k) - sm.glued.scalar(r0, dr0, ddr0) * r0.powf(k))
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            w[0],
            w[1],
            COLLAR_PANELS,
            &sm.rule,
        );
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MollifiedCorner {
        band,
        delta,
        epsilon: eps,
        sup_scalar_collar: sup_in,
        sup_scalar_outside: sup_out,
        negative_part,
        spike_integral,
        expected_spike: 2.0 * c.jump() * omega * c.radius.powf(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{scalar_curvature_band, BandTag, Dimension};

    const N3: Dimension = Dimension::THREE;

    fn cap() -> BandMetric {
        BandMetric::hyperbolic(N3, 1.0, 0.2, 1.0f64.asinh(), 401).unwrap()
    }

    #[test]
    fn mollifier_has_unit_mass() {
        let rule = gauss_legendre(GL_ORDER);
        let mass = integrate_gl(mollifier, -1.0, -1.0 / 3.0, 64, &rule) * 2.0 + 2.0 / 3.0;
        assert!((mass - 1.0).abs() < 1e-12, "{mass}");
        assert_eq!(mollifier(0.3), 1.0);
        assert_eq!(mollifier(1.0), 0.0);
        assert_eq!(cutoff(0.2).0, 1.0);
        assert_eq!(cutoff(-0.6).0, 0.0);
    }

    #[test]
    fn gluing_flags() {
        let s = BandMetric::schwarzschild(N3, 0.0, 1.0, 2.0, 101).unwrap();
        let s2 = BandMetric::schwarzschild(N3, 0.0, 2.0, 3.0, 101).unwrap();
        let c = glue_with_corner(&s, &s2).unwrap();
        assert!(c.admissible && c.jump().abs() < 1e-12);

        let upper = BandMetric::schwarzschild(N3, -0.5, 1.0, 2.0, 101).unwrap();
        let c = glue_with_corner(&cap(), &upper).unwrap();
        assert!(c.admissible && c.jump().abs() < 1e-12);

        let flat = BandMetric::euclidean(N3, 0.5, 1.0, 101).unwrap();
        let c = glue_with_corner(&flat, &BandMetric::hyperbolic(N3, 1.0, 1.0f64.asinh(), 1.5, 101).unwrap()).unwrap();
        assert!(!c.admissible && c.jump() < 0.0);
        assert!(matches!(mollify_corner(&c, 0.1), Err(Error::Precondition(_))));

        let far = BandMetric::euclidean(N3, 1.5, 2.0, 101).unwrap();
        assert!(matches!(glue_with_corner(&cap(), &far), Err(Error::Interface { .. })));
    }

    #[test]
    fn equal_curvature_corner_stays_bounded() {
        let upper = BandMetric::schwarzschild(N3, -0.5, 1.0, 2.0, 201).unwrap();
        let c = glue_with_corner(&cap(), &upper).unwrap();
        let sups: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&d| {
                let m = mollify_corner(&c, d).unwrap();
                assert!(m.expected_spike.abs() < 1e-9);
                m.sup_scalar_collar.max(m.sup_scalar_outside)
            })
            .collect();
        let (lo, hi) = sups.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo - 1.0 < 0.1, "{sups:?}");
    }

    #[test]
    fn positive_jump_produces_spike() {
        let flat = BandMetric::euclidean(N3, 1.0, 2.0, 201).unwrap();
        let c = glue_with_corner(&cap(), &flat).unwrap();
        assert!(c.jump() > 0.0);
        let mut last = f64::INFINITY;
        for &d in &[0.1, 0.05, 0.025] {
            let m = mollify_corner(&c, d).unwrap();
            let rel = (m.spike_integral - m.expected_spike).abs() / m.expected_spike;
            assert!(rel < 0.05, "δ = {d}: {} vs {}", m.spike_integral, m.expected_spike);
            assert!(m.negative_part < last);
            last = m.negative_part;
            // The smoothed band agrees with the engine's view of it.
            let r = scalar_curvature_band(&m.band).unwrap();
            let sup = r.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!((sup - m.sup_scalar_collar.max(m.sup_scalar_outside)).abs() < 1e-6 * sup);
        }
    }

    #[test]
    fn smooth_band_split_is_reproduced() {
        let g = BandMetric::hyperbolic(N3, 1.0, 0.3, 2.0, 401).unwrap();
        let c = glue_with_corner(&g.restricted(0.3, 1.0, 201).unwrap(), &g.restricted(1.0, 2.0, 201).unwrap()).unwrap();
        assert!(c.jump().abs() < 1e-12);
        let m = mollify_corner(&c, 0.1).unwrap();
        assert!(matches!(g.tag(), Some(BandTag::Hyperbolic { .. })));
        for (&s, &r) in m.band.grid().iter().zip(m.band.radius().values()) {
            assert!((r - (1.0 + s).sinh()).abs() < 1e-8, "{s}: {r}");
        }
    }
}
