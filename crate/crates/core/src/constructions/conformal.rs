//! Radial conformal deformations `g̃ = v^{4/(n-2)} g`.
//!
//! For a band `u^2 dt^2 + r^2 γ_std` the Laplacian of a radial function is
//! `Δv = (u r^k)^{-1} (r^k v'/u)'` with `k = n-1`, and the deformed metric
//! has scalar curvature `v^{-(n+2)/(n-2)}(-c Δv + R v)` with
//! `c = 4(n-1)/(n-2)`. Boundary value problems are discretized on the band's
//! own nodes (subdivided until there are at least 2000 intervals) with the
//! conservative three-point scheme
//!
//! `(2/(h₋+h₊))[A₊(v₊-v)/h₊ - A₋(v-v₋)/h₋] - u r^k p v = u r^k f`,
//! `A = r^k/u` at interval midpoints,
//!
//! which is second order on smooth nonuniform grids.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use super::corner::{mollify_corner, CorneredMetric, MollifiedCorner};
use crate::error::{Error, Result};
use crate::geometry::{scalar_curvature_at, slice_geometry, BandMetric};
use crate::numerics::{smooth_step, solve_tridiagonal};
use crate::spline::SampledFn;

/// Default smallness constant for `(∫|h₋|^{n/2} dV)^{2/n}`.
pub const DEFAULT_EPSILON_N: f64 = 0.1;

const MIN_INTERVALS: usize = 2000;

/// Ratio of outer to inner radius required to impose `v = 1` at a finite
/// outer slice in place of the condition at infinity.
const DECAY_RADIUS_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// `v = 1` on both boundary slices.
    Compact,
    /// `v = 1` on the inner slice and `v → 1` at infinity, truncated at the
    /// outer slice of an asymptotically flat band.
    DecayAtInfinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConformalSolution {
    pub factor: SampledFn,
    pub deformed: BandMetric,
    /// Mean curvatures of the deformed boundary slices (increasing-`t`
    /// normal), `H + (c/2) ∂_ν v`.
    pub lower_mean_curvature: f64,
    pub upper_mean_curvature: f64,
    /// `(∫|h₋|^{n/2} dV)^{2/n}`.
    pub smallness: f64,
}

fn refined_grid(g: &BandMetric) -> Vec<f64> {
    let base = g.grid();
    let q = MIN_INTERVALS.div_ceil(base.len() - 1).max(1);
    let mut out = Vec::with_capacity((base.len() - 1) * q + 1);
    for w in base.windows(2) {
        for j in 0..q {
            out.push(w[0] + (w[1] - w[0]) * j as f64 / q as f64);
        }
    }
    out.push(base[base.len() - 1]);
    out
}

/// Solves `Δv - p v = f` with `v = 1` at both ends on `grid`.
fn solve_radial(g: &BandMetric, grid: &[f64], p: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    let k = g.dimension().get() as i32 - 1;
    let len = grid.len();
    let mut weight = Vec::with_capacity(len);
    for &t in grid {
        let j = g.jet(t)?;
        weight.push(j.u * j.r.powi(k));
    }
    let mut flux = Vec::with_capacity(len - 1);
    for w in grid.windows(2) {
        let j = g.jet(0.5 * (w[0] + w[1]))?;
        flux.push(j.r.powi(k) / j.u);
    }
    let m = len - 2;
    let (mut lower, mut diag, mut upper, mut rhs) =
        (alloc::vec![0.0; m - 1], alloc::vec![0.0; m], alloc::vec![0.0; m - 1], alloc::vec![0.0; m]);
    for row in 0..m {
        let i = row + 1;
        let (hm, hp) = (grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
        let c = 2.0 / (hm + hp);
        let (am, ap) = (c * flux[i - 1] / hm, c * flux[i] / hp);
        // Negated so the diagonal is positive for p >= 0.
        diag[row] = am + ap + weight[i] * p[i];
        rhs[row] = -weight[i] * f[i];
        if row > 0 {
            lower[row - 1] = -am;
        } else {
            rhs[row] += am;
        }
        if row + 1 < m {
            upper[row] = -ap;
        } else {
            rhs[row] += ap;
        }
    }
    let inner = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
    let mut v = Vec::with_capacity(len);
    v.push(1.0);
    v.extend_from_slice(&inner);
    v.push(1.0);
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::Solver(alloc::format!("boundary value problem diverged at t = {}", grid[i])));
    }
    Ok(v)
}

/// `(v'(a), v'(b))` by one-sided three-point differences.
fn end_slopes(x: &[f64], v: &[f64]) -> (f64, f64) {
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    let left = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1] - h1 / (h2 * (h1 + h2)) * v[2];
    let n = x.len() - 1;
    let (g1, g2) = (x[n] - x[n - 1], x[n - 1] - x[n - 2]);
    let right = (2.0 * g1 + g2) / (g1 * (g1 + g2)) * v[n] - (g1 + g2) / (g1 * g2) * v[n - 1] + g1 / (g2 * (g1 + g2)) * v[n - 2];
    (left, right)
}

/// `g̃ = v^{4/(n-2)} g` as a band: lapse and radius scale by `v^{2/(n-2)}`.
fn deform(g: &BandMetric, grid: &[f64], v: &[f64]) -> Result<BandMetric> {
    let p = 2.0 / (g.dimension().as_f64() - 2.0);
    let mut lapse = Vec::with_capacity(grid.len());
    let mut radius = Vec::with_capacity(grid.len());
    for (&t, &vi) in grid.iter().zip(v) {
        let (u, r) = g.components(t)?;
        let s = vi.powf(p);
        lapse.push(u * s);
        radius.push(r * s);
    }
    BandMetric::new(g.dimension(), SampledFn::new(grid.to_vec(), lapse)?, SampledFn::new(grid.to_vec(), radius)?)
}

fn boundary_curvatures(g: &BandMetric, grid: &[f64], v: &[f64]) -> Result<(f64, f64)> {
    let c = g.dimension().conformal_constant();
    let (dl, du) = end_slopes(grid, v);
    let (a, b) = (grid[0], grid[grid.len() - 1]);
    let (ua, ub) = (g.components(a)?.0, g.components(b)?.0);
    Ok((
        slice_geometry(g, a)?.mean_curvature + 0.5 * c * dl / ua,
        slice_geometry(g, b)?.mean_curvature + 0.5 * c * du / ub,
    ))
}

fn sample(f: &SampledFn, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter().map(|&t| f.eval(t)).collect()
}

fn check_domain(g: &BandMetric, f: &SampledFn, what: &str) -> Result<()> {
    let ((a, b), (fa, fb)) = (g.domain(), f.domain());
    let tol = 1e-12 * (b - a).max(1.0);
    if (a - fa).abs() > tol || (b - fb).abs() > tol {
        return Err(Error::Parameter(alloc::format!("{what} is not sampled on the band's domain")));
    }
    Ok(())
}

/// Solves `Δv - h v = 0` with `v = 1` on the boundary and deforms `g`.
pub fn conformal_solve(g: &BandMetric, h: &SampledFn, mode: BoundaryMode, epsilon_n: f64) -> Result<ConformalSolution> {
    check_domain(g, h, "potential h")?;
    if mode == BoundaryMode::DecayAtInfinity && g.upper_radius() < DECAY_RADIUS_RATIO * g.lower_radius() {
        return Err(Error::Precondition(alloc::format!(
            "decay mode needs r(b) >= {DECAY_RADIUS_RATIO} r(a) to truncate the end"
        )));
    }
    let n = g.dimension();
    let grid = refined_grid(g);
    let p = sample(h, &grid)?;
    let mut density = Vec::with_capacity(grid.len());
    for (&t, &hi) in grid.iter().zip(&p) {
        let (u, r) = g.components(t)?;
        density.push(hi.min(0.0).abs().powf(0.5 * n.as_f64()) * u * r.powf(n.slice_dim()) * n.sphere_area());
    }
    let smallness = SampledFn::new(grid.clone(), density)?.integral(grid[0], grid[grid.len() - 1])?.max(0.0).powf(2.0 / n.as_f64());
    if !(smallness <= epsilon_n) {
        return Err(Error::Precondition(alloc::format!(
            "(∫|h₋|^(n/2))^(2/n) = {smallness:e} exceeds ε_N = {epsilon_n:e}"
        )));
    }
    if p.iter().all(|&x| x == 0.0) {
        let (hl, hu) = (g.lower_mean_curvature()?, g.upper_mean_curvature()?);
        return Ok(ConformalSolution {
            factor: SampledFn::new(grid.clone(), alloc::vec![1.0; grid.len()])?,
            deformed: g.clone(),
            lower_mean_curvature: hl,
            upper_mean_curvature: hu,
            smallness,
        });
    }
    let v = solve_radial(g, &grid, &p, &alloc::vec![0.0; grid.len()])?;
    if let Some(i) = v.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::Solver(alloc::format!("conformal factor not positive at t = {}", grid[i])));
    }
    let (lower_mean_curvature, upper_mean_curvature) = boundary_curvatures(g, &grid, &v)?;
    Ok(ConformalSolution {
        deformed: deform(g, &grid, &v)?,
        factor: SampledFn::new(grid, v)?,
        lower_mean_curvature,
        upper_mean_curvature,
        smallness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPerturbation {
    pub band: BandMetric,
    pub factor: SampledFn,
    /// Scalar curvature of the output, `w^{-(n+2)/(n-2)}((1-η)R w + cε)`.
    pub scalar: SampledFn,
    pub min_scalar: f64,
    /// `(c/2) ∂_ν w` at the bottom and top slices (increasing-`t` normal):
    /// the change of the boundary mean curvatures.
    pub lower_margin: f64,
    pub upper_margin: f64,
}

/// Smooth cutoff equal to one on the middle half of `[lo, hi]`, zero
/// outside it.
fn bump(lo: f64, hi: f64, t: f64) -> f64 {
    let w = 0.25 * (hi - lo);
    smooth_step((t - lo) / w).0 * smooth_step((hi - t) / w).0
}

/// Raises the scalar curvature of a nonnegatively curved band to a positive
/// function by solving `Δw - (η R/c) w = -ε`, `w = 1` on the boundary, with
/// `η` a cutoff supported in `region`. The scalar curvature is taken from
/// the curvature engine.
pub fn scalar_perturb(g: &BandMetric, region: (f64, f64), epsilon: f64) -> Result<ScalarPerturbation> {
    let grid = refined_grid(g);
    let values = grid.iter().map(|&t| scalar_curvature_at(g, t)).collect::<Result<Vec<_>>>()?;
    scalar_perturb_with(g, &SampledFn::new(grid, values)?, region, epsilon)
}

/// As [`scalar_perturb`] with a known scalar curvature profile.
pub fn scalar_perturb_with(g: &BandMetric, scalar: &SampledFn, region: (f64, f64), epsilon: f64) -> Result<ScalarPerturbation> {
    check_domain(g, scalar, "scalar curvature")?;
    let (a, b) = g.domain();
    let (lo, hi) = region;
    if !(a <= lo && lo < hi && hi <= b) {
        return Err(Error::Parameter(alloc::format!("bump region [{lo}, {hi}] must lie inside [{a}, {b}]")));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::Parameter(alloc::format!("ε must be nonnegative, got {epsilon}")));
    }
    let n = g.dimension();
    let c = n.conformal_constant();
    let grid = refined_grid(g);
    let r = sample(scalar, &grid)?;
    if let Some(i) = r.iter().position(|&x| x < -1e-8) {
        return Err(Error::Precondition(alloc::format!("scalar curvature {:e} < 0 at t = {}", r[i], grid[i])));
    }
    let eta: Vec<f64> = grid.iter().map(|&t| bump(lo, hi, t)).collect();
    let p: Vec<f64> = eta.iter().zip(&r).map(|(e, s)| e * s.max(0.0) / c).collect();
    let w = solve_radial(g, &grid, &p, &alloc::vec![-epsilon; grid.len()])?;
    if let Some(i) = w.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::Construction(alloc::format!("perturbation factor not positive at t = {}", grid[i])));
    }
    let q = (n.as_f64() + 2.0) / (n.as_f64() - 2.0);
    let out: Vec<f64> = (0..grid.len())
        .map(|i| w[i].powf(-q) * ((1.0 - eta[i]) * r[i].max(0.0) * w[i] + c * epsilon))
        .collect();
    let (dl, du) = end_slopes(&grid, &w);
    let (ua, ub) = (g.components(a)?.0, g.components(b)?.0);
    let min_scalar = out.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ScalarPerturbation {
        band: deform(g, &grid, &w)?,
        factor: SampledFn::new(grid.clone(), w)?,
        scalar: SampledFn::new(grid, out)?,
        min_scalar,
        lower_margin: 0.5 * c * dl / ua,
        upper_margin: 0.5 * c * du / ub,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundDeformation {
    pub solution: ConformalSolution,
    /// `v^{-4/(n-2)}(R + (R + C)₋)`, bounded below by `-C`.
    pub scalar: SampledFn,
    pub min_scalar: f64,
}

/// Conformal deformation with `h = -(R + C)₋/c`, lifting the scalar
/// curvature to `R̃ ≥ -C` where `(x)₋ = max(-x, 0)`.
pub fn lower_bound_deform(g: &BandMetric, bound: f64, epsilon_n: f64) -> Result<LowerBoundDeformation> {
    if !(bound >= 0.0) {
        return Err(Error::Parameter(alloc::format!("lower bound C must be nonnegative, got {bound}")));
    }
    let n = g.dimension();
    let c = n.conformal_constant();
    let grid = refined_grid(g);
    let r = grid.iter().map(|&t| scalar_curvature_at(g, t)).collect::<Result<Vec<_>>>()?;
    let h: Vec<f64> = r.iter().map(|&s| -(-(s + bound)).max(0.0) / c).collect();
    let solution = conformal_solve(g, &SampledFn::new(grid.clone(), h)?, BoundaryMode::Compact, epsilon_n)?;
    let e = 4.0 / (n.as_f64() - 2.0);
    let mut out = Vec::with_capacity(grid.len());
    for (&t, &s) in grid.iter().zip(&r) {
        let v = solution.factor.eval(t)?;
        out.push(v.powf(-e) * (s + (-(s + bound)).max(0.0)));
    }
    let min_scalar = out.iter().copied().fold(f64::INFINITY, f64::min);
    if min_scalar < -bound * (1.0 + 1e-12) - 1e-12 {
        return Err(Error::Construction(alloc::format!("deformed scalar curvature {min_scalar:e} below -C = {:e}", -bound)));
    }
    Ok(LowerBoundDeformation { solution, scalar: SampledFn::new(grid, out)?, min_scalar })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    pub mollified: MollifiedCorner,
    pub conformal: ConformalSolution,
    pub perturbed: ScalarPerturbation,
}

/// Smooths an admissible corner, removes the negative part of the smoothed
/// scalar curvature conformally (`h = -R₋/c`) and finally perturbs to
/// strictly positive scalar curvature with a bump on `region` (in the
/// proper-distance chart of the smoothed band, interface at 0).
pub fn nnsc_smooth_pipeline(
    c: &CorneredMetric,
    delta: f64,
    region: (f64, f64),
    epsilon: f64,
    epsilon_n: f64,
) -> Result<PipelineResult> {
    let mollified = mollify_corner(c, delta)?;
    let band = &mollified.band;
    let n = band.dimension();
    let cn = n.conformal_constant();
    let grid = refined_grid(band);
    let r = grid.iter().map(|&t| scalar_curvature_at(band, t)).collect::<Result<Vec<_>>>()?;
    let h: Vec<f64> = r.iter().map(|&s| s.min(0.0) / cn).collect();
    let conformal = conformal_solve(band, &SampledFn::new(grid.clone(), h)?, BoundaryMode::Compact, epsilon_n)?;
    let e = 4.0 / (n.as_f64() - 2.0);
    let mut lifted = Vec::with_capacity(grid.len());
    for (&t, &s) in grid.iter().zip(&r) {
        lifted.push(conformal.factor.eval(t)?.powf(-e) * s.max(0.0));
    }
    let perturbed = scalar_perturb_with(&conformal.deformed, &SampledFn::new(grid, lifted)?, region, epsilon)?;
    Ok(PipelineResult { mollified, conformal, perturbed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::glue_with_corner;
    use crate::geometry::{Dimension, MassProfile};

    const N3: Dimension = Dimension::THREE;

    fn constant(g: &BandMetric, value: f64) -> SampledFn {
        let grid = g.grid().to_vec();
        let len = grid.len();
        SampledFn::new(grid, alloc::vec![value; len]).unwrap()
    }

    #[test]
    fn zero_potential_is_identity() {
        let g = BandMetric::schwarzschild(N3, 0.2, 1.0, 3.0, 101).unwrap();
        let s = conformal_solve(&g, &constant(&g, 0.0), BoundaryMode::Compact, DEFAULT_EPSILON_N).unwrap();
        assert_eq!(s.deformed, g);
        assert!(s.factor.values().iter().all(|&v| v == 1.0));
        assert_eq!(s.upper_mean_curvature, g.upper_mean_curvature().unwrap());
    }

    #[test]
    fn flat_annulus_matches_closed_form() {
        // Δv + k^2 v = 0 in R^3 has radial solutions (A sin kr + B cos kr)/r.
        let g = BandMetric::euclidean(N3, 1.0, 2.0, 41).unwrap();
        let s = conformal_solve(&g, &constant(&g, -0.01), BoundaryMode::Compact, DEFAULT_EPSILON_N).unwrap();
        let k = 0.1f64;
        let det = k.sin() * (2.0 * k).cos() - k.cos() * (2.0 * k).sin();
        let a = ((2.0 * k).cos() - 2.0 * k.cos()) / det;
        let b = (2.0 * k.sin() - (2.0 * k).sin()) / det;
        let exact = |r: f64| (a * (k * r).sin() + b * (k * r).cos()) / r;
        let d_exact = |r: f64| (a * k * (k * r).cos() - b * k * (k * r).sin()) / r - exact(r) / r;
        for i in 0..=20 {
            let r = 1.0 + i as f64 / 20.0;
            let v = s.factor.eval(r).unwrap();
            assert!(v >= 1.0 && (v - exact(r)).abs() < 1e-7, "r = {r}: {v} vs {}", exact(r));
        }
        let c = N3.conformal_constant();
        assert!((s.lower_mean_curvature - (2.0 + 0.5 * c * d_exact(1.0))).abs() < 1e-5);
        assert!((s.upper_mean_curvature - (1.0 + 0.5 * c * d_exact(2.0))).abs() < 1e-5);
        // Outward mean curvatures drop on both ends.
        assert!(s.upper_mean_curvature < 1.0 && s.lower_mean_curvature > 2.0);
        let want = (0.01f64.powf(1.5) * 4.0 * core::f64::consts::PI * 7.0 / 3.0).powf(2.0 / 3.0);
        assert!((s.smallness - want).abs() < 1e-6 * want);
    }

    #[test]
    fn agrees_with_dense_uniform_solve() {
        // Independent brute force at ten times the resolution, in the radial
        // coordinate of a Schwarzschild band: (r^2 v'/u)' = u r^2 h v.
        let g = BandMetric::schwarzschild(N3, 0.3, 1.0, 3.0, 81).unwrap();
        let hfun = |r: f64| -0.004 * (-(r - 2.0) * (r - 2.0)).exp();
        let grid = g.grid().to_vec();
        let h = SampledFn::new(grid.clone(), grid.iter().map(|&r| hfun(r)).collect()).unwrap();
        let s = conformal_solve(&g, &h, BoundaryMode::Compact, DEFAULT_EPSILON_N).unwrap();

        let m = 20_000;
        let dx = 2.0 / m as f64;
        let u = |r: f64| (1.0 - 0.6 / r).powf(-0.5);
        let mut a = alloc::vec![0.0; m + 1];
        let mut b = alloc::vec![0.0; m + 1];
        let mut cc = alloc::vec![0.0; m + 1];
        let mut d = alloc::vec![0.0; m + 1];
        let mut v = alloc::vec![0.0; m + 1];
        b[0] = 1.0;
        d[0] = 1.0;
        b[m] = 1.0;
        d[m] = 1.0;
        for i in 1..m {
            let r = 1.0 + i as f64 * dx;
            let (rm, rp) = (r - 0.5 * dx, r + 0.5 * dx);
            a[i] = rm * rm / u(rm) / (dx * dx);
            cc[i] = rp * rp / u(rp) / (dx * dx);
            b[i] = -a[i] - cc[i] - u(r) * r * r * hfun(r);
        }
        // Thomas sweep.
        for i in 1..=m {
            let w = a[i] / b[i - 1];
            b[i] -= w * cc[i - 1];
            d[i] -= w * d[i - 1];
        }
        v[m] = d[m] / b[m];
        for i in (0..m).rev() {
            v[i] = (d[i] - cc[i] * v[i + 1]) / b[i];
        }
        for i in (0..=m).step_by(500) {
            let r = 1.0 + i as f64 * dx;
            let got = s.factor.eval(r).unwrap();
            assert!((got - v[i]).abs() < 1e-6, "r = {r}: {got} vs {}", v[i]);
        }
    }

    #[test]
    fn rejects_large_potential_and_short_decay_bands() {
        let g = BandMetric::euclidean(N3, 1.0, 2.0, 41).unwrap();
        assert!(matches!(
            conformal_solve(&g, &constant(&g, -10.0), BoundaryMode::Compact, DEFAULT_EPSILON_N),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            conformal_solve(&g, &constant(&g, 0.0), BoundaryMode::DecayAtInfinity, DEFAULT_EPSILON_N),
            Err(Error::Precondition(_))
        ));
        let far = BandMetric::schwarzschild(N3, 0.1, 1.0, 40.0, 401).unwrap();
        let s = conformal_solve(&far, &constant(&far, -1e-5), BoundaryMode::DecayAtInfinity, DEFAULT_EPSILON_N).unwrap();
        assert!(s.factor.values().iter().all(|&v| v >= 1.0));
    }

    fn ramp() -> BandMetric {
        let p = MassProfile::Smoothstep { r_lo: 1.5, r_hi: 2.5, m_lo: 0.1, m_hi: 0.2 };
        BandMetric::variable_mass(N3, p, 1.0, 3.0, 201).unwrap()
    }

    #[test]
    fn perturbation_makes_scalar_curvature_positive() {
        let g = ramp();
        let p = scalar_perturb(&g, (1.6, 2.4), 1e-4).unwrap();
        assert!(p.min_scalar > 0.0);
        let half = scalar_perturb(&g, (1.6, 2.4), 5e-5).unwrap();
        let ratio = half.min_scalar / p.min_scalar;
        assert!((ratio - 0.5).abs() < 0.05, "{ratio}");
        // Without the source term w is subharmonic-squeezed below 1 and the
        // top slice gains mean curvature.
        let z = scalar_perturb(&g, (1.6, 2.4), 0.0).unwrap();
        assert!(z.upper_margin > 0.0 && z.lower_margin < 0.0);
        assert!(z.factor.values().iter().all(|&w| w <= 1.0 + 1e-15));
        assert!(matches!(scalar_perturb(&g, (0.5, 2.0), 1e-4), Err(Error::Parameter(_))));
        let hyp = BandMetric::hyperbolic(N3, 1.0, 0.5, 1.0, 41).unwrap();
        assert!(matches!(scalar_perturb(&hyp, (0.6, 0.9), 1e-4), Err(Error::Precondition(_))));
    }

    #[test]
    fn perturbed_scalar_matches_engine() {
        let g = ramp();
        let p = scalar_perturb(&g, (1.6, 2.4), 1e-3).unwrap();
        for i in 1..40 {
            let t = 1.0 + i as f64 * 0.05;
            let closed = p.scalar.eval(t).unwrap();
            let engine = scalar_curvature_at(&p.band, t).unwrap();
            assert!((closed - engine).abs() < 1e-3 * (1.0 + closed.abs()), "t = {t}: {closed} vs {engine}");
        }
    }

    #[test]
    fn lower_bound_is_respected() {
        let g = BandMetric::hyperbolic(N3, 1.0, 0.5, 1.0, 101).unwrap();
        let d = lower_bound_deform(&g, 5.9, DEFAULT_EPSILON_N).unwrap();
        assert!(d.min_scalar >= -5.9 && d.min_scalar < -5.8, "{}", d.min_scalar);
        assert!(d.solution.factor.values().iter().all(|&v| v >= 1.0));
    }

    #[test]
    fn pipeline_reaches_positive_scalar_curvature() {
        let flat = BandMetric::euclidean(N3, 0.5, 1.0, 201).unwrap();
        let upper = BandMetric::schwarzschild(N3, 0.1, 1.0, 2.0, 201).unwrap();
        let c = glue_with_corner(&flat, &upper).unwrap();
        assert!(c.admissible);
        let out = nnsc_smooth_pipeline(&c, 0.1, (-0.3, 0.3), 1e-3, DEFAULT_EPSILON_N).unwrap();
        assert!(out.mollified.negative_part > 0.0);
        assert!(out.conformal.smallness <= DEFAULT_EPSILON_N);
        assert!(out.perturbed.min_scalar > 0.0);
    }
}
