//! Explicit band metrics realizing cobordisms and the deformations used to
//! smooth and improve them.
//!
//! Every construction returns a [`BandMetric`](crate::BandMetric) together
//! with the quantities needed to audit it (boundary data, curvature
//! extrema, margins).

mod collar;
pub use collar::{collar_bend, CollarBend, CollarSpec};
mod conformal;
pub use conformal::{
    conformal_solve, lower_bound_deform, nnsc_smooth_pipeline, scalar_perturb, scalar_perturb_with, BoundaryMode,
    ConformalSolution, LowerBoundDeformation, PipelineResult, ScalarPerturbation, DEFAULT_EPSILON_N,
};
mod corner;
pub use corner::{glue_with_corner, mollify_corner, CorneredMetric, MollifiedCorner};
mod schwarzschild;

pub use schwarzschild::{schwarzschild_band, schwarzschild_band_round, BandOutcome, SchwarzschildBand};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::BandMetric;
use crate::spline::SampledFn;

/// Proper-distance chart `s(t) = ∫_anchor^t u` of a band.
pub(crate) struct Chart<'a> {
    g: &'a BandMetric,
    anchor: f64,
    /// Interpolated inverse, used as the Newton starting point.
    guess: SampledFn,
    range: (f64, f64),
}

impl<'a> Chart<'a> {
    pub(crate) fn new(g: &'a BandMetric, anchor: f64) -> Result<Self> {
        let ss: Vec<f64> = g.grid().iter().map(|&t| g.proper_distance(anchor, t)).collect::<Result<_>>()?;
        let range = (ss[0], ss[ss.len() - 1]);
        let guess = SampledFn::new(ss, g.grid().to_vec())?;
        Ok(Chart { g, anchor, guess, range })
    }

    pub(crate) fn s(&self, t: f64) -> Result<f64> {
        self.g.proper_distance(self.anchor, t)
    }

    pub(crate) fn range(&self) -> (f64, f64) {
        self.range
    }

    /// Inverts the chart by safeguarded Newton iteration.
    pub(crate) fn t(&self, s: f64) -> Result<f64> {
        let (mut lo, mut hi) = self.g.domain();
        let (s_lo, s_hi) = self.range;
        let tol = 1e-14 * (s_hi - s_lo).max(1.0);
        if s < s_lo - tol || s > s_hi + tol {
            return Err(Error::Domain { what: "proper distance", value: s });
        }
        if s <= s_lo {
            return Ok(lo);
        }
        if s >= s_hi {
            return Ok(hi);
        }
        let mut t = self.guess.eval(s)?.clamp(lo, hi);
        for _ in 0..100 {
            let f = self.s(t)? - s;
            if f.abs() <= tol {
                return Ok(t);
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = t - f / self.g.lapse().eval(t)?;
            t = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-15 * hi.abs().max(1.0) {
                return Ok(t);
            }
        }
        Err(Error::Solver(alloc::format!("proper-distance chart inversion failed at s = {s}")))
    }

    /// `(r, dr/ds, d²r/ds²)` at proper distance `s`.
    pub(crate) fn radius_jet(&self, s: f64) -> Result<(f64, f64, f64)> {
        let j = self.g.jet(self.t(s)?)?;
        Ok((j.r, j.dr / j.u, (j.ddr - j.dr * j.du / j.u) / (j.u * j.u)))
    }
}
