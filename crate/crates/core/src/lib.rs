//! Numerical toolkit for Bartnik data on rotationally symmetric geometries.
//!
//! Every metric handled here is a *band metric*
//! `g = u(t)^2 dt^2 + r(t)^2 γ_std` on `S^{n-1} × [a, b]`, so the scalar
//! curvature, mean curvature and quasi-spherical equations all reduce to
//! ordinary differential equations or quadratures. On top of that reduction
//! the crate provides:
//!
//! * [`geometry`]: band metrics, slice curvatures, a closed-form scalar
//!   curvature engine and an independent finite-difference oracle.
//! * [`bartnik`]: round and axisymmetric boundary data, isometric embedding
//!   of surfaces of revolution.
//! * [`masses`]: Hawking, Brown–York, ADM and hyperbolic mass-aspect
//!   functionals.
//! * [`quasi_spherical`]: quasi-spherical lapse equations on flat,
//!   hyperbolic and round-path backgrounds, plus asymptotic extraction.
//! * [`constructions`]: Schwarzschild bands, collar bending, corner gluing,
//!   mollification and conformal deformations.
//! * [`criteria`]: nonexistence and existence criteria with auditable
//!   verdicts.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! # Orientation
//!
//! Mean curvatures of slices are always taken with respect to the unit
//! normal pointing toward increasing `t`. For a cobordism
//! `S^{n-1} × [a, b]` this is the inward normal at the bottom slice and the
//! outward normal at the top slice, which is exactly the convention used for
//! Bartnik data on the two ends of a cobordism.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bartnik;
pub mod constructions;
pub mod criteria;
pub mod error;
pub mod geometry;
pub mod masses;
pub mod numerics;
pub mod quasi_spherical;
pub mod spline;

pub use bartnik::{AxisymBartnikData, BartnikData, RoundBartnikData};
pub use error::{Error, Result};
pub use geometry::{BandMetric, BandTag, CurvatureReport, Dimension, SliceGeometry};
pub use spline::SampledFn;
