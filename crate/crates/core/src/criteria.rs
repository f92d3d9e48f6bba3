//! Nonexistence and existence criteria for cobordisms between Bartnik data,
//! returned as auditable verdicts.
//!
//! Every verdict carries the quantities it was decided on (`audit`) and the
//! external results it relies on (`assumptions`). Inequalities that fire
//! are recorded as `margin ...` entries, positive when satisfied.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)] // unused when a dev-dependency turns on num-traits/std
use num_traits::Float;

use crate::bartnik::{AxisymBartnikData, BartnikData, RoundBartnikData};
use crate::constructions::{schwarzschild_band_round, BandOutcome, SchwarzschildBand};
use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::masses::{brown_york_mass, hawking_mass, hyperbolic_mass_aspect, total_mean_curvature};
use crate::quasi_spherical::{qs_hyperbolic_solve, Background, QsProblem};

/// Nodes of the band attached to an existence verdict.
pub const BAND_POINTS: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// No cobordism exists; the tag names the criterion that fired.
    NonexistenceCertified(&'static str),
    ExistenceConstructed,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::NonexistenceCertified(tag) => write!(f, "NonexistenceCertified {tag}"),
            Outcome::ExistenceConstructed => f.write_str("ExistenceConstructed"),
            Outcome::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub audit: Vec<(String, f64)>,
    pub assumptions: Vec<String>,
    /// The explicit band behind an existence verdict.
    pub construction: Option<SchwarzschildBand>,
}

impl Verdict {
    fn new(outcome: Outcome) -> Self {
        Verdict { outcome, audit: Vec::new(), assumptions: Vec::new(), construction: None }
    }

    fn record(&mut self, name: &str, value: f64) {
        self.audit.push((name.to_string(), value));
    }

    fn assume(&mut self, items: &[&str]) {
        self.assumptions.extend(items.iter().map(|s| s.to_string()));
    }

    pub fn audit_value(&self, name: &str) -> Option<f64> {
        self.audit.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn is_nonexistence(&self) -> bool {
        matches!(self.outcome, Outcome::NonexistenceCertified(_))
    }
}

/// A threshold `Λ` together with the verdict it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdVerdict {
    pub lambda: f64,
    pub verdict: Verdict,
}

fn positive_mean_curvature(d: &BartnikData, which: &str) -> Result<()> {
    let ok = match d {
        BartnikData::Round(r) => r.mean_curvature > 0.0,
        BartnikData::Axisym(a) => a.mean_curvature().iter().all(|&h| h > 0.0),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(alloc::format!("mean curvature of {which} must be positive")))
    }
}

/// Trivial-cobordism obstruction in dimension three: no cobordism
/// `S^2 × [0, 1]` with `R ≥ 0` exists when `m_BY(d₂) < 0 ≤ m_H(d₁)`.
pub fn check_mass_obstruction(d1: &BartnikData, d2: &BartnikData) -> Result<Verdict> {
    for d in [d1, d2] {
        if d.dimension().get() != 3 {
            return Err(Error::WrongDimension { expected: 3, found: d.dimension().get() });
        }
    }
    positive_mean_curvature(d1, "d₁")?;
    positive_mean_curvature(d2, "d₂")?;
    if let BartnikData::Axisym(a) = d2 {
        let k = a.gauss_curvature();
        if let Some(i) = k.iter().position(|&x| !(x > 0.0)) {
            return Err(Error::NonPositiveGaussCurvature { theta: a.theta()[i], curvature: k[i] });
        }
    }
    let m_h = hawking_mass(d1)?;
    let m_by = brown_york_mass(d2)?;
    let fired = m_by < 0.0 && m_h >= 0.0;
    let mut v = Verdict::new(if fired { Outcome::NonexistenceCertified("Thm1.1") } else { Outcome::Inconclusive });
    v.record("m_H(d1)", m_h);
    v.record("m_BY(d2)", m_by);
    if fired {
        v.record("margin m_H(d1) >= 0", m_h);
        v.record("margin m_BY(d2) < 0", -m_by);
        v.assume(&[
            "[IH] Hawking mass bound for the ADM mass via inverse mean curvature flow",
            "[ST] Shi-Tam extension and monotone Brown-York mass",
            "[M] corner smoothing with nonnegative scalar curvature",
        ]);
    }
    Ok(v)
}

/// `κ₁` with `H₁ = (n-1)sqrt(1 + κ₁² r₁²)/r₁`: the curvature scale of the
/// hyperbolic ball whose boundary sphere carries `d₁`.
pub fn cap_curvature(d1: &RoundBartnikData) -> Result<f64> {
    let (r, h) = (d1.radius, d1.mean_curvature);
    let x = h * r / d1.n.slice_dim();
    if !(x > 1.0) {
        return Err(Error::Cap(alloc::format!(
            "H₁r₁ = {} must exceed n-1 = {} for a hyperbolic cap",
            h * r,
            d1.n.slice_dim()
        )));
    }
    Ok((x * x - 1.0).sqrt() / r)
}

fn curvature_scale(d1: &RoundBartnikData, bound: f64, negative_gauss: f64) -> Result<f64> {
    if !(bound >= 0.0) || !bound.is_finite() {
        return Err(Error::Parameter(alloc::format!("smoothing constant C must be nonnegative, got {bound}")));
    }
    let n = d1.n.as_f64();
    Ok(cap_curvature(d1)?.max((bound / (n * (n - 1.0))).sqrt()).max(negative_gauss.sqrt()))
}

/// Total mean curvature threshold in dimension three. With `κ` the largest
/// of `κ₁`, `sqrt(C/6)` and `sqrt(max(-K_{γ₂}, 0))`, a cobordism is ruled out
/// once `∫H₂ > Λ = ∫_{S^2} H₀ cosh(κ ρ) dμ + 1`, `H₀` and `ρ` belonging to
/// the embedding of `γ₂` in `H^3(-κ²)`. Only round `γ₂` is supported.
pub fn total_mean_curvature_bound(d1: &RoundBartnikData, d2: &AxisymBartnikData, bound: f64) -> Result<ThresholdVerdict> {
    if d1.n != Dimension::THREE {
        return Err(Error::WrongDimension { expected: 3, found: d1.n.get() });
    }
    let r2 = d2
        .round_radius()
        .ok_or_else(|| Error::Restriction("hyperbolic embedding is only available for round γ₂".into()))?;
    let negative_gauss = d2.gauss_curvature().iter().fold(0.0f64, |a, &k| a.max(-k));
    let kappa1 = cap_curvature(d1)?;
    let kappa = curvature_scale(d1, bound, negative_gauss)?;
    let cosh = (1.0 + kappa * kappa * r2 * r2).sqrt();
    let h0 = 2.0 * cosh / r2;
    let lambda = 4.0 * PI * r2 * r2 * h0 * cosh + 1.0;
    let total = total_mean_curvature(&BartnikData::Axisym(d2.clone()))?;
    let fired = total > lambda;
    let mut v = Verdict::new(if fired { Outcome::NonexistenceCertified("Thm1.2") } else { Outcome::Inconclusive });
    v.record("kappa_1", kappa1);
    v.record("kappa", kappa);
    v.record("C", bound);
    v.record("Lambda", lambda);
    v.record("total H(d2)", total);
    if fired {
        v.record("margin total H(d2) > Lambda", total - lambda);
        v.assume(&[
            "[ST2] Shi-Tam inequality for surfaces in hyperbolic space",
            "[M] corner smoothing with scalar curvature bounded below by -C",
        ]);
    }
    Ok(ThresholdVerdict { lambda, verdict: v })
}

/// Large-`H₂` criterion for `3 ≤ n ≤ 7`. After rescaling to `κ = 1` the
/// threshold is `Λ = H₀ + 1`, `H₀ = (n-1)sqrt(1 + r₂²)/r₂`; `Λ` is reported in
/// the original units. When `H₂ ≥ Λ` the hyperbolic quasi-spherical
/// extension with `u₀ = H₀/H₂ < 1` is solved and the trace of its mass
/// aspect must come out negative.
pub fn hyperbolic_threshold_check(d1: &RoundBartnikData, d2: &RoundBartnikData, bound: f64) -> Result<ThresholdVerdict> {
    if d1.n != d2.n {
        return Err(Error::Parameter("data of different dimensions".into()));
    }
    positive_mean_curvature(&BartnikData::Round(*d1), "d₁")?;
    positive_mean_curvature(&BartnikData::Round(*d2), "d₂")?;
    let n = d2.n;
    let kappa = curvature_scale(d1, bound, 0.0)?;
    let (r2, h2) = (kappa * d2.radius, d2.mean_curvature / kappa);
    let h0 = n.slice_dim() * (1.0 + r2 * r2).sqrt() / r2;
    let lambda = kappa * (h0 + 1.0);
    let mut v = Verdict::new(Outcome::Inconclusive);
    v.record("kappa", kappa);
    v.record("C", bound);
    v.record("Lambda", lambda);
    v.record("H(d2)", d2.mean_curvature);
    if h2 >= h0 + 1.0 {
        let u0 = h0 / h2;
        let rho2 = r2.asinh();
        let problem = QsProblem::new(n, Background::Hyperbolic { kappa: 1.0 }, rho2, (rho2 + 10.0).max(20.0), u0);
        let band = qs_hyperbolic_solve(&problem)?;
        let aspect = hyperbolic_mass_aspect(&band)?;
        v.record("u0", u0);
        v.record("mass aspect trace", aspect.trace);
        if aspect.trace < 0.0 {
            v.outcome = Outcome::NonexistenceCertified("Thm1.3");
            v.record("margin H(d2) >= Lambda", d2.mean_curvature - lambda);
            v.record("margin mass aspect trace < 0", -aspect.trace);
            v.assume(&[
                "[BQ] smoothing of corners preserving R >= -n(n-1) and the sign of the mass aspect",
                "[ACG] rigidity: nonnegative mass aspect for R >= -n(n-1)",
            ]);
        }
    }
    Ok(ThresholdVerdict { lambda, verdict: v })
}

/// Existence through an explicit variable-mass Schwarzschild band when
/// `V₁ < V₂` and `m₁ ≤ m₂`; never claims nonexistence.
pub fn construct_existence(d1: &RoundBartnikData, d2: &RoundBartnikData) -> Result<Verdict> {
    positive_mean_curvature(&BartnikData::Round(*d1), "d₁")?;
    positive_mean_curvature(&BartnikData::Round(*d2), "d₂")?;
    match schwarzschild_band_round(d1, d2, BAND_POINTS)? {
        BandOutcome::Feasible(band) => {
            let mut v = Verdict::new(Outcome::ExistenceConstructed);
            v.record("m1", band.masses.0);
            v.record("m2", band.masses.1);
            v.record("margin V2 - V1", d2.area() - d1.area());
            v.record("margin m2 - m1", band.masses.1 - band.masses.0);
            v.record("min R", band.min_scalar);
            v.construction = Some(band);
            Ok(v)
        }
        BandOutcome::Infeasible { violated, masses, radii } => {
            let mut v = Verdict::new(Outcome::Inconclusive);
            v.record("m1", masses.0);
            v.record("m2", masses.1);
            v.record("r1", radii.0);
            v.record("r2", radii.1);
            v.assumptions.push(alloc::format!("hypothesis {violated} fails"));
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn round(r: f64, h: f64) -> RoundBartnikData {
        RoundBartnikData::sphere(r, h).unwrap()
    }

    fn obstruction(r1: f64, h1: f64, r2: f64, h2: f64) -> Verdict {
        check_mass_obstruction(&round(r1, h1).into(), &round(r2, h2).into()).unwrap()
    }

    #[test]
    fn mass_obstruction_examples() {
        let v = obstruction(1.0, 1.0, 1.0, 3.0);
        assert_eq!(v.outcome, Outcome::NonexistenceCertified("Thm1.1"));
        assert!((v.audit_value("m_H(d1)").unwrap() - 0.375).abs() < 1e-14);
        assert!((v.audit_value("m_BY(d2)").unwrap() + 0.5).abs() < 1e-14);
        assert!(!v.assumptions.is_empty());

        let v = obstruction(1.0, 1.0, 1.0, 2.0);
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert_eq!(v.audit_value("m_BY(d2)").unwrap(), 0.0);

        let v = obstruction(1.0, 3.0, 1.0, 3.0);
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!((v.audit_value("m_H(d1)").unwrap() + 0.625).abs() < 1e-14);
    }

    #[test]
    fn mass_obstruction_preconditions() {
        let bad = check_mass_obstruction(&round(1.0, -1.0).into(), &round(1.0, 3.0).into());
        assert!(matches!(bad, Err(Error::Precondition(_))));
        let d4 = RoundBartnikData::new(Dimension::new(4).unwrap(), 1.0, 1.0).unwrap();
        assert!(matches!(check_mass_obstruction(&d4.into(), &round(1.0, 3.0).into()), Err(Error::WrongDimension { .. })));
    }

    #[test]
    fn mass_obstruction_is_scale_invariant() {
        for &(r1, h1, r2, h2) in &[(1.0, 1.0, 1.0, 3.0), (1.0, 1.5, 2.0, 1.2), (2.0, 0.5, 1.0, 1.9)] {
            let base = obstruction(r1, h1, r2, h2);
            for &l in &[0.5, 2.0] {
                let s = obstruction(l * r1, h1 / l, l * r2, h2 / l);
                assert_eq!(s.outcome, base.outcome);
                for key in ["m_H(d1)", "m_BY(d2)"] {
                    let (a, b) = (base.audit_value(key).unwrap(), s.audit_value(key).unwrap());
                    assert!((b - l * a).abs() < 1e-13, "{key}: {b} vs {l}·{a}");
                }
            }
        }
    }

    #[test]
    fn total_mean_curvature_examples() {
        let d1 = round(1.0, 2.0 * 2.0f64.sqrt());
        assert!((cap_curvature(&d1).unwrap() - 1.0).abs() < 1e-14);
        let d2 = AxisymBartnikData::round(1.0, 3.0, 65).unwrap();
        let out = total_mean_curvature_bound(&d1, &d2, 0.0).unwrap();
        assert!((out.lambda - (16.0 * PI + 1.0)).abs() < 1e-9);
        assert_eq!(out.verdict.outcome, Outcome::Inconclusive);
        // ∫H₂ = 20π already exceeds 16π + 1.
        let out = total_mean_curvature_bound(&d1, &d2.with_mean_curvature(|_| 5.0), 0.0).unwrap();
        assert!(out.verdict.is_nonexistence());

        let out = total_mean_curvature_bound(&d1, &d2.with_mean_curvature(|_| 10.0), 0.0).unwrap();
        assert_eq!(out.verdict.outcome, Outcome::NonexistenceCertified("Thm1.2"));
        let margin = out.verdict.audit_value("margin total H(d2) > Lambda").unwrap();
        assert!((margin - (40.0 * PI - 16.0 * PI - 1.0)).abs() < 1e-5);

        // C above 6κ₁² takes over the curvature scale.
        let out = total_mean_curvature_bound(&d1, &d2, 24.0).unwrap();
        assert!((out.verdict.audit_value("kappa").unwrap() - 2.0).abs() < 1e-14);
        assert!((out.lambda - (4.0 * PI * 2.0 * 5.0 + 1.0)).abs() < 1e-9);
        assert_eq!(out.verdict.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn total_mean_curvature_errors() {
        let d2 = AxisymBartnikData::round(1.0, 5.0, 65).unwrap();
        assert!(matches!(total_mean_curvature_bound(&round(1.0, 2.0), &d2, 0.0), Err(Error::Cap(_))));
        let prolate = AxisymBartnikData::from_profiles(
            |t| {
                let (s, c) = (t.sin(), t.cos());
                let q = (c * c + 4.0 * s * s).sqrt();
                (q, 3.0 * s * c / q)
            },
            |t| (t.sin(), t.cos(), -t.sin()),
            |_| 1.0,
            65,
        )
        .unwrap();
        let d1 = round(1.0, 3.0);
        assert!(matches!(total_mean_curvature_bound(&d1, &prolate, 0.0), Err(Error::Restriction(_))));
    }

    #[test]
    fn hyperbolic_threshold_examples() {
        let d1 = round(1.0, 2.0 * 2.0f64.sqrt());
        let out = hyperbolic_threshold_check(&d1, &round(1.0, 10.0), 0.0).unwrap();
        assert!((out.lambda - (2.0 * 2.0f64.sqrt() + 1.0)).abs() < 1e-14);
        assert_eq!(out.verdict.outcome, Outcome::NonexistenceCertified("Thm1.3"));
        assert!((out.verdict.audit_value("u0").unwrap() - 0.2 * 2.0f64.sqrt()).abs() < 1e-14);
        assert!(out.verdict.audit_value("mass aspect trace").unwrap() < 0.0);
        assert_eq!(out.verdict.assumptions.len(), 2);

        let out = hyperbolic_threshold_check(&d1, &round(1.0, 1.0), 0.0).unwrap();
        assert_eq!(out.verdict.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn hyperbolic_threshold_in_original_units() {
        // κ₁ = 2: the threshold is 2(H₀(2 r₂) + 1).
        let d1 = round(1.0, 2.0 * 5.0f64.sqrt());
        let out = hyperbolic_threshold_check(&d1, &round(1.0, 12.0), 0.0).unwrap();
        assert!((out.lambda - 2.0 * (5.0f64.sqrt() + 1.0)).abs() < 1e-13);
        assert!(out.verdict.is_nonexistence());
    }

    #[test]
    fn existence_examples() {
        let v = construct_existence(&round(1.0, 2.0), &round(2.0, 1.0)).unwrap();
        assert_eq!(v.outcome, Outcome::ExistenceConstructed);
        assert!(v.construction.is_some());

        let v = construct_existence(&round(1.0, 2.0 * 0.8f64.sqrt()), &round(2.0, 0.7f64.sqrt())).unwrap();
        assert_eq!(v.outcome, Outcome::ExistenceConstructed);
        assert!(v.audit_value("min R").unwrap() >= -1e-10);
        assert!((v.audit_value("m2").unwrap() - 0.3).abs() < 1e-12);

        let v = construct_existence(&round(2.0, 1.0), &round(1.0, 2.0)).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.construction.is_none() && v.assumptions[0].contains("V₁ < V₂"));
    }

    #[test]
    fn outcome_labels() {
        assert_eq!(alloc::format!("{}", Outcome::NonexistenceCertified("Thm1.1")), "NonexistenceCertified Thm1.1");
        assert_eq!(alloc::format!("{}", Outcome::Inconclusive), "Inconclusive");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn threshold_certification_is_monotone(h2 in 4.0f64..30.0, extra in 0.0f64..20.0) {
            let d1 = round(1.0, 2.0 * 2.0f64.sqrt());
            let a = hyperbolic_threshold_check(&d1, &round(1.0, h2), 0.0).unwrap();
            let b = hyperbolic_threshold_check(&d1, &round(1.0, h2 + extra), 0.0).unwrap();
            prop_assert!(a.verdict.is_nonexistence());
            prop_assert!(b.verdict.is_nonexistence());
        }

        #[test]
        fn existence_never_contradicts_obstruction(
            r1 in 0.5f64..2.0, h1 in 0.2f64..4.0, r2 in 0.5f64..3.0, h2 in 0.2f64..4.0,
        ) {
            let e = construct_existence(&round(r1, h1), &round(r2, h2)).unwrap();
            let o = obstruction(r1, h1, r2, h2);
            prop_assert!(!(e.outcome == Outcome::ExistenceConstructed && o.is_nonexistence()));
        }
    }
}
