//! Command dispatch. Each command fills a summary and, when an output
//! directory is known, writes its artifacts there.

use std::path::PathBuf;

use bartnik_core::bartnik::{AxisymBartnikData, BartnikData, RoundBartnikData};
use bartnik_core::constructions::{schwarzschild_band_round, BandOutcome};
use bartnik_core::criteria::{
    check_mass_obstruction, construct_existence, hyperbolic_threshold_check, total_mean_curvature_bound, Outcome, Verdict,
};
use bartnik_core::error::ErrorKind;
use bartnik_core::geometry::{curvature_report, scalar_curvature_band, scalar_curvature_fd};
use bartnik_core::masses::{adm_mass_from_tail, hyperbolic_mass_aspect, mass_report};
use bartnik_core::quasi_spherical::{
    qs_closed_form_deficit, qs_euclidean_mass, qs_euclidean_solve, qs_hyperbolic_solve, qs_path_solve, Background, QsProblem,
};
use bartnik_core::{BandMetric, Error};

use crate::config::{BandKind, Command, DataBlock, ProblemConfig, QsSetup};
use crate::error::{CliError, Result};
use crate::output::{key_segment, write_file, KeyValues, SliceTable};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub emit_plot_data: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub summary: KeyValues,
    /// Verdict of the `criteria` command.
    pub verdict: Option<KeyValues>,
    pub artifacts: Vec<PathBuf>,
}

struct Ctx<'a> {
    cfg: &'a ProblemConfig,
    opts: &'a RunOptions,
    report: RunReport,
}

impl Ctx<'_> {
    fn emit(&mut self, name: &str, contents: &str) -> Result<()> {
        if let Some(dir) = &self.opts.out_dir {
            self.report.artifacts.push(write_file(dir, name, contents)?);
        }
        Ok(())
    }

    fn emit_band(&mut self, g: &BandMetric) -> Result<()> {
        if self.opts.out_dir.is_none() {
            return Ok(());
        }
        let table = SliceTable::from_band(g)?;
        let stem = self.cfg.output.stem.clone();
        self.emit(&format!("{stem}.csv"), &table.to_csv())?;
        if self.opts.emit_plot_data {
            for (col, name) in [(1, "radius"), (2, "lapse"), (3, "mean_curvature"), (4, "scalar_curvature")] {
                self.emit(&format!("{stem}_{name}.dat"), &table.plot_data(col))?;
            }
        }
        Ok(())
    }

    fn number(&mut self, key: &str, value: f64) {
        self.report.summary.number(key, value);
    }

    fn text(&mut self, key: &str, value: impl Into<String>) {
        self.report.summary.text(key, value);
    }

    fn within_tolerance(&self, what: &str, value: f64) -> Result<()> {
        let tol = self.cfg.solver.tolerance;
        if value <= tol {
            Ok(())
        } else {
            Err(CliError::Check(format!("{what} = {value:e} exceeds tolerance {tol:e}")))
        }
    }
}

pub fn run(cfg: &ProblemConfig, opts: &RunOptions) -> Result<RunReport> {
    let mut cx = Ctx { cfg, opts, report: RunReport::default() };
    cx.text("command", cfg.command.name());
    cx.text("n", cfg.n.get().to_string());
    match cfg.command {
        Command::Mass => mass(&mut cx)?,
        Command::Qs => qs(&mut cx)?,
        Command::Cobordism => cobordism(&mut cx)?,
        Command::Criteria => criteria(&mut cx)?,
        Command::Curvature => curvature(&mut cx)?,
    }
    Ok(cx.report)
}

fn data(cfg: &ProblemConfig, block: &DataBlock) -> Result<BartnikData> {
    Ok(match block {
        DataBlock::Round { radius, mean_curvature } => RoundBartnikData::new(cfg.n, *radius, *mean_curvature)?.into(),
        DataBlock::Axisym { profile, .. } => {
            if cfg.n.get() != 3 {
                return Err(Error::WrongDimension { expected: 3, found: cfg.n.get() }.into());
            }
            let p = profile.clone();
            BartnikData::Axisym(AxisymBartnikData::from_samples(p.theta, p.f, p.h, p.mean)?)
        }
    })
}

fn round(d: &BartnikData, label: &str) -> bartnik_core::Result<RoundBartnikData> {
    match d {
        BartnikData::Round(r) => Ok(*r),
        BartnikData::Axisym(_) => Err(Error::Restriction(format!("{label} must be round"))),
    }
}

fn pair(cx: &Ctx) -> Result<(BartnikData, BartnikData)> {
    let block = |b: &Option<DataBlock>| b.clone().expect("required section checked by the parser");
    Ok((data(cx.cfg, &block(&cx.cfg.d1))?, data(cx.cfg, &block(&cx.cfg.d2))?))
}

fn mass(cx: &mut Ctx) -> Result<()> {
    for (label, block) in [("d1", &cx.cfg.d1), ("d2", &cx.cfg.d2)] {
        let Some(block) = block else { continue };
        let m = mass_report(&data(cx.cfg, block)?)?;
        cx.number(&format!("{label}.area"), m.area);
        for (key, value) in [("m_H", m.hawking), ("m_BY", m.brown_york)] {
            match value {
                Some(v) => cx.number(&format!("{label}.{key}"), v),
                None => cx.text(&format!("{label}.{key}"), "n/a"),
            }
        }
        cx.number(&format!("{label}.total_H"), m.total_mean_curvature);
    }
    Ok(())
}

fn qs(cx: &mut Ctx) -> Result<()> {
    let (n, step) = (cx.cfg.n, cx.cfg.solver.step);
    let setup = cx.cfg.qs.expect("required section checked by the parser");
    let mut deviation = None;
    let g = match setup {
        QsSetup::Euclidean { start, end, u0, extract } => {
            cx.text("background", "euclidean");
            let g = qs_euclidean_solve(&QsProblem::new(n, Background::Euclidean, start, end, u0).with_step(step))?;
            let m = qs_euclidean_mass(n, start, u0);
            let k = n.get() as i32 - 2;
            let mut worst = 0.0f64;
            for (&r, &u) in g.grid().iter().zip(g.lapse().values()) {
                worst = worst.max((u - (1.0 - 2.0 * m / r.powi(k)).powf(-0.5)).abs());
            }
            cx.number("mass (closed form)", m);
            if extract {
                cx.number("ADM mass (tail fit)", adm_mass_from_tail(&g)?.mass);
            }
            deviation = Some(worst);
            g
        }
        QsSetup::Hyperbolic { kappa, start, end, u0, extract } => {
            cx.text("background", "hyperbolic");
            cx.number("kappa", kappa);
            let g = qs_hyperbolic_solve(&QsProblem::new(n, Background::Hyperbolic { kappa }, start, end, u0).with_step(step))?;
            let mut worst = 0.0f64;
            for &t in g.grid() {
                let exact = qs_closed_form_deficit(n, kappa * start, u0, kappa * t)?;
                worst = worst.max((g.lapse_deficit(t)? - exact).abs());
            }
            if extract && kappa == 1.0 {
                cx.number("mass aspect trace", hyperbolic_mass_aspect(&g)?.trace);
            } else if extract {
                cx.text("mass aspect trace", "n/a (kappa != 1)");
            }
            deviation = Some(worst);
            g
        }
        QsSetup::RoundPath { a2, c, h2 } | QsSetup::PscPath { a2, c, h2, .. } => {
            let background = match setup {
                QsSetup::PscPath { delta0, .. } => Background::PscPath { a2, c, delta0 },
                _ => Background::RoundPath { a2, c },
            };
            cx.text("background", if matches!(setup, QsSetup::PscPath { .. }) { "psc_path" } else { "round_path" });
            let p = QsProblem::path(n, background, h2)?.with_step(step);
            let s = qs_path_solve(&p)?;
            cx.number("u0", p.u0);
            cx.number("scalar curvature", s.scalar_curvature);
            cx.number("H_bar(0)", s.h_bar_start);
            cx.number("H'", s.h_prime);
            cx.number("sup u", s.sup_u);
            s.band
        }
    };
    let (a, b) = g.domain();
    cx.number("start", a);
    cx.number("end", b);
    cx.text("slices", g.grid().len().to_string());
    cx.number("u(end)", *g.lapse().values().last().expect("bands are nonempty"));
    if let Some(d) = deviation {
        cx.number("max |u - closed form|", d);
    }
    cx.emit_band(&g)?;
    match deviation {
        Some(d) => cx.within_tolerance("max |u - closed form|", d),
        None => Ok(()),
    }
}

fn cobordism(cx: &mut Ctx) -> Result<()> {
    let (d1, d2) = pair(cx)?;
    let (d1, d2) = (round(&d1, "d1")?, round(&d2, "d2")?);
    match schwarzschild_band_round(&d1, &d2, cx.cfg.solver.points)? {
        BandOutcome::Feasible(b) => {
            cx.text("status", "feasible");
            cx.number("m1", b.masses.0);
            cx.number("m2", b.masses.1);
            cx.number("r1", b.radii.0);
            cx.number("r2", b.radii.1);
            cx.number("H at r1", b.band.lower_mean_curvature()?);
            cx.number("H at r2", b.band.upper_mean_curvature()?);
            cx.number("min R", b.min_scalar);
            cx.number("formula residual", b.formula_residual);
            cx.emit_band(&b.band)?;
        }
        BandOutcome::Infeasible { violated, masses, radii } => {
            cx.text("status", format!("infeasible: hypothesis {violated} fails"));
            cx.number("m1", masses.0);
            cx.number("m2", masses.1);
            cx.number("r1", radii.0);
            cx.number("r2", radii.1);
        }
    }
    Ok(())
}

/// Runs every criterion that applies. A criterion whose preconditions do
/// not hold is listed as skipped; solver and extraction failures abort.
fn criteria(cx: &mut Ctx) -> Result<()> {
    let (d1, d2) = pair(cx)?;
    let bound = cx.cfg.solver.smoothing_bound;
    let points = cx.cfg.solver.points;
    let results: [(&str, bartnik_core::Result<Verdict>); 4] = [
        ("mass_obstruction", check_mass_obstruction(&d1, &d2)),
        (
            "total_mean_curvature",
            round(&d1, "d1").and_then(|r1| {
                let a2 = match &d2 {
                    BartnikData::Axisym(a) => a.clone(),
                    BartnikData::Round(r) => AxisymBartnikData::round(r.radius, r.mean_curvature, points)?,
                };
                Ok(total_mean_curvature_bound(&r1, &a2, bound)?.verdict)
            }),
        ),
        (
            "hyperbolic_threshold",
            round(&d1, "d1").and_then(|r1| Ok(hyperbolic_threshold_check(&r1, &round(&d2, "d2")?, bound)?.verdict)),
        ),
        ("existence", round(&d1, "d1").and_then(|r1| construct_existence(&r1, &round(&d2, "d2")?))),
    ];

    let mut body = KeyValues::default();
    let mut certified = None;
    let mut construction = None;
    for (name, result) in results {
        let v = match result {
            Ok(v) => v,
            Err(e) if e.kind() == ErrorKind::Precondition => {
                body.text(name, format!("skipped: {e}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        body.text(name, v.outcome.to_string());
        for (label, value) in &v.audit {
            body.number(format!("{name}.{}", key_segment(label)), *value);
        }
        for (i, a) in v.assumptions.iter().enumerate() {
            body.text(format!("{name}.assumption.{}", i + 1), a.clone());
        }
        match v.outcome {
            Outcome::NonexistenceCertified(_) => certified = certified.or(Some(v.outcome)),
            Outcome::ExistenceConstructed => construction = v.construction,
            Outcome::Inconclusive => {}
        }
    }
    let outcome = match (certified, &construction) {
        (Some(c), Some(_)) => return Err(CliError::Check(format!("criteria disagree: {c} alongside an explicit construction"))),
        (Some(c), None) => c,
        (None, Some(_)) => Outcome::ExistenceConstructed,
        (None, None) => Outcome::Inconclusive,
    };

    let mut verdict = KeyValues::default();
    verdict.text("outcome", outcome.to_string());
    verdict.text("n", cx.cfg.n.get().to_string());
    verdict.pairs.extend(body.pairs);
    cx.report.summary.pairs.extend(verdict.pairs.iter().filter(|(k, _)| k != "n").cloned());
    let stem = cx.cfg.output.stem.clone();
    cx.emit(&format!("{stem}_verdict.txt"), &verdict.render())?;
    cx.report.verdict = Some(verdict);
    if let Some(b) = construction {
        cx.emit_band(&b.band)?;
    }
    Ok(())
}

fn curvature(cx: &mut Ctx) -> Result<()> {
    let spec = cx.cfg.band.expect("required section checked by the parser");
    let n = cx.cfg.n;
    let g = match spec.kind {
        BandKind::Euclidean => BandMetric::euclidean(n, spec.start, spec.end, spec.points)?,
        BandKind::Hyperbolic { kappa } => BandMetric::hyperbolic(n, kappa, spec.start, spec.end, spec.points)?,
        BandKind::Schwarzschild { mass } => BandMetric::schwarzschild(n, mass, spec.start, spec.end, spec.points)?,
    };
    let report = curvature_report(&g)?;
    let closed = scalar_curvature_band(&g)?;
    let fd = scalar_curvature_fd(&g, cx.cfg.solver.step)?;
    let fd_gap = closed.values().iter().zip(fd.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    cx.text("slices", g.grid().len().to_string());
    cx.number("min R", report.min_scalar());
    cx.number("max R", report.max_scalar());
    cx.number("max Gauss residual", report.max_gauss_residual());
    cx.number("finite-difference step", cx.cfg.solver.step);
    cx.number("max |R - R_fd|", fd_gap);
    cx.emit_band(&g)?;
    cx.within_tolerance("max Gauss residual", report.max_gauss_residual())
}
