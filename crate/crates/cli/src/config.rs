//! Problem files: UTF-8 text with `[section]` headers, `key = value` lines
//! and `#` comments. Parsing never stops at the first problem; every issue
//! found is reported together.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use bartnik_core::quasi_spherical::DEFAULT_STEP;
use bartnik_core::Dimension;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Quasi-local masses of d1 (and d2).
    Mass,
    /// Quasi-spherical extension described by [qs].
    Qs,
    /// Variable-mass Schwarzschild band from d1 to d2.
    Cobordism,
    /// Every applicable existence/nonexistence criterion for (d1, d2).
    Criteria,
    /// Curvature audit of the analytic band in [band].
    Curvature,
}

impl Command {
    pub const ALL: [Command; 5] = [Command::Mass, Command::Qs, Command::Cobordism, Command::Criteria, Command::Curvature];

    pub fn name(self) -> &'static str {
        match self {
            Command::Mass => "mass",
            Command::Qs => "qs",
            Command::Cobordism => "cobordism",
            Command::Criteria => "criteria",
            Command::Curvature => "curvature",
        }
    }

    fn required_sections(self) -> &'static [&'static str] {
        match self {
            Command::Mass => &["d1"],
            Command::Qs => &["qs"],
            Command::Cobordism | Command::Criteria => &["d1", "d2"],
            Command::Curvature => &["band"],
        }
    }
}

/// Sampled axisymmetric profile: columns `theta f h H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub theta: Vec<f64>,
    pub f: Vec<f64>,
    pub h: Vec<f64>,
    pub mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataBlock {
    Round { radius: f64, mean_curvature: f64 },
    /// `path` is absolute once parsed.
    Axisym { path: PathBuf, profile: Profile },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solver {
    /// ODE step for `qs`, finite-difference step for `curvature`.
    pub step: f64,
    pub tolerance: f64,
    pub rho_max: f64,
    pub points: usize,
    /// Lower scalar-curvature bound `-C` allowed by corner smoothing.
    pub smoothing_bound: f64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { step: DEFAULT_STEP, tolerance: 1e-8, rho_max: 20.0, points: 201, smoothing_bound: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QsSetup {
    /// `extract` asks for the ADM mass (flat) or the mass aspect
    /// (hyperbolic) of the solution.
    Euclidean { start: f64, end: f64, u0: f64, extract: bool },
    Hyperbolic { kappa: f64, start: f64, end: f64, u0: f64, extract: bool },
    RoundPath { a2: f64, c: f64, h2: f64 },
    PscPath { a2: f64, c: f64, delta0: f64, h2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandKind {
    Euclidean,
    Hyperbolic { kappa: f64 },
    /// `start`/`end` are areal radii.
    Schwarzschild { mass: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    pub kind: BandKind,
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub dir: Option<PathBuf>,
    /// File-name stem for artifacts; defaults to the command name.
    pub stem: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub command: Command,
    pub n: Dimension,
    pub d1: Option<DataBlock>,
    pub d2: Option<DataBlock>,
    pub solver: Solver,
    pub qs: Option<QsSetup>,
    pub band: Option<BandSpec>,
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.file.display(), l, self.message),
            None => write!(f, "{}: {}", self.file.display(), self.message),
        }
    }
}

/// All problems found in one problem file and the profiles it references.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl ConfigErrors {
    pub fn single(file: &Path, message: impl Into<String>) -> Self {
        ConfigErrors(vec![ConfigError { file: file.to_path_buf(), line: None, message: message.into() }])
    }

    pub fn messages(&self) -> Vec<String> {
        self.0.iter().map(|e| e.message.clone()).collect()
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

const SECTIONS: [&str; 7] = ["problem", "d1", "d2", "solver", "qs", "band", "output"];

struct Entry {
    value: String,
    line: usize,
    used: Cell<bool>,
}

struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

struct Collector<'a> {
    file: &'a Path,
    errors: Vec<ConfigError>,
}

impl Collector<'_> {
    fn push(&mut self, line: Option<usize>, message: String) {
        self.errors.push(ConfigError { file: self.file.to_path_buf(), line, message });
    }

    fn at(&mut self, file: &Path, line: Option<usize>, message: String) {
        self.errors.push(ConfigError { file: file.to_path_buf(), line, message });
    }
}

struct View<'a> {
    name: &'a str,
    section: Option<&'a Section>,
}

impl<'a> View<'a> {
    fn raw(&self, key: &str) -> Option<&'a Entry> {
        let e = self.section?.entries.get(key)?;
        e.used.set(true);
        Some(e)
    }

    fn text(&self, key: &str) -> Option<&'a str> {
        self.raw(key).map(|e| e.value.as_str())
    }

    fn line(&self) -> Option<usize> {
        self.section.map(|s| s.line)
    }

    fn missing(&self, key: &str, c: &mut Collector) {
        c.push(self.line(), format!("missing key `{key}` in [{}]", self.name));
    }

    fn num(&self, key: &str, c: &mut Collector) -> Option<f64> {
        let e = self.raw(key)?;
        match e.value.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                c.push(Some(e.line), format!("malformed number `{}` for `{key}`", e.value));
                None
            }
        }
    }

    fn num_or(&self, key: &str, default: f64, c: &mut Collector) -> f64 {
        self.num(key, c).unwrap_or(default)
    }

    fn require(&self, key: &str, c: &mut Collector) -> Option<f64> {
        if self.section.is_some_and(|s| s.entries.contains_key(key)) {
            self.num(key, c)
        } else {
            self.missing(key, c);
            None
        }
    }

    fn count(&self, key: &str, c: &mut Collector) -> Option<usize> {
        let e = self.raw(key)?;
        match e.value.parse::<usize>() {
            Ok(k) => Some(k),
            Err(_) => {
                c.push(Some(e.line), format!("malformed integer `{}` for `{key}`", e.value));
                None
            }
        }
    }

    fn flag(&self, key: &str, default: bool, c: &mut Collector) -> bool {
        let Some(e) = self.raw(key) else { return default };
        match e.value.as_str() {
            "true" => true,
            "false" => false,
            other => {
                c.push(Some(e.line), format!("expected `true` or `false` for `{key}`, found `{other}`"));
                default
            }
        }
    }

    fn positive(&self, key: &str, default: f64, c: &mut Collector) -> f64 {
        let x = self.num_or(key, default, c);
        if !(x > 0.0) {
            let line = self.raw(key).map(|e| e.line);
            c.push(line, format!("`{key}` must be positive, got {x}"));
        }
        x
    }
}

/// Reads and validates a problem file. `command` comes from the command
/// line; when the file also names one, the two must agree.
pub fn parse_config(path: &Path, command: Option<Command>) -> Result<ProblemConfig, ConfigErrors> {
    let text = fs::read_to_string(path).map_err(|e| ConfigErrors::single(path, format!("cannot read: {e}")))?;
    let base = fs::canonicalize(path)
        .ok()
        .and_then(|p| p.parent().map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."));
    parse_str(&text, path, &base, command)
}

/// Parses problem text. Relative paths inside are resolved against
/// `base_dir`; `file` only labels error messages.
pub fn parse_str(text: &str, file: &Path, base_dir: &Path, command: Option<Command>) -> Result<ProblemConfig, ConfigErrors> {
    let mut c = Collector { file, errors: Vec::new() };
    let sections = split_sections(text, &mut c);
    let view = |name: &'static str| View { name, section: sections.get(name) };

    let problem = view("problem");
    let file_command = problem.raw("command").and_then(|e| {
        let found = Command::ALL.into_iter().find(|k| k.name() == e.value);
        if found.is_none() {
            c.push(Some(e.line), format!("unknown command `{}`", e.value));
        }
        found
    });
    let command = match (command, file_command) {
        (Some(a), Some(b)) if a != b => {
            c.push(None, format!("command `{}` conflicts with `command = {}` in [problem]", a.name(), b.name()));
            Some(a)
        }
        (a, b) => a.or(b),
    };
    if command.is_none() && !c.errors.iter().any(|e| e.message.starts_with("unknown command")) {
        c.push(None, "no command given; pass one on the command line or set `command` in [problem]".into());
    }

    let n = match problem.count("n", &mut c) {
        Some(k) => match Dimension::new(k) {
            Ok(d) => Some(d),
            Err(e) => {
                c.push(problem.raw("n").map(|e| e.line), e.to_string());
                None
            }
        },
        None if problem.raw("n").is_some() => None,
        None => Some(Dimension::THREE),
    };

    let mut solver = Solver::default();
    let s = view("solver");
    solver.step = s.positive("step", solver.step, &mut c);
    solver.tolerance = s.positive("tolerance", solver.tolerance, &mut c);
    solver.rho_max = s.positive("rho_max", solver.rho_max, &mut c);
    solver.points = s.count("points", &mut c).unwrap_or(solver.points);
    solver.smoothing_bound = s.num_or("smoothing_bound", solver.smoothing_bound, &mut c);

    let d1 = sections.get("d1").and_then(|_| data_block(&view("d1"), base_dir, &mut c));
    let d2 = sections.get("d2").and_then(|_| data_block(&view("d2"), base_dir, &mut c));
    let qs = sections.get("qs").and_then(|_| qs_setup(&view("qs"), solver.rho_max, &mut c));
    let band = sections.get("band").and_then(|_| band_spec(&view("band"), solver.points, &mut c));

    let out = view("output");
    let output = Output {
        dir: out.text("dir").map(|d| base_dir.join(d)),
        stem: out.text("stem").map(str::to_string).unwrap_or_else(|| command.map_or("run", Command::name).to_string()),
    };

    if let Some(cmd) = command {
        for &name in cmd.required_sections() {
            if !sections.contains_key(name) {
                c.push(None, format!("missing required section [{name}] for `{}`", cmd.name()));
            }
        }
    }
    for (name, s) in &sections {
        if !SECTIONS.contains(&name.as_str()) {
            c.push(Some(s.line), format!("unknown section [{name}]"));
            continue;
        }
        for (key, e) in &s.entries {
            if !e.used.get() {
                c.push(Some(e.line), format!("unknown key `{key}` in [{name}]"));
            }
        }
    }

    if !c.errors.is_empty() {
        let mut errors = c.errors;
        errors.sort_by_key(|e| (e.file.clone(), e.line.unwrap_or(0)));
        return Err(ConfigErrors(errors));
    }
    Ok(ProblemConfig {
        command: command.expect("checked above"),
        n: n.expect("checked above"),
        d1,
        d2,
        solver,
        qs,
        band,
        output,
    })
}

fn split_sections(text: &str, c: &mut Collector) -> BTreeMap<String, Section> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let name = name.trim().to_string();
            if sections.contains_key(&name) {
                c.push(Some(line), format!("duplicate section [{name}]"));
            } else {
                sections.insert(name.clone(), Section { line, entries: BTreeMap::new() });
            }
            current = Some(name);
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            c.push(Some(line), format!("expected `[section]` or `key = value`, found `{body}`"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(section) = current.as_ref().and_then(|s| sections.get_mut(s)) else {
            c.push(Some(line), format!("`{key}` appears before any [section]"));
            continue;
        };
        if key.is_empty() {
            c.push(Some(line), "empty key".into());
        } else if section.entries.contains_key(key) {
            c.push(Some(line), format!("duplicate key `{key}`"));
        } else {
            section.entries.insert(key.to_string(), Entry { value: value.to_string(), line, used: Cell::new(false) });
        }
    }
    sections
}

fn data_block(v: &View, base_dir: &Path, c: &mut Collector) -> Option<DataBlock> {
    match v.text("kind").unwrap_or("round") {
        "round" => {
            let radius = v.require("radius", c);
            let mean_curvature = v.require("mean_curvature", c);
            Some(DataBlock::Round { radius: radius?, mean_curvature: mean_curvature? })
        }
        "axisym" => {
            let Some(rel) = v.text("profile") else {
                v.missing("profile", c);
                return None;
            };
            let joined = base_dir.join(rel);
            let path = fs::canonicalize(&joined).unwrap_or(joined);
            let profile = read_profile(&path, c)?;
            Some(DataBlock::Axisym { path, profile })
        }
        other => {
            c.push(v.raw("kind").map(|e| e.line), format!("unknown data kind `{other}` in [{}] (round, axisym)", v.name));
            None
        }
    }
}

/// Reads `theta f h H` rows (comma or whitespace separated, `#` comments).
/// The `theta` column must increase strictly.
fn read_profile(path: &Path, c: &mut Collector) -> Option<Profile> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            c.at(path, None, format!("cannot read profile: {e}"));
            return None;
        }
    };
    let mut p = Profile { theta: Vec::new(), f: Vec::new(), h: Vec::new(), mean: Vec::new() };
    let mut ok = true;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split(|ch: char| ch == ',' || ch.is_whitespace()).filter(|s| !s.is_empty()).collect();
        if fields.len() != 4 {
            c.at(path, Some(line), format!("expected 4 columns (theta f h H), found {}", fields.len()));
            ok = false;
            continue;
        }
        let mut row = [0.0; 4];
        let mut row_ok = true;
        for (slot, s) in row.iter_mut().zip(&fields) {
            match s.parse::<f64>() {
                Ok(x) if x.is_finite() => *slot = x,
                _ => {
                    c.at(path, Some(line), format!("malformed number `{s}`"));
                    row_ok = false;
                }
            }
        }
        if !row_ok {
            ok = false;
            continue;
        }
        if let Some(&prev) = p.theta.last() {
            if !(row[0] > prev) {
                c.at(path, Some(line), format!("non-monotone grid: theta = {} does not exceed {prev}", row[0]));
                ok = false;
                continue;
            }
        }
        p.theta.push(row[0]);
        p.f.push(row[1]);
        p.h.push(row[2]);
        p.mean.push(row[3]);
    }
    if ok && p.theta.is_empty() {
        c.at(path, None, "profile has no rows".into());
        ok = false;
    }
    ok.then_some(p)
}

fn qs_setup(v: &View, rho_max: f64, c: &mut Collector) -> Option<QsSetup> {
    let background = v.text("background").unwrap_or("hyperbolic");
    match background {
        "euclidean" | "hyperbolic" => {
            let kappa = if background == "hyperbolic" { Some(v.num_or("kappa", 1.0, c)) } else { None };
            let start = v.require("start", c);
            let u0 = v.require("u0", c);
            let end = v.num_or("end", rho_max, c);
            let extract = v.flag("extract", true, c);
            let (start, u0) = (start?, u0?);
            Some(match kappa {
                Some(kappa) => QsSetup::Hyperbolic { kappa, start, end, u0, extract },
                None => QsSetup::Euclidean { start, end, u0, extract },
            })
        }
        "round_path" | "psc_path" => {
            let a2 = v.require("a2", c);
            let cc = v.require("c", c);
            let h2 = v.require("h2", c);
            let delta0 = if background == "psc_path" { Some(v.require("delta0", c)) } else { None };
            let (a2, cc, h2) = (a2?, cc?, h2?);
            Some(match delta0 {
                Some(d) => QsSetup::PscPath { a2, c: cc, delta0: d?, h2 },
                None => QsSetup::RoundPath { a2, c: cc, h2 },
            })
        }
        other => {
            c.push(
                v.raw("background").map(|e| e.line),
                format!("unknown background `{other}` (euclidean, hyperbolic, round_path, psc_path)"),
            );
            None
        }
    }
}

fn band_spec(v: &View, points: usize, c: &mut Collector) -> Option<BandSpec> {
    let kind = match v.text("kind").unwrap_or("schwarzschild") {
        "euclidean" => Some(BandKind::Euclidean),
        "hyperbolic" => Some(BandKind::Hyperbolic { kappa: v.num_or("kappa", 1.0, c) }),
        "schwarzschild" => Some(BandKind::Schwarzschild { mass: v.num_or("mass", 0.0, c) }),
        other => {
            c.push(v.raw("kind").map(|e| e.line), format!("unknown band kind `{other}` (euclidean, hyperbolic, schwarzschild)"));
            None
        }
    };
    let start = v.require("start", c);
    let end = v.require("end", c);
    let points = v.count("points", c).unwrap_or(points);
    Some(BandSpec { kind: kind?, start: start?, end: end?, points })
}

impl ProblemConfig {
    /// Applies `--step` / `--tolerance`; both must be positive.
    pub fn override_solver(&mut self, step: Option<f64>, tolerance: Option<f64>) -> Result<(), ConfigErrors> {
        let mut errors = Vec::new();
        for (flag, value, slot) in [("--step", step, &mut self.solver.step), ("--tolerance", tolerance, &mut self.solver.tolerance)] {
            let Some(x) = value else { continue };
            if x > 0.0 && x.is_finite() {
                *slot = x;
            } else {
                errors.push(ConfigError { file: PathBuf::from(flag), line: None, message: format!("must be positive, got {x}") });
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigErrors(errors))
        }
    }

    /// Canonical text form; parsing it back yields an equal config.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("[problem]\ncommand", self.command.name().into());
        kv("n", self.n.get().to_string());
        let sol = &self.solver;
        kv("\n[solver]\nstep", format!("{:?}", sol.step));
        kv("tolerance", format!("{:?}", sol.tolerance));
        kv("rho_max", format!("{:?}", sol.rho_max));
        kv("points", sol.points.to_string());
        kv("smoothing_bound", format!("{:?}", sol.smoothing_bound));
        for (name, block) in [("d1", &self.d1), ("d2", &self.d2)] {
            match block {
                Some(DataBlock::Round { radius, mean_curvature }) => {
                    kv(&format!("\n[{name}]\nkind"), "round".into());
                    kv("radius", format!("{radius:?}"));
                    kv("mean_curvature", format!("{mean_curvature:?}"));
                }
                Some(DataBlock::Axisym { path, .. }) => {
                    kv(&format!("\n[{name}]\nkind"), "axisym".into());
                    kv("profile", path.display().to_string());
                }
                None => {}
            }
        }
        match self.qs {
            Some(QsSetup::Euclidean { start, end, u0, extract }) => {
                kv("\n[qs]\nbackground", "euclidean".into());
                kv("start", format!("{start:?}"));
                kv("end", format!("{end:?}"));
                kv("u0", format!("{u0:?}"));
                kv("extract", extract.to_string());
            }
            Some(QsSetup::Hyperbolic { kappa, start, end, u0, extract }) => {
                kv("\n[qs]\nbackground", "hyperbolic".into());
                kv("kappa", format!("{kappa:?}"));
                kv("start", format!("{start:?}"));
                kv("end", format!("{end:?}"));
                kv("u0", format!("{u0:?}"));
                kv("extract", extract.to_string());
            }
            Some(QsSetup::RoundPath { a2, c, h2 }) => {
                kv("\n[qs]\nbackground", "round_path".into());
                kv("a2", format!("{a2:?}"));
                kv("c", format!("{c:?}"));
                kv("h2", format!("{h2:?}"));
            }
            Some(QsSetup::PscPath { a2, c, delta0, h2 }) => {
                kv("\n[qs]\nbackground", "psc_path".into());
                kv("a2", format!("{a2:?}"));
                kv("c", format!("{c:?}"));
                kv("delta0", format!("{delta0:?}"));
                kv("h2", format!("{h2:?}"));
            }
            None => {}
        }
        if let Some(b) = &self.band {
            match b.kind {
                BandKind::Euclidean => kv("\n[band]\nkind", "euclidean".into()),
                BandKind::Hyperbolic { kappa } => {
                    kv("\n[band]\nkind", "hyperbolic".into());
                    kv("kappa", format!("{kappa:?}"));
                }
                BandKind::Schwarzschild { mass } => {
                    kv("\n[band]\nkind", "schwarzschild".into());
                    kv("mass", format!("{mass:?}"));
                }
            }
            kv("start", format!("{:?}", b.start));
            kv("end", format!("{:?}", b.end));
            kv("points", b.points.to_string());
        }
        kv("\n[output]\nstem", self.output.stem.clone());
        if let Some(dir) = &self.output.dir {
            kv("dir", dir.display().to_string());
        }
        s
    }
}
