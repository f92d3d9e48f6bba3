//! Artifact formats. All numbers are written with `{:.16e}` (17 significant
//! digits, `.` decimal separator) and every line ends in `\n`, so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use bartnik_core::geometry::{scalar_curvature_at, slice_geometry};
use bartnik_core::BandMetric;

use crate::error::{CliError, Result};

/// Column order of band CSV files.
pub const CSV_COLUMNS: [&str; 5] = ["t", "r", "u", "H", "R"];

/// One row per grid slice of `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceTable {
    pub rows: Vec<[f64; 5]>,
}

impl SliceTable {
    pub fn from_band(g: &BandMetric) -> Result<Self> {
        let (u, r) = (g.lapse().values(), g.radius().values());
        let mut rows = Vec::with_capacity(g.grid().len());
        for (i, &t) in g.grid().iter().enumerate() {
            let h = slice_geometry(g, t)?.mean_curvature;
            rows.push([t, r[i], u[i], h, scalar_curvature_at(g, t)?]);
        }
        Ok(SliceTable { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut s = CSV_COLUMNS.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{x:.16e}");
            }
            s.push('\n');
        }
        s
    }

    /// Two-column `x y` text for column `col` against `t`.
    pub fn plot_data(&self, col: usize) -> String {
        let mut s = format!("# {} {}\n", CSV_COLUMNS[0], CSV_COLUMNS[col]);
        for row in &self.rows {
            let _ = writeln!(s, "{:.16e} {:.16e}", row[0], row[col]);
        }
        s
    }
}

/// Flat `key = value` text, one pair per line, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    pub pairs: Vec<(String, String)>,
}

impl KeyValues {
    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.pairs.push((key.into(), value.into()));
    }

    pub fn number(&mut self, key: impl Into<String>, value: f64) {
        self.text(key, format!("{value:.16e}"));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Left-aligned two-column table for terminals.
    pub fn table(&self) -> String {
        let w = self.pairs.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        self.pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
    }
}

/// Turns an audit label such as `margin m_H(d1) >= 0` into a key made of
/// `[A-Za-z0-9_.]`: `margin_m_H_d1_ge_0`.
pub fn key_segment(label: &str) -> String {
    let spelled = label.replace(">=", " ge ").replace("<=", " le ").replace('>', " gt ").replace('<', " lt ").replace(" - ", " minus ");
    let mut out = String::new();
    for ch in spelled.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('_') && !out.is_empty() {
            out.push('_');
        }
    }
    out.trim_end_matches('_').to_string()
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}
