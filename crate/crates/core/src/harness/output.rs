//! CSV and summary writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::run::RunResult;
use super::sweep::ConvergenceTable;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Value formatted with 17 significant digits in scientific notation.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Cell data as CSV: `x`, the components, the free surface and bottom for
/// shallow water, and the reference components if present.
pub fn field_csv(r: &RunResult, components: &[Vec<f64>]) -> String {
    let mut header = vec!["x".to_string()];
    header.extend(r.component_names.iter().cloned());
    if r.depth.is_some() {
        header.push("eta".into());
        header.push("bottom".into());
    }
    if r.reference.is_some() {
        header.extend(r.component_names.iter().map(|c| format!("{c}_ref")));
    }
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..r.x.len() {
        let mut row = vec![sci(r.x[i])];
        row.extend(components.iter().map(|c| sci(c[i])));
        if let Some(d) = &r.depth {
            row.push(sci(components[0][i] - d[i]));
            row.push(sci(0.0 - d[i]));
        }
        if let Some(rf) = &r.reference {
            row.extend(rf.iter().map(|c| sci(c[i])));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_text(r: &RunResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case = {}", r.name);
    let _ = writeln!(s, "model = {}", r.model);
    let _ = writeln!(s, "scheme = {}", r.scheme);
    let _ = writeln!(s, "cells = {}", r.x.len());
    let _ = writeln!(s, "t_final = {}", sci(r.t_final));
    let _ = writeln!(s, "steps = {}", r.steps);
    let _ = writeln!(s, "nonlinear_iterations = {}", r.total_iterations());
    let _ = writeln!(s, "jacobian_probes = {}", r.jacobian_probes);
    let _ = writeln!(s, "fallback_cells = {}", r.max_fallback_cells);
    let _ = writeln!(s, "last_rate = {}", sci(r.last_rate));
    let _ = writeln!(s, "wall_seconds = {:.6}", r.wall.as_secs_f64());
    if let Some(e) = r.reference_error() {
        for (c, v) in r.component_names.iter().zip(e) {
            let _ = writeln!(s, "l1_to_stationary_{c} = {}", sci(v));
        }
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning = {w}");
    }
    s
}

/// Write `<name>_final.csv`, one CSV per snapshot and `<name>_summary.txt`
/// into `dir`. Returns the written paths.
pub fn write_outputs(r: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut paths = vec![];
    let p = dir.join(format!("{}_final.csv", r.name));
    write_file(&p, &field_csv(r, &r.solution))?;
    paths.push(p);
    for (k, s) in r.snapshots.iter().enumerate() {
        let p = dir.join(format!("{}_snap{k:03}.csv", r.name));
        write_file(&p, &field_csv(r, &s.components))?;
        paths.push(p);
    }
    let p = dir.join(format!("{}_summary.txt", r.name));
    write_file(&p, &summary_text(r))?;
    paths.push(p);
    Ok(paths)
}

pub fn convergence_csv(t: &ConvergenceTable) -> String {
    let mut header = vec!["cells".to_string()];
    for c in &t.component_names {
        header.push(format!("l1_{c}"));
        header.push(format!("order_{c}"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for (k, n) in t.cells.iter().enumerate() {
        let mut row = vec![n.to_string()];
        for c in 0..t.component_names.len() {
            row.push(sci(t.errors[k][c]));
            row.push(if k == 0 {
                String::new()
            } else {
                sci(t.orders[k - 1][c])
            });
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_convergence(t: &ConvergenceTable, dir: &Path, name: &str) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let p = dir.join(format!("{name}_convergence.csv"));
    write_file(&p, &convergence_csv(t))?;
    Ok(p)
}
