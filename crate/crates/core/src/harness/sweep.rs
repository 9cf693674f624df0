//! Mesh-refinement studies against a fine-mesh reference.

use crate::error::{ConfigError, Result};
use crate::par::Exec;
use crate::reconstruction::FluctuationKind;
use crate::steppers::Scheme;

use super::config::{ModelSpec, RunConfig};
use super::norms::{l1_error, observed_orders, restrict};
use super::run::{run_case, RunResult};

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub cells: Vec<usize>,
    /// Cells of the reference run; defaults to four times the finest mesh.
    pub reference_cells: Option<usize>,
    /// Scheme of the reference run; defaults to the second-order implicit
    /// scheme with exact profiles if the model has them, collocated
    /// otherwise.
    pub reference_scheme: Option<Scheme>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub scheme: Scheme,
    pub component_names: Vec<String>,
    pub cells: Vec<usize>,
    /// `errors[k][c]`: L1 error of component `c` on mesh `k`.
    pub errors: Vec<Vec<f64>>,
    /// `orders[k][c]`: observed order between meshes `k` and `k + 1`.
    pub orders: Vec<Vec<f64>>,
    pub reference_cells: usize,
    pub reference_scheme: Scheme,
}

impl ConvergenceTable {
    /// Orders of component `c` between consecutive meshes.
    pub fn component_orders(&self, c: usize) -> Vec<f64> {
        self.orders.iter().map(|o| o[c]).collect()
    }
}

pub fn default_reference_scheme(model: &ModelSpec) -> Scheme {
    match model {
        ModelSpec::ShallowWater { .. } => Scheme::Iwbm2,
        _ => Scheme::Iewbm2,
    }
}

/// Run `base` on every mesh of `opts.cells` and on a fine reference mesh,
/// and tabulate L1 errors against the block-averaged reference.
pub fn sweep(base: &RunConfig, opts: &SweepOptions) -> Result<ConvergenceTable> {
    let mut cells = opts.cells.clone();
    cells.sort_unstable();
    cells.dedup();
    if cells.len() < 2 {
        return Err(ConfigError::invalid("cells", "a sweep needs at least two meshes").into());
    }
    let finest = *cells.last().expect("non-empty");
    let ref_cells = opts.reference_cells.unwrap_or(4 * finest);
    if let Some(n) = cells.iter().find(|&&n| ref_cells % n != 0 || n >= ref_cells) {
        return Err(ConfigError::invalid(
            "cells",
            format!("mesh {n} does not divide the {ref_cells}-cell reference mesh"),
        )
        .into());
    }
    let ref_scheme = opts
        .reference_scheme
        .unwrap_or_else(|| default_reference_scheme(&base.model));
    let reference = RunConfig {
        n_cells: ref_cells,
        scheme: ref_scheme,
        fluctuation: FluctuationKind::Pwlr,
        profile_source: None,
        regime: None,
        snapshots: vec![],
        ..base.clone()
    };
    let mut jobs = vec![reference];
    jobs.extend(cells.iter().map(|&n| RunConfig {
        n_cells: n,
        snapshots: vec![],
        exec: Exec::Sequential,
        ..base.clone()
    }));
    let results: Vec<Result<RunResult>> = base.exec.map_jobs(jobs, |c| run_case(&c));
    let mut results = results.into_iter();
    let fine = results.next().expect("reference job")?;
    let mut errors = Vec::with_capacity(cells.len());
    for (r, &n) in results.zip(&cells) {
        let r = r?;
        let coarse: Vec<Vec<f64>> = fine
            .solution
            .iter()
            .map(|c| restrict(c, n).expect("mesh divides the reference"))
            .collect();
        errors.push(l1_error(&r.solution, &coarse, r.dx));
    }
    let nc = errors[0].len();
    let per_comp: Vec<Vec<f64>> = (0..nc)
        .map(|c| observed_orders(&cells, &errors.iter().map(|e| e[c]).collect::<Vec<_>>()))
        .collect();
    let orders = (0..cells.len() - 1)
        .map(|k| (0..nc).map(|c| per_comp[c][k]).collect())
        .collect();
    Ok(ConvergenceTable {
        scheme: base.scheme,
        component_names: fine.component_names.clone(),
        cells,
        errors,
        orders,
        reference_cells: ref_cells,
        reference_scheme: ref_scheme,
    })
}

/// Dyadic sequence `first, 2 first, ...` up to and including `last`.
pub fn dyadic(first: usize, last: usize) -> Vec<usize> {
    let mut v = vec![];
    let mut n = first;
    while n <= last {
        v.push(n);
        n *= 2;
    }
    v
}
