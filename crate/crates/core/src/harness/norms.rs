//! Discrete norms and convergence rates.

/// Per-component `dx sum_i |a_i - b_i|`.
pub fn l1_error(a: &[Vec<f64>], b: &[Vec<f64>], dx: f64) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "component count mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            assert_eq!(x.len(), y.len(), "cell count mismatch");
            dx * x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<f64>()
        })
        .collect()
}

/// Block averages of `fine` onto `coarse_cells` cells.
pub fn restrict(fine: &[f64], coarse_cells: usize) -> Option<Vec<f64>> {
    if coarse_cells == 0 || fine.len() % coarse_cells != 0 {
        return None;
    }
    let r = fine.len() / coarse_cells;
    Some(
        fine.chunks(r)
            .map(|c| c.iter().sum::<f64>() / r as f64)
            .collect(),
    )
}

/// `log(e_coarse / e_fine) / log(n_fine / n_coarse)` for consecutive meshes.
pub fn observed_orders(cells: &[usize], errors: &[f64]) -> Vec<f64> {
    cells
        .windows(2)
        .zip(errors.windows(2))
        .map(|(n, e)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect()
}
