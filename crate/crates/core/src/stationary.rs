//! Local stationary solutions through a cell value.
//!
//! Scalar models have the closed form `u(x) = C exp(k x)`. Otherwise the
//! stationary ODE `u_x = G(u, x)` is integrated by the implicit midpoint rule
//! in half-cell steps, so that interface values and neighbour-centre values
//! lie on one trajectory.

use crate::error::{ModelError, StationaryError};
use crate::grid::{CellField, Grid, Side};
use crate::models::BalanceLaw;
use crate::state::State;

pub const STAT_TOL: f64 = 1e-14;
pub const STAT_MAXITER: usize = 100;

/// Iterations performed after the tolerance is met, to settle the last bits.
const POLISH_ITERS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    Exact,
    Collocated,
}

/// Values of the stationary solution through `u_i` on the stencil of cell `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryProfile<const N: usize> {
    pub anchor: usize,
    pub radius: usize,
    /// Centre values for offsets `-radius..=radius`.
    centers: Vec<State<N>>,
    /// Value at `x_{i-1/2}`.
    pub left: State<N>,
    /// Value at `x_{i+1/2}`.
    pub right: State<N>,
    pub source: ProfileSource,
}

impl<const N: usize> StationaryProfile<N> {
    /// Value at the centre of cell `anchor + offset`.
    pub fn center(&self, offset: isize) -> State<N> {
        self.centers[(offset + self.radius as isize) as usize]
    }

    pub fn interface(&self, side: Side) -> State<N> {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    /// Zero profile used when no stationary solution is available.
    pub fn zero(anchor: usize, radius: usize, source: ProfileSource) -> Self {
        StationaryProfile {
            anchor,
            radius,
            centers: vec![State::ZERO; 2 * radius + 1],
            left: State::ZERO,
            right: State::ZERO,
            source,
        }
    }
}

/// Closed-form profile `value * exp(k (x - x_i))`.
pub fn exact_profile<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    i: usize,
    value: State<N>,
    radius: usize,
) -> Result<StationaryProfile<N>, ModelError> {
    let k = model.exact_rate().ok_or(ModelError::Unsupported {
        model: model.name(),
        what: "closed-form stationary profile",
    })?;
    let xi = grid.cell_center(i as isize);
    let at = |x: f64| {
        if x == xi {
            value
        } else {
            (k * (x - xi)).exp() * value
        }
    };
    let r = radius as isize;
    let centers = (-r..=r)
        .map(|o| at(grid.cell_center(i as isize + o)))
        .collect();
    Ok(StationaryProfile {
        anchor: i,
        radius,
        centers,
        left: at(grid.interface(i as isize)),
        right: at(grid.interface(i as isize + 1)),
        source: ProfileSource::Exact,
    })
}

/// One implicit-midpoint step of `u_x = G(u, x)` from `(x, u)` over `delta`:
/// `u_next = u + delta G((u + u_next)/2, x + delta/2)`, solved by fixed
/// point iteration.
pub fn collocation_step<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    x: f64,
    u: State<N>,
    delta: f64,
) -> Result<State<N>, StationaryError> {
    if delta == 0.0 {
        return Ok(u);
    }
    let xm = x + 0.5 * delta;
    let g = |w: State<N>| -> Result<State<N>, StationaryError> {
        Ok(u + delta * model.stationary_slope(&(0.5 * (u + w)), xm)?)
    };
    let mut w = u + delta * model.stationary_slope(&u, x)?;
    let mut update = f64::INFINITY;
    for it in 1..=STAT_MAXITER {
        let next = g(w)?;
        update = (next - w).max_abs();
        w = next;
        if update <= STAT_TOL * w.max_abs().max(1.0) {
            for _ in 0..POLISH_ITERS {
                w = g(w)?;
            }
            return Ok(w);
        }
        if !update.is_finite() {
            return Err(StationaryError::NoConvergence {
                x,
                iterations: it,
                update,
            });
        }
    }
    Err(StationaryError::NoConvergence {
        x,
        iterations: STAT_MAXITER,
        update,
    })
}

/// Half-cell step from the centre of cell `i` to its `side` interface.
pub fn center_to_interface<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    i: isize,
    u: State<N>,
    side: Side,
) -> Result<State<N>, StationaryError> {
    let h = 0.5 * grid.dx();
    let delta = match side {
        Side::Left => -h,
        Side::Right => h,
    };
    collocation_step(model, grid.cell_center(i), u, delta)
}

/// Half-cell step from interface `x_{j-1/2}` into the centre of cell `j`
/// (`side = Right`, moving right) or of cell `j - 1` (`side = Left`).
pub fn interface_to_center<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    j: isize,
    u: State<N>,
    side: Side,
) -> Result<State<N>, StationaryError> {
    let h = 0.5 * grid.dx();
    let delta = match side {
        Side::Left => -h,
        Side::Right => h,
    };
    collocation_step(model, grid.interface(j), u, delta)
}

/// Profile through `value` at the centre of cell `i`, marched by
/// collocation steps through the interfaces out to `radius` neighbours.
pub fn collocated_profile<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    i: usize,
    value: State<N>,
    radius: usize,
) -> Result<StationaryProfile<N>, StationaryError> {
    let ii = i as isize;
    let mut centers = vec![State::ZERO; 2 * radius + 1];
    centers[radius] = value;
    let mut left = value;
    let mut right = value;
    for side in [Side::Left, Side::Right] {
        let mut u = value;
        let mut c = ii;
        for k in 1..=radius.max(1) {
            let w = center_to_interface(model, grid, c, u, side)?;
            if k == 1 {
                match side {
                    Side::Left => left = w,
                    Side::Right => right = w,
                }
            }
            if k > radius {
                break;
            }
            let (j, next) = match side {
                Side::Left => (c, c - 1),
                Side::Right => (c + 1, c + 1),
            };
            u = interface_to_center(model, grid, j, w, side)?;
            c = next;
            let slot = match side {
                Side::Left => radius - k,
                Side::Right => radius + k,
            };
            centers[slot] = u;
        }
    }
    Ok(StationaryProfile {
        anchor: i,
        radius,
        centers,
        left,
        right,
        source: ProfileSource::Collocated,
    })
}

/// Stationary solution marched across the whole grid from a boundary value
/// at `x_left` (`start = Left`) or `x_right` (`start = Right`). Returns the
/// centre values and the `n + 1` interface values.
pub fn march_field<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    start: Side,
    boundary_value: State<N>,
) -> Result<(CellField<N>, Vec<State<N>>), StationaryError> {
    let n = grid.n_cells();
    let mut centers = vec![State::ZERO; n];
    let mut faces = vec![State::ZERO; n + 1];
    match start {
        Side::Left => {
            faces[0] = boundary_value;
            for i in 0..n {
                let ii = i as isize;
                centers[i] = interface_to_center(model, grid, ii, faces[i], Side::Right)?;
                faces[i + 1] = center_to_interface(model, grid, ii, centers[i], Side::Right)?;
            }
        }
        Side::Right => {
            faces[n] = boundary_value;
            for i in (0..n).rev() {
                let ii = i as isize;
                centers[i] = interface_to_center(model, grid, ii + 1, faces[i + 1], Side::Left)?;
                faces[i] = center_to_interface(model, grid, ii, centers[i], Side::Left)?;
            }
        }
    }
    Ok((CellField(centers), faces))
}
