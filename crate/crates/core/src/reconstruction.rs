//! Well-balanced reconstruction of the time-`t^n` averages and the
//! reconstructions of the time fluctuations used inside the stages.
//!
//! Each cell `i` carries the stationary profile `u^e_i` through its average.
//! At order 2 the deviations `v_j = u_j - u^e_{i;j}` are reconstructed with a
//! limited slope and added back to the profile, so stationary data is
//! reproduced exactly.

use crate::error::{SolverError, StationaryError};
use crate::grid::{extend_with_ghosts, BoundaryPolicy, GhostMode, Grid, HaloField, Side};
use crate::models::BalanceLaw;
use crate::par::Exec;
use crate::state::State;
use crate::stationary::{collocated_profile, exact_profile, ProfileSource, StationaryProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limiter {
    Minmod,
    Avg,
}

/// `min(a,b)` if both positive, `max(a,b)` if both negative, else 0.
pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

/// `(|a| b + |b| a) / (|a| + |b|)`, 0 when both vanish.
pub fn avg(a: f64, b: f64) -> f64 {
    let s = a.abs() + b.abs();
    if s > 0.0 {
        (a.abs() * b + b.abs() * a) / s
    } else {
        0.0
    }
}

impl Limiter {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Limiter::Minmod => minmod(a, b),
            Limiter::Avg => avg(a, b),
        }
    }
}

/// Reconstruction of the fluctuations inside the stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluctuationKind {
    /// Piecewise constant.
    Pwcr,
    /// Piecewise linear with slope weights frozen at `t^n`.
    Pwlr,
}

/// How the frozen weights `(phi_L, phi_R)` are derived from the raw
/// differences `d_L = u_i - u_{i-1}`, `d_R = u_{i+1} - u_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrozenWeights {
    /// `phi_L = |d_R| / (|d_L| + |d_R|)`, `phi_R = |d_L| / (|d_L| + |d_R|)`.
    Avg,
    /// All weight on the smaller difference when the signs agree, else none.
    Minmod,
}

impl FrozenWeights {
    pub fn weights(self, dl: f64, dr: f64) -> (f64, f64) {
        match self {
            FrozenWeights::Avg => {
                let s = dl.abs() + dr.abs();
                if s > 0.0 {
                    (dr.abs() / s, dl.abs() / s)
                } else {
                    (0.0, 0.0)
                }
            }
            FrozenWeights::Minmod => {
                if dl * dr <= 0.0 {
                    (0.0, 0.0)
                } else if dl.abs() <= dr.abs() {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconConfig {
    pub order: u8,
    pub limiter: Limiter,
    pub profile_source: ProfileSource,
    pub frozen: FrozenWeights,
}

impl Default for ReconConfig {
    fn default() -> Self {
        ReconConfig {
            order: 2,
            limiter: Limiter::Minmod,
            profile_source: ProfileSource::Collocated,
            frozen: FrozenWeights::Avg,
        }
    }
}

/// Reconstruction data of one cell at `t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecon<const N: usize> {
    pub profile: StationaryProfile<N>,
    /// No stationary solution was found; the profile is zero.
    pub fallback: bool,
    /// `v_i = u_i - u^e_{i;i}`; zero unless the profile fell back.
    pub offset: State<N>,
    /// Limited slope of `v` per unit length.
    pub slope: State<N>,
    /// `u^{n,+}_{i-1/2}`.
    pub trace_left: State<N>,
    /// `u^{n,-}_{i+1/2}`.
    pub trace_right: State<N>,
    /// `P_i(x_i)`.
    pub center: State<N>,
    pub phi_left: State<N>,
    pub phi_right: State<N>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WbReconstruction<const N: usize> {
    pub cells: Vec<CellRecon<N>>,
    pub dx: f64,
}

impl<const N: usize> WbReconstruction<N> {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn fallback_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.fallback).count()
    }
}

fn profile_for<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    i: usize,
    value: State<N>,
    source: ProfileSource,
) -> Result<StationaryProfile<N>, StationaryError> {
    match source {
        ProfileSource::Exact => Ok(exact_profile(model, grid, i, value, 1)?),
        ProfileSource::Collocated => collocated_profile(model, grid, i, value, 1),
    }
}

/// Build the well-balanced reconstruction of `averages`.
///
/// A cell whose profile cannot be computed falls back to the zero profile
/// (standard MUSCL reconstruction). Closed-form profiles requested for a
/// model without one are a configuration error.
pub fn wb_reconstruct<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    grid: &Grid,
    averages: &[State<N>],
    cfg: &ReconConfig,
    policy: &BoundaryPolicy,
    exec: Exec,
) -> Result<WbReconstruction<N>, SolverError> {
    let n = averages.len();
    if cfg.profile_source == ProfileSource::Exact && model.exact_rate().is_none() {
        return Err(crate::error::ConfigError::Unsupported(format!(
            "the {} model has no closed-form stationary solution",
            model.name()
        ))
        .into());
    }
    for u in averages {
        model.check_state(u)?;
    }
    let profiles: Vec<(StationaryProfile<N>, bool)> = exec.map(n, |i| {
        match profile_for(model, grid, i, averages[i], cfg.profile_source) {
            Ok(p) => (p, false),
            Err(_) => (StationaryProfile::zero(i, 1, cfg.profile_source), true),
        }
    });
    let ext = |side: Side, k: usize| -> State<N> {
        let o = k as isize;
        match side {
            Side::Left => profiles[0].0.center(-o),
            Side::Right => profiles[n - 1].0.center(o),
        }
    };
    let halo = extend_with_ghosts(averages, policy, 1, GhostMode::Values, Some(&ext))?;
    let dx = grid.dx();
    let cells = exec.map(n, |i| {
        let (profile, fallback) = &profiles[i];
        let ii = i as isize;
        let (um, u0, up) = (halo.get(ii - 1), halo.get(ii), halo.get(ii + 1));
        let offset = u0 - profile.center(0);
        let (slope, phi_left, phi_right) = if cfg.order >= 2 {
            let vm = um - profile.center(-1);
            let vp = up - profile.center(1);
            let slope = State::from_fn(|c| {
                cfg.limiter
                    .apply((vp[c] - offset[c]) / dx, (offset[c] - vm[c]) / dx)
            });
            let mut pl = State::ZERO;
            let mut pr = State::ZERO;
            for c in 0..N {
                let (l, r) = cfg.frozen.weights(u0[c] - um[c], up[c] - u0[c]);
                pl[c] = l;
                pr[c] = r;
            }
            (slope, pl, pr)
        } else {
            (State::ZERO, State::ZERO, State::ZERO)
        };
        let half = 0.5 * dx;
        CellRecon {
            trace_left: profile.left + offset - half * slope,
            trace_right: profile.right + offset + half * slope,
            center: profile.center(0) + offset,
            profile: profile.clone(),
            fallback: *fallback,
            offset,
            slope,
            phi_left,
            phi_right,
        }
    });
    Ok(WbReconstruction { cells, dx })
}

/// Slope of the fluctuation reconstruction in cell `i`.
pub fn fluctuation_slope<const N: usize>(
    kind: FluctuationKind,
    cell: &CellRecon<N>,
    uf_left: State<N>,
    uf: State<N>,
    uf_right: State<N>,
    dx: f64,
) -> State<N> {
    match kind {
        FluctuationKind::Pwcr => State::ZERO,
        FluctuationKind::Pwlr => State::from_fn(|c| {
            (cell.phi_left[c] * (uf[c] - uf_left[c]) + cell.phi_right[c] * (uf_right[c] - uf[c]))
                / dx
        }),
    }
}

/// Values of the fluctuation reconstruction of cell `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationTraces<const N: usize> {
    pub left: State<N>,
    pub right: State<N>,
    pub center: State<N>,
}

/// `Q~_i` at `x_{i-1/2}`, `x_{i+1/2}` and `x_i`; `uf` must carry at least
/// one ghost per side.
pub fn fluctuation_traces<const N: usize>(
    kind: FluctuationKind,
    wb: &WbReconstruction<N>,
    uf: &HaloField<N>,
    i: usize,
) -> FluctuationTraces<N> {
    let ii = i as isize;
    let u = uf.get(ii);
    let s = fluctuation_slope(kind, &wb.cells[i], uf.get(ii - 1), u, uf.get(ii + 1), wb.dx);
    let half = 0.5 * wb.dx;
    FluctuationTraces {
        left: u - half * s,
        right: u + half * s,
        center: u,
    }
}

/// Stage values `u^{k,+}_{i-1/2}`, `u^{k,-}_{i+1/2}`, `P^k_i(x_i)`.
pub fn stage_interface_states<const N: usize>(
    wb: &WbReconstruction<N>,
    q: &FluctuationTraces<N>,
    i: usize,
) -> FluctuationTraces<N> {
    let c = &wb.cells[i];
    FluctuationTraces {
        left: c.trace_left + q.left,
        right: c.trace_right + q.right,
        center: c.center + q.center,
    }
}

/// Fill the fluctuation halo: periodic wraps, transmissive copies, all other
/// boundaries carry zero fluctuation.
pub fn fluctuation_halo<const N: usize>(
    uf: &[State<N>],
    policy: &BoundaryPolicy,
) -> Result<HaloField<N>, SolverError> {
    Ok(extend_with_ghosts(uf, policy, 1, GhostMode::Fluctuations, None)?)
}
