//! Time marching of a configured case.

use std::time::{Duration, Instant};

use crate::error::{ConfigError, Error, Result, SolverError};
use crate::grid::{BoundaryKind, BoundaryPolicy, CellField, Grid, Side};
use crate::models::{BalanceLaw, BurgersModel, ShallowWaterModel, TransportModel};
use crate::state::State;
use crate::stationary::{march_field, ProfileSource};
use crate::steppers::{compute_dt, sdirk2_cfl_guideline, Scheme, Stepper, StepperConfig};

use super::config::{BoundarySpec, InitialCondition, ModelSpec, RunConfig};
use super::norms::l1_error;

/// Field recorded at an intermediate time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub components: Vec<Vec<f64>>,
}

/// Outcome of a run, stored component-major so it is independent of the
/// model's state dimension.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub name: String,
    pub model: &'static str,
    pub scheme: Scheme,
    pub component_names: Vec<String>,
    pub x: Vec<f64>,
    pub dx: f64,
    /// Depth `H` at the cell centres (shallow water only).
    pub depth: Option<Vec<f64>>,
    pub initial: Vec<Vec<f64>>,
    pub solution: Vec<Vec<f64>>,
    /// Stationary solution the run is compared against.
    pub reference: Option<Vec<Vec<f64>>>,
    pub snapshots: Vec<Snapshot>,
    pub t_final: f64,
    pub steps: usize,
    pub dts: Vec<f64>,
    /// Total nonlinear iterations of each step.
    pub step_iterations: Vec<usize>,
    pub jacobian_probes: usize,
    pub max_fallback_cells: usize,
    /// `max |u^{n+1} - u^n| / dt` of the last step.
    pub last_rate: f64,
    pub wall: Duration,
    pub warnings: Vec<String>,
}

impl RunResult {
    pub fn total_iterations(&self) -> usize {
        self.step_iterations.iter().sum()
    }

    /// Per-component L1 distance between the solution and the reference.
    pub fn reference_error(&self) -> Option<Vec<f64>> {
        self.reference
            .as_ref()
            .map(|r| l1_error(&self.solution, r, self.dx))
    }

    /// Per-component L1 distance between the initial data and the reference.
    pub fn initial_reference_error(&self) -> Option<Vec<f64>> {
        self.reference
            .as_ref()
            .map(|r| l1_error(&self.initial, r, self.dx))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Mode {
    Transient,
    Steady { eps: f64 },
}

macro_rules! with_model {
    ($spec:expr, $m:ident => $body:expr) => {
        match $spec {
            ModelSpec::Transport { c, alpha } => {
                let $m = TransportModel::new(*c, *alpha)?;
                $body
            }
            ModelSpec::Burgers { alpha } => {
                let $m = BurgersModel { alpha: *alpha };
                $body
            }
            ModelSpec::ShallowWater { g, manning_k, depth } => {
                let $m = ShallowWaterModel::new(*g, *manning_k, *depth);
                $body
            }
        }
    };
}

/// March `cfg` to `cfg.t_end`.
pub fn run_case(cfg: &RunConfig) -> Result<RunResult> {
    run_with_mode(cfg, Mode::Transient)
}

/// March `cfg` until `max_i |u_i^{n+1} - u_i^n| / dt < eps`. Fails with
/// [`SolverError::NoSteadyState`] if `t_end` or `max_steps` is reached first.
pub fn run_to_steady_state(cfg: &RunConfig, eps: f64) -> Result<RunResult> {
    if !(eps > 0.0) {
        return Err(ConfigError::invalid("eps", "must be positive").into());
    }
    run_with_mode(cfg, Mode::Steady { eps })
}

pub(crate) fn run_with_mode(cfg: &RunConfig, mode: Mode) -> Result<RunResult> {
    cfg.validate()?;
    with_model!(&cfg.model, m => run_generic(cfg, &m, mode))
}

/// Cell values and interface values of the discrete stationary solution
/// described by `ic`.
fn stationary_data<const N: usize, M: BalanceLaw<N>>(
    model: &M,
    grid: &Grid,
    source: ProfileSource,
    start: Side,
    value: &[f64],
) -> Result<(CellField<N>, Vec<State<N>>)> {
    let v = to_state::<N>(value, "initial")?;
    if source == ProfileSource::Exact {
        if let Some(k) = model.exact_rate() {
            let x0 = match start {
                Side::Left => grid.x_left(),
                Side::Right => grid.x_right(),
            };
            let at = |x: f64| v.map(|c| c * (k * (x - x0)).exp());
            let cells = CellField::sample(grid, at);
            let faces = (0..=grid.n_cells())
                .map(|j| at(grid.interface(j as isize)))
                .collect();
            return Ok((cells, faces));
        }
    }
    Ok(march_field(model, grid, start, v)?)
}

fn to_state<const N: usize>(v: &[f64], key: &str) -> Result<State<N>, ConfigError> {
    if v.len() != N {
        return Err(ConfigError::invalid(
            key,
            format!("expected {N} component(s), got {}", v.len()),
        ));
    }
    Ok(State::from_fn(|c| v[c]))
}

struct Initial<const N: usize> {
    cells: CellField<N>,
    /// Interface values of the stationary part, if any.
    faces: Option<Vec<State<N>>>,
}

fn initial_data<const N: usize, M: BalanceLaw<N>>(
    model: &M,
    grid: &Grid,
    source: ProfileSource,
    ic: &InitialCondition,
) -> Result<Initial<N>> {
    let depth = |x: f64| model.depth(x);
    let surface = |f: &dyn Fn(f64) -> f64| -> Result<Initial<N>> {
        if N != 2 {
            return Err(ConfigError::Unsupported(
                "surface perturbations need the shallow-water model".into(),
            )
            .into());
        }
        let cells = CellField::sample(grid, |x| State::from_fn(|c| if c == 0 { depth(x) + f(x) } else { 0.0 }));
        Ok(Initial { cells, faces: None })
    };
    match ic {
        InitialCondition::Stationary { start, value } => {
            let (cells, faces) = stationary_data(model, grid, source, *start, value)?;
            Ok(Initial {
                cells,
                faces: Some(faces),
            })
        }
        InitialCondition::StationaryPlusGaussian {
            start,
            value,
            amplitude,
            rate,
            center,
        } => {
            let (mut cells, faces) = stationary_data(model, grid, source, *start, value)?;
            for (i, u) in cells.iter_mut().enumerate() {
                let x = grid.cell_center(i as isize);
                u[0] += amplitude * (-rate * (x - center).powi(2)).exp();
            }
            Ok(Initial {
                cells,
                faces: Some(faces),
            })
        }
        InitialCondition::StationaryPlusBoxes {
            start,
            value,
            intervals,
            increment,
        } => {
            let inc = to_state::<N>(increment, "initial")?;
            let (mut cells, faces) = stationary_data(model, grid, source, *start, value)?;
            for (i, u) in cells.iter_mut().enumerate() {
                let x = grid.cell_center(i as isize);
                if intervals.iter().any(|&(a, b)| x >= a && x <= b) {
                    *u += inc;
                }
            }
            Ok(Initial {
                cells,
                faces: Some(faces),
            })
        }
        InitialCondition::SurfaceGaussian { amplitude, rate } => {
            surface(&|x| amplitude * (-rate * x * x).exp())
        }
        InitialCondition::SurfaceStep { half_width, jump } => {
            surface(&|x| if x.abs() < *half_width { *jump } else { 0.0 })
        }
        InitialCondition::Constant(v) => {
            let s = to_state::<N>(v, "initial")?;
            Ok(Initial {
                cells: CellField(vec![s; grid.n_cells()]),
                faces: None,
            })
        }
    }
}

fn boundary_kind<const N: usize>(
    spec: &BoundarySpec,
    side: Side,
    faces: Option<&Vec<State<N>>>,
) -> Result<BoundaryKind, ConfigError> {
    Ok(match spec {
        BoundarySpec::Periodic => BoundaryKind::Periodic,
        BoundarySpec::Transmissive => BoundaryKind::Transmissive,
        BoundarySpec::StationaryExtension => BoundaryKind::StationaryExtension,
        BoundarySpec::Dirichlet(v) => BoundaryKind::Dirichlet(v.clone()),
        BoundarySpec::DirichletStationary(comps) => {
            let faces = faces.ok_or_else(|| {
                ConfigError::invalid(
                    "boundary",
                    "stationary Dirichlet data needs a stationary initial condition",
                )
            })?;
            let f = match side {
                Side::Left => faces[0],
                Side::Right => faces[faces.len() - 1],
            };
            BoundaryKind::Dirichlet(comps.iter().map(|&c| (c, f[c])).collect())
        }
    })
}

fn components<const N: usize>(f: &[State<N>]) -> Vec<Vec<f64>> {
    (0..N).map(|c| f.iter().map(|u| u[c]).collect()).collect()
}

fn run_generic<const N: usize, M: BalanceLaw<N>>(
    cfg: &RunConfig,
    model: &M,
    mode: Mode,
) -> Result<RunResult> {
    let started = Instant::now();
    let grid = Grid::new(cfg.x_left, cfg.x_right, cfg.n_cells)?;
    let source = cfg.effective_profile_source();
    let init = initial_data(model, &grid, source, &cfg.initial)?;
    let reference = match cfg.reference_condition() {
        Some(rc) => Some(initial_data(model, &grid, source, &rc)?.cells),
        None => None,
    };
    let policy = BoundaryPolicy {
        left: boundary_kind(&cfg.left, Side::Left, init.faces.as_ref())?,
        right: boundary_kind(&cfg.right, Side::Right, init.faces.as_ref())?,
    };
    let scfg = StepperConfig {
        fluctuation: cfg.fluctuation,
        limiter: cfg.limiter,
        frozen: cfg.frozen,
        regime: cfg.regime,
        viscosity: cfg.viscosity,
        profile_source: cfg.profile_source,
        solver: cfg.solver,
        exec: cfg.exec,
        ..StepperConfig::new(cfg.scheme)
    };
    let stepper = Stepper::new(model, &grid, &policy, &scfg)?;
    let mut warnings = Vec::new();
    if stepper.pair().name == "sdirk2" && cfg.cfl > sdirk2_cfl_guideline() {
        warnings.push(format!(
            "CFL {} exceeds the SDIRK2 guideline {:.4}; expect oscillations",
            cfg.cfl,
            sdirk2_cfl_guideline()
        ));
    }

    let mut snaps: Vec<f64> = cfg
        .snapshots
        .iter()
        .copied()
        .filter(|&s| s > 0.0 && s < cfg.t_end)
        .collect();
    snaps.sort_by(f64::total_cmp);
    snaps.dedup();
    let mut next_snap = 0;

    let mut u: Vec<State<N>> = init.cells.0.clone();
    let mut t = 0.0;
    let mut result = RunResult {
        name: cfg.name.clone(),
        model: model.name(),
        scheme: cfg.scheme,
        component_names: model.component_names().iter().map(|s| s.to_string()).collect(),
        x: grid.centers(),
        dx: grid.dx(),
        depth: (N == 2).then(|| grid.centers().iter().map(|&x| model.depth(x)).collect()),
        initial: components(&u),
        solution: vec![],
        reference: reference.as_ref().map(|r| components(r)),
        snapshots: vec![],
        t_final: 0.0,
        steps: 0,
        dts: vec![],
        step_iterations: vec![],
        jacobian_probes: 0,
        max_fallback_cells: 0,
        last_rate: f64::INFINITY,
        wall: Duration::ZERO,
        warnings,
    };
    let tol = 1e-12 * cfg.t_end.max(1.0);
    loop {
        if let Mode::Steady { eps } = mode {
            if result.last_rate < eps {
                break;
            }
        }
        if cfg.t_end - t <= tol {
            if let Mode::Steady { .. } = mode {
                return Err(SolverError::NoSteadyState {
                    steps: result.steps,
                    rate: result.last_rate,
                }
                .into());
            }
            break;
        }
        if result.steps >= cfg.max_steps {
            return Err(match mode {
                Mode::Steady { .. } => SolverError::NoSteadyState {
                    steps: result.steps,
                    rate: result.last_rate,
                },
                Mode::Transient => SolverError::Config(ConfigError::invalid(
                    "max_steps",
                    format!("t_end not reached within {} steps", cfg.max_steps),
                )),
            }
            .into());
        }
        let mut target = cfg.t_end;
        if next_snap < snaps.len() {
            target = target.min(snaps[next_snap]);
        }
        let dt = compute_dt(cfg.cfl, &grid, &u, model, target - t)?;
        let (next, stats) = stepper.step(&u, dt)?;
        result.last_rate = next
            .iter()
            .zip(&u)
            .map(|(a, b)| (*a - *b).max_abs())
            .fold(0.0, f64::max)
            / dt;
        u = next;
        t = if target - (t + dt) <= tol { target } else { t + dt };
        result.steps += 1;
        result.dts.push(dt);
        result.step_iterations.push(stats.iterations());
        result.jacobian_probes += stats.jacobian_probes;
        result.max_fallback_cells = result.max_fallback_cells.max(stats.fallback_cells);
        if next_snap < snaps.len() && t >= snaps[next_snap] {
            result.snapshots.push(Snapshot {
                t,
                components: components(&u),
            });
            next_snap += 1;
        }
    }
    result.t_final = t;
    result.solution = components(&u);
    result.wall = started.elapsed();
    Ok(result)
}

/// Discrete stationary data of `cfg`'s stationary initial condition or
/// reference, as used by the run.
pub fn stationary_reference(cfg: &RunConfig) -> Result<Option<Vec<Vec<f64>>>> {
    let Some(rc) = cfg.reference_condition() else {
        return Ok(None);
    };
    let grid = Grid::new(cfg.x_left, cfg.x_right, cfg.n_cells)?;
    let source = cfg.effective_profile_source();
    with_model!(&cfg.model, m => {
        Ok(Some(initial_field_components(&m, &grid, source, &rc)?))
    })
}

fn initial_field_components<const N: usize, M: BalanceLaw<N>>(
    model: &M,
    grid: &Grid,
    source: ProfileSource,
    ic: &InitialCondition,
) -> Result<Vec<Vec<f64>>, Error> {
    Ok(components(&initial_data(model, grid, source, ic)?.cells))
}
