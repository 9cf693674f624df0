//! Time-fluctuation steppers.
//!
//! A step freezes the well-balanced reconstruction of `u^n`, integrates the
//! fluctuation system `u^f_t = L(u^f)` from `u^f = 0` over one time step with
//! a (possibly IMEX) Runge-Kutta pair, and returns `u^{n+1} = u^n + u^f`.

pub mod banded;
pub mod solve;
pub mod spatial;
pub mod tableau;

use std::fmt;
use std::str::FromStr;

use crate::error::{ConfigError, SolverError};
use crate::grid::{BoundaryPolicy, Grid};
use crate::models::{split, BalanceLaw, Part, SplitRegime, SplitSpec};
use crate::numflux::ViscosityRule;
use crate::par::Exec;
use crate::reconstruction::{
    wb_reconstruct, FluctuationKind, FrozenWeights, Limiter, ReconConfig, WbReconstruction,
};
use crate::state::State;
use crate::stationary::ProfileSource;

pub use banded::{solve_banded, BandedMatrix};
pub use solve::{FixedPoint, JacobianCache, SolverConfig};
pub use spatial::SpatialOperator;
pub use tableau::ButcherPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Exwbm1,
    Exwbm2,
    Iewbm1,
    Iewbm2,
    Iwbm1,
    Iwbm2,
    Siewbm1,
    Siewbm2,
    Siwbm1,
    Siwbm2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Explicit,
    Implicit,
    SemiImplicit,
}

impl Scheme {
    pub const ALL: [Scheme; 10] = [
        Scheme::Exwbm1,
        Scheme::Exwbm2,
        Scheme::Iewbm1,
        Scheme::Iewbm2,
        Scheme::Iwbm1,
        Scheme::Iwbm2,
        Scheme::Siewbm1,
        Scheme::Siewbm2,
        Scheme::Siwbm1,
        Scheme::Siwbm2,
    ];

    pub fn order(self) -> u8 {
        match self {
            Scheme::Exwbm1 | Scheme::Iewbm1 | Scheme::Iwbm1 | Scheme::Siewbm1 | Scheme::Siwbm1 => 1,
            _ => 2,
        }
    }

    pub fn family(self) -> Family {
        match self {
            Scheme::Exwbm1 | Scheme::Exwbm2 => Family::Explicit,
            Scheme::Iewbm1 | Scheme::Iewbm2 | Scheme::Iwbm1 | Scheme::Iwbm2 => Family::Implicit,
            _ => Family::SemiImplicit,
        }
    }

    /// Exactly well-balanced schemes use closed-form profiles.
    pub fn profile_source(self) -> ProfileSource {
        match self {
            Scheme::Iewbm1 | Scheme::Iewbm2 | Scheme::Siewbm1 | Scheme::Siewbm2 => {
                ProfileSource::Exact
            }
            _ => ProfileSource::Collocated,
        }
    }

    pub fn pair(self) -> ButcherPair {
        match (self.family(), self.order()) {
            (Family::Explicit, 1) => ButcherPair::forward_euler(),
            (Family::Explicit, _) => ButcherPair::heun(),
            (Family::Implicit, 1) => ButcherPair::backward_euler(),
            (Family::Implicit, _) => ButcherPair::sdirk2(),
            (Family::SemiImplicit, 1) => ButcherPair::imex1(),
            (Family::SemiImplicit, _) => ButcherPair::imex2(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Exwbm1 => "EXWBM1",
            Scheme::Exwbm2 => "EXWBM2",
            Scheme::Iewbm1 => "IEWBM1",
            Scheme::Iewbm2 => "IEWBM2",
            Scheme::Iwbm1 => "IWBM1",
            Scheme::Iwbm2 => "IWBM2",
            Scheme::Siewbm1 => "SIEWBM1",
            Scheme::Siewbm2 => "SIEWBM2",
            Scheme::Siwbm1 => "SIWBM1",
            Scheme::Siwbm2 => "SIWBM2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConfigError::invalid("scheme", format!("unknown scheme `{s}`")))
    }
}

/// Default split for the semi-implicit family.
pub fn default_regime<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    family: Family,
) -> SplitRegime {
    match family {
        Family::Explicit => SplitRegime::FullyExplicit,
        Family::Implicit => SplitRegime::FullyImplicit,
        Family::SemiImplicit if N == 1 => SplitRegime::SemiImplicitSource,
        Family::SemiImplicit if model.has_plain_source() => SplitRegime::SemiImplicitFriction,
        Family::SemiImplicit => SplitRegime::SemiImplicitPressure,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepperConfig {
    pub scheme: Scheme,
    /// Fluctuation reconstruction of order-2 schemes; order 1 always uses
    /// piecewise constants.
    pub fluctuation: FluctuationKind,
    pub limiter: Limiter,
    pub frozen: FrozenWeights,
    /// Overrides the scheme's split.
    pub regime: Option<SplitRegime>,
    /// Overrides the model's viscosity rule.
    pub viscosity: Option<ViscosityRule>,
    /// Overrides the scheme's profile source.
    pub profile_source: Option<ProfileSource>,
    /// Overrides the scheme's tableau.
    pub pair: Option<ButcherPair>,
    pub solver: SolverConfig,
    pub exec: Exec,
}

impl StepperConfig {
    pub fn new(scheme: Scheme) -> Self {
        StepperConfig {
            scheme,
            fluctuation: FluctuationKind::Pwlr,
            limiter: Limiter::Minmod,
            frozen: FrozenWeights::Avg,
            regime: None,
            viscosity: None,
            profile_source: None,
            pair: None,
            solver: SolverConfig::default(),
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepStats {
    pub dt: f64,
    /// Iterations of each implicit stage solve (0 for explicit stages).
    pub stage_iterations: Vec<usize>,
    pub stage_residuals: Vec<f64>,
    pub jacobian_probes: usize,
    /// Cells whose stationary profile was unavailable.
    pub fallback_cells: usize,
}

impl StepStats {
    pub fn iterations(&self) -> usize {
        self.stage_iterations.iter().sum()
    }
}

/// Everything needed to advance one field by one step.
pub struct Stepper<'a, const N: usize, M: BalanceLaw<N> + ?Sized> {
    model: &'a M,
    grid: &'a Grid,
    policy: &'a BoundaryPolicy,
    pair: ButcherPair,
    spec: SplitSpec,
    recon: ReconConfig,
    kind: FluctuationKind,
    rule: ViscosityRule,
    solver: SolverConfig,
    exec: Exec,
}

impl<'a, const N: usize, M: BalanceLaw<N> + ?Sized> Stepper<'a, N, M> {
    pub fn new(
        model: &'a M,
        grid: &'a Grid,
        policy: &'a BoundaryPolicy,
        cfg: &StepperConfig,
    ) -> Result<Self, ConfigError> {
        policy.validate::<N>()?;
        let scheme = cfg.scheme;
        let regime = cfg
            .regime
            .unwrap_or_else(|| default_regime(model, scheme.family()));
        let spec = split(model, regime)?;
        let source = cfg.profile_source.unwrap_or(scheme.profile_source());
        if source == ProfileSource::Exact && model.exact_rate().is_none() {
            return Err(ConfigError::Unsupported(format!(
                "{scheme} needs a closed-form stationary solution, which the {} model lacks",
                model.name()
            )));
        }
        let order = scheme.order();
        let kind = if order == 1 {
            FluctuationKind::Pwcr
        } else {
            cfg.fluctuation
        };
        if !(cfg.solver.stage_tol > 0.0) || cfg.solver.stage_maxiter == 0 {
            return Err(ConfigError::invalid(
                "solver",
                "stage_tol must be positive and stage_maxiter at least 1",
            ));
        }
        Ok(Stepper {
            model,
            grid,
            policy,
            pair: cfg.pair.clone().unwrap_or_else(|| scheme.pair()),
            spec,
            recon: ReconConfig {
                order,
                limiter: cfg.limiter,
                profile_source: source,
                frozen: cfg.frozen,
            },
            kind,
            rule: cfg.viscosity.unwrap_or_else(|| model.default_viscosity()),
            solver: cfg.solver,
            exec: cfg.exec,
        })
    }

    pub fn pair(&self) -> &ButcherPair {
        &self.pair
    }

    pub fn split_spec(&self) -> SplitSpec {
        self.spec
    }

    pub fn fluctuation_kind(&self) -> FluctuationKind {
        self.kind
    }

    pub fn reconstruct(&self, averages: &[State<N>]) -> Result<WbReconstruction<N>, SolverError> {
        wb_reconstruct(
            self.model,
            self.grid,
            averages,
            &self.recon,
            self.policy,
            self.exec,
        )
    }

    /// The operator of one part with the reconstruction of `wb` frozen.
    pub fn operator<'b>(
        &'b self,
        wb: &'b WbReconstruction<N>,
        part: Part,
    ) -> Result<SpatialOperator<'b, N, M>, SolverError> {
        SpatialOperator::new(
            self.model,
            self.grid,
            wb,
            self.policy,
            self.kind,
            self.rule,
            self.spec.terms(part),
            self.exec,
        )
    }

    /// Fluctuation `u^f(t^n + dt)` of one step.
    pub fn fluctuation(
        &self,
        averages: &[State<N>],
        dt: f64,
    ) -> Result<(Vec<State<N>>, StepStats), SolverError> {
        let n = averages.len();
        let wb = self.reconstruct(averages)?;
        let ex = self.operator(&wb, Part::Explicit)?;
        let im = self.operator(&wb, Part::Implicit)?;
        let scale = averages
            .iter()
            .fold(State::ZERO, |m, u| m.zip(u.abs(), f64::max));
        let p = &self.pair;
        let s = p.stages();
        let mut stats = StepStats {
            dt,
            fallback_cells: wb.fallback_cells(),
            ..StepStats::default()
        };
        let mut cache = JacobianCache::default();
        let mut l_ex: Vec<Option<Vec<State<N>>>> = vec![None; s];
        let mut l_im: Vec<Option<Vec<State<N>>>> = vec![None; s];
        let mut last = vec![State::ZERO; n];
        let explicit_needed = |k: usize| {
            p.b_ex[k] != 0.0 || (k + 1..s).any(|m| p.a_ex[m][k] != 0.0)
        };
        let implicit_needed = |k: usize| (k + 1..s).any(|m| p.a[m][k] != 0.0);
        for k in 0..s {
            let mut rhs = vec![State::ZERO; n];
            for l in 0..k {
                let (ce, ci) = (p.a_ex[k][l], p.a[k][l]);
                for (i, r) in rhs.iter_mut().enumerate() {
                    if ce != 0.0 {
                        *r += (dt * ce) * l_ex[l].as_ref().expect("explicit stage stored")[i];
                    }
                    if ci != 0.0 {
                        *r += (dt * ci) * l_im[l].as_ref().expect("implicit stage stored")[i];
                    }
                }
            }
            let akk = p.a[k][k];
            let coeff = dt * akk;
            let uf = if akk != 0.0 && !im.is_empty() {
                let sol = solve::solve_stage(
                    &im,
                    &rhs,
                    coeff,
                    rhs.clone(),
                    scale,
                    &self.solver,
                    &mut cache,
                )?;
                stats.stage_iterations.push(sol.iterations);
                stats.stage_residuals.push(sol.residual);
                if implicit_needed(k) {
                    l_im[k] = Some(
                        sol.uf
                            .iter()
                            .zip(&rhs)
                            .map(|(x, r)| (1.0 / coeff) * (*x - *r))
                            .collect(),
                    );
                }
                sol.uf
            } else {
                stats.stage_iterations.push(0);
                stats.stage_residuals.push(0.0);
                if implicit_needed(k) {
                    l_im[k] = Some(im.apply(&rhs)?);
                }
                rhs
            };
            if explicit_needed(k) {
                l_ex[k] = Some(ex.apply(&uf)?);
            }
            last = uf;
        }
        for l in 0..s {
            let w = p.b_ex[l] - p.a_ex[s - 1][l];
            if w != 0.0 {
                let le = l_ex[l].as_ref().expect("explicit stage stored");
                for (u, e) in last.iter_mut().zip(le) {
                    *u += (dt * w) * *e;
                }
            }
        }
        if !p.is_stiffly_accurate() {
            for l in 0..s {
                let w = p.b[l] - p.a[s - 1][l];
                if w != 0.0 {
                    let li = match &l_im[l] {
                        Some(v) => v.clone(),
                        None => im.apply(&last)?,
                    };
                    for (u, e) in last.iter_mut().zip(&li) {
                        *u += (dt * w) * *e;
                    }
                }
            }
        }
        stats.jacobian_probes = cache.probes;
        Ok((last, stats))
    }

    /// Advance `averages` by `dt`.
    pub fn step(
        &self,
        averages: &[State<N>],
        dt: f64,
    ) -> Result<(Vec<State<N>>, StepStats), SolverError> {
        let (uf, stats) = self.fluctuation(averages, dt)?;
        let next: Vec<State<N>> = averages.iter().zip(&uf).map(|(u, f)| *u + *f).collect();
        for u in &next {
            self.model.check_state(u)?;
        }
        Ok((next, stats))
    }
}

/// `dt = cfl dx / max_i s(u_i)`, clamped to `remaining`.
pub fn compute_dt<const N: usize, M: BalanceLaw<N> + ?Sized>(
    cfl: f64,
    grid: &Grid,
    averages: &[State<N>],
    model: &M,
    remaining: f64,
) -> Result<f64, SolverError> {
    if !(cfl > 0.0) {
        return Err(ConfigError::invalid("cfl", "must be positive").into());
    }
    let mut smax = 0.0f64;
    for u in averages {
        smax = smax.max(model.max_wave_speed(u)?);
    }
    if smax <= 0.0 {
        return Err(SolverError::NoWaveScale);
    }
    Ok((cfl * grid.dx() / smax).min(remaining))
}

/// Largest CFL number for which SDIRK2 stays free of oscillations on linear
/// transport.
pub fn sdirk2_cfl_guideline() -> f64 {
    1.0 + 2f64.sqrt()
}
