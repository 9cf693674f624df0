//! Run configuration and its flat `key = value` text format.
//!
//! ```text
//! # comments start with '#'
//! case = swe.test1          # optional, must come first: start from a built-in
//! model = swe               # transport | burgers | swe
//! g = 9.81
//! manning_k = 0
//! depth = cos_bump          # cos_bump | gaussian | exp_cos | flat:<H>
//! x_left = 0
//! x_right = 3
//! cells = 200
//! cfl = 2
//! t_end = 1
//! scheme = IWBM2
//! fluctuation = PWLR        # PWCR | PWLR
//! limiter = minmod          # minmod | avg
//! left = dirichlet:1=3.5    # periodic | transmissive | extension | dirichlet:<c>=<v>,...
//! right = stationary:0      # Dirichlet from the stationary initial data
//! initial = stationary:left:2,3.5
//! ```

use std::path::PathBuf;

use crate::error::ConfigError;
use crate::grid::Side;
use crate::models::{DepthFunction, SplitRegime};
use crate::numflux::ViscosityRule;
use crate::par::Exec;
use crate::reconstruction::{FluctuationKind, FrozenWeights, Limiter};
use crate::stationary::ProfileSource;
use crate::steppers::{FixedPoint, Scheme, SolverConfig};

use super::cases::builtin_case;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Transport {
        c: f64,
        alpha: f64,
    },
    Burgers {
        alpha: f64,
    },
    ShallowWater {
        g: f64,
        manning_k: f64,
        depth: DepthFunction,
    },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Transport { .. } => "transport",
            ModelSpec::Burgers { .. } => "burgers",
            ModelSpec::ShallowWater { .. } => "swe",
        }
    }

    pub fn components(&self) -> usize {
        match self {
            ModelSpec::ShallowWater { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    Periodic,
    Transmissive,
    Dirichlet(Vec<(usize, f64)>),
    /// Dirichlet on the listed components with values taken from the
    /// stationary part of the initial data at this boundary.
    DirichletStationary(Vec<usize>),
    StationaryExtension,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Discrete stationary solution through `value` at boundary `start`.
    Stationary { start: Side, value: Vec<f64> },
    /// Stationary solution plus `amplitude exp(-rate (x - center)^2)` on
    /// component 0.
    StationaryPlusGaussian {
        start: Side,
        value: Vec<f64>,
        amplitude: f64,
        rate: f64,
        center: f64,
    },
    /// Stationary solution plus `increment` on the union of `intervals`.
    StationaryPlusBoxes {
        start: Side,
        value: Vec<f64>,
        intervals: Vec<(f64, f64)>,
        increment: Vec<f64>,
    },
    /// `h = H + amplitude exp(-rate x^2)`, `q = 0`.
    SurfaceGaussian { amplitude: f64, rate: f64 },
    /// `h = H + jump` for `|x| < half_width`, else `h = H`; `q = 0`.
    SurfaceStep { half_width: f64, jump: f64 },
    Constant(Vec<f64>),
}

impl InitialCondition {
    /// The stationary solution underlying the initial data, if any.
    pub fn stationary_base(&self) -> Option<InitialCondition> {
        match self {
            InitialCondition::Stationary { .. } => Some(self.clone()),
            InitialCondition::StationaryPlusGaussian { start, value, .. }
            | InitialCondition::StationaryPlusBoxes { start, value, .. } => {
                Some(InitialCondition::Stationary {
                    start: *start,
                    value: value.clone(),
                })
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub model: ModelSpec,
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub fluctuation: FluctuationKind,
    pub limiter: Limiter,
    pub frozen: FrozenWeights,
    pub profile_source: Option<ProfileSource>,
    pub regime: Option<SplitRegime>,
    pub viscosity: Option<ViscosityRule>,
    pub left: BoundarySpec,
    pub right: BoundarySpec,
    pub initial: InitialCondition,
    /// Stationary solution to compare against; defaults to the stationary
    /// part of the initial data.
    pub reference: Option<InitialCondition>,
    pub solver: SolverConfig,
    pub snapshots: Vec<f64>,
    pub out_dir: Option<PathBuf>,
    pub exec: Exec,
    pub max_steps: usize,
}

impl RunConfig {
    /// Profile source actually used by the scheme.
    pub fn effective_profile_source(&self) -> ProfileSource {
        self.profile_source
            .unwrap_or_else(|| self.scheme.profile_source())
    }

    pub fn reference_condition(&self) -> Option<InitialCondition> {
        self.reference
            .clone()
            .or_else(|| self.initial.stationary_base())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.x_right > self.x_left) {
            return Err(ConfigError::DegenerateInterval {
                x_left: self.x_left,
                x_right: self.x_right,
            });
        }
        if self.n_cells < 3 {
            return Err(ConfigError::TooFewCells(self.n_cells));
        }
        if !(self.cfl > 0.0) || !self.cfl.is_finite() {
            return Err(ConfigError::invalid("cfl", "must be positive"));
        }
        if !(self.t_end >= 0.0) {
            return Err(ConfigError::invalid("t_end", "must be non-negative"));
        }
        if let ModelSpec::Transport { c, .. } = self.model {
            if c == 0.0 {
                return Err(ConfigError::invalid("c", "must be non-zero"));
            }
        }
        let n = self.model.components();
        for (key, b) in [("left", &self.left), ("right", &self.right)] {
            let comps: Vec<usize> = match b {
                BoundarySpec::Dirichlet(v) => v.iter().map(|(c, _)| *c).collect(),
                BoundarySpec::DirichletStationary(v) => v.clone(),
                _ => vec![],
            };
            if comps.iter().any(|&c| c >= n) {
                return Err(ConfigError::invalid(key, "component out of range"));
            }
        }
        Ok(())
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "name" => self.name = v.to_string(),
            "model" => {
                self.model = match v {
                    "transport" => ModelSpec::Transport { c: 1.0, alpha: 1.0 },
                    "burgers" => ModelSpec::Burgers { alpha: 1.0 },
                    "swe" | "shallow_water" => ModelSpec::ShallowWater {
                        g: 9.81,
                        manning_k: 0.0,
                        depth: DepthFunction::Flat(1.0),
                    },
                    _ => return Err(ConfigError::invalid("model", format!("unknown model `{v}`"))),
                }
            }
            "c" => match &mut self.model {
                ModelSpec::Transport { c, .. } => *c = num("c", v)?,
                _ => return Err(wrong_model("c")),
            },
            "alpha" => match &mut self.model {
                ModelSpec::Transport { alpha, .. } | ModelSpec::Burgers { alpha } => {
                    *alpha = num("alpha", v)?
                }
                _ => return Err(wrong_model("alpha")),
            },
            "g" => match &mut self.model {
                ModelSpec::ShallowWater { g, .. } => *g = num("g", v)?,
                _ => return Err(wrong_model("g")),
            },
            "manning_k" => match &mut self.model {
                ModelSpec::ShallowWater { manning_k, .. } => {
                    *manning_k = num("manning_k", v)?;
                    if *manning_k < 0.0 {
                        return Err(ConfigError::invalid("manning_k", "must be non-negative"));
                    }
                }
                _ => return Err(wrong_model("manning_k")),
            },
            "depth" => match &mut self.model {
                ModelSpec::ShallowWater { depth, .. } => *depth = parse_depth(v)?,
                _ => return Err(wrong_model("depth")),
            },
            "x_left" => self.x_left = num("x_left", v)?,
            "x_right" => self.x_right = num("x_right", v)?,
            "cells" | "n_cells" => self.n_cells = int("cells", v)?,
            "cfl" => self.cfl = num("cfl", v)?,
            "t_end" | "tend" => self.t_end = num("t_end", v)?,
            "scheme" => self.scheme = v.parse()?,
            "fluctuation" => self.fluctuation = parse_fluctuation(v)?,
            "limiter" => self.limiter = parse_limiter(v)?,
            "frozen_weights" => {
                self.frozen = match v.to_ascii_lowercase().as_str() {
                    "avg" => FrozenWeights::Avg,
                    "minmod" => FrozenWeights::Minmod,
                    _ => return Err(ConfigError::invalid("frozen_weights", "expected avg or minmod")),
                }
            }
            "profile" => {
                self.profile_source = match v {
                    "exact" => Some(ProfileSource::Exact),
                    "collocated" => Some(ProfileSource::Collocated),
                    "auto" => None,
                    _ => return Err(ConfigError::invalid("profile", "expected exact, collocated or auto")),
                }
            }
            "split" => {
                self.regime = match v {
                    "auto" => None,
                    "implicit" => Some(SplitRegime::FullyImplicit),
                    "explicit" => Some(SplitRegime::FullyExplicit),
                    "pressure" => Some(SplitRegime::SemiImplicitPressure),
                    "friction" => Some(SplitRegime::SemiImplicitFriction),
                    "source" => Some(SplitRegime::SemiImplicitSource),
                    _ => return Err(ConfigError::invalid("split", format!("unknown split `{v}`"))),
                }
            }
            "viscosity" => {
                self.viscosity = match v {
                    "auto" => None,
                    "local" => Some(ViscosityRule::LocalMax),
                    _ => {
                        let k = num("viscosity", v)?;
                        if !(k > 0.0) {
                            return Err(ConfigError::invalid("viscosity", "must be positive"));
                        }
                        Some(ViscosityRule::FixedK(k))
                    }
                }
            }
            "left" => self.left = parse_boundary("left", v)?,
            "right" => self.right = parse_boundary("right", v)?,
            "initial" => self.initial = parse_initial(v)?,
            "reference" => {
                self.reference = if v == "none" {
                    None
                } else {
                    Some(parse_initial(v)?)
                }
            }
            "stage_tol" => self.solver.stage_tol = num("stage_tol", v)?,
            "stage_maxiter" => self.solver.stage_maxiter = int("stage_maxiter", v)?,
            "newton_iters" => self.solver.newton_iters = int("newton_iters", v)?,
            "linear_fast_path" => {
                self.solver.linear_fast_path = match v {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(ConfigError::invalid("linear_fast_path", "expected true or false")),
                }
            }
            "fixed_point" => {
                self.solver.fixed_point = match v {
                    "picard" => FixedPoint::Picard,
                    "chord" => FixedPoint::Chord,
                    _ => return Err(ConfigError::invalid("fixed_point", "expected picard or chord")),
                }
            }
            "snapshots" => {
                self.snapshots = if v.is_empty() {
                    vec![]
                } else {
                    v.split(',')
                        .map(|s| num("snapshots", s))
                        .collect::<Result<_, _>>()?
                }
            }
            "out" => self.out_dir = Some(PathBuf::from(v)),
            "exec" => {
                self.exec = match v {
                    "sequential" => Exec::Sequential,
                    "parallel" => Exec::Parallel,
                    _ => return Err(ConfigError::invalid("exec", "expected sequential or parallel")),
                }
            }
            "max_steps" => self.max_steps = int("max_steps", v)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Parse a configuration file. A leading `case = ...` line selects the
    /// built-in case the remaining keys modify; otherwise the file starts
    /// from [`RunConfig::default`].
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg: Option<RunConfig> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: lineno + 1,
                reason: "expected `key = value`".into(),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k == "case" {
                if cfg.is_some() {
                    return Err(ConfigError::Parse {
                        line: lineno + 1,
                        reason: "`case` must be the first setting".into(),
                    });
                }
                cfg = Some(builtin_case(v)?);
                continue;
            }
            cfg.get_or_insert_with(RunConfig::default)
                .set(k, v)
                .map_err(|e| match e {
                    ConfigError::UnknownKey(_) | ConfigError::Invalid { .. } => ConfigError::Parse {
                        line: lineno + 1,
                        reason: e.to_string(),
                    },
                    other => other,
                })?;
        }
        let cfg = cfg.unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            name: "run".into(),
            model: ModelSpec::Transport { c: 1.0, alpha: 1.0 },
            x_left: 0.0,
            x_right: 2.0,
            n_cells: 200,
            cfl: 2.0,
            t_end: 1.0,
            scheme: Scheme::Iewbm2,
            fluctuation: FluctuationKind::Pwlr,
            limiter: Limiter::Minmod,
            frozen: FrozenWeights::Avg,
            profile_source: None,
            regime: None,
            viscosity: None,
            left: BoundarySpec::Transmissive,
            right: BoundarySpec::Transmissive,
            initial: InitialCondition::Stationary {
                start: Side::Left,
                value: vec![1.0],
            },
            reference: None,
            solver: SolverConfig::default(),
            snapshots: vec![],
            out_dir: None,
            exec: Exec::default(),
            max_steps: 10_000_000,
        }
    }
}

fn wrong_model(key: &str) -> ConfigError {
    ConfigError::invalid(key, "not a parameter of the selected model")
}

fn num(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| ConfigError::invalid(key, format!("`{v}` is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ConfigError::invalid(key, "must be finite"))
    }
}

fn int(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError::invalid(key, format!("`{v}` is not a non-negative integer")))
}

fn nums(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(|s| num(key, s)).collect()
}

fn parse_side(key: &str, v: &str) -> Result<Side, ConfigError> {
    match v {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(ConfigError::invalid(key, "expected left or right")),
    }
}

pub fn parse_fluctuation(v: &str) -> Result<FluctuationKind, ConfigError> {
    match v.to_ascii_uppercase().as_str() {
        "PWCR" => Ok(FluctuationKind::Pwcr),
        "PWLR" => Ok(FluctuationKind::Pwlr),
        _ => Err(ConfigError::invalid("fluctuation", "expected PWCR or PWLR")),
    }
}

pub fn parse_limiter(v: &str) -> Result<Limiter, ConfigError> {
    match v.to_ascii_lowercase().as_str() {
        "minmod" => Ok(Limiter::Minmod),
        "avg" => Ok(Limiter::Avg),
        _ => Err(ConfigError::invalid("limiter", "expected minmod or avg")),
    }
}

pub fn parse_depth(v: &str) -> Result<DepthFunction, ConfigError> {
    match v {
        "cos_bump" => Ok(DepthFunction::cos_bump()),
        "gaussian" => Ok(DepthFunction::gaussian()),
        "exp_cos" => Ok(DepthFunction::exp_cos()),
        _ => match v.strip_prefix("flat:") {
            Some(h) => Ok(DepthFunction::Flat(num("depth", h)?)),
            None => Err(ConfigError::invalid("depth", format!("unknown depth `{v}`"))),
        },
    }
}

pub fn parse_boundary(key: &str, v: &str) -> Result<BoundarySpec, ConfigError> {
    match v {
        "periodic" => return Ok(BoundarySpec::Periodic),
        "transmissive" => return Ok(BoundarySpec::Transmissive),
        "extension" => return Ok(BoundarySpec::StationaryExtension),
        _ => {}
    }
    if let Some(rest) = v.strip_prefix("dirichlet:") {
        let mut out = Vec::new();
        for item in rest.split(',') {
            let (c, x) = item
                .split_once('=')
                .ok_or_else(|| ConfigError::invalid(key, "expected dirichlet:<component>=<value>,..."))?;
            out.push((int(key, c)?, num(key, x)?));
        }
        return Ok(BoundarySpec::Dirichlet(out));
    }
    if let Some(rest) = v.strip_prefix("stationary:") {
        let comps = rest
            .split(',')
            .map(|c| int(key, c))
            .collect::<Result<_, _>>()?;
        return Ok(BoundarySpec::DirichletStationary(comps));
    }
    Err(ConfigError::invalid(key, format!("unknown boundary `{v}`")))
}

/// Grammar:
/// `stationary:<side>:<v,..>`,
/// `gaussian:<side>:<v,..>:<amplitude>:<rate>:<center>`,
/// `surface_gaussian:<amplitude>:<rate>`, `surface_step:<half_width>:<jump>`,
/// `constant:<v,..>`.
pub fn parse_initial(v: &str) -> Result<InitialCondition, ConfigError> {
    let parts: Vec<&str> = v.split(':').collect();
    let bad = || ConfigError::invalid("initial", format!("cannot parse `{v}`"));
    match parts.as_slice() {
        ["stationary", side, value] => Ok(InitialCondition::Stationary {
            start: parse_side("initial", side)?,
            value: nums("initial", value)?,
        }),
        ["gaussian", side, value, a, r, c] => Ok(InitialCondition::StationaryPlusGaussian {
            start: parse_side("initial", side)?,
            value: nums("initial", value)?,
            amplitude: num("initial", a)?,
            rate: num("initial", r)?,
            center: num("initial", c)?,
        }),
        ["surface_gaussian", a, r] => Ok(InitialCondition::SurfaceGaussian {
            amplitude: num("initial", a)?,
            rate: num("initial", r)?,
        }),
        ["surface_step", w, j] => Ok(InitialCondition::SurfaceStep {
            half_width: num("initial", w)?,
            jump: num("initial", j)?,
        }),
        ["constant", value] => Ok(InitialCondition::Constant(nums("initial", value)?)),
        _ => Err(bad()),
    }
}
