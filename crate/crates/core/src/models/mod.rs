//! Balance laws `u_t + f(u)_x = S(u) H_x + S2(u)`.
//!
//! Each model exposes its flux split into an advective and a pressure piece
//! so that semi-implicit schemes can assign the pieces to different parts.
//! Scalar models put the whole flux in the advective piece.

mod burgers;
mod depth;
mod swe;
mod transport;

pub use burgers::BurgersModel;
pub use depth::DepthFunction;
pub use swe::ShallowWaterModel;
pub use transport::TransportModel;

use crate::error::{ConfigError, ModelError};
use crate::numflux::ViscosityRule;
use crate::state::State;

pub trait BalanceLaw<const N: usize>: Send + Sync {
    fn name(&self) -> &'static str;

    fn component_names(&self) -> [&'static str; N];

    /// Reject states outside the admissible set (non-finite, dry).
    fn check_state(&self, u: &State<N>) -> Result<(), ModelError>;

    /// `[advective, pressure]` pieces of the flux; they sum to `f(u)`.
    /// Assumes an admissible state.
    fn flux_pieces(&self, u: &State<N>) -> [State<N>; 2];

    /// Spectral bounds of the Jacobians of the two flux pieces.
    fn piece_speeds(&self, u: &State<N>) -> [f64; 2];

    /// Factor `S(u)` multiplying `H_x`.
    fn source_geom(&self, u: &State<N>) -> State<N>;

    /// Source part without `H_x` (friction); zero when absent.
    fn source_plain(&self, u: &State<N>) -> State<N>;

    fn has_plain_source(&self) -> bool;

    fn depth(&self, x: f64) -> f64;

    fn depth_dx(&self, x: f64) -> f64;

    /// Spectral radius of the flux Jacobian.
    fn max_wave_speed(&self, u: &State<N>) -> Result<f64, ModelError>;

    /// `u_x` along the stationary ODE `f(u)_x = S(u) H_x + S2(u)`.
    fn stationary_slope(&self, u: &State<N>, x: f64) -> Result<State<N>, ModelError>;

    /// Rate `k` of the closed-form stationary family `C exp(k x)`, if any.
    fn exact_rate(&self) -> Option<f64>;

    /// Whether the semi-discrete operator is affine in the state (enables
    /// exact Jacobian probing).
    fn is_linear(&self) -> bool;

    fn default_viscosity(&self) -> ViscosityRule;

    fn flux(&self, u: &State<N>) -> Result<State<N>, ModelError> {
        self.check_state(u)?;
        let [a, p] = self.flux_pieces(u);
        Ok(a + p)
    }
}

/// How terms are distributed between the explicit and implicit parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRegime {
    /// Everything implicit.
    FullyImplicit,
    /// Everything explicit.
    FullyExplicit,
    /// Advection explicit; mass flux, pressure and all sources implicit.
    SemiImplicitPressure,
    /// Whole flux and `S(u) H_x` explicit; friction implicit.
    SemiImplicitFriction,
    /// Whole flux explicit; all sources implicit.
    SemiImplicitSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Full,
    Explicit,
    Implicit,
}

/// Membership of each term in a given part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartTerms {
    pub advective: bool,
    pub pressure: bool,
    pub geom: bool,
    pub plain: bool,
}

impl PartTerms {
    pub const ALL: PartTerms = PartTerms {
        advective: true,
        pressure: true,
        geom: true,
        plain: true,
    };
    pub const NONE: PartTerms = PartTerms {
        advective: false,
        pressure: false,
        geom: false,
        plain: false,
    };

    pub fn is_empty(&self) -> bool {
        *self == PartTerms::NONE
    }

    pub fn has_flux(&self) -> bool {
        self.advective || self.pressure
    }

    fn complement(self) -> PartTerms {
        PartTerms {
            advective: !self.advective,
            pressure: !self.pressure,
            geom: !self.geom,
            plain: !self.plain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub regime: SplitRegime,
}

/// Build the split descriptor for `model`, rejecting regimes the model
/// cannot support.
pub fn split<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    regime: SplitRegime,
) -> Result<SplitSpec, ConfigError> {
    match regime {
        SplitRegime::SemiImplicitFriction if !model.has_plain_source() => {
            Err(ConfigError::Unsupported(format!(
                "friction split requires a friction term; the {} model has none",
                model.name()
            )))
        }
        SplitRegime::SemiImplicitPressure if N < 2 => Err(ConfigError::Unsupported(format!(
            "pressure split requires a system; the {} model is scalar",
            model.name()
        ))),
        _ => Ok(SplitSpec { regime }),
    }
}

impl SplitSpec {
    pub fn fully_implicit() -> Self {
        SplitSpec {
            regime: SplitRegime::FullyImplicit,
        }
    }

    pub fn terms(&self, part: Part) -> PartTerms {
        let explicit = match self.regime {
            SplitRegime::FullyImplicit => PartTerms::NONE,
            SplitRegime::FullyExplicit => PartTerms::ALL,
            SplitRegime::SemiImplicitPressure => PartTerms {
                advective: true,
                ..PartTerms::NONE
            },
            SplitRegime::SemiImplicitFriction => PartTerms {
                plain: false,
                ..PartTerms::ALL
            },
            SplitRegime::SemiImplicitSource => PartTerms {
                advective: true,
                pressure: true,
                ..PartTerms::NONE
            },
        };
        match part {
            Part::Full => PartTerms::ALL,
            Part::Explicit => explicit,
            Part::Implicit => explicit.complement(),
        }
    }

    pub fn flux_part<const N: usize, M: BalanceLaw<N> + ?Sized>(
        &self,
        model: &M,
        part: Part,
        u: &State<N>,
    ) -> State<N> {
        terms_flux(model, self.terms(part), u)
    }

    /// Part source evaluated at `x`: geometric term times `H_x` plus plain.
    pub fn source_part<const N: usize, M: BalanceLaw<N> + ?Sized>(
        &self,
        model: &M,
        part: Part,
        u: &State<N>,
        x: f64,
    ) -> State<N> {
        terms_source(model, self.terms(part), u, model.depth_dx(x))
    }

    /// Viscosity bound for the part's flux: the spectral bound of its own
    /// sub-Jacobian.
    pub fn part_speed<const N: usize, M: BalanceLaw<N> + ?Sized>(
        &self,
        model: &M,
        part: Part,
        u: &State<N>,
    ) -> f64 {
        terms_speed(model, self.terms(part), u)
    }
}

pub(crate) fn terms_flux<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    t: PartTerms,
    u: &State<N>,
) -> State<N> {
    if !t.has_flux() {
        return State::ZERO;
    }
    let [a, p] = model.flux_pieces(u);
    match (t.advective, t.pressure) {
        (true, true) => a + p,
        (true, false) => a,
        _ => p,
    }
}

pub(crate) fn terms_source<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    t: PartTerms,
    u: &State<N>,
    h_x: f64,
) -> State<N> {
    let mut s = State::ZERO;
    if t.geom {
        s += h_x * model.source_geom(u);
    }
    if t.plain {
        s += model.source_plain(u);
    }
    s
}

pub(crate) fn terms_speed<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    t: PartTerms,
    u: &State<N>,
) -> f64 {
    let [a, p] = model.piece_speeds(u);
    match (t.advective, t.pressure) {
        (true, true) => a + p,
        (true, false) => a,
        (false, true) => p,
        (false, false) => 0.0,
    }
}
