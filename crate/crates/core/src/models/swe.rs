use crate::error::ModelError;
use crate::numflux::ViscosityRule;
use crate::state::State;

use super::{BalanceLaw, DepthFunction};

/// Relative width of the excluded band around critical flow.
pub const CRIT_TOL: f64 = 1e-10;

/// Shallow water with Manning friction, state `(h, q)`:
///
/// ```text
/// h_t + q_x = 0
/// q_t + (q^2/h + g h^2/2)_x = g h H_x - k q|q| / h^mu
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShallowWaterModel {
    pub g: f64,
    pub manning_k: f64,
    pub mu: f64,
    pub depth: DepthFunction,
}

impl ShallowWaterModel {
    pub fn new(g: f64, manning_k: f64, depth: DepthFunction) -> Self {
        ShallowWaterModel {
            g,
            manning_k,
            mu: 7.0 / 3.0,
            depth,
        }
    }

    pub fn frictionless(g: f64, depth: DepthFunction) -> Self {
        Self::new(g, 0.0, depth)
    }

    pub fn froude(&self, u: &State<2>) -> Result<f64, ModelError> {
        self.check_state(u)?;
        Ok((u[1] / u[0]).abs() / (self.g * u[0]).sqrt())
    }

    /// Free surface `h - H`.
    pub fn free_surface(&self, h: f64, x: f64) -> f64 {
        h - self.depth.value(x)
    }

    pub fn bottom(&self, x: f64) -> f64 {
        -self.depth.value(x)
    }
}

impl BalanceLaw<2> for ShallowWaterModel {
    fn name(&self) -> &'static str {
        "swe"
    }

    fn component_names(&self) -> [&'static str; 2] {
        ["h", "q"]
    }

    fn check_state(&self, u: &State<2>) -> Result<(), ModelError> {
        if !u.is_finite() {
            return Err(ModelError::InvalidState {
                state: u.0.to_vec(),
                reason: "non-finite value",
            });
        }
        if u[0] <= 0.0 {
            return Err(ModelError::InvalidState {
                state: u.0.to_vec(),
                reason: "non-positive thickness",
            });
        }
        Ok(())
    }

    fn flux_pieces(&self, u: &State<2>) -> [State<2>; 2] {
        let (h, q) = (u[0], u[1]);
        [State([0.0, q * q / h]), State([q, 0.5 * self.g * h * h])]
    }

    fn piece_speeds(&self, u: &State<2>) -> [f64; 2] {
        [(u[1] / u[0]).abs(), (self.g * u[0]).sqrt()]
    }

    fn source_geom(&self, u: &State<2>) -> State<2> {
        State([0.0, self.g * u[0]])
    }

    fn source_plain(&self, u: &State<2>) -> State<2> {
        if self.manning_k == 0.0 {
            return State::ZERO;
        }
        let (h, q) = (u[0], u[1]);
        State([0.0, -self.manning_k * q * q.abs() / h.powf(self.mu)])
    }

    fn has_plain_source(&self) -> bool {
        self.manning_k != 0.0
    }

    fn depth(&self, x: f64) -> f64 {
        self.depth.value(x)
    }

    fn depth_dx(&self, x: f64) -> f64 {
        self.depth.derivative(x)
    }

    fn max_wave_speed(&self, u: &State<2>) -> Result<f64, ModelError> {
        self.check_state(u)?;
        let [a, p] = self.piece_speeds(u);
        Ok(a + p)
    }

    fn stationary_slope(&self, u: &State<2>, x: f64) -> Result<State<2>, ModelError> {
        self.check_state(u)?;
        let (h, q) = (u[0], u[1]);
        let gh = self.g * h;
        let vel2 = (q / h) * (q / h);
        let gap = gh - vel2;
        if gap.abs() <= CRIT_TOL * gh.max(vel2) {
            return Err(ModelError::CriticalPoint { x, gap });
        }
        let rhs = gh * self.depth.derivative(x) + self.source_plain(u)[1];
        Ok(State([rhs / gap, 0.0]))
    }

    fn exact_rate(&self) -> Option<f64> {
        None
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn default_viscosity(&self) -> ViscosityRule {
        ViscosityRule::LocalMax
    }
}
