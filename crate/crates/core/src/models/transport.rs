use crate::error::{ConfigError, ModelError};
use crate::numflux::ViscosityRule;
use crate::state::State;

use super::BalanceLaw;

/// Linear transport with a linear source: `u_t + c u_x = alpha u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportModel {
    pub c: f64,
    pub alpha: f64,
}

impl TransportModel {
    pub fn new(c: f64, alpha: f64) -> Result<Self, ConfigError> {
        if c == 0.0 || !c.is_finite() || !alpha.is_finite() {
            return Err(ConfigError::invalid("c", "advection speed must be finite and nonzero"));
        }
        Ok(TransportModel { c, alpha })
    }
}

impl BalanceLaw<1> for TransportModel {
    fn name(&self) -> &'static str {
        "transport"
    }

    fn component_names(&self) -> [&'static str; 1] {
        ["u"]
    }

    fn check_state(&self, u: &State<1>) -> Result<(), ModelError> {
        if u.is_finite() {
            Ok(())
        } else {
            Err(ModelError::InvalidState {
                state: u.0.to_vec(),
                reason: "non-finite value",
            })
        }
    }

    fn flux_pieces(&self, u: &State<1>) -> [State<1>; 2] {
        [State([self.c * u[0]]), State::ZERO]
    }

    fn piece_speeds(&self, _u: &State<1>) -> [f64; 2] {
        [self.c.abs(), 0.0]
    }

    fn source_geom(&self, u: &State<1>) -> State<1> {
        State([self.alpha * u[0]])
    }

    fn source_plain(&self, _u: &State<1>) -> State<1> {
        State::ZERO
    }

    fn has_plain_source(&self) -> bool {
        false
    }

    fn depth(&self, x: f64) -> f64 {
        x
    }

    fn depth_dx(&self, _x: f64) -> f64 {
        1.0
    }

    fn max_wave_speed(&self, u: &State<1>) -> Result<f64, ModelError> {
        self.check_state(u)?;
        Ok(self.c.abs())
    }

    fn stationary_slope(&self, u: &State<1>, _x: f64) -> Result<State<1>, ModelError> {
        Ok(State([self.alpha / self.c * u[0]]))
    }

    fn exact_rate(&self) -> Option<f64> {
        Some(self.alpha / self.c)
    }

    fn is_linear(&self) -> bool {
        true
    }

    fn default_viscosity(&self) -> ViscosityRule {
        ViscosityRule::FixedK(self.c.abs())
    }
}
