use crate::error::ModelError;
use crate::numflux::ViscosityRule;
use crate::state::State;

use super::BalanceLaw;

/// Burgers equation with a quadratic source: `u_t + (u^2/2)_x = alpha u^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersModel {
    pub alpha: f64,
}

impl BalanceLaw<1> for BurgersModel {
    fn name(&self) -> &'static str {
        "burgers"
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
        [State([0.5 * u[0] * u[0]]), State::ZERO]
    }

    fn piece_speeds(&self, u: &State<1>) -> [f64; 2] {
        [u[0].abs(), 0.0]
    }

    fn source_geom(&self, u: &State<1>) -> State<1> {
        State([self.alpha * u[0] * u[0]])
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
        Ok(u[0].abs())
    }

    // u u_x = alpha u^2; the zero state is itself stationary, so alpha u
    // covers it too.
    fn stationary_slope(&self, u: &State<1>, _x: f64) -> Result<State<1>, ModelError> {
        Ok(State([self.alpha * u[0]]))
    }

    fn exact_rate(&self) -> Option<f64> {
        Some(self.alpha)
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn default_viscosity(&self) -> ViscosityRule {
        ViscosityRule::LocalMax
    }
}
