//! Rusanov fluxes for the full flux and for the explicit/implicit parts.

use crate::error::ModelError;
use crate::models::{terms_flux, terms_speed, BalanceLaw, Part, PartTerms, SplitSpec};
use crate::state::State;

/// Numerical viscosity of the Rusanov flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViscosityRule {
    /// Constant `k`, e.g. `|c|` for linear transport.
    FixedK(f64),
    /// `max(s(uL), s(uR))` with the local spectral bound `s`.
    LocalMax,
}

/// `½(f(uL) + f(uR)) − k/2 (uR − uL)`.
pub fn rusanov<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    ul: &State<N>,
    ur: &State<N>,
    rule: ViscosityRule,
) -> Result<State<N>, ModelError> {
    let fl = model.flux(ul)?;
    let fr = model.flux(ur)?;
    let k = match rule {
        ViscosityRule::FixedK(k) => k,
        ViscosityRule::LocalMax => model.max_wave_speed(ul)?.max(model.max_wave_speed(ur)?),
    };
    Ok(0.5 * (fl + fr) - (0.5 * k) * (*ur - *ul))
}

/// Rusanov flux of the given part's flux terms. A fixed viscosity applies
/// only when the part carries the whole flux; otherwise the part uses the
/// spectral bound of its own flux pieces. A part without flux terms has a
/// zero numerical flux.
pub fn split_rusanov<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    part: Part,
    spec: &SplitSpec,
    ul: &State<N>,
    ur: &State<N>,
    rule: ViscosityRule,
) -> Result<State<N>, ModelError> {
    terms_rusanov(model, spec.terms(part), ul, ur, rule)
}

pub(crate) fn terms_rusanov<const N: usize, M: BalanceLaw<N> + ?Sized>(
    model: &M,
    terms: PartTerms,
    ul: &State<N>,
    ur: &State<N>,
    rule: ViscosityRule,
) -> Result<State<N>, ModelError> {
    if !terms.has_flux() {
        return Ok(State::ZERO);
    }
    model.check_state(ul)?;
    model.check_state(ur)?;
    let fl = terms_flux(model, terms, ul);
    let fr = terms_flux(model, terms, ur);
    let k = match rule {
        ViscosityRule::FixedK(k) if terms.advective && terms.pressure => k,
        _ => terms_speed(model, terms, ul).max(terms_speed(model, terms, ur)),
    };
    Ok(0.5 * (fl + fr) - (0.5 * k) * (*ur - *ul))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        split, BurgersModel, DepthFunction, ShallowWaterModel, SplitRegime, TransportModel,
    };

    #[test]
    fn scalar_values() {
        let t = TransportModel::new(1.0, 1.0).unwrap();
        let f = rusanov(&t, &State([1.0]), &State([2.0]), ViscosityRule::FixedK(1.0)).unwrap();
        assert!((f[0] - 1.0).abs() < 1e-15);
        let b = BurgersModel { alpha: 1.0 };
        let f = rusanov(&b, &State([1.0]), &State([-1.0]), ViscosityRule::LocalMax).unwrap();
        assert!((f[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn consistency() {
        let swe = ShallowWaterModel::new(9.81, 0.01, DepthFunction::Flat(0.0));
        let u = State([1.3, -0.7]);
        let f = rusanov(&swe, &u, &u, ViscosityRule::LocalMax).unwrap();
        assert_eq!(f, swe.flux(&u).unwrap());
    }

    #[test]
    fn pressure_split_parts() {
        let swe = ShallowWaterModel::frictionless(9.81, DepthFunction::Flat(0.0));
        let spec = split(&swe, SplitRegime::SemiImplicitPressure).unwrap();
        let u = State([2.0, 3.0]);
        let rule = ViscosityRule::LocalMax;
        let e = split_rusanov(&swe, Part::Explicit, &spec, &u, &u, rule).unwrap();
        let i = split_rusanov(&swe, Part::Implicit, &spec, &u, &u, rule).unwrap();
        assert_eq!(e, State([0.0, 4.5]));
        assert!((i[0] - 3.0).abs() < 1e-15 && (i[1] - 19.62).abs() < 1e-13);
    }

    #[test]
    fn friction_split_implicit_flux_is_zero() {
        let swe = ShallowWaterModel::new(9.81, 0.01, DepthFunction::Flat(0.0));
        let spec = split(&swe, SplitRegime::SemiImplicitFriction).unwrap();
        let (a, b) = (State([0.3, 3.0]), State([0.31, 3.0]));
        let rule = ViscosityRule::LocalMax;
        let i = split_rusanov(&swe, Part::Implicit, &spec, &a, &b, rule).unwrap();
        assert_eq!(i, State::ZERO);
        let e = split_rusanov(&swe, Part::Explicit, &spec, &a, &b, rule).unwrap();
        assert_eq!(e, rusanov(&swe, &a, &b, rule).unwrap());
    }
}
