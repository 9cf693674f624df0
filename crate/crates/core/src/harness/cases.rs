//! Built-in test cases.

use crate::error::ConfigError;
use crate::grid::Side;
use crate::models::DepthFunction;
use crate::reconstruction::{FluctuationKind, Limiter};
use crate::steppers::Scheme;

use super::config::{BoundarySpec, InitialCondition, ModelSpec, RunConfig};

pub const CASES: [&str; 11] = [
    "transport.test1",
    "transport.test2",
    "burgers.test1",
    "burgers.test2",
    "burgers.test3",
    "swe.test1",
    "swe.test2",
    "swe.test3",
    "swe.test4",
    "swe.test5",
    "swe.test6",
];

/// Gravity used by every shallow-water case.
pub const GRAVITY: f64 = 9.81;

fn scalar(name: &str, model: ModelSpec, base: f64) -> RunConfig {
    RunConfig {
        name: name.replace('.', "_"),
        model,
        x_left: 0.0,
        x_right: 2.0,
        n_cells: 200,
        cfl: 2.0,
        t_end: 1.0,
        scheme: Scheme::Iewbm2,
        fluctuation: FluctuationKind::Pwlr,
        limiter: Limiter::Avg,
        left: BoundarySpec::Dirichlet(vec![(0, base)]),
        right: BoundarySpec::Transmissive,
        initial: InitialCondition::Stationary {
            start: Side::Left,
            value: vec![base],
        },
        ..RunConfig::default()
    }
}

fn swe(name: &str, manning_k: f64, depth: DepthFunction, x_left: f64, x_right: f64) -> RunConfig {
    RunConfig {
        name: name.replace('.', "_"),
        model: ModelSpec::ShallowWater {
            g: GRAVITY,
            manning_k,
            depth,
        },
        x_left,
        x_right,
        n_cells: 200,
        cfl: 2.0,
        t_end: 1.0,
        scheme: Scheme::Iwbm2,
        fluctuation: FluctuationKind::Pwlr,
        limiter: Limiter::Avg,
        ..RunConfig::default()
    }
}

fn gaussian(cfg: RunConfig, amplitude: f64, rate: f64, center: f64) -> RunConfig {
    let Some(InitialCondition::Stationary { start, value }) = cfg.initial.stationary_base() else {
        unreachable!("scalar cases start from stationary data")
    };
    RunConfig {
        initial: InitialCondition::StationaryPlusGaussian {
            start,
            value,
            amplitude,
            rate,
            center,
        },
        ..cfg
    }
}

pub fn builtin_case(name: &str) -> Result<RunConfig, ConfigError> {
    let transport = ModelSpec::Transport { c: 1.0, alpha: 1.0 };
    let burgers = ModelSpec::Burgers { alpha: 1.0 };
    let cfg = match name {
        "transport.test1" => scalar(name, transport, 1.0),
        "transport.test2" => gaussian(scalar(name, transport, 1.0), 0.5, 100.0, 0.3),
        "burgers.test1" => scalar(name, burgers, 1.0),
        "burgers.test2" => RunConfig {
            t_end: 10.0,
            n_cells: 400,
            ..gaussian(scalar(name, burgers, 1.0), 0.4, 25.0, 0.4)
        },
        "burgers.test3" => RunConfig {
            t_end: 0.5,
            ..gaussian(scalar(name, burgers, 0.1), 0.5, 25.0, 1.0)
        },
        "swe.test1" => RunConfig {
            left: BoundarySpec::Dirichlet(vec![(1, 3.5)]),
            right: BoundarySpec::DirichletStationary(vec![0]),
            initial: InitialCondition::Stationary {
                start: Side::Left,
                value: vec![2.0 + DepthFunction::cos_bump().value(0.0), 3.5],
            },
            ..swe(name, 0.0, DepthFunction::cos_bump(), 0.0, 3.0)
        },
        "swe.test2" => RunConfig {
            t_end: 0.5,
            initial: InitialCondition::SurfaceGaussian {
                amplitude: 0.1,
                rate: 5.0,
            },
            ..swe(name, 0.0, DepthFunction::gaussian(), -5.0, 5.0)
        },
        "swe.test3" => RunConfig {
            t_end: 0.5,
            initial: InitialCondition::SurfaceStep {
                half_width: 1.0,
                jump: 0.1,
            },
            ..swe(name, 0.0, DepthFunction::gaussian(), -5.0, 5.0)
        },
        "swe.test4" => RunConfig {
            n_cells: 100,
            cfl: 10.0,
            t_end: 1.0e4,
            scheme: Scheme::Iwbm1,
            left: BoundarySpec::Dirichlet(vec![(1, 1.0)]),
            right: BoundarySpec::Dirichlet(vec![(0, 2.0)]),
            initial: InitialCondition::Constant(vec![2.0, 0.0]),
            reference: Some(InitialCondition::Stationary {
                start: Side::Right,
                value: vec![2.0, 1.0],
            }),
            ..swe(name, 0.0, DepthFunction::cos_bump(), 0.0, 3.0)
        },
        "swe.test5" | "swe.test6" => {
            let base = RunConfig {
                n_cells: 100,
                left: BoundarySpec::Dirichlet(vec![(0, 0.3), (1, 3.0)]),
                right: BoundarySpec::Transmissive,
                initial: InitialCondition::Stationary {
                    start: Side::Left,
                    value: vec![0.3, 3.0],
                },
                ..swe(name, 0.01, DepthFunction::exp_cos(), 0.0, 1.0)
            };
            if name == "swe.test5" {
                base
            } else {
                RunConfig {
                    t_end: 2.0,
                    initial: InitialCondition::StationaryPlusBoxes {
                        start: Side::Left,
                        value: vec![0.3, 3.0],
                        intervals: vec![(2.0 / 7.0, 3.0 / 7.0), (4.0 / 7.0, 5.0 / 7.0)],
                        increment: vec![0.05, 0.5],
                    },
                    ..base
                }
            }
        }
        _ => return Err(ConfigError::UnknownCase(name.to_string())),
    };
    Ok(cfg)
}
