use std::f64::consts::{E, PI};

/// Analytic depth functions `H(x)` with closed-form derivatives. The bottom
/// elevation is `-H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthFunction {
    /// `-a (1 + cos(w (x + s)))` on `[lo, hi]`, zero elsewhere.
    CosBump {
        lo: f64,
        hi: f64,
        amplitude: f64,
        wavenumber: f64,
        shift: f64,
    },
    /// `base - a exp(-x^2)`.
    Gaussian { base: f64, amplitude: f64 },
    /// `1 - (exp(cos(w x)) - 1/e) / (2 (e - 1/e))`.
    ExpCos { wavenumber: f64 },
    Flat(f64),
}

impl DepthFunction {
    /// Bump used by the subcritical stationary and steady-state race cases.
    pub fn cos_bump() -> Self {
        DepthFunction::CosBump {
            lo: 1.3,
            hi: 1.7,
            amplitude: 0.25,
            wavenumber: 5.0 * PI,
            shift: 0.5,
        }
    }

    pub fn gaussian() -> Self {
        DepthFunction::Gaussian {
            base: 1.0,
            amplitude: 0.5,
        }
    }

    pub fn exp_cos() -> Self {
        DepthFunction::ExpCos {
            wavenumber: 4.0 * PI,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            DepthFunction::CosBump {
                lo,
                hi,
                amplitude,
                wavenumber,
                shift,
            } => {
                if (lo..=hi).contains(&x) {
                    -amplitude * (1.0 + (wavenumber * (x + shift)).cos())
                } else {
                    0.0
                }
            }
            DepthFunction::Gaussian { base, amplitude } => base - amplitude * (-x * x).exp(),
            DepthFunction::ExpCos { wavenumber } => {
                1.0 - 0.5 * ((wavenumber * x).cos().exp() - 1.0 / E) / (E - 1.0 / E)
            }
            DepthFunction::Flat(h) => h,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            DepthFunction::CosBump {
                lo,
                hi,
                amplitude,
                wavenumber,
                shift,
            } => {
                if (lo..=hi).contains(&x) {
                    amplitude * wavenumber * (wavenumber * (x + shift)).sin()
                } else {
                    0.0
                }
            }
            DepthFunction::Gaussian { amplitude, .. } => 2.0 * amplitude * x * (-x * x).exp(),
            DepthFunction::ExpCos { wavenumber } => {
                let arg = wavenumber * x;
                0.5 * wavenumber * arg.sin() * arg.cos().exp() / (E - 1.0 / E)
            }
            DepthFunction::Flat(_) => 0.0,
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, DepthFunction::Flat(_))
    }
}
