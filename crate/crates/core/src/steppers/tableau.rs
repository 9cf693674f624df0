//! Runge-Kutta tableaux for the fluctuation system.

/// Implicit (diagonally implicit, lower triangular) tableau paired with a
/// strictly lower triangular explicit tableau on the same stage count.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherPair {
    pub name: &'static str,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub a_ex: Vec<Vec<f64>>,
    pub b_ex: Vec<f64>,
}

pub fn sdirk2_gamma() -> f64 {
    1.0 - 1.0 / 2f64.sqrt()
}

impl ButcherPair {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Last row of the implicit matrix equals its weights.
    pub fn is_stiffly_accurate(&self) -> bool {
        self.a.last().map(|r| r == &self.b).unwrap_or(false)
    }

    pub fn has_explicit_weights(&self) -> bool {
        self.b_ex.iter().any(|&w| w != 0.0)
    }

    pub fn c(&self) -> Vec<f64> {
        self.a.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn c_ex(&self) -> Vec<f64> {
        self.a_ex.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn backward_euler() -> Self {
        ButcherPair {
            name: "backward-euler",
            a: vec![vec![1.0]],
            b: vec![1.0],
            a_ex: vec![vec![0.0]],
            b_ex: vec![0.0],
        }
    }

    pub fn sdirk2() -> Self {
        let g = sdirk2_gamma();
        ButcherPair {
            name: "sdirk2",
            a: vec![vec![g, 0.0], vec![1.0 - g, g]],
            b: vec![1.0 - g, g],
            a_ex: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            b_ex: vec![0.0, 0.0],
        }
    }

    /// Second-order IMEX pair sharing the implicit part of [`Self::sdirk2`].
    pub fn imex2() -> Self {
        // (2 - sqrt 2)/2, the diagonal of sdirk2
        let g = sdirk2_gamma();
        ButcherPair {
            name: "imex2",
            a: vec![vec![g, 0.0], vec![1.0 - g, g]],
            b: vec![1.0 - g, g],
            a_ex: vec![vec![0.0, 0.0], vec![1.0 / (2.0 * g), 0.0]],
            b_ex: vec![1.0 - g, g],
        }
    }

    /// Forward Euler on the explicit part, backward Euler on the implicit.
    pub fn imex1() -> Self {
        ButcherPair {
            name: "imex1",
            a: vec![vec![0.0, 0.0], vec![0.0, 1.0]],
            b: vec![0.0, 1.0],
            a_ex: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            b_ex: vec![1.0, 0.0],
        }
    }

    pub fn forward_euler() -> Self {
        ButcherPair {
            name: "forward-euler",
            a: vec![vec![0.0]],
            b: vec![0.0],
            a_ex: vec![vec![0.0]],
            b_ex: vec![1.0],
        }
    }

    /// Heun's method (SSP-RK2).
    pub fn heun() -> Self {
        ButcherPair {
            name: "heun",
            a: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            b: vec![0.0, 0.0],
            a_ex: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            b_ex: vec![0.5, 0.5],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients() {
        let s = ButcherPair::sdirk2();
        assert!(s.is_stiffly_accurate());
        assert!((s.a[0][0] - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-16);
        let m = ButcherPair::imex2();
        assert_eq!(m.a, s.a);
        assert!((m.a_ex[1][0] - 1.0 / (2.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((m.a[0][0] - (2.0 - 2f64.sqrt()) / 2.0).abs() < 1e-15);
        for p in [
            ButcherPair::backward_euler(),
            ButcherPair::sdirk2(),
            ButcherPair::imex1(),
            ButcherPair::imex2(),
        ] {
            assert!(p.is_stiffly_accurate(), "{}", p.name);
            let bs: f64 = p.b.iter().sum();
            assert!((bs - 1.0).abs() < 1e-15);
        }
        for p in [ButcherPair::imex1(), ButcherPair::imex2(), ButcherPair::heun()] {
            let bs: f64 = p.b_ex.iter().sum();
            assert!((bs - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn second_order_conditions() {
        for p in [ButcherPair::sdirk2(), ButcherPair::imex2()] {
            let c = p.c();
            let bc: f64 = p.b.iter().zip(&c).map(|(b, c)| b * c).sum();
            assert!((bc - 0.5).abs() < 1e-15);
        }
        for p in [ButcherPair::imex2(), ButcherPair::heun()] {
            let c = p.c_ex();
            let bc: f64 = p.b_ex.iter().zip(&c).map(|(b, c)| b * c).sum();
            assert!((bc - 0.5).abs() < 1e-15);
        }
        // coupling conditions of the pair
        let p = ButcherPair::imex2();
        let (c, ce) = (p.c(), p.c_ex());
        let x: f64 = p.b_ex.iter().zip(&c).map(|(b, c)| b * c).sum();
        let y: f64 = p.b.iter().zip(&ce).map(|(b, c)| b * c).sum();
        assert!((x - 0.5).abs() < 1e-15 && (y - 0.5).abs() < 1e-15);
    }
}
