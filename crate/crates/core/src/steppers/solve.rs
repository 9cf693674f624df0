//! Algebraic solvers for the implicit stages `x = rhs + c L(x)`.
//!
//! The default iteration is a chord method: `x <- x - M^{-1} R(x)` with
//! `R(x) = x - rhs - c L(x)` and `M = I - c dL/dx` probed by finite
//! differences once and reused. Plain Picard iteration `x <- rhs + c L(x)` is
//! available but only contracts for small time steps.

use nalgebra::{DMatrix, DVector};

use crate::error::SolverError;
use crate::models::BalanceLaw;
use crate::state::State;

use super::banded::{BandedLu, BandedMatrix};
use super::spatial::SpatialOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPoint {
    Picard,
    Chord,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub stage_tol: f64,
    pub stage_maxiter: usize,
    /// When positive, perform exactly this many Newton corrections per stage.
    pub newton_iters: usize,
    /// Single direct solve for linear models.
    pub linear_fast_path: bool,
    pub fixed_point: FixedPoint,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            stage_tol: 1e-12,
            stage_maxiter: 1000,
            newton_iters: 0,
            linear_fast_path: true,
            fixed_point: FixedPoint::Chord,
        }
    }
}

/// Jacobian refreshes allowed per stage when the chord iteration stalls.
const MAX_REFRESH: usize = 20;

#[derive(Debug, Clone)]
pub struct StageSolution<const N: usize> {
    pub uf: Vec<State<N>>,
    pub iterations: usize,
    pub residual: f64,
}

/// Plain fixed-point iteration `x <- g(x)` until `|x_{m+1} - x_m|_inf <= tol`.
pub fn picard<const N: usize, G>(
    g: G,
    guess: Vec<State<N>>,
    tol: f64,
    maxiter: usize,
) -> Result<StageSolution<N>, SolverError>
where
    G: Fn(&[State<N>]) -> Result<Vec<State<N>>, SolverError>,
{
    let mut x = guess;
    let mut res = f64::INFINITY;
    for it in 1..=maxiter {
        let next = g(&x)?;
        res = max_diff(&next, &x);
        x = next;
        if res <= tol {
            return Ok(StageSolution {
                uf: x,
                iterations: it,
                residual: res,
            });
        }
        if !res.is_finite() {
            break;
        }
    }
    Err(SolverError::StageNoConvergence {
        iterations: maxiter,
        residual: res,
    })
}

fn max_diff<const N: usize>(a: &[State<N>], b: &[State<N>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).max_abs())
        .fold(0.0, f64::max)
}

fn flatten<const N: usize>(x: &[State<N>]) -> Vec<f64> {
    x.iter().flat_map(|s| s.0).collect()
}

/// `dL/du^f` in the interleaved ordering `(cell, component)`.
#[derive(Debug, Clone)]
pub enum Jacobian {
    Banded(BandedMatrix),
    Dense(DMatrix<f64>),
}

impl Jacobian {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        match self {
            Jacobian::Banded(b) => b.get(r, c),
            Jacobian::Dense(d) => d[(r, c)],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Jacobian::Banded(b) => b.n(),
            Jacobian::Dense(d) => d.nrows(),
        }
    }

    /// Factorise `I - coeff J`.
    pub fn factor_shifted(&self, coeff: f64) -> Result<Factor, SolverError> {
        match self {
            Jacobian::Banded(j) => {
                let n = j.n();
                let (kl, ku) = j.bandwidths();
                let mut m = BandedMatrix::zeros(n, kl, ku);
                for r in 0..n {
                    let lo = r.saturating_sub(kl);
                    let hi = (r + ku).min(n - 1);
                    for c in lo..=hi {
                        let id = if r == c { 1.0 } else { 0.0 };
                        m.set(r, c, id - coeff * j.get(r, c));
                    }
                }
                Ok(Factor::Banded(m.factor()?))
            }
            Jacobian::Dense(j) => {
                let n = j.nrows();
                let m = DMatrix::identity(n, n) - coeff * j;
                let lu = m.lu();
                if !lu.is_invertible() {
                    return Err(SolverError::SingularMatrix { row: 0 });
                }
                Ok(Factor::Dense(lu))
            }
        }
    }
}

pub enum Factor {
    Banded(BandedLu),
    Dense(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Factor {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        match self {
            Factor::Banded(lu) => lu.solve_in_place(b),
            Factor::Dense(lu) => {
                let x = lu
                    .solve(&DVector::from_column_slice(b))
                    .expect("factor checked invertible");
                b.copy_from_slice(x.as_slice());
            }
        }
    }
}

/// Finite-difference Jacobian of `op` at `x`, probing with colour groups of
/// cells that do not share a row. Linear operators are probed with unit
/// steps, which is exact.
pub fn probe_jacobian<const N: usize, M: BalanceLaw<N> + ?Sized>(
    op: &SpatialOperator<'_, N, M>,
    x: &[State<N>],
    scale: State<N>,
) -> Result<Jacobian, SolverError> {
    let n = x.len();
    let b = op.bandwidth();
    let base = op.apply(x)?;
    let eps = State::<N>::from_fn(|m| {
        if op.is_linear() {
            1.0
        } else {
            1e-7 * scale[m].abs().max(1.0)
        }
    });
    let colors = 2 * b + 1;
    if op.is_periodic() && b > 0 || n < colors {
        let dim = n * N;
        let mut jac = DMatrix::zeros(dim, dim);
        let mut xp = x.to_vec();
        for j in 0..n {
            for m in 0..N {
                xp[j][m] += eps[m];
                let l = op.apply(&xp)?;
                xp[j][m] = x[j][m];
                for i in 0..n {
                    for r in 0..N {
                        jac[(i * N + r, j * N + m)] = (l[i][r] - base[i][r]) / eps[m];
                    }
                }
            }
        }
        return Ok(Jacobian::Dense(jac));
    }
    let w = (b + 1) * N - 1;
    let mut jac = BandedMatrix::zeros(n * N, w, w);
    let mut xp = x.to_vec();
    for color in 0..colors {
        for m in 0..N {
            for j in (color..n).step_by(colors) {
                xp[j][m] += eps[m];
            }
            let l = op.apply(&xp)?;
            for j in (color..n).step_by(colors) {
                xp[j][m] = x[j][m];
                let lo = j.saturating_sub(b);
                let hi = (j + b).min(n - 1);
                for i in lo..=hi {
                    for r in 0..N {
                        jac.set(i * N + r, j * N + m, (l[i][r] - base[i][r]) / eps[m]);
                    }
                }
            }
        }
    }
    Ok(Jacobian::Banded(jac))
}

/// Per-step cache of the probed Jacobian and the factorised stage matrix.
#[derive(Default)]
pub struct JacobianCache {
    jac: Option<Jacobian>,
    factor: Option<(f64, Factor)>,
    pub probes: usize,
}

impl JacobianCache {
    pub fn jacobian(&self) -> Option<&Jacobian> {
        self.jac.as_ref()
    }

    fn refresh<const N: usize, M: BalanceLaw<N> + ?Sized>(
        &mut self,
        op: &SpatialOperator<'_, N, M>,
        x: &[State<N>],
        scale: State<N>,
        coeff: f64,
    ) -> Result<(), SolverError> {
        let jac = probe_jacobian(op, x, scale)?;
        self.probes += 1;
        self.factor = Some((coeff, jac.factor_shifted(coeff)?));
        self.jac = Some(jac);
        Ok(())
    }

    fn ensure<const N: usize, M: BalanceLaw<N> + ?Sized>(
        &mut self,
        op: &SpatialOperator<'_, N, M>,
        x: &[State<N>],
        scale: State<N>,
        coeff: f64,
    ) -> Result<&Factor, SolverError> {
        match (&self.jac, &self.factor) {
            (Some(_), Some((c, _))) if *c == coeff => {}
            (Some(j), _) => {
                let f = j.factor_shifted(coeff)?;
                self.factor = Some((coeff, f));
            }
            (None, _) => self.refresh(op, x, scale, coeff)?,
        }
        Ok(&self.factor.as_ref().expect("factor set above").1)
    }
}

fn residual<const N: usize, M: BalanceLaw<N> + ?Sized>(
    op: &SpatialOperator<'_, N, M>,
    x: &[State<N>],
    rhs: &[State<N>],
    coeff: f64,
) -> Result<Vec<f64>, SolverError> {
    let l = op.apply(x)?;
    Ok(x.iter()
        .zip(rhs)
        .zip(&l)
        .flat_map(|((x, r), l)| (*x - *r - coeff * *l).0)
        .collect())
}

fn correct<const N: usize>(x: &mut [State<N>], delta: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, s) in x.iter_mut().enumerate() {
        for m in 0..N {
            let d = delta[i * N + m];
            s[m] -= d;
            worst = worst.max(d.abs());
        }
    }
    worst
}

/// Solve `x = rhs + coeff L(x)` starting from `guess`.
pub fn solve_stage<const N: usize, M: BalanceLaw<N> + ?Sized>(
    op: &SpatialOperator<'_, N, M>,
    rhs: &[State<N>],
    coeff: f64,
    guess: Vec<State<N>>,
    scale: State<N>,
    cfg: &SolverConfig,
    cache: &mut JacobianCache,
) -> Result<StageSolution<N>, SolverError> {
    if op.is_empty() || coeff == 0.0 {
        return Ok(StageSolution {
            uf: rhs.to_vec(),
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut x = guess;
    if cfg.newton_iters > 0 {
        let mut res = 0.0;
        for _ in 0..cfg.newton_iters {
            cache.refresh(op, &x, scale, coeff)?;
            let mut r = residual(op, &x, rhs, coeff)?;
            cache.factor.as_ref().expect("refreshed").1.solve_in_place(&mut r);
            res = correct(&mut x, &r);
        }
        return Ok(StageSolution {
            uf: x,
            iterations: cfg.newton_iters,
            residual: res,
        });
    }
    if op.is_linear() && cfg.linear_fast_path {
        let f = cache.ensure(op, &x, scale, coeff)?;
        let mut r = residual(op, &x, rhs, coeff)?;
        f.solve_in_place(&mut r);
        let res = correct(&mut x, &r);
        return Ok(StageSolution {
            uf: x,
            iterations: 1,
            residual: res,
        });
    }
    match cfg.fixed_point {
        FixedPoint::Picard => picard(
            |x: &[State<N>]| {
                let l = op.apply(x)?;
                Ok(rhs.iter().zip(&l).map(|(r, l)| *r + coeff * *l).collect())
            },
            x,
            cfg.stage_tol,
            cfg.stage_maxiter,
        ),
        FixedPoint::Chord => {
            let mut prev = f64::INFINITY;
            let mut refreshes = 0;
            let mut res = f64::INFINITY;
            for it in 1..=cfg.stage_maxiter {
                let mut r = residual(op, &x, rhs, coeff)?;
                cache.ensure(op, &x, scale, coeff)?.solve_in_place(&mut r);
                let trial: Vec<State<N>> = {
                    let mut t = x.clone();
                    res = correct(&mut t, &r);
                    t
                };
                if !res.is_finite() {
                    break;
                }
                x = trial;
                if res <= cfg.stage_tol {
                    return Ok(StageSolution {
                        uf: x,
                        iterations: it,
                        residual: res,
                    });
                }
                if res > 0.5 * prev && refreshes < MAX_REFRESH && !op.is_linear() {
                    cache.refresh(op, &x, scale, coeff)?;
                    refreshes += 1;
                }
                prev = res;
            }
            Err(SolverError::StageNoConvergence {
                iterations: cfg.stage_maxiter,
                residual: res,
            })
        }
    }
}

/// Dense copy of `I - coeff J` for inspection.
pub fn stage_matrix(jac: &Jacobian, coeff: f64) -> DMatrix<f64> {
    let n = jac.dim();
    DMatrix::from_fn(n, n, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        id - coeff * jac.get(r, c)
    })
}

/// Flattened copy of a state vector, interleaved by cell.
pub fn flat<const N: usize>(x: &[State<N>]) -> Vec<f64> {
    flatten(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picard_finds_affine_fixed_point() {
        // x = 0.5 x + b  =>  x = 2 b
        let b = vec![State([1.0]), State([-3.0]), State([0.25])];
        let g = |x: &[State<1>]| -> Result<Vec<State<1>>, SolverError> {
            Ok(x.iter().zip(&b).map(|(x, b)| 0.5 * *x + *b).collect())
        };
        let s = picard(g, vec![State::ZERO; 3], 1e-13, 200).unwrap();
        for (x, b) in s.uf.iter().zip(&b) {
            assert!((x[0] - 2.0 * b[0]).abs() < 1e-12);
        }
        let zero = |x: &[State<1>]| -> Result<Vec<State<1>>, SolverError> { Ok(x.to_vec()) };
        let s = picard(zero, vec![State::ZERO; 3], 1e-13, 200).unwrap();
        assert_eq!(s.iterations, 1);
    }

    #[test]
    fn picard_reports_divergence() {
        let g = |x: &[State<1>]| -> Result<Vec<State<1>>, SolverError> {
            Ok(x.iter().map(|x| 2.0 * *x + State([1.0])).collect())
        };
        assert!(matches!(
            picard(g, vec![State::ZERO; 2], 1e-12, 50),
            Err(SolverError::StageNoConvergence { .. })
        ));
    }
}
