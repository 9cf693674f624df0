//! Uniform 1D mesh, quadrature, cell fields and ghost-cell policies.

use std::ops::{Deref, DerefMut};

use crate::error::ConfigError;
use crate::state::State;

/// Uniform mesh of `n_cells` cells on `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_left: f64,
    x_right: f64,
    n_cells: usize,
}

impl Grid {
    pub fn new(x_left: f64, x_right: f64, n_cells: usize) -> Result<Self, ConfigError> {
        if !(x_left.is_finite() && x_right.is_finite() && x_right > x_left) {
            return Err(ConfigError::DegenerateInterval { x_left, x_right });
        }
        if n_cells < 3 {
            return Err(ConfigError::TooFewCells(n_cells));
        }
        Ok(Grid {
            x_left,
            x_right,
            n_cells,
        })
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_cells as f64
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Center of cell `i`; also valid for ghost indices outside `0..n`.
    pub fn cell_center(&self, i: isize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    /// Position of interface `i`, i.e. `x_{i-1/2}`; `interface(n)` is `x_right`.
    pub fn interface(&self, i: isize) -> f64 {
        if i == self.n_cells as isize {
            return self.x_right;
        }
        self.x_left + i as f64 * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells as isize).map(|i| self.cell_center(i)).collect()
    }
}

/// Quadrature on the reference cell `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn midpoint() -> Self {
        Quadrature {
            nodes: vec![0.5],
            weights: vec![1.0],
        }
    }

    /// Cell average of `f` over cell `i` of `grid`.
    pub fn cell_average(&self, grid: &Grid, i: usize, f: impl Fn(f64) -> f64) -> f64 {
        let a = grid.interface(i as isize);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| w * f(a + c * grid.dx()))
            .sum()
    }
}

/// Per-cell states of a field over the interior cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField<const N: usize>(pub Vec<State<N>>);

impl<const N: usize> CellField<N> {
    pub fn zeros(n: usize) -> Self {
        CellField(vec![State::ZERO; n])
    }

    /// Midpoint-rule cell averages of a pointwise function.
    pub fn sample(grid: &Grid, f: impl Fn(f64) -> State<N>) -> Self {
        CellField(grid.centers().into_iter().map(f).collect())
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.0.iter().map(|s| s[c]).collect()
    }

    pub fn from_components(components: &[Vec<f64>]) -> Self {
        assert_eq!(components.len(), N);
        let n = components[0].len();
        CellField((0..n).map(|i| State::from_fn(|c| components[c][i])).collect())
    }

    /// `dx * sum_i u_i` per component.
    pub fn integral(&self, grid: &Grid) -> State<N> {
        let mut s = State::ZERO;
        for u in &self.0 {
            s += *u;
        }
        grid.dx() * s
    }
}

impl<const N: usize> Deref for CellField<N> {
    type Target = Vec<State<N>>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl<const N: usize> DerefMut for CellField<N> {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Treatment of one end of the domain.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryKind {
    Periodic,
    Transmissive,
    /// Prescribed values for a subset of components, imposed at the boundary
    /// interface; unlisted components follow the interior.
    Dirichlet(Vec<(usize, f64)>),
    /// Continue the boundary cell's local stationary profile.
    StationaryExtension,
}

impl BoundaryKind {
    /// Overwrite the masked components of `interior`.
    pub fn impose<const N: usize>(&self, interior: State<N>) -> State<N> {
        match self {
            BoundaryKind::Dirichlet(values) => {
                let mut s = interior;
                for &(c, v) in values {
                    s[c] = v;
                }
                s
            }
            _ => interior,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPolicy {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

impl BoundaryPolicy {
    pub fn periodic() -> Self {
        BoundaryPolicy {
            left: BoundaryKind::Periodic,
            right: BoundaryKind::Periodic,
        }
    }

    pub fn transmissive() -> Self {
        BoundaryPolicy {
            left: BoundaryKind::Transmissive,
            right: BoundaryKind::Transmissive,
        }
    }

    pub fn side(&self, side: Side) -> &BoundaryKind {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn validate<const N: usize>(&self) -> Result<(), ConfigError> {
        let lp = self.left == BoundaryKind::Periodic;
        let rp = self.right == BoundaryKind::Periodic;
        if lp != rp {
            return Err(ConfigError::invalid(
                "boundary",
                "periodic must be set on both sides",
            ));
        }
        for kind in [&self.left, &self.right] {
            if let BoundaryKind::Dirichlet(values) = kind {
                if values.is_empty() {
                    return Err(ConfigError::invalid("boundary", "empty dirichlet mask"));
                }
                if let Some((c, _)) = values.iter().find(|(c, _)| *c >= N) {
                    return Err(ConfigError::invalid(
                        "boundary",
                        format!("component {c} out of range"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_periodic(&self) -> bool {
        self.left == BoundaryKind::Periodic
    }
}

/// A cell field padded with `width` ghost cells on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct HaloField<const N: usize> {
    width: usize,
    values: Vec<State<N>>,
}

impl<const N: usize> HaloField<N> {
    pub fn width(&self) -> usize {
        self.width
    }

    /// Value at cell `i`, where `-width <= i < n + width`.
    #[inline]
    pub fn get(&self, i: isize) -> State<N> {
        self.values[(i + self.width as isize) as usize]
    }

    pub fn as_slice(&self) -> &[State<N>] {
        &self.values
    }

    pub fn interior(&self) -> &[State<N>] {
        &self.values[self.width..self.values.len() - self.width]
    }
}

/// What fills ghost cells under a given boundary kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhostMode {
    /// Cell averages: Dirichlet imposes its values.
    Values,
    /// Time fluctuations: Dirichlet and stationary ghosts carry zero.
    Fluctuations,
}

/// Pad `field` with `width` ghost cells per side.
///
/// `extension` supplies the stationary continuation for
/// [`BoundaryKind::StationaryExtension`]: `extension(side, k)` is the
/// boundary cell profile evaluated at the `k`-th ghost center
/// (`k = 1` adjacent to the boundary).
pub fn extend_with_ghosts<const N: usize>(
    field: &[State<N>],
    policy: &BoundaryPolicy,
    width: usize,
    mode: GhostMode,
    extension: Option<&dyn Fn(Side, usize) -> State<N>>,
) -> Result<HaloField<N>, ConfigError> {
    if !(1..=2).contains(&width) {
        return Err(ConfigError::invalid("halo width", "must be 1 or 2"));
    }
    let n = field.len();
    if n < width {
        return Err(ConfigError::TooFewCells(n));
    }
    let mut values = Vec::with_capacity(n + 2 * width);
    let ghost = |side: Side, k: usize| -> Result<State<N>, ConfigError> {
        let (nearest, wrapped) = match side {
            Side::Left => (field[0], field[n - k]),
            Side::Right => (field[n - 1], field[k - 1]),
        };
        Ok(match (policy.side(side), mode) {
            (BoundaryKind::Periodic, _) => wrapped,
            (BoundaryKind::Transmissive, _) => nearest,
            (kind @ BoundaryKind::Dirichlet(_), GhostMode::Values) => kind.impose(nearest),
            (BoundaryKind::Dirichlet(_), GhostMode::Fluctuations) => State::ZERO,
            (BoundaryKind::StationaryExtension, GhostMode::Fluctuations) => State::ZERO,
            (BoundaryKind::StationaryExtension, GhostMode::Values) => match extension {
                Some(ext) => ext(side, k),
                None => {
                    return Err(ConfigError::Unsupported(
                        "stationary extension requested without a stationary profile".into(),
                    ))
                }
            },
        })
    };
    for k in (1..=width).rev() {
        values.push(ghost(Side::Left, k)?);
    }
    values.extend_from_slice(field);
    for k in 1..=width {
        values.push(ghost(Side::Right, k)?);
    }
    Ok(HaloField { width, values })
}
