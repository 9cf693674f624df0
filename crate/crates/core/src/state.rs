use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Conserved state with `N` components: `N = 1` for scalar laws, `N = 2`
/// for shallow water `(h, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State<const N: usize>(pub [f64; N]);

impl<const N: usize> State<N> {
    pub const ZERO: Self = State([0.0; N]);

    pub fn splat(v: f64) -> Self {
        State([v; N])
    }

    pub fn from_fn(f: impl FnMut(usize) -> f64) -> Self {
        State(std::array::from_fn(f))
    }

    pub fn map(self, mut f: impl FnMut(f64) -> f64) -> Self {
        State(self.0.map(&mut f))
    }

    pub fn zip(self, other: Self, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        State::from_fn(|c| f(self.0[c], other.0[c]))
    }

    pub fn abs(self) -> Self {
        self.map(f64::abs)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl<const N: usize> Default for State<N> {
    fn default() -> Self {
        Self::ZERO
    }
}

impl<const N: usize> Index<usize> for State<N> {
    type Output = f64;
    fn index(&self, c: usize) -> &f64 {
        &self.0[c]
    }
}

impl<const N: usize> IndexMut<usize> for State<N> {
    fn index_mut(&mut self, c: usize) -> &mut f64 {
        &mut self.0[c]
    }
}

impl<const N: usize> Add for State<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.zip(o, |a, b| a + b)
    }
}

impl<const N: usize> Sub for State<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.zip(o, |a, b| a - b)
    }
}

impl<const N: usize> AddAssign for State<N> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const N: usize> SubAssign for State<N> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const N: usize> Neg for State<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl<const N: usize> Mul<State<N>> for f64 {
    type Output = State<N>;
    fn mul(self, s: State<N>) -> State<N> {
        s.map(|v| self * v)
    }
}

impl<const N: usize> Mul<f64> for State<N> {
    type Output = State<N>;
    fn mul(self, k: f64) -> State<N> {
        self.map(|v| v * k)
    }
}

/// Componentwise product, used for per-component limiter weights.
pub fn hadamard<const N: usize>(a: State<N>, b: State<N>) -> State<N> {
    a.zip(b, |x, y| x * y)
}
