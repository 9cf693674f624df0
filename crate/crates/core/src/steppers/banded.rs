//! Banded LU factorisation without pivoting.

use crate::error::SolverError;

/// Square matrix with `kl` sub- and `ku` super-diagonals, stored row-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize, kl: usize, ku: usize) -> Self {
        let mut m = Self::zeros(n, kl, ku);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from diagonals: `diagonals[d]` is diagonal `d - kl` (0 = main),
    /// indexed by row.
    pub fn from_diagonals(n: usize, kl: usize, ku: usize, diagonals: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(n, kl, ku);
        for (d, diag) in diagonals.iter().enumerate() {
            let off = d as isize - kl as isize;
            for i in 0..n {
                let j = i as isize + off;
                if j >= 0 && (j as usize) < n {
                    m.set(i, j as usize, diag[i]);
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside the band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// In-place LU factorisation (`L` unit lower, both stored in the band).
    pub fn factor(mut self) -> Result<BandedLu, SolverError> {
        let n = self.n;
        for k in 0..n {
            let p = self.get(k, k);
            if p == 0.0 || !p.is_finite() {
                return Err(SolverError::SingularMatrix { row: k });
            }
            let rmax = (k + self.kl).min(n - 1);
            let cmax = (k + self.ku).min(n - 1);
            for i in k + 1..=rmax {
                let l = self.get(i, k) / p;
                let ik = self.idx(i, k);
                self.data[ik] = l;
                if l != 0.0 {
                    for j in k + 1..=cmax {
                        let v = self.get(k, j);
                        self.add(i, j, -l * v);
                    }
                }
            }
        }
        Ok(BandedLu { lu: self })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    lu: BandedMatrix,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let m = &self.lu;
        let n = m.n;
        for i in 0..n {
            let lo = i.saturating_sub(m.kl);
            let mut s = b[i];
            for (j, bj) in b.iter().enumerate().take(i).skip(lo) {
                s -= m.get(i, j) * bj;
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + m.ku).min(n - 1);
            let mut s = b[i];
            for (j, bj) in b.iter().enumerate().take(hi + 1).skip(i + 1) {
                s -= m.get(i, j) * bj;
            }
            b[i] = s / m.get(i, i);
        }
    }
}

/// Solve `A x = rhs` for a banded `A` by LU without pivoting.
pub fn solve_banded(a: BandedMatrix, rhs: &[f64]) -> Result<Vec<f64>, SolverError> {
    let lu = a.factor()?;
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x);
    Ok(x)
}
