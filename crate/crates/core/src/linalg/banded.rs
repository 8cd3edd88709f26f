//! Banded Cholesky and banded LU with partial pivoting.

use super::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// Lower-triangular factor with bandwidth `m`, `A = L L*`.
#[derive(Debug, Clone)]
pub struct LowerBand<T> {
    n: usize,
    m: usize,
    data: Vec<T>,
}

impl<T: Scalar> LowerBand<T> {
    /// Cholesky factorization of a Hermitian positive definite band matrix.
    /// `entry(i, j)` is queried for `i - m <= j <= i` only.
    pub fn cholesky(n: usize, m: usize, entry: impl Fn(usize, usize) -> T) -> Result<Self> {
        let w = m + 1;
        let mut data = vec![T::zero(); n * w];
        for i in 0..n {
            let j0 = i.saturating_sub(m);
            for j in j0..=i {
                let mut s = entry(i, j);
                let k0 = j0.max(j.saturating_sub(m));
                for k in k0..j {
                    s -= data[i * w + (k + m - i)] * data[j * w + (k + m - j)].conj();
                }
                if i == j {
                    let d = s.re();
                    if !(d > 0.0) || !d.is_finite() {
                        return Err(Error::NotPositiveDefinite {
                            op: "cholesky",
                            index: i,
                            pivot: d,
                        });
                    }
                    data[i * w + m] = T::from_real(d.sqrt());
                } else {
                    let ljj = data[j * w + m].re();
                    data[i * w + (j + m - i)] = s.scale(1.0 / ljj);
                }
            }
        }
        Ok(Self { n, m, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.m
    }

    /// `L[i][j]`, zero outside the band.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if j > i || i - j > self.m {
            T::zero()
        } else {
            self.data[i * (self.m + 1) + (j + self.m - i)]
        }
    }

    /// Column `j` of `L^{-*}`: the solution of `L* z = e_j`, nonzero only in
    /// rows `0..=j`.
    pub fn inverse_adjoint_column(&self, j: usize) -> Vec<T> {
        let mut z = vec![T::zero(); j + 1];
        for i in (0..=j).rev() {
            let mut s = if i == j { T::one() } else { T::zero() };
            let k_end = (i + self.m).min(j);
            for k in i + 1..=k_end {
                s -= self.get(k, i).conj() * z[k];
            }
            z[i] = s.scale(1.0 / self.get(i, i).re());
        }
        z
    }

    /// Solve `L L* x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(self.m)..i {
                s -= self.get(i, k) * y[k];
            }
            y[i] = s.scale(1.0 / self.get(i, i).re());
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + self.m + 1).min(n) {
                s -= self.get(k, i).conj() * y[k];
            }
            y[i] = s.scale(1.0 / self.get(i, i).re());
        }
        y
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// Banded LU factorization with partial pivoting (row interchanges).
#[derive(Debug, Clone)]
pub struct BandLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    /// Factor a matrix with lower bandwidth `kl` and upper bandwidth `ku`.
    /// `entry(i, j)` is queried for `i - kl <= j <= i + ku` only.
    pub fn factor(
        n: usize,
        kl: usize,
        ku: usize,
        entry: impl Fn(usize, usize) -> T,
    ) -> Result<Self> {
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            data: vec![T::zero(); n * width],
            piv: vec![0; n],
        };
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                *lu.at(i, j) = entry(i, j);
            }
        }
        let reach = kl + ku;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.get(k, k).abs();
            for i in k + 1..=last {
                let v = lu.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Singular {
                    op: "band_lu",
                    index: k,
                });
            }
            lu.piv[k] = p;
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a = lu.get(k, j);
                    let b = lu.get(p, j);
                    *lu.at(k, j) = b;
                    *lu.at(p, j) = a;
                }
            }
            let pivot = lu.get(k, k);
            for i in k + 1..=last {
                let l = lu.get(i, k) / pivot;
                *lu.at(i, k) = l;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..=jmax {
                    let u = lu.get(k, j);
                    *lu.at(i, j) -= l * u;
                }
            }
        }
        Ok(lu)
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> T {
        self.data[self.offset(i, j)]
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut T {
        let o = self.offset(i, j);
        &mut self.data[o]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk == T::zero() {
                continue;
            }
            for i in k + 1..(k + self.kl + 1).min(n) {
                b[i] -= self.get(i, k) * bk;
            }
        }
        let reach = self.kl + self.ku;
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..(i + reach + 1).min(n) {
                s -= self.get(i, j) * b[j];
            }
            b[i] = s / self.get(i, i);
        }
    }

    /// Column `j` of the inverse.
    pub fn inverse_column(&self, j: usize) -> Vec<T> {
        let mut b = vec![T::zero(); self.n];
        b[j] = T::one();
        self.solve_in_place(&mut b);
        b
    }
}
