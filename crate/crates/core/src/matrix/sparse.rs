//! Compressed sparse rows over the upper triangle with mirrored access.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Scalar};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Hermitian matrix stored as CSR over the upper triangle (`j >= i`).
///
/// Imaginary parts are kept only when some entry is complex. Diagonal
/// entries are real by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
    bandwidth_hint: Option<usize>,
}

/// Full (both triangles) real CSR view used by matrix products.
#[derive(Debug, Clone)]
pub struct FullCsr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl FullCsr {
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            *yi = c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum();
        }
    }
}

impl SparseHermitian {
    /// Build from `(i, j, value)` triplets in either triangle.
    ///
    /// An entry given in both triangles must be consistent
    /// (`a_ji = conj(a_ij)`); exact zeros are dropped.
    pub fn from_triplets(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        let mut scale = 0.0f64;
        let mut raw = Vec::new();
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::invalid(
                    "from_triplets",
                    format!("entry ({i}, {j}) out of range for n = {n}"),
                ));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::invalid(
                    "from_triplets",
                    format!("non-finite entry at ({i}, {j})"),
                ));
            }
            scale = scale.max(v.norm());
            raw.push((i, j, v));
        }
        let tol = 1e-14 * scale.max(1.0);
        for (i, j, v) in raw {
            let (key, val) = if i <= j { ((i, j), v) } else { ((j, i), v.conj()) };
            if i == j && v.im.abs() > tol {
                return Err(Error::invalid(
                    "from_triplets",
                    format!("diagonal entry ({i}, {i}) has imaginary part {}", v.im),
                ));
            }
            let val = if i == j { Complex64::new(val.re, 0.0) } else { val };
            if let Some(prev) = map.insert(key, val) {
                if (prev - val).norm() > 1e-12 * scale.max(1.0) {
                    return Err(Error::invalid(
                        "from_triplets",
                        format!("inconsistent entries for ({}, {})", key.0, key.1),
                    ));
                }
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(map.len());
        let mut re = Vec::with_capacity(map.len());
        let mut im = Vec::with_capacity(map.len());
        for (&(i, j), v) in &map {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            re.push(v.re);
            im.push(v.im);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let complex = im.iter().any(|&x| x != 0.0);
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            re,
            im: complex.then_some(im),
            bandwidth_hint: None,
        })
    }

    /// Build from real triplets.
    pub fn from_real_triplets(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        Self::from_triplets(
            n,
            entries
                .into_iter()
                .map(|(i, j, v)| (i, j, Complex64::new(v, 0.0))),
        )
    }

    /// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Result<Self> {
        let n = diag.len();
        if off.len() + 1 != n.max(1) {
            return Err(Error::DimensionMismatch {
                op: "tridiagonal",
                expected: n.saturating_sub(1),
                got: off.len(),
            });
        }
        let entries = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, d))
            .chain(off.iter().enumerate().map(|(i, &e)| (i, i + 1, e)));
        Ok(Self::from_real_triplets(n, entries)?.with_bandwidth_hint(1))
    }

    /// Upper triangle of a dense Hermitian matrix, dropping entries with
    /// magnitude `<= drop_tol`.
    pub fn from_dense<T: Scalar>(a: &DenseMatrix<T>, drop_tol: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                op: "from_dense",
                expected: a.rows(),
                got: a.cols(),
            });
        }
        let n = a.rows();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = a[(i, j)];
                if v.abs() > drop_tol || (i == j && v.abs() > 0.0) {
                    let z = v.to_complex();
                    let z = if i == j { Complex64::new(z.re, 0.0) } else { z };
                    entries.push((i, j, z));
                }
            }
        }
        Self::from_triplets(n, entries)
    }

    pub fn with_bandwidth_hint(mut self, m: usize) -> Self {
        self.bandwidth_hint = Some(m);
        self
    }

    pub fn bandwidth_hint(&self) -> Option<usize> {
        self.bandwidth_hint
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries (upper triangle including diagonal).
    pub fn nnz_stored(&self) -> usize {
        self.col_idx.len()
    }

    /// Nonzeros of the full matrix.
    pub fn nnz(&self) -> usize {
        let diag = (0..self.n)
            .filter(|&i| self.row_cols(i).first() == Some(&i))
            .count();
        2 * self.nnz_stored() - diag
    }

    pub fn is_real(&self) -> bool {
        self.im.is_none()
    }

    /// Actual bandwidth `max |i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.iter_upper().map(|(i, j, _)| j - i).max().unwrap_or(0)
    }

    #[inline]
    fn row_cols(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    #[inline]
    fn value_at(&self, k: usize) -> Complex64 {
        Complex64::new(self.re[k], self.im.as_ref().map_or(0.0, |im| im[k]))
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (r, c, conj) = if i <= j { (i, j, false) } else { (j, i, true) };
        let base = self.row_ptr[r];
        match self.row_cols(r).binary_search(&c) {
            Ok(k) => {
                let v = self.value_at(base + k);
                if conj {
                    v.conj()
                } else {
                    v
                }
            }
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Real part of entry `(i, j)`.
    pub fn get_re(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).re
    }

    /// Iterate stored entries `(i, j, a_ij)` with `j >= i`.
    pub fn iter_upper(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.value_at(k)))
        })
    }

    /// Neighbours `j != i` of each row in the full pattern.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, j, _) in self.iter_upper() {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn max_abs(&self) -> f64 {
        self.iter_upper().fold(0.0, |m, (_, _, v)| m.max(v.norm()))
    }

    /// Keep the stored entries for which `keep(i, j)` holds.
    pub fn filter(&self, keep: impl Fn(usize, usize, Complex64) -> bool) -> Self {
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut col_idx = Vec::new();
        let mut re = Vec::new();
        let mut im = Vec::new();
        for (i, j, v) in self.iter_upper() {
            if keep(i, j, v) {
                row_ptr[i + 1] += 1;
                col_idx.push(j);
                re.push(v.re);
                im.push(v.im);
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n: self.n,
            row_ptr,
            col_idx,
            re,
            im: self.im.as_ref().map(|_| im),
            bandwidth_hint: self.bandwidth_hint,
        }
    }

    /// `scale * A + shift * I`.
    pub fn scale_shift(&self, scale: f64, shift: f64) -> Self {
        let mut entries: Vec<(usize, usize, Complex64)> =
            self.iter_upper().map(|(i, j, v)| (i, j, v * scale)).collect();
        let mut has_diag = vec![false; self.n];
        for e in &mut entries {
            if e.0 == e.1 {
                e.2 += shift;
                has_diag[e.0] = true;
            }
        }
        for (i, &h) in has_diag.iter().enumerate() {
            if !h && shift != 0.0 {
                entries.push((i, i, Complex64::new(shift, 0.0)));
            }
        }
        let mut out = Self::from_triplets(self.n, entries).expect("valid by construction");
        out.bandwidth_hint = self.bandwidth_hint;
        out
    }

    /// Dense real copy; fails for complex matrices.
    pub fn to_dense_real(&self) -> Result<DenseMatrix<f64>> {
        if !self.is_real() {
            return Err(Error::invalid("to_dense_real", "matrix has complex entries"));
        }
        let mut a = DenseMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.iter_upper() {
            a[(i, j)] = v.re;
            a[(j, i)] = v.re;
        }
        Ok(a)
    }

    pub fn to_dense_complex(&self) -> DenseMatrix<Complex64> {
        let mut a = DenseMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.iter_upper() {
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
        a
    }

    /// Real symmetric `2n x 2n` embedding (see [`crate::linalg::realify`]).
    pub fn realify(&self) -> Self {
        let mut entries = Vec::with_capacity(4 * self.nnz_stored());
        for (i, j, v) in self.iter_upper() {
            let (a, b) = (v.re, v.im);
            entries.push((2 * i, 2 * j, a));
            entries.push((2 * i + 1, 2 * j + 1, a));
            entries.push((2 * i + 1, 2 * j, b));
            if i != j {
                entries.push((2 * i, 2 * j + 1, -b));
            }
        }
        let out = Self::from_real_triplets(2 * self.n, entries).expect("valid by construction");
        match self.bandwidth_hint {
            Some(m) => out.with_bandwidth_hint(2 * m + 1),
            None => out,
        }
    }

    /// Real symmetric form: the matrix itself when real, its embedding
    /// otherwise.
    pub fn real_form(&self) -> std::borrow::Cow<'_, Self> {
        if self.is_real() {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.realify())
        }
    }

    /// Full CSR of the real part (both triangles).
    pub fn to_full_csr(&self) -> FullCsr {
        let adj_len: Vec<usize> = {
            let mut c = vec![0usize; self.n];
            for (i, j, _) in self.iter_upper() {
                c[i] += 1;
                if i != j {
                    c[j] += 1;
                }
            }
            c
        };
        let mut row_ptr = vec![0usize; self.n + 1];
        for i in 0..self.n {
            row_ptr[i + 1] = row_ptr[i] + adj_len[i];
        }
        let mut fill = row_ptr.clone();
        let mut col_idx = vec![0usize; row_ptr[self.n]];
        let mut values = vec![0.0; row_ptr[self.n]];
        for (i, j, v) in self.iter_upper() {
            col_idx[fill[i]] = j;
            values[fill[i]] = v.re;
            fill[i] += 1;
            if i != j {
                col_idx[fill[j]] = i;
                values[fill[j]] = v.re;
                fill[j] += 1;
            }
        }
        for i in 0..self.n {
            let r = row_ptr[i]..row_ptr[i + 1];
            let mut pairs: Vec<(usize, f64)> = col_idx[r.clone()]
                .iter()
                .copied()
                .zip(values[r.clone()].iter().copied())
                .collect();
            pairs.sort_unstable_by_key(|p| p.0);
            for (k, (c, v)) in r.zip(pairs) {
                col_idx[k] = c;
                values[k] = v;
            }
        }
        FullCsr {
            n: self.n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// `y = A x` for the real symmetric form.
    pub fn matvec_real(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, j, v) in self.iter_upper() {
            y[i] += v.re * x[j];
            if i != j {
                y[j] += v.re * x[i];
            }
        }
        y
    }

    /// `Tr(A B)` for Hermitian `A`, `B`, touching only `A`'s pattern.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for (i, j, v) in self.iter_upper() {
            let w = other.get(i, j);
            // Tr(AB) = sum_ij a_ij conj(b_ij) for Hermitian B.
            let t = (v * w.conj()).re;
            s += if i == j { t } else { 2.0 * t };
        }
        s
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get_re(i, i)).sum()
    }
}
