//! Symmetric eigensolver: Householder band reduction followed by the
//! implicit QL iteration.
//!
//! Eigenvectors are stored as rows so each Givens rotation touches two
//! contiguous rows. A row-subset variant accumulates rotations only on
//! requested components, which costs O(n^2) per component instead of the
//! O(n^3) of a full accumulation.

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::par;

/// Eigenvalues in ascending order and the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Row `j` holds the unit eigenvector for `values[j]`.
    pub vectors: DenseMatrix<f64>,
}

impl EigenDecomposition {
    /// `sum_j f(lambda_j) v_j v_j^T`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DenseMatrix<f64> {
        let n = self.vectors.cols();
        let weights: Vec<(usize, f64)> = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &l)| (j, f(l)))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        let mut out = DenseMatrix::zeros(n, n);
        par::for_each_row(out.as_mut_slice(), n, |a, orow| {
            for &(j, w) in &weights {
                let v = self.vectors.row(j);
                let coef = w * v[a];
                if coef == 0.0 {
                    continue;
                }
                for (o, &x) in orow.iter_mut().zip(v) {
                    *o += coef * x;
                }
            }
        });
        out
    }
}

/// Reduce a symmetric matrix in place to bandwidth `b >= 1` by Householder
/// similarity transforms. Returns `Q^T` with `A_in = Q B Q^T` when
/// `accumulate` is set.
pub fn reduce_to_band(
    a: &mut DenseMatrix<f64>,
    b: usize,
    accumulate: bool,
) -> Result<Option<DenseMatrix<f64>>> {
    let reflectors = reduce_impl(a, b)?;
    if !accumulate {
        return Ok(None);
    }
    let n = a.rows();
    let mut qt = DenseMatrix::identity(n);
    for r in &reflectors {
        // qt <- H qt, touching rows in the reflector support.
        let mut u = vec![0.0; n];
        for (idx, &vs) in r.v.iter().enumerate() {
            for (uu, &x) in u.iter_mut().zip(qt.row(r.start + idx)) {
                *uu += vs * x;
            }
        }
        for (idx, &vs) in r.v.iter().enumerate() {
            let coef = r.tau * vs;
            for (x, &uu) in qt.row_mut(r.start + idx).iter_mut().zip(&u) {
                *x -= coef * uu;
            }
        }
    }
    Ok(Some(qt))
}

struct Reflector {
    start: usize,
    v: Vec<f64>,
    tau: f64,
}

fn reduce_impl(a: &mut DenseMatrix<f64>, b: usize) -> Result<Vec<Reflector>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            op: "reduce_to_band",
            expected: a.rows(),
            got: a.cols(),
        });
    }
    if b == 0 {
        return Err(Error::invalid("reduce_to_band", "target bandwidth must be >= 1"));
    }
    let n = a.rows();
    let mut out = Vec::new();
    for k in 0..n {
        let start = k + b;
        if start + 1 >= n {
            break;
        }
        let x: Vec<f64> = (start..n).map(|s| a[(s, k)]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|v| v * v).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v = x;
        v[0] -= alpha;
        let vtv = v.iter().map(|t| t * t).sum::<f64>();
        let tau = 2.0 / vtv;

        // Rows inside the band but above the trailing block.
        for r in k + 1..start {
            let dot: f64 = (start..n).map(|s| a[(r, s)] * v[s - start]).sum();
            for s in start..n {
                let val = a[(r, s)] - tau * dot * v[s - start];
                a[(r, s)] = val;
                a[(s, r)] = val;
            }
        }

        // Trailing block: A <- A - v w^T - w v^T.
        let cols = a.cols();
        let p: Vec<f64> = {
            let a_ref = &*a;
            par::map_range(n - start, |si| {
                let row = &a_ref.row(start + si)[start..cols];
                tau * row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>()
            })
        };
        let kk = 0.5 * tau * p.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        par::for_each_row(a.as_mut_slice(), cols, |i, row| {
            if i < start {
                return;
            }
            let (vi, wi) = (v[i - start], w[i - start]);
            for ((x, &vt), &wt) in row[start..].iter_mut().zip(&v).zip(&w) {
                *x -= vi * wt + wi * vt;
            }
        });

        a[(start, k)] = alpha;
        a[(k, start)] = alpha;
        for s in start + 1..n {
            a[(s, k)] = 0.0;
            a[(k, s)] = 0.0;
        }
        out.push(Reflector { start, v, tau });
    }
    Ok(out)
}

trait Rotator {
    fn rotate(&mut self, i: usize, c: f64, s: f64);
    fn permute(&mut self, perm: &[usize]);
}

struct NoVectors;

impl Rotator for NoVectors {
    fn rotate(&mut self, _: usize, _: f64, _: f64) {}
    fn permute(&mut self, _: &[usize]) {}
}

/// Eigenvectors as rows of `Z^T`.
struct FullRows<'a>(&'a mut DenseMatrix<f64>);

impl Rotator for FullRows<'_> {
    #[inline]
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let (zi, zi1) = self.0.two_rows_mut(i, i + 1);
        for (x, y) in zi.iter_mut().zip(zi1.iter_mut()) {
            let h = *y;
            *y = s * *x + c * h;
            *x = c * *x - s * h;
        }
    }

    fn permute(&mut self, perm: &[usize]) {
        let old = self.0.clone();
        for (new, &o) in perm.iter().enumerate() {
            self.0.row_mut(new).copy_from_slice(old.row(o));
        }
    }
}

/// Selected rows of `Z`; column `j` belongs to eigenvector `j`.
struct SubsetRows<'a>(&'a mut DenseMatrix<f64>);

impl Rotator for SubsetRows<'_> {
    #[inline]
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        for r in 0..self.0.rows() {
            let row = self.0.row_mut(r);
            let h = row[i + 1];
            row[i + 1] = s * row[i] + c * h;
            row[i] = c * row[i] - s * h;
        }
    }

    fn permute(&mut self, perm: &[usize]) {
        for r in 0..self.0.rows() {
            let old = self.0.row(r).to_vec();
            let row = self.0.row_mut(r);
            for (new, &o) in perm.iter().enumerate() {
                row[new] = old[o];
            }
        }
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. `e[i]` couples `i` and
/// `i + 1`; `e[n - 1]` is ignored. Sorts ascending.
fn tql2<R: Rotator>(d: &mut [f64], e: &mut [f64], rot: &mut R) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 100 {
                    return Err(Error::NoConvergence {
                        op: "tql2",
                        iterations: iter,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rot.rotate(i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let sorted: Vec<f64> = perm.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    rot.permute(&perm);
    Ok(())
}

fn check_square(a: &DenseMatrix<f64>, op: &'static str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op,
            expected: a.rows(),
            got: a.cols(),
        })
    }
}

fn tridiagonal_of(a: &DenseMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let d = (0..n).map(|i| a[(i, i)]).collect();
    let e = (0..n)
        .map(|i| if i + 1 < n { a[(i, i + 1)] } else { 0.0 })
        .collect();
    (d, e)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DenseMatrix<f64>) -> Result<Vec<f64>> {
    check_square(a, "symmetric_eigenvalues")?;
    let mut work = a.clone();
    reduce_to_band(&mut work, 1, false)?;
    let (mut d, mut e) = tridiagonal_of(&work);
    tql2(&mut d, &mut e, &mut NoVectors)?;
    Ok(d)
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn symmetric_eigen(a: &DenseMatrix<f64>) -> Result<EigenDecomposition> {
    check_square(a, "symmetric_eigen")?;
    let mut work = a.clone();
    let mut qt = reduce_to_band(&mut work, 1, true)?.expect("accumulated");
    let (mut d, mut e) = tridiagonal_of(&work);
    tql2(&mut d, &mut e, &mut FullRows(&mut qt))?;
    Ok(EigenDecomposition {
        values: d,
        vectors: qt,
    })
}

/// Eigenvalues plus the components `rows` of every eigenvector.
///
/// Entry `(r, j)` of the returned matrix is component `rows[r]` of the
/// eigenvector for `values[j]`.
pub fn symmetric_eigen_rows(
    a: &DenseMatrix<f64>,
    rows: &[usize],
) -> Result<(Vec<f64>, DenseMatrix<f64>)> {
    check_square(a, "symmetric_eigen_rows")?;
    let n = a.rows();
    if let Some(&bad) = rows.iter().find(|&&r| r >= n) {
        return Err(Error::invalid(
            "symmetric_eigen_rows",
            format!("row {bad} out of range for n = {n}"),
        ));
    }
    let mut work = a.clone();
    let reflectors = reduce_impl(&mut work, 1)?;
    // Rows of Q = H_0 H_1 ...: apply reflectors from the right in order.
    let mut sub = DenseMatrix::from_fn(rows.len(), n, |r, j| f64::from(u8::from(rows[r] == j)));
    for r in &reflectors {
        for k in 0..sub.rows() {
            let row = sub.row_mut(k);
            let seg = &mut row[r.start..r.start + r.v.len()];
            let dot: f64 = seg.iter().zip(&r.v).map(|(x, y)| x * y).sum();
            for (x, &vs) in seg.iter_mut().zip(&r.v) {
                *x -= r.tau * dot * vs;
            }
        }
    }
    let (mut d, mut e) = tridiagonal_of(&work);
    tql2(&mut d, &mut e, &mut SubsetRows(&mut sub))?;
    Ok((d, sub))
}

/// Row-subset eigen solve for a symmetric tridiagonal matrix given by its
/// diagonal and off-diagonal.
pub fn tridiagonal_eigen_rows(
    diag: &[f64],
    off: &[f64],
    rows: &[usize],
) -> Result<(Vec<f64>, DenseMatrix<f64>)> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) {
        return Err(Error::DimensionMismatch {
            op: "tridiagonal_eigen_rows",
            expected: n.saturating_sub(1),
            got: off.len(),
        });
    }
    if let Some(&bad) = rows.iter().find(|&&r| r >= n) {
        return Err(Error::invalid(
            "tridiagonal_eigen_rows",
            format!("row {bad} out of range for n = {n}"),
        ));
    }
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    let mut sub = DenseMatrix::from_fn(rows.len(), n, |r, j| f64::from(u8::from(rows[r] == j)));
    tql2(&mut d, &mut e, &mut SubsetRows(&mut sub))?;
    Ok((d, sub))
}
