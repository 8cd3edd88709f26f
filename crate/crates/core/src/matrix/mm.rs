//! Matrix Market coordinate I/O.

use super::SparseHermitian;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Scalar};
use num_complex::Complex64;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
    Integer,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Read a Hermitian matrix in coordinate format.
///
/// Accepts `real`/`integer` with `symmetric` or `general` symmetry and
/// `complex` with `hermitian` or `general`. General files must describe a
/// Hermitian matrix.
pub fn read_matrix_market<R: Read>(reader: R) -> Result<SparseHermitian> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix ...' header"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}'", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "real" => Field::Real,
        "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(1, "hermitian symmetry requires complex field"));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut expected = 0usize;
    let mut entries = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let Some((n, _)) = size else {
            if parts.len() != 3 {
                return Err(parse_err(lineno, "size line must have 3 fields"));
            }
            let p = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad integer '{s}'")))
            };
            let (r, c, nnz) = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
            if r != c {
                return Err(parse_err(lineno, format!("matrix is {r} x {c}, not square")));
            }
            size = Some((r, c));
            expected = nnz;
            entries.reserve(nnz);
            continue;
        };
        let want = if field == Field::Complex { 4 } else { 3 };
        if parts.len() != want {
            return Err(parse_err(lineno, format!("expected {want} fields")));
        }
        let pi = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("bad index '{s}'")))
        };
        let pf = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("bad value '{s}'")))
        };
        let (i, j) = (pi(parts[0])?, pi(parts[1])?);
        if i == 0 || j == 0 || i > n || j > n {
            return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
        }
        let v = match field {
            Field::Complex => Complex64::new(pf(parts[2])?, pf(parts[3])?),
            _ => Complex64::new(pf(parts[2])?, 0.0),
        };
        entries.push((i - 1, j - 1, v));
    }
    let (n, _) = size.ok_or_else(|| parse_err(0, "missing size line"))?;
    if entries.len() != expected {
        return Err(parse_err(
            0,
            format!("expected {expected} entries, found {}", entries.len()),
        ));
    }
    SparseHermitian::from_triplets(n, entries)
}

pub fn read_matrix_market_path(path: impl AsRef<Path>) -> Result<SparseHermitian> {
    read_matrix_market(std::fs::File::open(path)?)
}

/// Write as `real symmetric` or `complex hermitian`, lower triangle,
/// 1-based indices, shortest round-trip decimal values.
pub fn write_matrix_market<W: Write>(h: &SparseHermitian, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let real = h.is_real();
    if real {
        writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    } else {
        writeln!(w, "%%MatrixMarket matrix coordinate complex hermitian")?;
    }
    writeln!(w, "{} {} {}", h.n(), h.n(), h.nnz_stored())?;
    // Stored (i <= j) becomes lower-triangle (j, i) holding conj(a_ij).
    let mut lower: Vec<(usize, usize, Complex64)> =
        h.iter_upper().map(|(i, j, v)| (j, i, v.conj())).collect();
    lower.sort_by_key(|&(r, c, _)| (c, r));
    for (r, c, v) in lower {
        if real {
            writeln!(w, "{} {} {:e}", r + 1, c + 1, v.re)?;
        } else {
            writeln!(w, "{} {} {:e} {:e}", r + 1, c + 1, v.re, v.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix_market_path(h: &SparseHermitian, path: impl AsRef<Path>) -> Result<()> {
    write_matrix_market(h, std::fs::File::create(path)?)
}

/// Write a general (non-Hermitian) dense matrix in coordinate format,
/// skipping entries with magnitude `<= drop_tol`.
pub fn write_dense_general<T: Scalar, W: Write>(
    a: &DenseMatrix<T>,
    drop_tol: f64,
    writer: W,
) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let field = if T::IS_COMPLEX { "complex" } else { "real" };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
    let mut entries = Vec::new();
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let v = a[(i, j)];
            if v.abs() > drop_tol {
                entries.push((i, j, v));
            }
        }
    }
    writeln!(w, "{} {} {}", a.rows(), a.cols(), entries.len())?;
    for (i, j, v) in entries {
        if T::IS_COMPLEX {
            writeln!(w, "{} {} {:e} {:e}", i + 1, j + 1, v.re(), v.im())?;
        } else {
            writeln!(w, "{} {} {:e}", i + 1, j + 1, v.re())?;
        }
    }
    w.flush()?;
    Ok(())
}
