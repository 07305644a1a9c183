//! Linear algebra over exact rings: fraction-free echelon forms over
//! domains, kernels and particular solutions over fields.

use crate::error::{Error, Result};
use crate::rings::{Ring, RingValue};

/// Dense row-major matrix of ring elements.
pub type Matrix = Vec<Vec<RingValue>>;

/// Zero matrix.
pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
    vec![vec![RingValue::zero(ring); cols]; rows]
}

/// Identity matrix.
pub fn identity(ring: &Ring, n: usize) -> Matrix {
    let mut m = zeros(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = RingValue::one(ring);
    }
    m
}

/// Matrix product.
pub fn mat_mul(a: &Matrix, b: &Matrix, ring: &Ring) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(ring, n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

/// Row vector times matrix: `sum_i v_i * m[i]`.
pub fn vec_mat(v: &[RingValue], m: &Matrix, ring: &Ring) -> Vec<RingValue> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut out = vec![RingValue::zero(ring); cols];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o = &*o + &(vi * x);
        }
    }
    out
}

/// Fraction-free row echelon form over an integral domain.  Returns the
/// nonzero rows; their number is the rank over the fraction field.
pub fn echelon_domain(ring: &Ring, rows: &[Vec<RingValue>]) -> Result<Matrix> {
    if !ring.is_domain() {
        return Err(Error::Precondition(format!("{ring} is not an integral domain")));
    }
    let mut m: Matrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if m.is_empty() {
        return Ok(m);
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len()).find(|&i| !m[i][c].is_zero());
        let Some(p) = piv else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                m[i][j] = &(&pv * &m[i][j]) - &(&f * &m[r][j]);
            }
        }
        r += 1;
    }
    m.truncate(r);
    // Rows past the rank are zero by construction of the loop above.
    Ok(m.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())).collect())
}

/// Rank over the fraction field of a domain.
pub fn rank_domain(ring: &Ring, rows: &[Vec<RingValue>]) -> Result<usize> {
    Ok(echelon_domain(ring, rows)?.len())
}

/// Reduced row echelon form over a field; returns `(rref rows, pivot columns)`.
pub fn rref_field(ring: &Ring, rows: &[Vec<RingValue>]) -> Result<(Matrix, Vec<usize>)> {
    if !ring.is_field() {
        return Err(Error::Precondition(format!("{ring} is not a field")));
    }
    let mut m: Matrix = rows.to_vec();
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse()?;
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                m[i][j] = &m[i][j] - &(&f * &m[r][j]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Ok((m, pivots))
}

/// Basis of the right kernel `{x : m x = 0}` over a field.
pub fn kernel_field(ring: &Ring, rows: &[Vec<RingValue>], cols: usize) -> Result<Matrix> {
    let (rref, pivots) = rref_field(ring, rows)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RingValue::zero(ring); cols];
        v[free] = RingValue::one(ring);
        for (row, &pc) in rref.iter().zip(&pivots) {
            v[pc] = -&row[free];
        }
        basis.push(v);
    }
    Ok(basis)
}

/// A particular solution of `m x = rhs` over a field, if one exists.
pub fn solve_field(ring: &Ring, rows: &[Vec<RingValue>], rhs: &[RingValue]) -> Result<Option<Vec<RingValue>>> {
    let cols = if rows.is_empty() { 0 } else { rows[0].len() };
    let aug: Matrix = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (rref, pivots) = rref_field(ring, &aug)?;
    if pivots.contains(&cols) {
        return Ok(None);
    }
    let mut x = vec![RingValue::zero(ring); cols];
    for (row, &pc) in rref.iter().zip(&pivots) {
        x[pc] = row[cols].clone();
    }
    Ok(Some(x))
}

/// Rank over a field.
pub fn rank_field(ring: &Ring, rows: &[Vec<RingValue>]) -> Result<usize> {
    Ok(rref_field(ring, rows)?.1.len())
}

/// Rank over a field or domain, whichever applies.
pub fn rank(ring: &Ring, rows: &[Vec<RingValue>]) -> Result<usize> {
    if ring.is_field() {
        rank_field(ring, rows)
    } else {
        rank_domain(ring, rows)
    }
}
