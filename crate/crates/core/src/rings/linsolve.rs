//! Exact solution of square linear systems over the raw ring layer.

use super::ring::{Ring, Value};
use crate::error::{Error, Result};

/// Solve `m x = rhs` for a square system with a unique solution in `ring`.
///
/// Unit pivots are eliminated directly; over a domain, non-unit pivots are
/// handled by fraction-free elimination followed by exact back substitution,
/// so the solution is found whenever it lies in `ring`.
pub fn solve_square(ring: &Ring, mut m: Vec<Vec<Value>>, mut rhs: Vec<Value>) -> Result<Vec<Value>> {
    let n = m.len();
    for k in 0..n {
        let mut pivot: Option<(usize, bool)> = None;
        for i in k..n {
            if !ring.is_zero(&m[i][k]) {
                if ring.is_unit(&m[i][k]) {
                    pivot = Some((i, true));
                    break;
                } else if pivot.is_none() {
                    pivot = Some((i, false));
                }
            }
        }
        let (pr, unit) = pivot.ok_or_else(|| Error::Precondition("singular linear system".into()))?;
        m.swap(k, pr);
        rhs.swap(k, pr);
        if unit {
            let inv = ring.inverse(&m[k][k])?;
            for j in k..n {
                m[k][j] = ring.mul(&m[k][j], &inv);
            }
            rhs[k] = ring.mul(&rhs[k], &inv);
            for i in k + 1..n {
                if ring.is_zero(&m[i][k]) {
                    continue;
                }
                let f = m[i][k].clone();
                for j in k..n {
                    let t = ring.mul(&f, &m[k][j]);
                    m[i][j] = ring.sub(&m[i][j], &t);
                }
                let t = ring.mul(&f, &rhs[k]);
                rhs[i] = ring.sub(&rhs[i], &t);
            }
        } else {
            if !ring.is_domain() {
                return Err(Error::Unsupported(format!(
                    "non-unit pivot while solving over the non-domain {ring}"
                )));
            }
            let p = m[k][k].clone();
            for i in k + 1..n {
                if ring.is_zero(&m[i][k]) {
                    continue;
                }
                let f = m[i][k].clone();
                for j in k..n {
                    let t = ring.sub(&ring.mul(&p, &m[i][j]), &ring.mul(&f, &m[k][j]));
                    m[i][j] = t;
                }
                rhs[i] = ring.sub(&ring.mul(&p, &rhs[i]), &ring.mul(&f, &rhs[k]));
            }
        }
    }
    let mut x = vec![ring.zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc = ring.sub(&acc, &ring.mul(&m[k][j], &x[j]));
        }
        x[k] = ring.div_exact(&acc, &m[k][k])?;
    }
    Ok(x)
}
