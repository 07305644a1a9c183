//! Dense univariate polynomials with coefficients in a field (raw layer).

use super::ring::{trim_values, Ring, Value};
use crate::error::{Error, Result};

/// Product of dense polynomials.
pub fn mul(f: &Ring, a: &[Value], b: &[Value]) -> Vec<Value> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim_values(f, out)
}

/// Euclidean division over a field (the divisor's leading coefficient must be a unit).
pub fn divrem(f: &Ring, a: &[Value], b: &[Value]) -> Result<(Vec<Value>, Vec<Value>)> {
    let b = trim_values(f, b.to_vec());
    if b.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let db = b.len() - 1;
    let inv = f.inverse(&b[db])?;
    let mut r = trim_values(f, a.to_vec());
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = f.mul(&r[dr], &inv);
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = f.sub(&r[shift + j], &f.mul(&c, bj));
        }
        q[shift] = c;
        r = trim_values(f, r);
    }
    Ok((trim_values(f, q), r))
}

/// Monic gcd over a field.
pub fn gcd(f: &Ring, a: &[Value], b: &[Value]) -> Result<Vec<Value>> {
    let mut x = trim_values(f, a.to_vec());
    let mut y = trim_values(f, b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y)?;
        x = y;
        y = r;
    }
    if let Some(lc) = x.last().cloned() {
        let inv = f.inverse(&lc)?;
        x = x.iter().map(|c| f.mul(c, &inv)).collect();
    }
    Ok(x)
}
