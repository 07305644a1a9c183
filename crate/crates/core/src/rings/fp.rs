//! Dense univariate polynomials over a prime field `F_p` with `u64` coefficients.
//!
//! These helpers back the extension-field constructor (irreducibility tests) and
//! the table-driven finite fields used for point counting.

/// Coefficients are stored low degree first; the zero polynomial is empty.
pub type FpPoly = Vec<u64>;

/// Deterministic primality test by trial division (adequate for the desk-scale
/// characteristics this crate targets).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Modular multiplication without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular exponentiation.
pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime; `a` must be nonzero modulo `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Drop leading zero coefficients.
pub fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(f: &FpPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

/// Sum of two polynomials.
pub fn add(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let n = f.len().max(g.len());
    let mut r = vec![0u64; n];
    for (i, c) in r.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *c = (a + b) % p;
    }
    trim(r)
}

/// Difference of two polynomials.
pub fn sub(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let n = f.len().max(g.len());
    let mut r = vec![0u64; n];
    for (i, c) in r.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *c = (a + p - b) % p;
    }
    trim(r)
}

/// Product of two polynomials.
pub fn mul(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    trim(r)
}

/// Euclidean division `f = q g + r`; `g` must be nonzero.
pub fn divrem(f: &FpPoly, g: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let dg = degree(g).expect("division by the zero polynomial");
    let inv_lc = inv_mod(g[dg], p);
    let mut r = f.clone();
    if r.len() <= dg {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = mul_mod(r[dr], inv_lc, p);
        let shift = dr - dg;
        q[shift] = c;
        for (j, &b) in g.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, b, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// Remainder of `f` modulo `g`.
pub fn rem(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    divrem(f, g, p).1
}

/// Monic greatest common divisor.
pub fn gcd(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let mut a = trim(f.clone());
    let mut b = trim(g.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(a, p)
}

/// Scale so that the leading coefficient is one.
pub fn make_monic(f: FpPoly, p: u64) -> FpPoly {
    match f.last() {
        None => f,
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            f.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

/// `base^e mod m`.
pub fn pow_poly_mod(base: &FpPoly, mut e: u128, m: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = trim(vec![1 % p]);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Ben-Or irreducibility test: `f` of degree `d` is irreducible iff
/// `gcd(f, x^(p^i) - x) = 1` for all `1 <= i <= d/2`.
pub fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let f = trim(f.clone());
    let d = match degree(&f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let f = make_monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = pow_poly_mod(&xp, p as u128, &f, p);
        let h = sub(&xp, &x, p);
        let g = gcd(&f, &h, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Evaluate `f` at `x` in `F_p`.
pub fn eval(f: &FpPoly, x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = (mul_mod(acc, x, p) + c) % p;
    }
    acc
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
