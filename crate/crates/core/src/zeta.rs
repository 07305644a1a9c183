//! Fibre-by-fibre zeta elements of finitely presented PI algebras over
//! finite fields: point enumeration, a structured search for absolutely
//! simple modules, Ext¹ by linear algebra, Ext-class multisets and the
//! truncated exponential series.
//!
//! All arithmetic in `𝔽_{q^k}` goes through [`FiniteField`], a table-driven
//! field whose elements are encoded as integers (base-`p` digits of the
//! polynomial representative).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::enveloping::{NCPolynomial, NCPresentation, Word};
use crate::error::{Error, Result};
use crate::rings::{fp, Ring, RingKind, RingValue, Value};

// ---------------------------------------------------------------------------
// Finite fields
// ---------------------------------------------------------------------------

/// `𝔽_{p^e}` with log/antilog tables.  Elements are integers in `0..p^e`
/// whose base-`p` digits are the coefficients (low degree first) of the
/// representative modulo a primitive polynomial; `0` and `1` are the
/// additive and multiplicative identities.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    degree: u32,
    size: u32,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

/// Largest field size supported by the tables.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

impl FiniteField {
    /// Build `𝔽_{p^e}` using the first primitive polynomial in a fixed
    /// enumeration order (deterministic).
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if !fp::is_prime(p) {
            return Err(Error::InvalidConstruction(format!("{p} is not prime")));
        }
        if degree == 0 {
            return Err(Error::InvalidConstruction("field degree must be positive".into()));
        }
        let size = p.checked_pow(degree).filter(|&s| s <= MAX_FIELD_SIZE).ok_or_else(|| {
            Error::Budget(format!("field of size {p}^{degree} exceeds {MAX_FIELD_SIZE}"))
        })?;
        let order = size - 1;
        let factors = fp::prime_factors(order);
        let e = degree as usize;
        let is_primitive = |f: &Vec<u64>| -> bool {
            if f[0] == 0 || !fp::is_irreducible(f, p) {
                return false;
            }
            let x = vec![0, 1];
            let one = vec![1];
            factors.iter().all(|r| fp::pow_poly_mod(&x, (order / r) as u128, f, p) != one)
                && (order > 1 || fp::rem(&x, f, p) == one)
        };
        let mut modulus = None;
        for idx in 0..size {
            let mut f: Vec<u64> = (0..e).map(|i| (idx / p.pow(i as u32)) % p).collect();
            f.push(1);
            if is_primitive(&f) {
                modulus = Some(f);
                break;
            }
        }
        let modulus = modulus.ok_or_else(|| Error::InvalidConstruction(format!("no primitive polynomial of degree {degree} mod {p}")))?;
        let mut field = FiniteField { p, degree, size: size as u32, modulus, exp: Vec::new(), log: vec![0; size as usize] };
        let mut cur: Vec<u64> = vec![1];
        let mut exp = Vec::with_capacity(order as usize);
        for i in 0..order {
            let code = field.encode(&cur);
            exp.push(code);
            field.log[code as usize] = i as u32;
            cur = fp::rem(&fp::mul(&cur, &vec![0, 1], p), &field.modulus, p);
        }
        let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
        field.exp = doubled;
        Ok(field)
    }

    /// Characteristic.
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Encode a polynomial representative (coefficients `< p`, low first).
    pub fn encode(&self, poly: &[u64]) -> u32 {
        let mut code = 0u64;
        for &c in poly.iter().rev() {
            code = code * self.p + c % self.p;
        }
        code as u32
    }

    /// Decode to the polynomial representative (length `degree`).
    pub fn decode(&self, a: u32) -> Vec<u64> {
        let mut a = a as u64;
        (0..self.degree)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    /// Image of an integer.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Sum.
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            let s = a as u64 + b as u64;
            return if s >= self.p { (s - self.p) as u32 } else { s as u32 };
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    /// Negation.
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.degree == 1 {
            return ((self.p - a as u64) % self.p) as u32;
        }
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u32
    }

    /// Difference.
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Product.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        // The antilog table is stored twice over, so no reduction is needed.
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    /// Power.
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.size as u64 - 1;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u32) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size as u64 - 1;
        let l = self.log[a as usize] as u64;
        Ok(order / num_integer::gcd(order, l))
    }

    /// Display: integers for prime-field elements, otherwise a polynomial in `z`.
    pub fn format(&self, a: u32) -> String {
        if (a as u64) < self.p {
            return a.to_string();
        }
        let d = self.decode(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        parts.join("+")
    }

    /// Roots in this field of a polynomial over `𝔽_p` (coefficients low first).
    pub fn roots_of_fp_poly(&self, f: &[u64]) -> Vec<u32> {
        (0..self.size).filter(|&x| self.eval_fp_poly(f, x) == 0).collect()
    }

    fn eval_fp_poly(&self, f: &[u64], x: u32) -> u32 {
        f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), self.from_int(c as i64)))
    }
}

// ---------------------------------------------------------------------------
// Compiled presentations
// ---------------------------------------------------------------------------

/// A noncommutative polynomial with coefficients in a [`FiniteField`].
pub type FieldPoly = Vec<(Vec<usize>, u32)>;

/// A presentation over `𝔽_q` mapped into `𝔽_{q^k}`, with the chosen central
/// elements.
#[derive(Clone, Debug)]
pub struct CompiledPresentation {
    field: FiniteField,
    generators: usize,
    relations: Vec<FieldPoly>,
    central: Vec<FieldPoly>,
}

/// Map the coefficient field of a presentation (a prime or extension field)
/// into `field`.
fn embedding<'a>(ring: &'a Ring, field: &'a FiniteField) -> Result<Box<dyn Fn(&RingValue) -> Result<u32> + 'a>> {
    match ring.kind() {
        RingKind::PrimeField { p } => {
            if *p != field.characteristic() {
                return Err(Error::RingMismatch(format!("characteristic {p} vs {}", field.characteristic())));
            }
            Ok(Box::new(move |v: &RingValue| match v.value() {
                Value::Fp(x) => Ok(field.from_int(*x as i64)),
                _ => Err(Error::RingMismatch("expected a prime-field element".into())),
            }))
        }
        RingKind::ExtField { p, modulus, .. } => {
            let d = (modulus.len() - 1) as u32;
            if *p != field.characteristic() || field.degree() % d != 0 {
                return Err(Error::RingMismatch(format!("F_{p}^{d} does not embed in a field of size {}", field.size())));
            }
            let root = *field
                .roots_of_fp_poly(modulus)
                .first()
                .ok_or_else(|| Error::InvalidConstruction("modulus has no root".into()))?;
            Ok(Box::new(move |v: &RingValue| match v.value() {
                Value::Ext(c) => Ok(c.iter().rev().fold(0, |acc, &x| field.add(field.mul(acc, root), field.from_int(x as i64)))),
                _ => Err(Error::RingMismatch("expected an extension-field element".into())),
            }))
        }
        _ => Err(Error::Unsupported(format!("zeta computations need a finite coefficient field, got {ring}"))),
    }
}

fn compile_poly(p: &NCPolynomial, embed: &dyn Fn(&RingValue) -> Result<u32>) -> Result<FieldPoly> {
    let mut out = Vec::new();
    for (w, c) in p.terms() {
        let x = embed(c)?;
        if x != 0 {
            out.push((w.0.clone(), x));
        }
    }
    Ok(out)
}

impl CompiledPresentation {
    /// Compile a presentation and central elements into `field`.
    pub fn new(p: &NCPresentation, field: &FiniteField, central: &[NCPolynomial]) -> Result<Self> {
        let embed = embedding(p.ring(), field)?;
        let relations = p.relations().iter().map(|r| compile_poly(r, &*embed)).collect::<Result<_>>()?;
        let central = central.iter().map(|c| compile_poly(c, &*embed)).collect::<Result<_>>()?;
        Ok(CompiledPresentation { field: field.clone(), generators: p.generator_count(), relations, central })
    }

    /// Directly from field polynomials (for tests and custom algebras).
    pub fn from_parts(field: &FiniteField, generators: usize, relations: Vec<FieldPoly>, central: Vec<FieldPoly>) -> Self {
        CompiledPresentation { field: field.clone(), generators, relations, central }
    }

    /// The field.
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Number of generators.
    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Relations.
    pub fn relations(&self) -> &[FieldPoly] {
        &self.relations
    }

    /// Central elements.
    pub fn central(&self) -> &[FieldPoly] {
        &self.central
    }

    /// Evaluate a polynomial at a commutative point.
    pub fn eval_point(&self, poly: &FieldPoly, values: &[u32]) -> u32 {
        let f = &self.field;
        poly.iter().fold(0, |acc, (w, c)| f.add(acc, w.iter().fold(*c, |m, &g| f.mul(m, values[g]))))
    }
}

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

/// Enumeration ceilings; each can be overridden through the environment
/// (`HOMLIE_MAX_POINT_FIELD`, `HOMLIE_MAX_SIMPLE_FIELD`, `HOMLIE_MAX_DIM`,
/// `HOMLIE_MAX_CANDIDATES`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Largest `q^k` for one-dimensional point enumeration.
    pub point_field: u64,
    /// Largest `q^k` for the matrix search.
    pub simple_field: u64,
    /// Largest module dimension searched.
    pub max_dim: usize,
    /// Largest number of matrix candidates examined per search.
    pub candidates: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { point_field: 10_000, simple_field: 49, max_dim: 3, candidates: 400_000 }
    }
}

impl Budgets {
    /// Defaults overridden by environment variables.
    pub fn from_env() -> Self {
        let get = |name: &str, default: u64| -> u64 {
            std::env::var(name).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
        };
        let d = Budgets::default();
        Budgets {
            point_field: get("HOMLIE_MAX_POINT_FIELD", d.point_field),
            simple_field: get("HOMLIE_MAX_SIMPLE_FIELD", d.simple_field),
            max_dim: get("HOMLIE_MAX_DIM", d.max_dim as u64) as usize,
            candidates: get("HOMLIE_MAX_CANDIDATES", d.candidates),
        }
    }
}

// ---------------------------------------------------------------------------
// One-dimensional points
// ---------------------------------------------------------------------------

/// A one-dimensional representation: generator values in the field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharacterPoint {
    /// Value of each generator.
    pub values: Vec<u32>,
}

fn upoly_trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn upoly_rem(field: &FiniteField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = upoly_trim(a.to_vec());
    let lead_inv = field.inv(*b.last().expect("nonzero divisor")).expect("nonzero");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = field.mul(*r.last().unwrap(), lead_inv);
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, bi));
        }
        r = upoly_trim(r);
    }
    r
}

fn upoly_gcd(field: &FiniteField, a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
    let (mut a, mut b) = (upoly_trim(a), upoly_trim(b));
    while !b.is_empty() {
        let r = upoly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// All one-dimensional representations, by enumerating every generator but
/// the last and solving for the last one (roots of the gcd of the
/// specialised relations).
pub fn one_dim_points(cp: &CompiledPresentation, budgets: &Budgets) -> Result<Vec<CharacterPoint>> {
    let f = &cp.field;
    let q = f.size() as u64;
    if q > budgets.point_field {
        return Err(Error::Budget(format!("point enumeration over a field of size {q} exceeds {}", budgets.point_field)));
    }
    let g = cp.generators;
    if g == 0 {
        let ok = cp.relations.iter().all(|r| cp.eval_point(r, &[]) == 0);
        return Ok(if ok { vec![CharacterPoint { values: vec![] }] } else { vec![] });
    }
    let prefixes = q.checked_pow(g as u32 - 1).filter(|&n| n <= 200_000_000).ok_or_else(|| Error::Budget("too many prefixes".into()))?;
    let last = g - 1;
    // Independent prefix ranges, merged by a deterministic sorted union.
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8) as u64;
    let chunk = prefixes.div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<CharacterPoint>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..prefixes)
            .step_by(chunk as usize)
            .map(|lo| scope.spawn(move || points_in_range(cp, lo..(lo + chunk).min(prefixes), last)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("point enumeration worker panicked")).collect()
    });
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    out.sort();
    Ok(out)
}

fn points_in_range(cp: &CompiledPresentation, range: std::ops::Range<u64>, last: usize) -> Result<Vec<CharacterPoint>> {
    let f = &cp.field;
    let q = f.size() as u64;
    let mut out = Vec::new();
    let mut vals = vec![0u32; cp.generators];
    for idx in range {
        let mut rem = idx;
        for v in vals.iter_mut().take(last) {
            *v = (rem % q) as u32;
            rem /= q;
        }
        let mut gcd: Vec<u32> = Vec::new();
        for r in &cp.relations {
            let mut poly: Vec<u32> = Vec::new();
            for (w, c) in r {
                let mut coeff = *c;
                let mut deg = 0;
                for &x in w {
                    if x == last {
                        deg += 1;
                    } else {
                        coeff = f.mul(coeff, vals[x]);
                    }
                }
                if poly.len() <= deg {
                    poly.resize(deg + 1, 0);
                }
                poly[deg] = f.add(poly[deg], coeff);
            }
            gcd = upoly_gcd(f, gcd, poly);
            if gcd.len() == 1 {
                break;
            }
        }
        match gcd.len() {
            0 => {
                for x in 0..f.size() {
                    vals[last] = x;
                    out.push(CharacterPoint { values: vals.clone() });
                }
            }
            1 => {}
            2 => {
                vals[last] = f.neg(f.mul(gcd[0], f.inv(gcd[1])?));
                out.push(CharacterPoint { values: vals.clone() });
            }
            _ => {
                for x in 0..f.size() {
                    let v = gcd.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
                    if v == 0 {
                        vals[last] = x;
                        out.push(CharacterPoint { values: vals.clone() });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive enumeration of `𝔽^g`, evaluating every relation.
pub fn one_dim_points_naive(cp: &CompiledPresentation) -> Result<Vec<CharacterPoint>> {
    let q = cp.field.size() as u64;
    let g = cp.generators as u32;
    let total = q.checked_pow(g).filter(|&n| n <= 500_000_000).ok_or_else(|| Error::Budget("naive enumeration".into()))?;
    let mut out = Vec::new();
    let mut vals = vec![0u32; cp.generators];
    for idx in 0..total {
        let mut rem = idx;
        for v in vals.iter_mut() {
            *v = (rem % q) as u32;
            rem /= q;
        }
        if cp.relations.iter().all(|r| cp.eval_point(r, &vals) == 0) {
            out.push(CharacterPoint { values: vals.clone() });
        }
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Matrices and linear algebra over the field
// ---------------------------------------------------------------------------

type Mat = Vec<u32>;

fn mat_identity(m: usize) -> Mat {
    let mut a = vec![0; m * m];
    for i in 0..m {
        a[i * m + i] = 1;
    }
    a
}

fn mat_mul(f: &FiniteField, a: &[u32], b: &[u32], m: usize) -> Mat {
    let mut c = vec![0; m * m];
    for i in 0..m {
        for k in 0..m {
            let x = a[i * m + k];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                c[i * m + j] = f.add(c[i * m + j], f.mul(x, b[k * m + j]));
            }
        }
    }
    c
}

fn mat_scalar(a: &[u32], m: usize) -> Option<u32> {
    let s = a[0];
    for i in 0..m {
        for j in 0..m {
            let expect = if i == j { s } else { 0 };
            if a[i * m + j] != expect {
                return None;
            }
        }
    }
    Some(s)
}

fn eval_word(f: &FiniteField, mats: &[Mat], w: &[usize], m: usize) -> Mat {
    let mut acc = mat_identity(m);
    for &g in w {
        acc = mat_mul(f, &acc, &mats[g], m);
    }
    acc
}

fn eval_poly(f: &FiniteField, mats: &[Mat], poly: &FieldPoly, m: usize) -> Mat {
    let mut out = vec![0; m * m];
    for (w, c) in poly {
        let wm = eval_word(f, mats, w, m);
        for (o, x) in out.iter_mut().zip(&wm) {
            *o = f.add(*o, f.mul(*c, *x));
        }
    }
    out
}

/// Row-reduce in place; returns pivot columns.
fn rref(f: &FiniteField, rows: &mut Vec<Vec<u32>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = f.sub(*d, f.mul(factor, *s));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Kernel basis of a `rows × cols` system.
fn kernel(f: &FiniteField, rows: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Affine solution space of `A x = b`: particular solution and kernel basis.
fn solve_affine(f: &FiniteField, rows: &[Vec<u32>], rhs: &[u32], cols: usize) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(*b);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![0; cols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[cols];
    }
    Some((x, kernel(f, rows, cols)))
}

fn rank(f: &FiniteField, rows: &[Vec<u32>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m, cols).len()
}

// ---------------------------------------------------------------------------
// Simple modules
// ---------------------------------------------------------------------------

/// A representation: one `dim × dim` matrix (row-major) per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleModuleRep {
    /// Dimension.
    pub dim: usize,
    /// Generator matrices, row-major.
    pub matrices: Vec<Vec<u32>>,
}

impl SimpleModuleRep {
    /// The one-dimensional representation of a point.
    pub fn from_point(p: &CharacterPoint) -> Self {
        SimpleModuleRep { dim: 1, matrices: p.values.iter().map(|&v| vec![v]).collect() }
    }
}

/// Dimension of the algebra spanned by all words in the representation
/// matrices (the image of the algebra, `R/ann`).
pub fn image_algebra_dim(cp: &CompiledPresentation, rep: &SimpleModuleRep) -> usize {
    let f = &cp.field;
    let m = rep.dim;
    let n2 = m * m;
    // Echelon rows with their pivot columns, kept normalised.
    let mut echelon: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut queue = vec![mat_identity(m)];
    while let Some(x) = queue.pop() {
        let mut v = x.clone();
        for (pc, row) in &echelon {
            let c = v[*pc];
            if c != 0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = f.sub(*vi, f.mul(c, *ri));
                }
            }
        }
        let Some(pc) = v.iter().position(|&c| c != 0) else { continue };
        let inv = f.inv(v[pc]).expect("nonzero");
        for vi in v.iter_mut() {
            *vi = f.mul(*vi, inv);
        }
        for (_, row) in echelon.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (ri, vi) in row.iter_mut().zip(&v) {
                    *ri = f.sub(*ri, f.mul(c, *vi));
                }
            }
        }
        echelon.push((pc, v));
        if echelon.len() == n2 {
            break;
        }
        for g in &rep.matrices {
            queue.push(mat_mul(f, &x, g, m));
        }
    }
    echelon.len()
}

/// Whether a representation is absolutely simple (its matrices span the full
/// matrix algebra).
pub fn is_absolutely_simple(cp: &CompiledPresentation, rep: &SimpleModuleRep) -> bool {
    image_algebra_dim(cp, rep) == rep.dim * rep.dim
}

/// `dim Hom_R(a, b)`: matrices `C` (`b.dim × a.dim`) with `b(g)C = C a(g)`.
pub fn hom_dim(cp: &CompiledPresentation, a: &SimpleModuleRep, b: &SimpleModuleRep) -> usize {
    let f = &cp.field;
    let (s, t) = (a.dim, b.dim);
    let cols = t * s;
    let mut rows = Vec::new();
    for (ag, bg) in a.matrices.iter().zip(&b.matrices) {
        // (b(g)C − C a(g))[r][c] = Σ_u b[r][u] C[u][c] − Σ_v C[r][v] a[v][c].
        for r in 0..t {
            for c in 0..s {
                let mut row = vec![0; cols];
                for u in 0..t {
                    row[u * s + c] = f.add(row[u * s + c], bg[r * t + u]);
                }
                for v in 0..s {
                    row[r * s + v] = f.sub(row[r * s + v], ag[v * s + c]);
                }
                rows.push(row);
            }
        }
    }
    cols - rank(f, &rows, cols)
}

/// Values of the central elements on a representation, if all act as scalars.
pub fn central_character(cp: &CompiledPresentation, rep: &SimpleModuleRep) -> Option<Vec<u32>> {
    cp.central.iter().map(|c| mat_scalar(&eval_poly(&cp.field, &rep.matrices, c, rep.dim), rep.dim)).collect()
}

/// Result of [`brute_force_simples`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSearch {
    /// Absolutely simple representations, one per isomorphism class.
    pub simples: Vec<SimpleModuleRep>,
    /// Matrix candidates examined.
    pub candidates: u64,
}

/// Rational canonical forms of `m × m` matrices (`m ≤ 3`).
fn canonical_forms(f: &FiniteField, m: usize) -> Result<Vec<Mat>> {
    let q = f.size();
    let companion = |coeffs: &[u32]| -> Mat {
        // x^d + c_{d-1}x^{d-1} + … + c_0, columns shift.
        let d = coeffs.len();
        let mut a = vec![0; d * d];
        for i in 1..d {
            a[i * d + i - 1] = 1;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            a[i * d + d - 1] = f.neg(c);
        }
        a
    };
    let block = |blocks: &[Mat]| -> Mat {
        let m: usize = blocks.iter().map(|b| (b.len() as f64).sqrt() as usize).sum();
        let mut a = vec![0; m * m];
        let mut off = 0;
        for b in blocks {
            let d = (b.len() as f64).sqrt() as usize;
            for i in 0..d {
                for j in 0..d {
                    a[(off + i) * m + off + j] = b[i * d + j];
                }
            }
            off += d;
        }
        a
    };
    let mut out = Vec::new();
    match m {
        1 => {
            for a in 0..q {
                out.push(vec![a]);
            }
        }
        2 => {
            for c0 in 0..q {
                for c1 in 0..q {
                    out.push(companion(&[c0, c1]));
                }
            }
            for a in 0..q {
                out.push(vec![a, 0, 0, a]);
            }
        }
        3 => {
            for c0 in 0..q {
                for c1 in 0..q {
                    for c2 in 0..q {
                        out.push(companion(&[c0, c1, c2]));
                    }
                }
            }
            for a in 0..q {
                for c in 0..q {
                    // (x − a) | (x − a)(x − c) = x² − (a + c)x + ac.
                    let f2 = companion(&[f.mul(a, c), f.neg(f.add(a, c))]);
                    out.push(block(&[vec![a], f2]));
                }
            }
            for a in 0..q {
                out.push(vec![a, 0, 0, 0, a, 0, 0, 0, a]);
            }
        }
        _ => return Err(Error::Unsupported(format!("matrix search in dimension {m}"))),
    }
    Ok(out)
}

fn max_gen(w: &[usize]) -> Option<usize> {
    w.iter().copied().max()
}

struct Search<'a> {
    cp: &'a CompiledPresentation,
    m: usize,
    budget: u64,
    candidates: u64,
    forms: Vec<Mat>,
    found: Vec<SimpleModuleRep>,
    buckets: BTreeMap<Vec<u32>, Vec<usize>>,
}

impl<'a> Search<'a> {
    /// Relations and central elements whose generators are all `≤ g` and
    /// that involve `g`.
    fn stage_polys(&self, g: usize) -> (Vec<&'a FieldPoly>, Vec<&'a FieldPoly>) {
        let cp: &'a CompiledPresentation = self.cp;
        let involves = |p: &&FieldPoly| {
            p.iter().all(|(w, _)| max_gen(w).is_none_or(|x| x <= g)) && p.iter().any(|(w, _)| w.contains(&g))
        };
        (cp.relations.iter().filter(involves).collect(), cp.central.iter().filter(involves).collect())
    }

    fn passes(&self, mats: &[Mat], rels: &[&FieldPoly], central: &[&FieldPoly]) -> bool {
        let f = &self.cp.field;
        rels.iter().all(|r| eval_poly(f, mats, r, self.m).iter().all(|&x| x == 0))
            && central.iter().all(|c| mat_scalar(&eval_poly(f, mats, c, self.m), self.m).is_some())
    }

    fn charge(&mut self, n: u64) -> Result<()> {
        self.candidates = self.candidates.saturating_add(n);
        if self.candidates > self.budget {
            return Err(Error::Budget(format!("more than {} matrix candidates in dimension {}", self.budget, self.m)));
        }
        Ok(())
    }

    fn run(&mut self, mats: &mut Vec<Mat>, all_scalar: bool) -> Result<()> {
        let g = mats.len();
        if g == self.cp.generators {
            self.finish(mats);
            return Ok(());
        }
        let f = self.cp.field.clone();
        let m = self.m;
        let (rels, central) = self.stage_polys(g);
        if all_scalar {
            let forms = self.forms.clone();
            self.charge(forms.len() as u64)?;
            for x in forms {
                mats.push(x);
                if self.passes(mats, &rels, &central) {
                    let scalar = mat_scalar(mats.last().unwrap(), m).is_some();
                    self.run(mats, scalar)?;
                }
                mats.pop();
            }
            return Ok(());
        }
        // Linear constraints on X_g from relations linear in it.
        let n2 = m * m;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut rhs: Vec<u32> = Vec::new();
        let mut placeholder = mats.clone();
        placeholder.push(mat_identity(m));
        for r in rels.iter().filter(|r| r.iter().all(|(w, _)| w.iter().filter(|&&x| x == g).count() <= 1)) {
            let mut lin = vec![vec![0u32; n2]; n2];
            let mut constant = vec![0u32; n2];
            for (w, c) in r.iter() {
                match w.iter().position(|&x| x == g) {
                    None => {
                        let v = eval_word(&f, &placeholder, w, m);
                        for (k, x) in v.iter().enumerate() {
                            constant[k] = f.add(constant[k], f.mul(*c, *x));
                        }
                    }
                    Some(pos) => {
                        let left = eval_word(&f, &placeholder, &w[..pos], m);
                        let right = eval_word(&f, &placeholder, &w[pos + 1..], m);
                        for i in 0..m {
                            for j in 0..m {
                                for a in 0..m {
                                    let la = f.mul(*c, left[i * m + a]);
                                    if la == 0 {
                                        continue;
                                    }
                                    for b in 0..m {
                                        let coef = f.mul(la, right[b * m + j]);
                                        lin[i * m + j][a * m + b] = f.add(lin[i * m + j][a * m + b], coef);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            for k in 0..n2 {
                rows.push(lin[k].clone());
                rhs.push(f.neg(constant[k]));
            }
        }
        let (particular, basis) = if rows.is_empty() {
            (vec![0; n2], (0..n2).map(|k| (0..n2).map(|j| u32::from(j == k)).collect()).collect())
        } else {
            match solve_affine(&f, &rows, &rhs, n2) {
                Some(s) => s,
                None => return Ok(()),
            }
        };
        let q = f.size() as u64;
        let count = q.checked_pow(basis.len() as u32).ok_or_else(|| Error::Budget("affine space too large".into()))?;
        self.charge(count)?;
        for idx in 0..count {
            let mut rem = idx;
            let mut x = particular.clone();
            for b in &basis {
                let lam = (rem % q) as u32;
                rem /= q;
                if lam != 0 {
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi = f.add(*xi, f.mul(lam, *bi));
                    }
                }
            }
            mats.push(x);
            if self.passes(mats, &rels, &central) {
                self.run(mats, false)?;
            }
            mats.pop();
        }
        Ok(())
    }

    fn finish(&mut self, mats: &[Mat]) {
        let rep = SimpleModuleRep { dim: self.m, matrices: mats.to_vec() };
        let f = &self.cp.field;
        if !self.cp.relations.iter().all(|r| eval_poly(f, mats, r, self.m).iter().all(|&x| x == 0)) {
            return;
        }
        let Some(chi) = central_character(self.cp, &rep) else { return };
        let mut key = chi;
        for g in mats {
            key.push((0..self.m).fold(0, |acc, i| f.add(acc, g[i * self.m + i])));
        }
        // A nonzero map from a simple module of the same dimension is an
        // isomorphism, so the duplicate test may run before the simplicity test.
        let known = self.buckets.get(&key).is_some_and(|b| b.iter().any(|&i| hom_dim(self.cp, &self.found[i], &rep) > 0));
        if known || !is_absolutely_simple(self.cp, &rep) {
            return;
        }
        self.buckets.entry(key).or_default().push(self.found.len());
        self.found.push(rep);
    }
}

/// Absolutely simple representations of dimension exactly `m`, one per
/// isomorphism class.  The first non-scalar generator runs over rational
/// canonical forms; later generators run over the affine solution spaces of
/// the relations that are linear in them; every stage is filtered by the
/// relations and by the requirement that central elements act as scalars.
pub fn search_dimension(cp: &CompiledPresentation, m: usize, budget: u64) -> Result<SimpleSearch> {
    if m == 0 {
        return Ok(SimpleSearch { simples: vec![], candidates: 0 });
    }
    let forms = canonical_forms(&cp.field, m)?;
    let mut s = Search { cp, m, budget, candidates: 0, forms, found: Vec::new(), buckets: BTreeMap::new() };
    s.run(&mut Vec::new(), true)?;
    Ok(SimpleSearch { simples: s.found, candidates: s.candidates })
}

/// Absolutely simple representations of dimension `1..=max_dim`.
pub fn brute_force_simples(cp: &CompiledPresentation, max_dim: usize, budgets: &Budgets) -> Result<SimpleSearch> {
    if max_dim > budgets.max_dim {
        return Err(Error::Budget(format!("dimension {max_dim} exceeds {}", budgets.max_dim)));
    }
    if cp.field.size() as u64 > budgets.simple_field && max_dim > 1 {
        return Err(Error::Budget(format!("matrix search over a field of size {} exceeds {}", cp.field.size(), budgets.simple_field)));
    }
    let mut simples: Vec<SimpleModuleRep> = one_dim_points(cp, budgets)?
        .iter()
        .map(SimpleModuleRep::from_point)
        .filter(|r| central_character(cp, r).is_some())
        .collect();
    let mut candidates = simples.len() as u64;
    for m in 2..=max_dim {
        let s = search_dimension(cp, m, budgets.candidates)?;
        candidates += s.candidates;
        simples.extend(s.simples);
    }
    Ok(SimpleSearch { simples, candidates })
}

// ---------------------------------------------------------------------------
// Ext¹
// ---------------------------------------------------------------------------

/// Dimension of the space of `(T, S)`-derivations: maps `D` from generators
/// to `S.dim × T.dim` matrices with `D(uv) = S(u)D(v) + D(u)T(v)` that kill
/// every relation.  These are the extensions `0 → S → E → T → 0`.
pub fn cocycle_dim(cp: &CompiledPresentation, t: &SimpleModuleRep, s: &SimpleModuleRep) -> usize {
    let f = &cp.field;
    let (a, c) = (s.dim, t.dim);
    let block = a * c;
    let cols = cp.generators * block;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for r in &cp.relations {
        let mut eqs = vec![vec![0u32; cols]; block];
        for (w, coeff) in r {
            for (pos, &h) in w.iter().enumerate() {
                let left = eval_word(f, &s.matrices, &w[..pos], a);
                let right = eval_word(f, &t.matrices, &w[pos + 1..], c);
                // (L E R)[i][j] = Σ_{u,v} L[i][u] E[u][v] R[v][j].
                for i in 0..a {
                    for j in 0..c {
                        for u in 0..a {
                            let lu = f.mul(*coeff, left[i * a + u]);
                            if lu == 0 {
                                continue;
                            }
                            for v in 0..c {
                                let x = f.mul(lu, right[v * c + j]);
                                let col = h * block + u * c + v;
                                eqs[i * c + j][col] = f.add(eqs[i * c + j][col], x);
                            }
                        }
                    }
                }
            }
        }
        rows.extend(eqs);
    }
    cols - rank(f, &rows, cols)
}

/// Dimension of the inner derivations `g ↦ S(g)C − C T(g)`.
pub fn inner_dim(cp: &CompiledPresentation, t: &SimpleModuleRep, s: &SimpleModuleRep) -> usize {
    s.dim * t.dim - hom_dim(cp, t, s)
}

/// `dim Ext¹(T, S)`: cocycles modulo inner derivations.
pub fn ext1_dim(cp: &CompiledPresentation, t: &SimpleModuleRep, s: &SimpleModuleRep) -> usize {
    cocycle_dim(cp, t, s) - inner_dim(cp, t, s)
}

// ---------------------------------------------------------------------------
// Ext classes and series
// ---------------------------------------------------------------------------

/// The class of an `N × N` nonnegative integer matrix modulo permutations of
/// its entries: the sorted multiset of its `N²` entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExtClass(pub Vec<u64>);

impl ExtClass {
    /// Class of an `s × s` matrix zero-padded to `n × n` (`s ≤ n`; larger
    /// matrices keep their own size).
    pub fn from_matrix(matrix: &[Vec<u64>], n: usize) -> Self {
        let size = n.max(matrix.len());
        let mut entries: Vec<u64> = matrix.iter().flatten().copied().collect();
        entries.resize(size * size, 0);
        entries.sort_unstable();
        ExtClass(entries)
    }

    /// Sum of entries.
    pub fn trace(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// The trace function on a formal sum of classes.
pub fn trace_t(classes: &BTreeMap<ExtClass, u64>) -> u64 {
    classes.iter().map(|(c, m)| c.trace() * m).sum()
}

/// A truncated series `exp(Σ c_k t^k / k)` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaSeries {
    /// The counts `c_1, …, c_terms`.
    pub counts: Vec<i64>,
    /// Logarithm coefficients `c_k / k` for `k = 1..=terms`.
    pub log_coefficients: Vec<BigRational>,
    /// Coefficients of `t^0, …, t^terms` of the exponential.
    pub coefficients: Vec<BigRational>,
}

/// Exponential of a series without constant term, truncated at `terms`.
pub fn series_exp(log: &[BigRational]) -> Vec<BigRational> {
    let terms = log.len();
    let mut e = vec![BigRational::one()];
    for m in 1..=terms {
        let mut s = BigRational::zero();
        for k in 1..=m {
            s += BigRational::from_integer(BigInt::from(k)) * &log[k - 1] * &e[m - k];
        }
        e.push(s / BigRational::from_integer(BigInt::from(m)));
    }
    e
}

/// Logarithm of a series with constant term 1, truncated at its length.
pub fn series_log(e: &[BigRational]) -> Result<Vec<BigRational>> {
    if e.first() != Some(&BigRational::one()) {
        return Err(Error::Precondition("series logarithm needs constant term 1".into()));
    }
    let terms = e.len() - 1;
    let mut l: Vec<BigRational> = Vec::with_capacity(terms);
    for m in 1..=terms {
        let mut s = BigRational::from_integer(BigInt::from(m)) * &e[m];
        for k in 1..m {
            s -= BigRational::from_integer(BigInt::from(k)) * &l[k - 1] * &e[m - k];
        }
        l.push(s / BigRational::from_integer(BigInt::from(m)));
    }
    Ok(l)
}

impl ZetaSeries {
    /// Build from the counts `c_1, …, c_terms`.
    pub fn from_counts(counts: &[i64]) -> Self {
        let log: Vec<BigRational> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| BigRational::new(BigInt::from(c), BigInt::from(i + 1)))
            .collect();
        ZetaSeries { counts: counts.to_vec(), coefficients: series_exp(&log), log_coefficients: log }
    }

    /// Whether `log(exp(·))` reproduces the stored logarithm.
    pub fn round_trip_ok(&self) -> bool {
        series_log(&self.coefficients).map(|l| l == self.log_coefficients).unwrap_or(false)
    }

    /// Coefficients as strings.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }
}

// ---------------------------------------------------------------------------
// Zeta elements
// ---------------------------------------------------------------------------

/// Parameters of a zeta computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaConfig {
    /// Truncation degree.
    pub terms: usize,
    /// Largest module dimension searched.
    pub max_dim: usize,
    /// PI degree, if known (otherwise the largest dimension found).
    pub pi_degree: Option<usize>,
    /// Degree bound for the centre scan providing central characters.
    pub centre_degree: usize,
    /// Enumeration ceilings.
    pub budgets: Budgets,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig { terms: 3, max_dim: 3, pi_degree: None, centre_degree: 3, budgets: Budgets::from_env() }
    }
}

/// Data for one extension degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberLevel {
    /// Extension degree over the base field.
    pub k: usize,
    /// `q^k`.
    pub field_size: u64,
    /// Number of one-dimensional representations.
    pub one_dim_points: usize,
    /// Number of absolutely simple classes of dimension `1, 2, …`.
    pub simples_by_dim: Vec<usize>,
    /// Central points carrying at least one simple.
    pub central_points: usize,
    /// Ramified central points.
    pub ram_points: usize,
    /// Azumaya central points.
    pub azumaya_points: usize,
    /// `Σ_{ramified y} Σ_i dim(R/𝔭_i)`.
    pub ram_count: i64,
    /// Ext classes with multiplicities.
    pub ext_classes: Vec<(ExtClass, u64)>,
    /// Trace of the class sum.
    pub trace: u64,
    /// Whether the matrix search ran to completion at this level (otherwise
    /// only one-dimensional simples were used and the counts are lower bounds).
    pub complete: bool,
}

/// The zeta element of one fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaElement {
    /// Base field size `q`.
    pub q: u64,
    /// PI degree used.
    pub pi_degree: usize,
    /// Per-level data.
    pub levels: Vec<FiberLevel>,
    /// Ramification series.
    pub zeta_ram: ZetaSeries,
    /// Azumaya series.
    pub zeta_azu: ZetaSeries,
    /// Tangent series.
    pub zeta_tangent: ZetaSeries,
    /// Central elements used for central characters.
    pub central_elements: Vec<String>,
}

impl ZetaElement {
    /// The logarithmic tangent element: per `k`, the class sum with weight `1/k`.
    pub fn log_tangent(&self) -> Vec<(usize, BigRational, Vec<(ExtClass, u64)>)> {
        self.levels
            .iter()
            .map(|l| (l.k, BigRational::new(BigInt::one(), BigInt::from(l.k)), l.ext_classes.clone()))
            .collect()
    }

    /// Whether every level was computed completely.
    pub fn complete(&self) -> bool {
        self.levels.iter().all(|l| l.complete)
    }
}

/// Base field `(p, d)` of a presentation over `𝔽_{p^d}`.
pub fn base_field(ring: &Ring) -> Result<(u64, u32)> {
    match ring.kind() {
        RingKind::PrimeField { p } => Ok((*p, 1)),
        RingKind::ExtField { p, modulus, .. } => Ok((*p, (modulus.len() - 1) as u32)),
        _ => Err(Error::Unsupported(format!("zeta computations need a finite coefficient field, got {ring}"))),
    }
}

/// Non-constant central elements supported in degree `≤ d`.
pub fn central_elements(p: &NCPresentation, d: usize) -> Result<Vec<NCPolynomial>> {
    Ok(p.centre_scan(d)?.into_iter().filter(|c| c.terms().any(|(w, _)| !w.is_empty())).collect())
}

struct LevelData {
    k: usize,
    cp: CompiledPresentation,
    points: usize,
    simples: Vec<SimpleModuleRep>,
    complete: bool,
}

/// Compute the zeta element of a presentation over a finite field.
pub fn zeta_element(p: &NCPresentation, config: &ZetaConfig) -> Result<ZetaElement> {
    let (prime, d) = base_field(p.ring())?;
    let q = prime.pow(d);
    let central = central_elements(p, config.centre_degree)?;
    let mut data = Vec::new();
    for k in 1..=config.terms {
        let size = q.checked_pow(k as u32).ok_or_else(|| Error::Budget("field size overflow".into()))?;
        if size > config.budgets.point_field {
            return Err(Error::Budget(format!("q^k = {size} exceeds the point budget {}", config.budgets.point_field)));
        }
        let field = FiniteField::new(prime, d * k as u32)?;
        let cp = CompiledPresentation::new(p, &field, &central)?;
        let points = one_dim_points(&cp, &config.budgets)?;
        let (simples, complete) = if config.max_dim <= 1 {
            (brute_force_simples(&cp, 1, &config.budgets)?.simples, true)
        } else {
            match brute_force_simples(&cp, config.max_dim, &config.budgets) {
                Ok(s) => (s.simples, true),
                Err(Error::Budget(_)) => (brute_force_simples(&cp, 1, &config.budgets)?.simples, false),
                Err(e) => return Err(e),
            }
        };
        data.push(LevelData { k, cp, points: points.len(), simples, complete });
    }
    let pi_degree = config
        .pi_degree
        .unwrap_or_else(|| data.iter().flat_map(|l| l.simples.iter().map(|s| s.dim)).max().unwrap_or(1));
    let mut levels = Vec::new();
    for l in &data {
        let mut by_point: BTreeMap<Vec<u32>, Vec<&SimpleModuleRep>> = BTreeMap::new();
        for s in &l.simples {
            let chi = central_character(&l.cp, s).expect("simples have scalar central characters");
            by_point.entry(chi).or_default().push(s);
        }
        let mut simples_by_dim = vec![0; config.max_dim.max(1)];
        for s in &l.simples {
            if s.dim >= 1 && s.dim <= simples_by_dim.len() {
                simples_by_dim[s.dim - 1] += 1;
            }
        }
        let mut ram_points = 0;
        let mut azu = 0;
        let mut ram_count = 0i64;
        let mut classes: BTreeMap<ExtClass, u64> = BTreeMap::new();
        for simples in by_point.values() {
            if simples.len() == 1 && simples[0].dim == pi_degree {
                azu += 1;
                continue;
            }
            ram_points += 1;
            ram_count += simples.iter().map(|s| (s.dim * s.dim) as i64).sum::<i64>();
            let mut sorted = simples.clone();
            sorted.sort_by(|a, b| (a.dim, &a.matrices).cmp(&(b.dim, &b.matrices)));
            let matrix: Vec<Vec<u64>> = sorted
                .iter()
                .map(|mi| sorted.iter().map(|mj| ext1_dim(&l.cp, mi, mj) as u64).collect())
                .collect();
            *classes.entry(ExtClass::from_matrix(&matrix, pi_degree)).or_default() += 1;
        }
        let trace = trace_t(&classes);
        levels.push(FiberLevel {
            k: l.k,
            field_size: l.cp.field.size() as u64,
            one_dim_points: l.points,
            simples_by_dim,
            central_points: by_point.len(),
            ram_points,
            azumaya_points: azu,
            ram_count,
            ext_classes: classes.into_iter().collect(),
            trace,
            complete: l.complete,
        });
    }
    let ram: Vec<i64> = levels.iter().map(|l| l.ram_count).collect();
    let azu: Vec<i64> = levels.iter().map(|l| l.azumaya_points as i64).collect();
    let tan: Vec<i64> = levels.iter().map(|l| l.trace as i64).collect();
    Ok(ZetaElement {
        q,
        pi_degree,
        zeta_ram: ZetaSeries::from_counts(&ram),
        zeta_azu: ZetaSeries::from_counts(&azu),
        zeta_tangent: ZetaSeries::from_counts(&tan),
        levels,
        central_elements: central.iter().map(|c| c.format(p.labels())).collect(),
    })
}

/// Ramification series alone.
pub fn zeta_ram(p: &NCPresentation, config: &ZetaConfig) -> Result<ZetaSeries> {
    Ok(zeta_element(p, config)?.zeta_ram)
}

/// Azumaya series alone.
pub fn zeta_azu(p: &NCPresentation, config: &ZetaConfig) -> Result<ZetaSeries> {
    Ok(zeta_element(p, config)?.zeta_azu)
}

/// Tangent series alone.
pub fn zeta_tangent(p: &NCPresentation, config: &ZetaConfig) -> Result<ZetaSeries> {
    Ok(zeta_element(p, config)?.zeta_tangent)
}

/// A formal product of fibre zeta elements over distinct primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticProduct {
    /// `(prime, zeta element)` in increasing prime order.
    pub fibers: Vec<(u64, ZetaElement)>,
}

/// Assemble the formal product; repeated primes are rejected.
pub fn arithmetic_product(mut fibers: Vec<(u64, ZetaElement)>) -> Result<ArithmeticProduct> {
    fibers.sort_by_key(|(p, _)| *p);
    for w in fibers.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::InvalidConstruction(format!("prime {} repeated", w[0].0)));
        }
    }
    for (p, z) in &fibers {
        if !fp::is_prime(*p) || z.q % p != 0 {
            return Err(Error::InvalidConstruction(format!("fibre over {p} has q = {}", z.q)));
        }
    }
    Ok(ArithmeticProduct { fibers })
}

/// The simplified Jackson presentation over `𝔽_p` with `ξ` of order `n`
/// (default: the smallest such residue) and the given `b`.
pub fn jackson_fiber(n: usize, p: u64, xi: Option<u64>, b: i64) -> Result<NCPresentation> {
    if !fp::is_prime(p) {
        return Err(Error::Unsupported(format!("q = {p}: Jackson fibres are built over prime fields")));
    }
    let ring = Ring::prime_field(p)?;
    let xi = match xi {
        Some(x) => x % p,
        None => crate::covers::primitive_root_mod(p, n as u64)?,
    };
    let order = (1..=p).find(|&e| fp::pow_mod(xi, e, p) == 1).unwrap_or(0);
    if xi == 0 || order != n as u64 {
        return Err(Error::Precondition(format!("{xi} does not have multiplicative order {n} modulo {p}")));
    }
    crate::enveloping::jackson_presentation(&ring.int(xi as i64), &ring.int(b), crate::enveloping::jackson_labels(n))
}

/// Format a point with the field's element display.
pub fn format_point(field: &FiniteField, p: &CharacterPoint) -> Vec<String> {
    p.values.iter().map(|&v| field.format(v)).collect()
}

/// Build a [`Word`]-keyed polynomial over a finite field from a presentation
/// polynomial (convenience for callers holding an [`NCPolynomial`]).
pub fn compile_element(p: &NCPresentation, field: &FiniteField, x: &NCPolynomial) -> Result<FieldPoly> {
    let embed = embedding(p.ring(), field)?;
    compile_poly(x, &*embed)
}

/// The word list of a field polynomial (for display).
pub fn field_poly_words(p: &FieldPoly) -> Vec<Word> {
    p.iter().map(|(w, _)| Word(w.clone())).collect()
}

#[cfg(test)]
mod tests;
