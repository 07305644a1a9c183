//! Ring descriptors and raw element arithmetic.
//!
//! A [`Ring`] is an immutable, cheaply clonable description of one level of a
//! tower (integers, rationals, prime and extension fields, cyclotomic
//! quotients, sparse multivariate polynomials with optional Laurent variables
//! and monic univariate relations, fraction fields).  Elements are stored as
//! canonical [`Value`]s, so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fp;
use super::linsolve::solve_square;
use super::upoly;
use crate::error::{Error, Result};

/// Exponent vector of a monomial; negative entries only for Laurent variables.
pub type Exps = Vec<i32>;

/// Canonical element representation.  Which variant is used is determined by
/// the owning ring's kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    /// Element of the integers.
    Int(BigInt),
    /// Element of the rationals (always reduced).
    Rat(BigRational),
    /// Element of a prime field, in `0..p`.
    Fp(u64),
    /// Element of `F_p[x]/(f)`, coefficients low degree first, trimmed.
    Ext(Vec<u64>),
    /// Element of `base[x]/(Phi_n)`, coefficients low degree first, trimmed.
    Cyclo(Vec<Value>),
    /// Sparse polynomial: terms sorted by descending graded-lex order, no zero
    /// coefficients, already reduced modulo the variable relations.
    Poly(Vec<(Exps, Value)>),
    /// Fraction `num/den` in lowest terms with a normalised denominator.
    Frac(Box<Value>, Box<Value>),
}

/// One variable of a polynomial level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVar {
    /// Display and parse name.
    pub name: String,
    /// Whether negative exponents are allowed (the variable is inverted).
    pub laurent: bool,
    /// Optional monic univariate relation `x^d + c_{d-1} x^{d-1} + ... + c_0`,
    /// stored as `[c_0, ..., c_{d-1}, 1]` with coefficients in the base ring.
    pub relation: Option<Vec<Value>>,
}

impl PolyVar {
    /// A plain polynomial variable.
    pub fn plain(name: &str) -> Self {
        PolyVar { name: name.to_string(), laurent: false, relation: None }
    }
    /// An invertible (Laurent) variable.
    pub fn laurent(name: &str) -> Self {
        PolyVar { name: name.to_string(), laurent: true, relation: None }
    }
}

/// The kind of one tower level.
#[derive(Debug, PartialEq, Eq)]
pub enum RingKind {
    /// The integers.
    Integers,
    /// The rational numbers.
    Rationals,
    /// `F_p`, `p` prime.
    PrimeField { p: u64 },
    /// `F_p[x]/(f)` with `f` monic irreducible; `modulus` is low degree first.
    ExtField { p: u64, modulus: Vec<u64>, var: String },
    /// `base[x]/(Phi_n(x))`.
    Cyclotomic { n: u64, base: Ring, var: String, phi: Vec<Value> },
    /// Sparse multivariate polynomials over `base`.
    Polynomial { base: Ring, vars: Vec<PolyVar> },
    /// Fraction field of `base`.
    Fraction { base: Ring },
}

/// Shared handle to a ring descriptor.
#[derive(Clone)]
pub struct Ring(pub(crate) Arc<RingKind>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            RingKind::Integers => write!(f, "ZZ"),
            RingKind::Rationals => write!(f, "QQ"),
            RingKind::PrimeField { p } => write!(f, "GF({p})"),
            RingKind::ExtField { p, modulus, var } => {
                write!(f, "GF({p}^{})[{var}]", modulus.len() - 1)
            }
            RingKind::Cyclotomic { n, base, var, .. } => write!(f, "{base}[{var}]/Phi_{n}"),
            RingKind::Polynomial { base, vars } => {
                let names: Vec<String> = vars
                    .iter()
                    .map(|v| {
                        if v.laurent {
                            format!("{}^+-1", v.name)
                        } else if v.relation.is_some() {
                            format!("{}(rel)", v.name)
                        } else {
                            v.name.clone()
                        }
                    })
                    .collect();
                write!(f, "{base}[{}]", names.join(","))
            }
            RingKind::Fraction { base } => write!(f, "Frac({base})"),
        }
    }
}

/// Graded-lex comparison of exponent vectors (total degree first, then
/// lexicographic with the first variable most significant).
pub fn grlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn int_poly_div_exact(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    // g is monic.
    let dg = g.len() - 1;
    let mut r: Vec<BigInt> = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - dg];
    for i in (0..q.len()).rev() {
        let c = r[i + dg].clone();
        q[i] = c.clone();
        for (j, gj) in g.iter().enumerate() {
            r[i + j] -= &c * gj;
        }
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for p in fp::prime_factors(n) {
        r = r / p * (p - 1);
    }
    r
}

impl Ring {
    fn wrap(kind: RingKind) -> Ring {
        Ring(Arc::new(kind))
    }

    /// The integers.
    pub fn integers() -> Ring {
        Ring::wrap(RingKind::Integers)
    }

    /// The rationals.
    pub fn rationals() -> Ring {
        Ring::wrap(RingKind::Rationals)
    }

    /// The prime field `F_p`.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !fp::is_prime(p) {
            return Err(Error::InvalidConstruction(format!("{p} is not prime")));
        }
        Ok(Ring::wrap(RingKind::PrimeField { p }))
    }

    /// `F_p[var]/(modulus)`; the modulus must be monic and irreducible.
    pub fn ext_field(p: u64, modulus: Vec<u64>, var: &str) -> Result<Ring> {
        if !fp::is_prime(p) {
            return Err(Error::InvalidConstruction(format!("{p} is not prime")));
        }
        let modulus: Vec<u64> = fp::trim(modulus.into_iter().map(|c| c % p).collect());
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidConstruction(
                "extension modulus must be monic of degree >= 1".into(),
            ));
        }
        if !fp::is_irreducible(&modulus, p) {
            return Err(Error::InvalidConstruction(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(Ring::wrap(RingKind::ExtField { p, modulus, var: var.to_string() }))
    }

    /// `base[var]/(Phi_n(var))`.
    pub fn cyclotomic(base: &Ring, n: u64, var: &str) -> Result<Ring> {
        if n < 1 {
            return Err(Error::InvalidConstruction("cyclotomic order must be >= 1".into()));
        }
        let ring = Ring::wrap(RingKind::Cyclotomic {
            n,
            base: base.clone(),
            var: var.to_string(),
            phi: cyclotomic_polynomial(n).iter().map(|c| base.from_bigint(c)).collect(),
        });
        ring.check_names()?;
        Ok(ring)
    }

    /// Ordinary polynomial ring over `base` in the named variables.
    pub fn polynomial(base: &Ring, vars: &[&str]) -> Result<Ring> {
        Ring::polynomial_with(base, vars.iter().map(|v| PolyVar::plain(v)).collect())
    }

    /// Laurent polynomial ring over `base` in the named variables.
    pub fn laurent(base: &Ring, vars: &[&str]) -> Result<Ring> {
        Ring::polynomial_with(base, vars.iter().map(|v| PolyVar::laurent(v)).collect())
    }

    /// General polynomial level with per-variable Laurent flags and relations.
    pub fn polynomial_with(base: &Ring, vars: Vec<PolyVar>) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::InvalidConstruction("polynomial ring needs a variable".into()));
        }
        for v in &vars {
            if let Some(rel) = &v.relation {
                if v.laurent {
                    return Err(Error::InvalidConstruction(format!(
                        "variable {} cannot be both Laurent and constrained",
                        v.name
                    )));
                }
                if rel.len() < 2 || rel.last() != Some(&base.one()) {
                    return Err(Error::InvalidConstruction(format!(
                        "relation on {} must be monic of degree >= 1",
                        v.name
                    )));
                }
            }
        }
        let ring = Ring::wrap(RingKind::Polynomial { base: base.clone(), vars });
        ring.check_names()?;
        Ok(ring)
    }

    /// Fraction field of a gcd domain: the integers, a field, or univariate
    /// polynomials over a field.
    pub fn fraction(base: &Ring) -> Result<Ring> {
        let ok = match &*base.0 {
            RingKind::Integers => true,
            _ if base.is_field() => true,
            RingKind::Polynomial { base: b, vars } => {
                vars.len() == 1 && !vars[0].laurent && vars[0].relation.is_none() && b.is_field()
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Unsupported(format!(
                "fraction field of {base} (only ZZ, fields and univariate polynomials over a field)"
            )));
        }
        Ok(Ring::wrap(RingKind::Fraction { base: base.clone() }))
    }

    fn check_names(&self) -> Result<()> {
        let names = self.generator_names();
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::InvalidConstruction(format!("duplicate generator name {n}")));
            }
        }
        Ok(())
    }

    /// The descriptor of this level.
    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    /// The ring one level down, if any.
    pub fn base(&self) -> Option<&Ring> {
        match &*self.0 {
            RingKind::Cyclotomic { base, .. }
            | RingKind::Polynomial { base, .. }
            | RingKind::Fraction { base } => Some(base),
            _ => None,
        }
    }

    /// Characteristic (0 for characteristic zero).
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            RingKind::Integers | RingKind::Rationals => 0,
            RingKind::PrimeField { p } | RingKind::ExtField { p, .. } => *p,
            _ => self.base().unwrap().characteristic(),
        }
    }

    /// Whether this ring is known to be a field.
    pub fn is_field(&self) -> bool {
        match &*self.0 {
            RingKind::Rationals | RingKind::PrimeField { .. } | RingKind::ExtField { .. } => true,
            RingKind::Fraction { .. } => true,
            RingKind::Cyclotomic { base, .. } => base.is_field() && self.is_domain(),
            _ => false,
        }
    }

    /// Whether this ring is known to be an integral domain.
    pub fn is_domain(&self) -> bool {
        match &*self.0 {
            RingKind::Integers
            | RingKind::Rationals
            | RingKind::PrimeField { .. }
            | RingKind::ExtField { .. }
            | RingKind::Fraction { .. } => true,
            RingKind::Cyclotomic { base, .. } => {
                base.characteristic() == 0 && base.is_domain() && !base.has_cyclotomic_level()
            }
            RingKind::Polynomial { base, vars } => {
                base.is_domain() && vars.iter().all(|v| v.relation.is_none())
            }
        }
    }

    fn has_cyclotomic_level(&self) -> bool {
        match &*self.0 {
            RingKind::Cyclotomic { .. } => true,
            _ => self.base().map(|b| b.has_cyclotomic_level()).unwrap_or(false),
        }
    }

    /// Names of all generators of the tower, innermost level first.
    pub fn generator_names(&self) -> Vec<String> {
        let mut out = self.base().map(|b| b.generator_names()).unwrap_or_default();
        match &*self.0 {
            RingKind::ExtField { var, .. } | RingKind::Cyclotomic { var, .. } => {
                out.push(var.clone())
            }
            RingKind::Polynomial { vars, .. } => {
                out.extend(vars.iter().map(|v| v.name.clone()))
            }
            _ => {}
        }
        out
    }

    /// Generator named `name`, as an element of this ring.
    pub fn generator(&self, name: &str) -> Option<Value> {
        match &*self.0 {
            RingKind::ExtField { var, modulus, .. } if var == name => {
                if modulus.len() == 2 {
                    Some(Value::Ext(fp::trim(vec![(self.characteristic() - modulus[0])
                        % self.characteristic()])))
                } else {
                    Some(Value::Ext(vec![0, 1]))
                }
            }
            RingKind::Cyclotomic { var, .. } if var == name => {
                Some(self.cyclo_normalize(vec![self.base().unwrap().zero(), self.base().unwrap().one()]))
            }
            RingKind::Polynomial { vars, base } => {
                if let Some(i) = vars.iter().position(|v| v.name == name) {
                    let mut e = vec![0; vars.len()];
                    e[i] = 1;
                    return Some(self.poly_normalize(vec![(e, base.one())]));
                }
                base.generator(name).map(|v| self.embed_base(&v))
            }
            _ => self.base().and_then(|b| b.generator(name)).map(|v| self.embed_base(&v)),
        }
    }

    /// Embed an element of the immediate base ring.
    pub fn embed_base(&self, v: &Value) -> Value {
        match &*self.0 {
            RingKind::Cyclotomic { .. } => self.cyclo_normalize(vec![v.clone()]),
            RingKind::Polynomial { vars, .. } => {
                self.poly_normalize(vec![(vec![0; vars.len()], v.clone())])
            }
            RingKind::Fraction { base } => self.frac_make(v.clone(), base.one()).unwrap(),
            _ => panic!("embed_base on a base ring"),
        }
    }

    /// Embed an element of any lower level `level` of the tower.
    pub fn embed_from(&self, level: &Ring, v: &Value) -> Result<Value> {
        if self == level {
            return Ok(v.clone());
        }
        match self.base() {
            Some(b) => Ok(self.embed_base(&b.embed_from(level, v)?)),
            None => Err(Error::RingMismatch(format!("{level} is not a level of {self}"))),
        }
    }

    // ------------------------------------------------------------------
    // Constants.
    // ------------------------------------------------------------------

    /// Additive identity.
    pub fn zero(&self) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(BigInt::zero()),
            RingKind::Rationals => Value::Rat(BigRational::zero()),
            RingKind::PrimeField { .. } => Value::Fp(0),
            RingKind::ExtField { .. } => Value::Ext(Vec::new()),
            RingKind::Cyclotomic { .. } => Value::Cyclo(Vec::new()),
            RingKind::Polynomial { .. } => Value::Poly(Vec::new()),
            RingKind::Fraction { base } => {
                Value::Frac(Box::new(base.zero()), Box::new(base.one()))
            }
        }
    }

    /// Multiplicative identity.
    pub fn one(&self) -> Value {
        self.from_bigint(&BigInt::one())
    }

    /// Image of an integer.
    pub fn from_i64(&self, n: i64) -> Value {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer.
    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(n.clone()),
            RingKind::Rationals => Value::Rat(BigRational::from_integer(n.clone())),
            RingKind::PrimeField { p } => Value::Fp(reduce_bigint(n, *p)),
            RingKind::ExtField { p, .. } => Value::Ext(fp::trim(vec![reduce_bigint(n, *p)])),
            _ => {
                let b = self.base().unwrap().from_bigint(n);
                self.embed_base(&b)
            }
        }
    }

    /// Image of a rational number (fails if the denominator is not invertible).
    pub fn from_rational(&self, q: &BigRational) -> Result<Value> {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        self.div_exact(&n, &d)
    }

    /// Whether `v` is zero.
    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Int(z) => z.is_zero(),
            Value::Rat(q) => q.is_zero(),
            Value::Fp(x) => *x == 0,
            Value::Ext(c) => c.is_empty(),
            Value::Cyclo(c) => c.is_empty(),
            Value::Poly(t) => t.is_empty(),
            Value::Frac(n, _) => self.base().unwrap().is_zero(n),
        }
    }

    /// Whether `v` is one.
    pub fn is_one(&self, v: &Value) -> bool {
        *v == self.one()
    }

    // ------------------------------------------------------------------
    // Ring operations.
    // ------------------------------------------------------------------

    /// Sum.
    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (RingKind::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            (RingKind::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (RingKind::PrimeField { p }, Value::Fp(x), Value::Fp(y)) => Value::Fp((x + y) % p),
            (RingKind::ExtField { p, .. }, Value::Ext(x), Value::Ext(y)) => {
                Value::Ext(fp::add(x, y, *p))
            }
            (RingKind::Cyclotomic { base, .. }, Value::Cyclo(x), Value::Cyclo(y)) => {
                let n = x.len().max(y.len());
                let z = base.zero();
                let c: Vec<Value> = (0..n)
                    .map(|i| base.add(x.get(i).unwrap_or(&z), y.get(i).unwrap_or(&z)))
                    .collect();
                Value::Cyclo(trim_values(base, c))
            }
            (RingKind::Polynomial { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(poly_merge(base, x, y, false))
            }
            (RingKind::Fraction { base }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                if d1 == d2 {
                    self.frac_make(base.add(n1, n2), (**d1).clone()).unwrap()
                } else {
                    let n = base.add(&base.mul(n1, d2), &base.mul(n2, d1));
                    self.frac_make(n, base.mul(d1, d2)).unwrap()
                }
            }
            _ => panic!("value/ring mismatch in add on {self}"),
        }
    }

    /// Negation.
    pub fn neg(&self, a: &Value) -> Value {
        match (&*self.0, a) {
            (RingKind::Integers, Value::Int(x)) => Value::Int(-x),
            (RingKind::Rationals, Value::Rat(x)) => Value::Rat(-x),
            (RingKind::PrimeField { p }, Value::Fp(x)) => Value::Fp((p - x) % p),
            (RingKind::ExtField { p, .. }, Value::Ext(x)) => {
                Value::Ext(x.iter().map(|c| (p - c) % p).collect())
            }
            (RingKind::Cyclotomic { base, .. }, Value::Cyclo(x)) => {
                Value::Cyclo(x.iter().map(|c| base.neg(c)).collect())
            }
            (RingKind::Polynomial { base, .. }, Value::Poly(x)) => {
                Value::Poly(x.iter().map(|(e, c)| (e.clone(), base.neg(c))).collect())
            }
            (RingKind::Fraction { base }, Value::Frac(n, d)) => {
                Value::Frac(Box::new(base.neg(n)), d.clone())
            }
            _ => panic!("value/ring mismatch in neg on {self}"),
        }
    }

    /// Difference.
    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (RingKind::Polynomial { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(poly_merge(base, x, y, true))
            }
            _ => self.add(a, &self.neg(b)),
        }
    }

    /// Product.
    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (RingKind::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x * y),
            (RingKind::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (RingKind::PrimeField { p }, Value::Fp(x), Value::Fp(y)) => {
                Value::Fp(fp::mul_mod(*x, *y, *p))
            }
            (RingKind::ExtField { p, modulus, .. }, Value::Ext(x), Value::Ext(y)) => {
                Value::Ext(fp::rem(&fp::mul(x, y, *p), modulus, *p))
            }
            (RingKind::Cyclotomic { base, .. }, Value::Cyclo(x), Value::Cyclo(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Value::Cyclo(Vec::new());
                }
                let mut c = vec![base.zero(); x.len() + y.len() - 1];
                for (i, xi) in x.iter().enumerate() {
                    if base.is_zero(xi) {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        c[i + j] = base.add(&c[i + j], &base.mul(xi, yj));
                    }
                }
                self.cyclo_normalize(c)
            }
            (RingKind::Polynomial { base, vars }, Value::Poly(x), Value::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Value::Poly(Vec::new());
                }
                if x.len() == 1 && x[0].0.iter().all(|&e| e == 0) {
                    return self.poly_scale(&x[0].1, y);
                }
                if y.len() == 1 && y[0].0.iter().all(|&e| e == 0) {
                    return self.poly_scale(&y[0].1, x);
                }
                let mut acc: HashMap<Exps, Value> = HashMap::new();
                for (ex, cx) in x {
                    for (ey, cy) in y {
                        let e: Exps = ex.iter().zip(ey).map(|(a, b)| a + b).collect();
                        let c = base.mul(cx, cy);
                        match acc.get_mut(&e) {
                            Some(v) => *v = base.add(v, &c),
                            None => {
                                acc.insert(e, c);
                            }
                        }
                    }
                }
                let has_rel = vars.iter().any(|v| v.relation.is_some());
                let terms: Vec<(Exps, Value)> = acc.into_iter().collect();
                if has_rel {
                    self.poly_normalize(terms)
                } else {
                    Value::Poly(sort_terms(base, terms))
                }
            }
            (RingKind::Fraction { base }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                self.frac_make(base.mul(n1, n2), base.mul(d1, d2)).unwrap()
            }
            _ => panic!("value/ring mismatch in mul on {self}"),
        }
    }

    fn poly_scale(&self, c: &Value, x: &[(Exps, Value)]) -> Value {
        let base = self.base().unwrap();
        let terms: Vec<(Exps, Value)> =
            x.iter().map(|(e, v)| (e.clone(), base.mul(c, v))).collect();
        if base.is_domain() {
            Value::Poly(terms.into_iter().filter(|(_, v)| !base.is_zero(v)).collect())
        } else {
            self.poly_normalize(terms)
        }
    }

    /// Power with a non-negative exponent.
    pub fn pow(&self, a: &Value, mut e: u64) -> Value {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    /// Power with a possibly negative exponent (requires a unit for `e < 0`).
    pub fn pow_signed(&self, a: &Value, e: i64) -> Result<Value> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            let inv = self.inverse(a)?;
            Ok(self.pow(&inv, e.unsigned_abs()))
        }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self, a: &Value) -> Result<Value> {
        self.div_exact(&self.one(), a)
    }

    /// Whether `a` is a unit.
    pub fn is_unit(&self, a: &Value) -> bool {
        !self.is_zero(a) && self.inverse(a).is_ok()
    }

    /// Exact quotient `a / b`; fails if no quotient exists in this ring.
    pub fn div_exact(&self, a: &Value, b: &Value) -> Result<Value> {
        if self.is_zero(b) {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero(a) {
            return Ok(self.zero());
        }
        match (&*self.0, a, b) {
            (RingKind::Integers, Value::Int(x), Value::Int(y)) => {
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Ok(Value::Int(q))
                } else {
                    Err(Error::NotDivisible(format!("{x} by {y} in ZZ")))
                }
            }
            (RingKind::Rationals, Value::Rat(x), Value::Rat(y)) => Ok(Value::Rat(x / y)),
            (RingKind::PrimeField { p }, Value::Fp(x), Value::Fp(y)) => {
                Ok(Value::Fp(fp::mul_mod(*x, fp::inv_mod(*y, *p), *p)))
            }
            (RingKind::ExtField { p, modulus, .. }, Value::Ext(_), Value::Ext(_)) => {
                let d = modulus.len() - 1;
                let fpr = Ring::wrap(RingKind::PrimeField { p: *p });
                self.finite_level_div(&fpr, d, a, b)
            }
            (RingKind::Cyclotomic { base, phi, .. }, Value::Cyclo(_), Value::Cyclo(y)) => {
                if y.len() == 1 {
                    if let Value::Cyclo(x) = a {
                        let c: Result<Vec<Value>> =
                            x.iter().map(|xi| base.div_exact(xi, &y[0])).collect();
                        return Ok(Value::Cyclo(trim_values(base, c?)));
                    }
                }
                self.finite_level_div(base, phi.len() - 1, a, b)
            }
            (RingKind::Polynomial { .. }, Value::Poly(_), Value::Poly(_)) => self.poly_div(a, b),
            (RingKind::Fraction { base }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                self.frac_make(base.mul(n1, d2), base.mul(d1, n2))
            }
            _ => panic!("value/ring mismatch in div_exact on {self}"),
        }
    }

    // ------------------------------------------------------------------
    // Finite free levels (extension fields, cyclotomic quotients, and
    // polynomial levels whose variables all carry relations).
    // ------------------------------------------------------------------

    /// Coordinates of `v` in the monomial basis of a finite free level.
    pub(crate) fn level_coords(&self, v: &Value) -> Vec<Value> {
        match (&*self.0, v) {
            (RingKind::ExtField { p: _, modulus, .. }, Value::Ext(c)) => {
                let d = modulus.len() - 1;
                (0..d).map(|i| Value::Fp(c.get(i).copied().unwrap_or(0))).collect()
            }
            (RingKind::Cyclotomic { base, phi, .. }, Value::Cyclo(c)) => {
                let d = phi.len() - 1;
                (0..d).map(|i| c.get(i).cloned().unwrap_or_else(|| base.zero())).collect()
            }
            (RingKind::Polynomial { base, .. }, Value::Poly(terms)) => {
                let basis = self.finite_basis_exps().expect("finite level");
                let mut out = vec![base.zero(); basis.len()];
                for (e, c) in terms {
                    let k = basis.iter().position(|b| b == e).expect("reduced monomial");
                    out[k] = c.clone();
                }
                out
            }
            _ => panic!("level_coords on a non-finite level"),
        }
    }

    /// Element with the given coordinates in the monomial basis of a finite level.
    pub(crate) fn from_level_coords(&self, c: Vec<Value>) -> Value {
        match &*self.0 {
            RingKind::ExtField { .. } => Value::Ext(fp::trim(
                c.into_iter()
                    .map(|v| match v {
                        Value::Fp(x) => x,
                        _ => panic!("expected F_p coordinate"),
                    })
                    .collect(),
            )),
            RingKind::Cyclotomic { base, .. } => Value::Cyclo(trim_values(base, c)),
            RingKind::Polynomial { .. } => {
                let basis = self.finite_basis_exps().expect("finite level");
                self.poly_normalize(basis.into_iter().zip(c).collect())
            }
            _ => panic!("from_level_coords on a non-finite level"),
        }
    }

    /// For polynomial levels whose variables all carry relations, the exponent
    /// vectors of the monomial basis (in a fixed deterministic order).
    pub(crate) fn finite_basis_exps(&self) -> Option<Vec<Exps>> {
        if let RingKind::Polynomial { vars, .. } = &*self.0 {
            let mut degs = Vec::new();
            for v in vars {
                degs.push(v.relation.as_ref()?.len() as i32 - 1);
            }
            let mut out: Vec<Exps> = vec![vec![]];
            for d in degs {
                let mut next = Vec::new();
                for e in &out {
                    for k in 0..d {
                        let mut e2 = e.clone();
                        e2.push(k);
                        next.push(e2);
                    }
                }
                out = next;
            }
            Some(out)
        } else {
            None
        }
    }

    fn finite_level_div(&self, base: &Ring, dim: usize, a: &Value, b: &Value) -> Result<Value> {
        // Solve (b * x) = a in the basis: column j holds the coordinates of b * e_j.
        let basis_elems: Vec<Value> = (0..dim)
            .map(|j| {
                let mut c = vec![base.zero(); dim];
                c[j] = base.one();
                self.from_level_coords(c)
            })
            .collect();
        let cols: Vec<Vec<Value>> =
            basis_elems.iter().map(|e| self.level_coords(&self.mul(b, e))).collect();
        let m: Vec<Vec<Value>> =
            (0..dim).map(|i| (0..dim).map(|j| cols[j][i].clone()).collect()).collect();
        let rhs = self.level_coords(a);
        let x = solve_square(base, m, rhs)
            .map_err(|e| Error::NotDivisible(format!("in {self}: {e}")))?;
        Ok(self.from_level_coords(x))
    }

    // ------------------------------------------------------------------
    // Cyclotomic helpers.
    // ------------------------------------------------------------------

    pub(crate) fn cyclo_normalize(&self, mut c: Vec<Value>) -> Value {
        if let RingKind::Cyclotomic { base, phi, .. } = &*self.0 {
            let d = phi.len() - 1;
            while c.len() > d {
                let top = c.pop().unwrap();
                if base.is_zero(&top) {
                    continue;
                }
                let k = c.len() - d;
                for (j, pj) in phi.iter().take(d).enumerate() {
                    c[k + j] = base.sub(&c[k + j], &base.mul(&top, pj));
                }
            }
            Value::Cyclo(trim_values(base, c))
        } else {
            panic!("cyclo_normalize on {self}")
        }
    }

    // ------------------------------------------------------------------
    // Polynomial helpers.
    // ------------------------------------------------------------------

    /// Combine like terms, reduce modulo relations, drop zeros and sort.
    pub(crate) fn poly_normalize(&self, terms: Vec<(Exps, Value)>) -> Value {
        let (base, vars) = match &*self.0 {
            RingKind::Polynomial { base, vars } => (base, vars),
            _ => panic!("poly_normalize on {self}"),
        };
        let mut acc: HashMap<Exps, Value> = HashMap::new();
        let mut stack = terms;
        while let Some((e, c)) = stack.pop() {
            if base.is_zero(&c) {
                continue;
            }
            let mut reduced = false;
            for (vi, v) in vars.iter().enumerate() {
                if let Some(rel) = &v.relation {
                    let d = rel.len() as i32 - 1;
                    if e[vi] >= d {
                        for (i, ci) in rel.iter().take(d as usize).enumerate() {
                            if base.is_zero(ci) {
                                continue;
                            }
                            let mut e2 = e.clone();
                            e2[vi] = e[vi] - d + i as i32;
                            stack.push((e2, base.neg(&base.mul(&c, ci))));
                        }
                        reduced = true;
                        break;
                    }
                }
            }
            if reduced {
                continue;
            }
            match acc.get_mut(&e) {
                Some(x) => *x = base.add(x, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Value::Poly(sort_terms(base, acc.into_iter().collect()))
    }

    fn poly_div(&self, a: &Value, b: &Value) -> Result<Value> {
        let (base, vars) = match &*self.0 {
            RingKind::Polynomial { base, vars } => (base, vars),
            _ => unreachable!(),
        };
        let (ta, tb) = match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => (x, y),
            _ => unreachable!(),
        };
        // Division by a single term.
        if tb.len() == 1 {
            let (eb, cb) = &tb[0];
            let mut out = Vec::with_capacity(ta.len());
            for (ea, ca) in ta {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x - y).collect();
                for (i, v) in vars.iter().enumerate() {
                    if e[i] < 0 && !v.laurent {
                        return self.poly_div_general(a, b);
                    }
                }
                out.push((e, base.div_exact(ca, cb)?));
            }
            return Ok(self.poly_normalize(out));
        }
        self.poly_div_general(a, b)
    }

    fn poly_div_general(&self, a: &Value, b: &Value) -> Result<Value> {
        let (base, vars) = match &*self.0 {
            RingKind::Polynomial { base, vars } => (base, vars),
            _ => unreachable!(),
        };
        if vars.iter().all(|v| v.relation.is_some()) {
            let dim = self.finite_basis_exps().unwrap().len();
            return self.finite_level_div(base, dim, a, b);
        }
        if vars.iter().any(|v| v.relation.is_some()) {
            return Err(Error::Unsupported(format!(
                "division by a non-monomial in the partially constrained ring {self}"
            )));
        }
        let (ta, tb) = match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => (x.clone(), y.clone()),
            _ => unreachable!(),
        };
        // Shift Laurent variables so that both operands are polynomials and the
        // divisor has no monomial content.
        let nv = vars.len();
        let mut min_a = vec![0i32; nv];
        let mut min_b = vec![0i32; nv];
        for i in 0..nv {
            if vars[i].laurent {
                min_a[i] = ta.iter().map(|(e, _)| e[i]).min().unwrap();
                min_b[i] = tb.iter().map(|(e, _)| e[i]).min().unwrap();
            }
        }
        let shift = |t: &[(Exps, Value)], s: &[i32]| -> Vec<(Exps, Value)> {
            t.iter()
                .map(|(e, c)| (e.iter().zip(s).map(|(x, y)| x - y).collect(), c.clone()))
                .collect()
        };
        let ra = sort_terms(base, shift(&ta, &min_a));
        let rb = sort_terms(base, shift(&tb, &min_b));
        let q = poly_long_div(base, &ra, &rb).ok_or_else(|| {
            Error::NotDivisible(format!(
                "{} by {} in {self}",
                super::display::format_value(self, a),
                super::display::format_value(self, b)
            ))
        })?;
        let back: Vec<i32> = min_a.iter().zip(&min_b).map(|(x, y)| y - x).collect();
        Ok(Value::Poly(sort_terms(base, shift(&q, &back))))
    }

    /// Univariate coefficient list (low degree first) of a polynomial value in
    /// a one-variable level.
    pub fn poly_to_dense(&self, v: &Value) -> Result<Vec<Value>> {
        match (&*self.0, v) {
            (RingKind::Polynomial { base, vars }, Value::Poly(t)) if vars.len() == 1 => {
                let mut out: Vec<Value> = Vec::new();
                for (e, c) in t {
                    if e[0] < 0 {
                        return Err(Error::Unsupported("negative exponent in dense form".into()));
                    }
                    let k = e[0] as usize;
                    if out.len() <= k {
                        out.resize(k + 1, base.zero());
                    }
                    out[k] = c.clone();
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported(format!("dense form in {self}"))),
        }
    }

    /// Inverse of [`Ring::poly_to_dense`].
    pub fn dense_to_poly(&self, c: &[Value]) -> Value {
        let terms = c.iter().enumerate().map(|(i, v)| (vec![i as i32], v.clone())).collect();
        self.poly_normalize(terms)
    }

    // ------------------------------------------------------------------
    // Fraction helpers.
    // ------------------------------------------------------------------

    pub(crate) fn frac_make(&self, n: Value, d: Value) -> Result<Value> {
        let base = match &*self.0 {
            RingKind::Fraction { base } => base,
            _ => panic!("frac_make on {self}"),
        };
        if base.is_zero(&d) {
            return Err(Error::DivisionByZero);
        }
        if base.is_zero(&n) {
            return Ok(Value::Frac(Box::new(base.zero()), Box::new(base.one())));
        }
        match (&*base.0, &n, &d) {
            (RingKind::Integers, Value::Int(x), Value::Int(y)) => {
                let g = x.gcd(y);
                let (mut x, mut y) = (x / &g, y / &g);
                if y.is_negative() {
                    x = -x;
                    y = -y;
                }
                Ok(Value::Frac(Box::new(Value::Int(x)), Box::new(Value::Int(y))))
            }
            _ if base.is_field() => {
                let q = base.div_exact(&n, &d)?;
                Ok(Value::Frac(Box::new(q), Box::new(base.one())))
            }
            (RingKind::Polynomial { base: coeffs, .. }, _, _) => {
                let nd = base.poly_to_dense(&n)?;
                let dd = base.poly_to_dense(&d)?;
                let g = upoly::gcd(coeffs, &nd, &dd)?;
                let (mut nq, _) = upoly::divrem(coeffs, &nd, &g)?;
                let (mut dq, _) = upoly::divrem(coeffs, &dd, &g)?;
                let lc = dq.last().unwrap().clone();
                if !coeffs.is_one(&lc) {
                    let inv = coeffs.inverse(&lc)?;
                    nq = nq.iter().map(|c| coeffs.mul(c, &inv)).collect();
                    dq = dq.iter().map(|c| coeffs.mul(c, &inv)).collect();
                }
                Ok(Value::Frac(
                    Box::new(base.dense_to_poly(&nq)),
                    Box::new(base.dense_to_poly(&dq)),
                ))
            }
            _ => Err(Error::Unsupported(format!("fractions over {base}"))),
        }
    }

    /// Build a fraction `n/d` from base-ring elements.
    pub fn make_fraction(&self, n: Value, d: Value) -> Result<Value> {
        self.frac_make(n, d)
    }

    /// Numerator and denominator of a fraction-field element.
    pub fn fraction_parts(&self, v: &Value) -> Option<(Value, Value)> {
        match v {
            Value::Frac(n, d) => Some(((**n).clone(), (**d).clone())),
            _ => None,
        }
    }

    /// Terms of a polynomial element.
    pub fn poly_terms<'a>(&self, v: &'a Value) -> &'a [(Exps, Value)] {
        match v {
            Value::Poly(t) => t,
            _ => panic!("poly_terms on non-polynomial value"),
        }
    }

    /// Build a polynomial element from terms.
    pub fn poly_from_terms(&self, terms: Vec<(Exps, Value)>) -> Value {
        self.poly_normalize(terms)
    }

    /// Coefficients (low degree first) of a cyclotomic element.
    pub fn cyclo_coeffs<'a>(&self, v: &'a Value) -> &'a [Value] {
        match v {
            Value::Cyclo(c) => c,
            _ => panic!("cyclo_coeffs on non-cyclotomic value"),
        }
    }

    /// Number of variables of a polynomial level.
    pub fn num_vars(&self) -> usize {
        match &*self.0 {
            RingKind::Polynomial { vars, .. } => vars.len(),
            _ => 0,
        }
    }

    /// Variables of a polynomial level.
    pub fn poly_vars(&self) -> &[PolyVar] {
        match &*self.0 {
            RingKind::Polynomial { vars, .. } => vars,
            _ => &[],
        }
    }

    /// Whether the element lies in the image of the immediate base ring.
    pub fn as_base_constant(&self, v: &Value) -> Option<Value> {
        match (&*self.0, v) {
            (RingKind::Polynomial { base, .. }, Value::Poly(t)) => {
                if t.is_empty() {
                    Some(base.zero())
                } else if t.len() == 1 && t[0].0.iter().all(|&e| e == 0) {
                    Some(t[0].1.clone())
                } else {
                    None
                }
            }
            (RingKind::Cyclotomic { base, .. }, Value::Cyclo(c)) => match c.len() {
                0 => Some(base.zero()),
                1 => Some(c[0].clone()),
                _ => None,
            },
            (RingKind::Fraction { base }, Value::Frac(n, d)) => {
                if base.is_one(d) {
                    Some((**n).clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Integer value of an element lying in the prime subring, if any
    /// (for prime fields the canonical representative in `0..p`).
    pub fn as_integer(&self, v: &Value) -> Option<BigInt> {
        match v {
            Value::Int(z) => Some(z.clone()),
            Value::Rat(q) if q.is_integer() => Some(q.to_integer()),
            Value::Fp(x) => Some(BigInt::from(*x)),
            Value::Ext(c) if c.len() <= 1 => Some(BigInt::from(c.first().copied().unwrap_or(0))),
            _ => {
                let b = self.base()?;
                let c = self.as_base_constant(v)?;
                b.as_integer(&c)
            }
        }
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

pub(crate) fn trim_values(base: &Ring, mut c: Vec<Value>) -> Vec<Value> {
    while let Some(last) = c.last() {
        if base.is_zero(last) {
            c.pop();
        } else {
            break;
        }
    }
    c
}

fn sort_terms(base: &Ring, terms: Vec<(Exps, Value)>) -> Vec<(Exps, Value)> {
    let mut t: Vec<(Exps, Value)> = terms.into_iter().filter(|(_, c)| !base.is_zero(c)).collect();
    t.sort_by(|a, b| grlex_cmp(&b.0, &a.0));
    t
}

fn poly_merge(
    base: &Ring,
    x: &[(Exps, Value)],
    y: &[(Exps, Value)],
    subtract: bool,
) -> Vec<(Exps, Value)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ord = if i == x.len() {
            Ordering::Less
        } else if j == y.len() {
            Ordering::Greater
        } else {
            grlex_cmp(&x[i].0, &y[j].0)
        };
        match ord {
            Ordering::Greater => {
                out.push(x[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if subtract { base.neg(&y[j].1) } else { y[j].1.clone() };
                out.push((y[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if subtract {
                    base.sub(&x[i].1, &y[j].1)
                } else {
                    base.add(&x[i].1, &y[j].1)
                };
                if !base.is_zero(&c) {
                    out.push((x[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Exact multivariate division of non-negative-exponent polynomials.
fn poly_long_div(
    base: &Ring,
    a: &[(Exps, Value)],
    b: &[(Exps, Value)],
) -> Option<Vec<(Exps, Value)>> {
    let mut r: Vec<(Exps, Value)> = a.to_vec();
    let mut q: Vec<(Exps, Value)> = Vec::new();
    let (lb_e, lb_c) = &b[0];
    while let Some((er, cr)) = r.first().cloned() {
        let e: Exps = er.iter().zip(lb_e).map(|(x, y)| x - y).collect();
        if e.iter().any(|&k| k < 0) {
            return None;
        }
        let c = base.div_exact(&cr, lb_c).ok()?;
        let prod: Vec<(Exps, Value)> = b
            .iter()
            .map(|(eb, cb)| (eb.iter().zip(&e).map(|(x, y)| x + y).collect(), base.mul(cb, &c)))
            .collect();
        r = poly_merge(base, &r, &prod, true);
        q.push((e, c));
    }
    Some(q)
}
