//! Finite algebras of cyclic covers and the hom-Lie algebras attached to them:
//! Kummer algebras `B[t]/(tⁿ − b)` with `σ(t) = ξ^r t`, Artin–Schreier
//! algebras `B[y]/(y^p − y − b)` with `σ(y) = y + ν`, the general Witt
//! construction from structure constants, the closed-form Kummer–Witt
//! brackets, Jackson subalgebras, and comparison against reference tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::derivations::{Endomorphism, SigmaDerivation};
use crate::error::{Error, Result};
use crate::homlie::{self, HomLieAlgebra, Vector};
use crate::linalg::{self, Matrix};
use crate::rings::{fp, PolyVar, Ring, RingMorphism, RingValue};

/// A commutative, associative, unital algebra free of rank `n` over a base
/// ring, given by `e_i e_j = Σ_k a_{ij}^k e_k` with `e_0` the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    ring: Ring,
    rank: usize,
    mult: Vec<Vec<Vector>>,
}

impl FiniteAlgebra {
    /// Build from structure constants `mult[i][j][k] = a_{ij}^k`, verifying
    /// commutativity, associativity on all triples and that `e_0` is the unit.
    pub fn new(ring: &Ring, rank: usize, mult: Vec<Vec<Vector>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidConstruction("a unital algebra has rank at least 1".into()));
        }
        if mult.len() != rank
            || mult.iter().any(|r| r.len() != rank || r.iter().any(|v| v.len() != rank || v.iter().any(|x| x.ring() != ring)))
        {
            return Err(Error::InvalidConstruction(format!("structure constants must be {rank}×{rank}×{rank} over {ring}")));
        }
        let alg = FiniteAlgebra { ring: ring.clone(), rank, mult };
        for i in 0..rank {
            if alg.mult[0][i] != alg.unit_vector(i) {
                return Err(Error::InvalidConstruction(format!("e0 is not a unit: e0·e{i} ≠ e{i}")));
            }
            for j in 0..rank {
                if alg.mult[i][j] != alg.mult[j][i] {
                    return Err(Error::InvalidConstruction(format!("not commutative at (e{i}, e{j})")));
                }
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                for k in 0..rank {
                    let l = alg.mul(&alg.mult[i][j], &alg.unit_vector(k));
                    let r = alg.mul(&alg.unit_vector(i), &alg.mult[j][k]);
                    if l != r {
                        return Err(Error::InvalidConstruction(format!("not associative at (e{i}, e{j}, e{k})")));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Base ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Structure constants of `e_i e_j`.
    pub fn structure(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i][j]
    }

    /// Coordinates of `e_i`.
    pub fn unit_vector(&self, i: usize) -> Vector {
        let mut v = vec![RingValue::zero(&self.ring); self.rank];
        v[i] = RingValue::one(&self.ring);
        v
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, u: &[RingValue], v: &[RingValue]) -> Vector {
        let mut out = vec![RingValue::zero(&self.ring); self.rank];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ui * vj;
                for (o, a) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !a.is_zero() {
                        *o = &*o + &(&c * a);
                    }
                }
            }
        }
        out
    }

    /// Check that the matrix `s` (row `i` = `σ(e_i)`) is a unital algebra
    /// endomorphism.
    pub fn check_endomorphism(&self, s: &Matrix) -> Result<()> {
        let n = self.rank;
        if s.len() != n || s.iter().any(|r| r.len() != n || r.iter().any(|x| x.ring() != &self.ring)) {
            return Err(Error::InvalidConstruction(format!("σ must be a {n}×{n} matrix over {}", self.ring)));
        }
        if s[0] != self.unit_vector(0) {
            return Err(Error::RelationViolated("σ(1) ≠ 1".into()));
        }
        for i in 0..n {
            for j in i..n {
                let lhs = linalg::vec_mat(&self.mult[i][j], s, &self.ring);
                let rhs = self.mul(&s[i], &s[j]);
                if lhs != rhs {
                    return Err(Error::RelationViolated(format!("σ(e{i}e{j}) ≠ σ(e{i})σ(e{j})")));
                }
            }
        }
        Ok(())
    }

    /// Push the structure constants through a ring morphism.
    pub fn base_change(&self, phi: &RingMorphism) -> Result<FiniteAlgebra> {
        let mult = self
            .mult
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(|x| phi.apply(x)).collect::<Result<Vector>>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(phi.target(), self.rank, mult)
    }
}

/// Map every entry of a matrix through a ring morphism.
pub fn map_matrix(m: &Matrix, phi: &RingMorphism) -> Result<Matrix> {
    m.iter().map(|r| r.iter().map(|x| phi.apply(x)).collect()).collect()
}

/// `B[t]/(tⁿ − b)` with basis `e_i = tⁱ`: `e_i e_j = e_{i+j}` for `i+j < n`,
/// otherwise `b·e_{i+j−n}`.
pub fn kummer_algebra(n: usize, b: &RingValue) -> Result<FiniteAlgebra> {
    let ring = b.ring();
    let mut mult = vec![vec![vec![RingValue::zero(ring); n]; n]; n];
    for (i, row) in mult.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i + j < n {
                v[i + j] = RingValue::one(ring);
            } else {
                v[i + j - n] = b.clone();
            }
        }
    }
    FiniteAlgebra::new(ring, n, mult)
}

/// The diagonal σ of `σ(t) = ξ^r t`: `σ(e_i) = ξ^{ri} e_i`.
pub fn kummer_sigma(n: usize, xi: &RingValue, r: usize) -> Matrix {
    let ring = xi.ring();
    let mut s = linalg::zeros(ring, n, n);
    for (i, row) in s.iter_mut().enumerate() {
        row[i] = xi.pow((r * i) as u64);
    }
    s
}

/// Check that `xi` has exact multiplicative order `n`.
pub fn check_root_of_unity(xi: &RingValue, n: usize) -> Result<()> {
    if n == 0 || !xi.pow(n as u64).is_one() {
        return Err(Error::Precondition(format!("{xi} is not an {n}-th root of unity")));
    }
    for d in 1..n {
        if n % d == 0 && xi.pow(d as u64).is_one() {
            return Err(Error::Precondition(format!("{xi} has order {d}, not {n}")));
        }
    }
    Ok(())
}

/// An element of exact order `n` in `F_p` (the smallest such residue).
pub fn primitive_root_mod(p: u64, n: u64) -> Result<u64> {
    if n == 0 || (p - 1) % n != 0 {
        return Err(Error::Precondition(format!("F_{p} has no element of order {n}")));
    }
    let factors = fp::prime_factors(n);
    (1..p)
        .find(|&x| fp::pow_mod(x, n, p) == 1 && factors.iter().all(|&f| fp::pow_mod(x, n / f, p) != 1))
        .ok_or_else(|| Error::Precondition(format!("F_{p} has no element of order {n}")))
}

/// `B[y]/(y^p − y − b)` with basis `e_i = yⁱ`.
pub fn artin_schreier_algebra(p: usize, b: &RingValue) -> Result<FiniteAlgebra> {
    let ring = b.ring();
    if ring.characteristic() != p as u64 {
        return Err(Error::Precondition(format!("{ring} does not have characteristic {p}")));
    }
    let mut mult = vec![vec![vec![RingValue::zero(ring); p]; p]; p];
    for (i, row) in mult.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i + j < p {
                v[i + j] = RingValue::one(ring);
            } else {
                // y^{i+j} = y^{i+j-p}(y + b)
                let k = i + j - p;
                v[k + 1] = &v[k + 1] + &RingValue::one(ring);
                v[k] = &v[k] + b;
            }
        }
    }
    FiniteAlgebra::new(ring, p, mult)
}

/// The matrix of `σ(y) = y + ν`: `σ(e_i) = Σ_k C(i,k) ν^{i−k} e_k`.
pub fn as_sigma(p: usize, nu: &RingValue) -> Matrix {
    let ring = nu.ring();
    let mut s = linalg::zeros(ring, p, p);
    for (i, row) in s.iter_mut().enumerate() {
        let mut binom = 1i64;
        for (k, x) in row.iter_mut().enumerate().take(i + 1) {
            *x = &RingValue::from_i64(ring, binom) * &nu.pow((i - k) as u64);
            binom = binom * (i - k) as i64 / (k + 1) as i64;
        }
    }
    s
}

/// The Witt hom-Lie algebra of `(A, σ)` by the explicit double sum
/// `⟨ε_i, ε_j⟩ = Σ_ℓ Σ_k (s_{ik} a^ℓ_{kj} − s_{jk} a^ℓ_{ki}) ε_ℓ`, with twist
/// `σ` and `q = 1`.
pub fn witt_homlie(a: &FiniteAlgebra, s: &Matrix) -> Result<HomLieAlgebra> {
    a.check_endomorphism(s)?;
    let n = a.rank();
    let ring = a.ring();
    let mut entries = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![RingValue::zero(ring); n];
            for (l, vl) in v.iter_mut().enumerate() {
                for k in 0..n {
                    let t1 = &s[i][k] * &a.structure(k, j)[l];
                    let t2 = &s[j][k] * &a.structure(k, i)[l];
                    *vl = &(&*vl + &t1) - &t2;
                }
            }
            entries.insert((i, j), v);
        }
    }
    HomLieAlgebra::new(ring, n, &entries, s.clone(), RingValue::one(ring))
}

/// Closed-form Kummer–Witt brackets
/// `⟨ε_i, ε_j⟩ = b^↻ ζ^i (1 − ζ^{j−i}) ε_{i+j mod n}` with `ζ = ξ^r`, where
/// `b^↻` is included exactly when `i + j ≥ n`.  `xi` and `b` must lie in one
/// ring.
pub fn kummer_witt_homlie(n: usize, r: usize, xi: &RingValue, b: &RingValue) -> Result<HomLieAlgebra> {
    if xi.ring() != b.ring() {
        return Err(Error::RingMismatch("ξ and b must lie in one ring".into()));
    }
    if r >= n.max(1) {
        return Err(Error::Precondition(format!("twist exponent r = {r} must satisfy 0 ≤ r < n = {n}")));
    }
    check_root_of_unity(xi, n)?;
    let ring = xi.ring();
    let zeta = xi.pow(r as u64);
    let one = RingValue::one(ring);
    let mut entries = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut c = &zeta.pow(i as u64) * &(&one - &zeta.pow((j - i) as u64));
            if i + j >= n {
                c = &c * b;
            }
            let mut v = vec![RingValue::zero(ring); n];
            v[(i + j) % n] = c;
            entries.insert((i, j), v);
        }
    }
    HomLieAlgebra::new(ring, n, &entries, kummer_sigma(n, xi, r), one)
}

/// The Jackson subalgebra on `ε_0, ε_1, ε_{n−1}` of a Kummer–Witt algebra.
pub fn jackson_subalgebra(n: usize, r: usize, xi: &RingValue, b: &RingValue) -> Result<HomLieAlgebra> {
    if n < 3 {
        return Err(Error::Precondition(format!("the Jackson subalgebra needs n ≥ 3, got {n}")));
    }
    let kw = kummer_witt_homlie(n, r, xi, b)?;
    kw.restrict(&[0, 1, n - 1]).map_err(|e| Error::RelationViolated(format!("Jackson subalgebra not closed: {e}")))
}

/// `ℤ[ξ]/(Φ_n)[b]`: the symbolic base of the Kummer families.
pub fn kummer_base(n: usize) -> Result<Ring> {
    let cyc = Ring::cyclotomic(&Ring::integers(), n as u64, "xi")?;
    Ring::polynomial(&cyc, &["b"])
}

/// `ℚ(ξ)` for the primitive `n`-th root of unity.
pub fn cyclotomic_field(n: usize) -> Result<Ring> {
    Ring::cyclotomic(&Ring::rationals(), n as u64, "xi")
}

/// `F_p[ν, b]/(ν^p − ν)`: the symbolic base of the Artin–Schreier families.
pub fn artin_schreier_base(p: usize) -> Result<Ring> {
    let fpr = Ring::prime_field(p as u64)?;
    let mut rel = vec![fpr.zero(); p + 1];
    rel[1] = fpr.from_i64(-1);
    rel[p] = fpr.one();
    Ring::polynomial_with(
        &fpr,
        vec![PolyVar { name: "nu".into(), laurent: false, relation: Some(rel) }, PolyVar::plain("b")],
    )
}

/// The Kummer algebra as a quotient polynomial ring
/// `ℤ[ξ]/(Φ_n)[b][t]/(tⁿ − b)`, together with `σ(t) = ξ^r t`.
pub fn kummer_polynomial_model(n: usize, r: usize) -> Result<Endomorphism> {
    let base = kummer_base(n)?;
    let mut rel = vec![base.zero(); n + 1];
    rel[0] = base.neg(&base.gen("b")?.into_value());
    rel[n] = base.one();
    let alg = Ring::polynomial_with(&base, vec![PolyVar { name: "t".into(), laurent: false, relation: Some(rel) }])?;
    Endomorphism::from_strings(&alg, &[("t", &format!("xi^{r}*t"))])
}

/// The Kummer–Witt algebra computed through the derivation route: the module
/// `A·(id − σ)` with basis `tⁱ`.
pub fn kummer_witt_from_derivation(n: usize, r: usize) -> Result<HomLieAlgebra> {
    let sigma = kummer_polynomial_model(n, r)?;
    let alg = sigma.algebra().clone();
    let t = alg.gen("t")?;
    let basis: Vec<RingValue> = (0..n).map(|i| t.pow(i as u64)).collect();
    let d = SigmaDerivation::id_minus_sigma(&sigma);
    homlie::from_derivation(&d, &basis)
}

/// How the parameter `b` (or `ν`) is supplied.
fn is_symbolic(s: &str) -> bool {
    matches!(s, "sym" | "symbolic")
}

fn default_sym() -> String {
    "sym".into()
}
fn default_one() -> usize {
    1
}
fn default_s0() -> String {
    "s0".into()
}
fn default_s1() -> String {
    "s1".into()
}

/// A named family of hom-Lie algebras.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Kummer–Witt algebra of `B[t]/(tⁿ − b)`, `σ(t) = ξ^r t`.
    KummerWitt {
        /// Degree of the cover.
        n: usize,
        /// Twist exponent.
        #[serde(default = "default_one")]
        r: usize,
        /// `"sym"` or an integer.
        #[serde(default = "default_sym")]
        b: String,
    },
    /// Jackson subalgebra on `ε_0, ε_1, ε_{n−1}`.
    Jackson {
        /// Degree of the cover.
        n: usize,
        /// Twist exponent.
        #[serde(default = "default_one")]
        r: usize,
        /// `"sym"` or an integer.
        #[serde(default = "default_sym")]
        b: String,
    },
    /// Artin–Schreier algebra of `B[y]/(y^p − y − b)`, `σ(y) = y + ν`.
    ArtinSchreier {
        /// The characteristic.
        p: usize,
        /// `"sym"` or an integer `0 ≤ ν < p`.
        #[serde(default = "default_sym")]
        nu: String,
        /// `"sym"` or an integer.
        #[serde(default = "default_sym")]
        b: String,
    },
    /// The Jackson 𝔰𝔩₂ on `e = Δ, h = −2tΔ, f = −t²Δ` with
    /// `σ(t) = s₀ + s₁t`, `Δ(t) = 1`, over `ℚ[s₀, s₁]`.
    JacksonSl2 {
        /// Expression for `s₀` in `ℚ[s0, s1]`.
        #[serde(default = "default_s0")]
        s0: String,
        /// Expression for `s₁` in `ℚ[s0, s1]`.
        #[serde(default = "default_s1")]
        s1: String,
    },
}

impl FamilySpec {
    /// Parse from JSON text.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("family descriptor: {e}")))
    }

    /// Build the algebra.
    pub fn build(&self) -> Result<HomLieAlgebra> {
        match self {
            FamilySpec::KummerWitt { n, r, b } | FamilySpec::Jackson { n, r, b } => {
                if *n < 1 {
                    return Err(Error::InvalidConstruction("n must be positive".into()));
                }
                let (xi, bv) = if is_symbolic(b) {
                    let ring = kummer_base(*n)?;
                    (ring.gen("xi")?, ring.gen("b")?)
                } else {
                    let ring = Ring::cyclotomic(&Ring::integers(), *n as u64, "xi")?;
                    let bv: i64 = b.parse().map_err(|_| Error::Parse(format!("b must be \"sym\" or an integer, got {b}")))?;
                    (ring.gen("xi")?, ring.int(bv))
                };
                if matches!(self, FamilySpec::Jackson { .. }) {
                    jackson_subalgebra(*n, *r, &xi, &bv)
                } else {
                    kummer_witt_homlie(*n, *r, &xi, &bv)
                }
            }
            FamilySpec::ArtinSchreier { p, nu, b } => {
                if !fp::is_prime(*p as u64) {
                    return Err(Error::InvalidConstruction(format!("p = {p} is not prime")));
                }
                let ring = artin_schreier_base(*p)?;
                let nuv = if is_symbolic(nu) {
                    ring.gen("nu")?
                } else {
                    ring.int(nu.parse().map_err(|_| Error::Parse(format!("nu must be \"sym\" or an integer, got {nu}")))?)
                };
                let bv = if is_symbolic(b) {
                    ring.gen("b")?
                } else {
                    ring.int(b.parse().map_err(|_| Error::Parse(format!("b must be \"sym\" or an integer, got {b}")))?)
                };
                let a = artin_schreier_algebra(*p, &bv)?;
                witt_homlie(&a, &as_sigma(*p, &nuv))
            }
            FamilySpec::JacksonSl2 { s0, s1 } => jackson_sl2(s0, s1),
        }
    }
}

/// The Jackson 𝔰𝔩₂ through the derivation route: over `ℚ[s0, s1][t]` with
/// `σ(t) = s₀ + s₁t` and the σ-derivation `Δ(t) = 1`, basis
/// `e = 1, h = −2t, f = −t²` (coefficients of `Δ`).
pub fn jackson_sl2(s0: &str, s1: &str) -> Result<HomLieAlgebra> {
    let base = Ring::polynomial(&Ring::rationals(), &["s0", "s1"])?;
    let alg = Ring::polynomial(&base, &["t"])?;
    let s0v = alg.parse(s0)?;
    let s1v = alg.parse(s1)?;
    if alg.as_base_constant(s0v.value()).is_none() || alg.as_base_constant(s1v.value()).is_none() {
        return Err(Error::InvalidConstruction("s0 and s1 must not involve t".into()));
    }
    let image = &s0v + &(&s1v * &alg.gen("t")?);
    let sigma = Endomorphism::new(RingMorphism::new(&alg, &alg, &[("t", image)])?)?;
    let d = SigmaDerivation::from_generator_images(&sigma, &[("t", alg.int(1))])?;
    let basis = vec![alg.int(1), alg.parse("-2t")?, alg.parse("-t^2")?];
    homlie::from_derivation(&d, &basis)
}

/// One printed entry `⟨ε_i, ε_j⟩ = Σ coefficient·ε_k` of a reference table.
#[derive(Clone, Debug)]
pub struct ReferenceEntry {
    /// First index.
    pub i: usize,
    /// Second index.
    pub j: usize,
    /// Printed terms `(k, coefficient)`.
    pub terms: Vec<(usize, &'static str)>,
    /// A further printed simplification of the same entry, when present.
    pub simplified: Option<Vec<(usize, &'static str)>>,
}

fn entry(i: usize, j: usize, terms: &[(usize, &'static str)]) -> ReferenceEntry {
    ReferenceEntry { i, j, terms: terms.to_vec(), simplified: None }
}

fn entry_s(i: usize, j: usize, terms: &[(usize, &'static str)], simp: &[(usize, &'static str)]) -> ReferenceEntry {
    ReferenceEntry { i, j, terms: terms.to_vec(), simplified: Some(simp.to_vec()) }
}

/// A reference table of printed brackets.
#[derive(Clone, Debug)]
pub struct ReferenceTable {
    /// Family the table belongs to.
    pub family: FamilySpec,
    /// Entries; pairs not listed are printed as zero only if `complete`.
    pub entries: Vec<ReferenceEntry>,
}

/// The printed Kummer–Witt tables: (n, r) ∈ {(3,1), (3,2), (4,1), (4,2), (5,1)}.
pub fn kummer_reference_table(n: usize, r: usize) -> Option<ReferenceTable> {
    let entries = match (n, r) {
        (3, 1) => vec![
            entry(0, 1, &[(1, "1-xi")]),
            entry(0, 2, &[(2, "1-xi^2")]),
            entry(1, 2, &[(0, "b*xi*(1-xi)")]),
        ],
        (3, 2) => vec![
            entry(0, 1, &[(1, "1-xi^2")]),
            entry(0, 2, &[(2, "1-xi")]),
            entry(1, 2, &[(0, "-b*xi*(1-xi)")]),
        ],
        (4, 1) => vec![
            entry(0, 1, &[(1, "1-xi")]),
            entry_s(0, 2, &[(2, "1-xi^2")], &[(2, "2")]),
            entry(0, 3, &[(3, "1-xi^3")]),
            entry(1, 2, &[(3, "xi*(1-xi)")]),
            entry_s(1, 3, &[(0, "b*xi*(1-xi^2)")], &[(0, "2*b*xi")]),
            entry_s(2, 3, &[(1, "b*xi^2*(1-xi)")], &[(1, "-2*b*(1-xi)")]),
        ],
        (4, 2) => vec![
            entry(0, 1, &[(1, "2")]),
            entry(0, 2, &[]),
            entry(0, 3, &[(3, "2")]),
            entry(1, 2, &[(3, "-2")]),
            entry(1, 3, &[]),
            entry(2, 3, &[(1, "2*b")]),
        ],
        (5, 1) => vec![
            entry(0, 1, &[(1, "1-xi")]),
            entry(0, 2, &[(2, "1-xi^2")]),
            entry(0, 3, &[(3, "1-xi^3")]),
            entry(0, 4, &[(4, "1-xi^4")]),
            entry(1, 2, &[(3, "xi*(1-xi)")]),
            entry(1, 3, &[(4, "xi*(1-xi^2)")]),
            entry(1, 4, &[(0, "b*xi*(1-xi^3)")]),
            entry(2, 3, &[(0, "b*xi^2*(1-xi)")]),
            entry(2, 4, &[(1, "b*xi^2*(1-xi^2)")]),
            entry(3, 4, &[(2, "b*xi^3*(1-xi)")]),
        ],
        _ => return None,
    };
    Some(ReferenceTable { family: FamilySpec::KummerWitt { n, r, b: "sym".into() }, entries })
}

/// The printed Artin–Schreier tables for `p ∈ {3, 5}` (symbolic ν and b).
pub fn artin_schreier_reference_table(p: usize) -> Option<ReferenceTable> {
    let entries = match p {
        3 => vec![
            entry(0, 1, &[(0, "-nu")]),
            entry(0, 2, &[(1, "-2*nu"), (0, "-nu^2")]),
            entry(1, 2, &[(1, "-nu^2"), (2, "-nu")]),
        ],
        5 => vec![
            entry(0, 1, &[(0, "-nu")]),
            entry(0, 2, &[(1, "-2*nu"), (0, "-nu^2")]),
            entry(0, 3, &[(2, "-3*nu"), (1, "-3*nu^2"), (0, "-nu^3")]),
            entry(0, 4, &[(3, "-4*nu"), (2, "-nu^2"), (1, "-4*nu^3"), (0, "-nu^4")]),
            entry(1, 2, &[(2, "-nu"), (1, "-nu^2")]),
            entry(1, 3, &[(3, "-2*nu"), (2, "-3*nu^2"), (1, "-nu^3")]),
            entry(1, 4, &[(3, "-3*nu"), (3, "-nu^2"), (2, "-4*nu^3"), (1, "-nu^4")]),
            entry(2, 3, &[(4, "-nu"), (3, "-2*nu^2"), (2, "-nu^3")]),
            entry(2, 4, &[(3, "-4*nu^3"), (2, "-nu^3"), (1, "-2*nu"), (0, "-2*nu*b")]),
            entry(3, 4, &[(4, "-3*nu^3"), (3, "-nu^4"), (2, "-nu"), (1, "-(b+3*nu)*nu"), (0, "-3*b*nu^2")]),
        ],
        _ => return None,
    };
    Some(ReferenceTable {
        family: FamilySpec::ArtinSchreier { p, nu: "sym".into(), b: "sym".into() },
        entries,
    })
}

/// Comparison of one bracket against its printed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryComparison {
    /// First index.
    pub i: usize,
    /// Second index.
    pub j: usize,
    /// Printed value, evaluated in the base ring.
    pub reference: String,
    /// Computed value.
    pub computed: String,
    /// Whether they agree exactly.
    pub agrees: bool,
}

/// Result of comparing an algebra with a reference table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableComparison {
    /// Per-entry comparison (every pair `i < j`).
    pub entries: Vec<EntryComparison>,
    /// Whether every entry agrees.
    pub exact_match: bool,
    /// Discrepancies between the printed table and the computation,
    /// including printed simplifications that do not hold.
    pub discrepancies: Vec<String>,
}

fn eval_terms(ring: &Ring, rank: usize, terms: &[(usize, &str)]) -> Result<Vector> {
    let mut v = vec![RingValue::zero(ring); rank];
    for (k, s) in terms {
        v[*k] = &v[*k] + &ring.parse(s)?;
    }
    Ok(v)
}

/// Compare an algebra with a reference table.  Pairs absent from the table
/// are expected to vanish.
pub fn compare_with_reference(l: &HomLieAlgebra, table: &ReferenceTable) -> Result<TableComparison> {
    let ring = l.ring();
    let n = l.rank();
    let mut printed: BTreeMap<(usize, usize), &ReferenceEntry> = BTreeMap::new();
    for e in &table.entries {
        printed.insert((e.i, e.j), e);
    }
    let mut entries = Vec::new();
    let mut discrepancies = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let computed = l.bracket_basis(i, j).clone();
            let reference = match printed.get(&(i, j)) {
                Some(e) => eval_terms(ring, n, &e.terms)?,
                None => vec![RingValue::zero(ring); n],
            };
            let agrees = reference == computed;
            if !agrees {
                discrepancies.push(format!(
                    "<e{i}, e{j}>: reference table gives {}, computed {}",
                    HomLieAlgebra::format_vector(&reference),
                    HomLieAlgebra::format_vector(&computed)
                ));
            }
            if let Some(simp) = printed.get(&(i, j)).and_then(|e| e.simplified.as_ref()) {
                let sv = eval_terms(ring, n, simp)?;
                if sv != reference {
                    let shown: Vec<String> = simp.iter().map(|(k, c)| format!("({c})*e{k}")).collect();
                    discrepancies.push(format!(
                        "<e{i}, e{j}>: printed simplification {} evaluates to {}, but the unsimplified entry equals {}",
                        shown.join(" + "),
                        HomLieAlgebra::format_vector(&sv),
                        HomLieAlgebra::format_vector(&reference)
                    ));
                }
            }
            entries.push(EntryComparison {
                i,
                j,
                reference: HomLieAlgebra::format_vector(&reference),
                computed: HomLieAlgebra::format_vector(&computed),
                agrees,
            });
        }
    }
    let exact_match = entries.iter().all(|e| e.agrees);
    Ok(TableComparison { entries, exact_match, discrepancies })
}

/// Reduce an algebra along a ring morphism (specialising parameters or
/// reducing modulo a prime); axioms are re-verified.
pub fn fiber_reduce(l: &HomLieAlgebra, phi: &RingMorphism) -> Result<HomLieAlgebra> {
    l.base_change(phi)
}
