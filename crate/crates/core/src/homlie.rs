//! Hom-Lie algebras as structure-constant data over an exact base ring.
//!
//! A hom-Lie algebra of rank `n` has a bracket `⟨e_i, e_j⟩ = Σ_ℓ c_{ij}^ℓ e_ℓ`
//! (stored for `i < j` and completed antisymmetrically), a twist `α` given
//! by a matrix whose row `i` holds the coordinates of `α(e_i)`, and a scalar
//! `q`.  The twisted Jacobi identity reads
//!
//! `↺_{a,b,c} ( ⟨α(a), ⟨b, c⟩⟩ + q ⟨a, ⟨b, c⟩⟩ ) = 0`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::covers::FiniteAlgebra;
use crate::derivations::SigmaDerivation;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rings::{Ring, RingDescriptor, RingMorphism, RingValue};

/// A coordinate vector.
pub type Vector = Vec<RingValue>;

/// A hom-Lie algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLieAlgebra {
    ring: Ring,
    rank: usize,
    /// `table[i][j]` = coordinates of `⟨e_i, e_j⟩` (full antisymmetric table).
    table: Vec<Vec<Vector>>,
    twist: Matrix,
    q: RingValue,
}

/// Verdicts of [`HomLieAlgebra::check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// `⟨e_i, e_i⟩ = 0` and `⟨e_i, e_j⟩ = −⟨e_j, e_i⟩` on all basis pairs.
    pub alternating: bool,
    /// First failing basis pair for alternation.
    pub alternating_witness: Option<(usize, usize)>,
    /// The twisted Jacobi identity on all basis triples `i < j < k`.
    pub jacobi: bool,
    /// First failing triple.
    pub jacobi_witness: Option<(usize, usize, usize)>,
    /// For `q = 1`: whether the form `↺⟨α(a) + a, ⟨b, c⟩⟩ = 0` gives the
    /// same verdict on every triple.
    pub classical_form_agrees: Option<bool>,
    /// Whether `q` is a unit of the base ring.
    pub q_is_unit: bool,
}

impl AxiomReport {
    /// Both axioms hold.
    pub fn passed(&self) -> bool {
        self.alternating && self.jacobi
    }
}

/// Derived series `L ⊇ L⁽¹⁾ ⊇ …` computed over the fraction field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedSeries {
    /// Bases (rows of coordinates) of `L⁽⁰⁾, L⁽¹⁾, …`.
    pub bases: Vec<Matrix>,
    /// Their dimensions.
    pub dims: Vec<usize>,
    /// Whether the series reaches zero.
    pub solvable: bool,
}

/// Outcome of [`HomLieAlgebra::is_morphism`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    /// All conditions hold.
    pub ok: bool,
    /// `f ∘ α = α' ∘ f`.
    pub commutes_with_twist: bool,
    /// `f⟨e_i, e_j⟩ = ⟨f e_i, f e_j⟩` for all basis pairs.
    pub preserves_bracket: bool,
    /// `q = q'`.
    pub same_q: bool,
    /// First failing basis pair for the bracket condition.
    pub bracket_witness: Option<(usize, usize)>,
}

fn zero_vec(ring: &Ring, n: usize) -> Vector {
    vec![RingValue::zero(ring); n]
}

fn add_scaled(acc: &mut [RingValue], c: &RingValue, v: &[RingValue]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

impl HomLieAlgebra {
    /// Build from the brackets `⟨e_i, e_j⟩` for `i < j` (missing pairs are
    /// zero), the twist matrix and the scalar `q`.
    pub fn new(
        ring: &Ring,
        rank: usize,
        brackets: &BTreeMap<(usize, usize), Vector>,
        twist: Matrix,
        q: RingValue,
    ) -> Result<Self> {
        let mut table = vec![vec![zero_vec(ring, rank); rank]; rank];
        for (&(i, j), v) in brackets {
            if i >= j || j >= rank {
                return Err(Error::InvalidConstruction(format!(
                    "bracket entries are indexed by i < j < rank, got ({i}, {j})"
                )));
            }
            if v.len() != rank || v.iter().any(|x| x.ring() != ring) {
                return Err(Error::InvalidConstruction(format!(
                    "bracket ({i}, {j}) must have {rank} coefficients in {ring}"
                )));
            }
            table[i][j] = v.clone();
            table[j][i] = v.iter().map(|x| -x).collect();
        }
        if twist.len() != rank || twist.iter().any(|r| r.len() != rank || r.iter().any(|x| x.ring() != ring)) {
            return Err(Error::InvalidConstruction(format!("twist must be a {rank}×{rank} matrix over {ring}")));
        }
        if q.ring() != ring {
            return Err(Error::RingMismatch(format!("q must lie in {ring}")));
        }
        Ok(HomLieAlgebra { ring: ring.clone(), rank, table, twist, q })
    }

    /// The abelian algebra with the given twist.
    pub fn abelian(ring: &Ring, rank: usize, twist: Matrix) -> Result<Self> {
        HomLieAlgebra::new(ring, rank, &BTreeMap::new(), twist, RingValue::one(ring))
    }

    /// Base ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The twist matrix (row `i` = `α(e_i)`).
    pub fn twist(&self) -> &Matrix {
        &self.twist
    }

    /// The scalar `q`.
    pub fn q(&self) -> &RingValue {
        &self.q
    }

    /// Coordinates of `⟨e_i, e_j⟩`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    /// The stored upper-triangular entries.
    pub fn entries(&self) -> BTreeMap<(usize, usize), Vector> {
        let mut m = BTreeMap::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                m.insert((i, j), self.table[i][j].clone());
            }
        }
        m
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, u: &[RingValue], v: &[RingValue]) -> Vector {
        let mut out = zero_vec(&self.ring, self.rank);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || i == j {
                    continue;
                }
                add_scaled(&mut out, &(ui * vj), &self.table[i][j]);
            }
        }
        out
    }

    /// Apply the twist.
    pub fn apply_twist(&self, u: &[RingValue]) -> Vector {
        linalg::vec_mat(u, &self.twist, &self.ring)
    }

    fn unit(&self, i: usize) -> Vector {
        let mut v = zero_vec(&self.ring, self.rank);
        v[i] = RingValue::one(&self.ring);
        v
    }

    /// The twisted Jacobi expression on three vectors.
    pub fn jacobi_residual(&self, a: &[RingValue], b: &[RingValue], c: &[RingValue]) -> Vector {
        let mut out = zero_vec(&self.ring, self.rank);
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let inner = self.bracket(y, z);
            let t1 = self.bracket(&self.apply_twist(x), &inner);
            let t2 = self.bracket(x, &inner);
            add_scaled(&mut out, &RingValue::one(&self.ring), &t1);
            add_scaled(&mut out, &self.q, &t2);
        }
        out
    }

    fn classical_residual(&self, a: &[RingValue], b: &[RingValue], c: &[RingValue]) -> Vector {
        let mut out = zero_vec(&self.ring, self.rank);
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let inner = self.bracket(y, z);
            let ax: Vector = self.apply_twist(x).iter().zip(x).map(|(s, t)| s + t).collect();
            add_scaled(&mut out, &RingValue::one(&self.ring), &self.bracket(&ax, &inner));
        }
        out
    }

    /// Verify alternation and the twisted Jacobi identity on basis elements
    /// (the Jacobi expression is trilinear and alternating, so triples
    /// `i < j < k` suffice).
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.rank;
        let mut alt_witness = None;
        'alt: for i in 0..n {
            for j in i..n {
                let ok = if i == j {
                    self.table[i][i].iter().all(|x| x.is_zero())
                } else {
                    self.table[i][j].iter().zip(&self.table[j][i]).all(|(x, y)| (x + y).is_zero())
                };
                if !ok {
                    alt_witness = Some((i, j));
                    break 'alt;
                }
            }
        }
        let check_classical = self.q.is_one();
        let mut jac_witness = None;
        let mut agrees = true;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    let r = self.jacobi_residual(&a, &b, &c);
                    let zero = r.iter().all(|x| x.is_zero());
                    if !zero && jac_witness.is_none() {
                        jac_witness = Some((i, j, k));
                    }
                    if check_classical {
                        let rc = self.classical_residual(&a, &b, &c);
                        if rc.iter().all(|x| x.is_zero()) != zero {
                            agrees = false;
                        }
                    }
                }
            }
        }
        AxiomReport {
            alternating: alt_witness.is_none(),
            alternating_witness: alt_witness,
            jacobi: jac_witness.is_none(),
            jacobi_witness: jac_witness,
            classical_form_agrees: check_classical.then_some(agrees),
            q_is_unit: self.q.inverse().is_ok(),
        }
    }

    /// Check whether the matrix `f` (row `i` = `f(e_i)` in the target basis)
    /// is a morphism `self → target`.
    pub fn is_morphism(&self, f: &Matrix, target: &HomLieAlgebra) -> Result<MorphismReport> {
        if target.ring != self.ring {
            return Err(Error::RingMismatch("morphisms are between algebras over one ring".into()));
        }
        if f.len() != self.rank || f.iter().any(|r| r.len() != target.rank) {
            return Err(Error::InvalidConstruction(format!(
                "morphism matrix must be {}×{}",
                self.rank, target.rank
            )));
        }
        // f(α(e_i)) = α'(f(e_i)).
        let lhs = linalg::mat_mul(&self.twist, f, &self.ring);
        let rhs = linalg::mat_mul(f, &target.twist, &self.ring);
        let commutes = lhs == rhs;
        let mut witness = None;
        'pairs: for i in 0..self.rank {
            for j in i + 1..self.rank {
                let a = linalg::vec_mat(&self.table[i][j], f, &self.ring);
                let b = target.bracket(&f[i], &f[j]);
                if a != b {
                    witness = Some((i, j));
                    break 'pairs;
                }
            }
        }
        let same_q = self.q == target.q;
        Ok(MorphismReport {
            ok: commutes && witness.is_none() && same_q,
            commutes_with_twist: commutes,
            preserves_bracket: witness.is_none(),
            same_q,
            bracket_witness: witness,
        })
    }

    /// Derived series.  Over a field the spans are exact; over a domain
    /// `over_fraction_field` must be set, and spans are taken after passing
    /// to the fraction field (fraction-free elimination).
    pub fn derived_series(&self, over_fraction_field: bool) -> Result<DerivedSeries> {
        if !self.ring.is_field() {
            if !over_fraction_field {
                return Err(Error::Precondition(format!(
                    "{} is not a field; request the fraction-field computation",
                    self.ring
                )));
            }
            if !self.ring.is_domain() {
                return Err(Error::Precondition(format!("{} is not an integral domain", self.ring)));
            }
        }
        let mut current: Matrix = (0..self.rank).map(|i| self.unit(i)).collect();
        let mut bases = vec![current.clone()];
        let mut dims = vec![self.rank];
        loop {
            if current.is_empty() {
                break;
            }
            let mut rows = Vec::new();
            for a in 0..current.len() {
                for b in a + 1..current.len() {
                    rows.push(self.bracket(&current[a], &current[b]));
                }
            }
            let next = linalg::echelon_domain(&self.ring, &rows)?;
            let d = next.len();
            let stalled = d == current.len();
            if stalled {
                break;
            }
            bases.push(next.clone());
            dims.push(d);
            current = next;
        }
        let solvable = *dims.last().unwrap() == 0;
        Ok(DerivedSeries { bases, dims, solvable })
    }

    /// Subsets of basis indices whose span is closed under the bracket
    /// (nonempty subsets, ordered by bitmask).  Exhaustive; rank ≤ 16.
    pub fn subalgebra_scan(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.rank;
        if n > 16 {
            return Err(Error::Budget(format!("subalgebra scan limited to rank 16, got {n}")));
        }
        let mut support = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut m = 0u32;
                for (k, x) in self.table[i][j].iter().enumerate() {
                    if !x.is_zero() {
                        m |= 1 << k;
                    }
                }
                support[i][j] = m;
            }
        }
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let closed = members
                .iter()
                .enumerate()
                .all(|(a, &i)| members[a + 1..].iter().all(|&j| support[i][j] & !mask == 0));
            if closed {
                out.push(members);
            }
        }
        Ok(out)
    }

    /// Pairs `i < j` with `⟨e_i, e_j⟩ = 0`.
    pub fn zero_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.table[i][j].iter().all(|x| x.is_zero()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// First pair with vanishing bracket, if any.
    pub fn zero_pair_exists(&self) -> Option<(usize, usize)> {
        self.zero_pairs().into_iter().next()
    }

    /// Push constants, twist and `q` through a ring morphism; the axioms are
    /// re-verified on the result.
    pub fn base_change(&self, phi: &RingMorphism) -> Result<HomLieAlgebra> {
        if phi.source() != &self.ring {
            return Err(Error::RingMismatch(format!(
                "morphism source {} differs from base ring {}",
                phi.source(),
                self.ring
            )));
        }
        let map_vec = |v: &Vector| -> Result<Vector> { v.iter().map(|x| phi.apply(x)).collect() };
        let mut entries = BTreeMap::new();
        for (k, v) in self.entries() {
            entries.insert(k, map_vec(&v)?);
        }
        let twist = self.twist.iter().map(map_vec).collect::<Result<Matrix>>()?;
        let q = phi.apply(&self.q)?;
        let out = HomLieAlgebra::new(phi.target(), self.rank, &entries, twist, q)?;
        let rep = out.check_axioms();
        if !rep.passed() {
            return Err(Error::RelationViolated(format!(
                "base change broke the axioms at {:?}",
                rep.jacobi_witness
            )));
        }
        Ok(out)
    }

    /// Restrict to the span of the listed basis vectors (closure under the
    /// bracket and the twist is checked).
    pub fn restrict(&self, indices: &[usize]) -> Result<HomLieAlgebra> {
        let pos = |k: usize| indices.iter().position(|&x| x == k);
        let m = indices.len();
        let mut entries = BTreeMap::new();
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                let mut v = zero_vec(&self.ring, m);
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let p = pos(k).ok_or_else(|| {
                        Error::Precondition(format!("⟨e{i}, e{j}⟩ leaves the span of {indices:?}"))
                    })?;
                    v[p] = c.clone();
                }
                entries.insert((a, b), v);
            }
        }
        let mut twist = linalg::zeros(&self.ring, m, m);
        for (a, &i) in indices.iter().enumerate() {
            for (k, c) in self.twist[i].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let p = pos(k).ok_or_else(|| {
                    Error::Precondition(format!("α(e{i}) leaves the span of {indices:?}"))
                })?;
                twist[a][p] = c.clone();
            }
        }
        HomLieAlgebra::new(&self.ring, m, &entries, twist, self.q.clone())
    }

    /// The algebra on the span of the given independent vectors (rows);
    /// brackets and twist images must lie in that span.  Requires a field.
    pub fn on_subspace(&self, basis: &Matrix) -> Result<HomLieAlgebra> {
        let m = basis.len();
        let coords = |v: &Vector| -> Result<Vector> {
            if m == 0 {
                return if v.iter().all(|x| x.is_zero()) {
                    Ok(vec![])
                } else {
                    Err(Error::Precondition("vector outside the zero subspace".into()))
                };
            }
            // Solve x · basis = v, i.e. basisᵀ x = v.
            let rows: Matrix = (0..self.rank).map(|k| basis.iter().map(|b| b[k].clone()).collect()).collect();
            linalg::solve_field(&self.ring, &rows, v)?
                .ok_or_else(|| Error::Precondition("image leaves the subspace".into()))
        };
        let mut entries = BTreeMap::new();
        for a in 0..m {
            for b in a + 1..m {
                entries.insert((a, b), coords(&self.bracket(&basis[a], &basis[b]))?);
            }
        }
        let twist = basis.iter().map(|v| coords(&self.apply_twist(v))).collect::<Result<Matrix>>()?;
        HomLieAlgebra::new(&self.ring, m, &entries, twist, self.q.clone())
    }

    /// Serialise to the structure-constant JSON document.
    pub fn to_json(&self) -> HomLieJson {
        HomLieJson {
            ring: RingDescriptor::of(&self.ring),
            rank: self.rank,
            twist: self.twist.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            q: self.q.to_string(),
            brackets: self
                .entries()
                .into_iter()
                .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
                .map(|((i, j), v)| BracketJson { i, j, coeffs: v.iter().map(|x| x.to_string()).collect() })
                .collect(),
        }
    }

    /// Parse the structure-constant JSON document.
    pub fn from_json(doc: &HomLieJson) -> Result<HomLieAlgebra> {
        let ring = doc.ring.build()?;
        let n = doc.rank;
        let parse = |s: &str| ring.parse(s);
        if doc.twist.len() != n {
            return Err(Error::Parse(format!("twist must have {n} rows")));
        }
        let twist = doc
            .twist
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(Error::Parse(format!("twist rows must have {n} entries")));
                }
                r.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Matrix>>()?;
        let mut entries = BTreeMap::new();
        for b in &doc.brackets {
            if b.coeffs.len() != n {
                return Err(Error::Parse(format!("bracket ({}, {}) needs {n} coefficients", b.i, b.j)));
            }
            let v = b.coeffs.iter().map(|s| parse(s)).collect::<Result<Vector>>()?;
            if entries.insert((b.i, b.j), v).is_some() {
                return Err(Error::Parse(format!("duplicate bracket ({}, {})", b.i, b.j)));
            }
        }
        HomLieAlgebra::new(&ring, n, &entries, twist, parse(&doc.q)?)
    }

    /// Human-readable bracket of two basis vectors, e.g. `(1-xi)*e1`.
    pub fn format_vector(v: &[RingValue]) -> String {
        let mut parts = Vec::new();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let term = if c.is_one() {
                format!("e{k}")
            } else if s == "-1" {
                format!("-e{k}")
            } else if s.contains(['+', '-']) && !is_simple_negative(&s) {
                format!("({s})*e{k}")
            } else {
                format!("{s}*e{k}")
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    /// The bracket table as LaTeX `align*` lines `⟨ε_i, ε_j⟩ = …`.
    pub fn to_latex(&self) -> String {
        let mut lines = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let v = &self.table[i][j];
                let mut terms = Vec::new();
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let s = c.to_string();
                    let coeff = if c.is_one() {
                        String::new()
                    } else if s == "-1" {
                        "-".into()
                    } else if s.contains(['+', '-']) && !is_simple_negative(&s) {
                        format!("({})", latex_value(&s))
                    } else {
                        latex_value(&s)
                    };
                    terms.push(format!("{coeff}\\varepsilon_{{{k}}}"));
                }
                let rhs = if terms.is_empty() {
                    "0".to_string()
                } else {
                    let mut r = terms[0].clone();
                    for t in &terms[1..] {
                        if t.starts_with('-') {
                            r.push_str(t);
                        } else {
                            r.push('+');
                            r.push_str(t);
                        }
                    }
                    r
                };
                lines.push(format!(
                    "  \\langle\\!\\langle\\varepsilon_{{{i}}},\\varepsilon_{{{j}}}\\rangle\\!\\rangle &= {rhs}"
                ));
            }
        }
        format!("\\begin{{align*}}\n{}\n\\end{{align*}}\n", lines.join("\\\\\n"))
    }
}

fn is_simple_negative(s: &str) -> bool {
    s.starts_with('-') && !s[1..].contains(['+', '-'])
}

/// Translate the plain-text value syntax to LaTeX.
pub fn latex_value(s: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "xi" | "nu" | "zeta" | "omega" | "alpha" | "beta" | "tau" => {
                    out.push('\\');
                    out.push_str(&word);
                    out.push(' ');
                }
                _ => out.push_str(&word),
            }
            continue;
        }
        if c == '^' {
            let start = i + 1;
            let mut j = start;
            if j < chars.len() && chars[j] == '-' {
                j += 1;
            }
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let e: String = chars[start..j].iter().collect();
            out.push_str(&format!("^{{{e}}}"));
            i = j;
            continue;
        }
        if c == '*' {
            i += 1;
            continue;
        }
        out.push(c);
        i += 1;
    }
    out.replace(" )", ")").replace(" ^", "^").trim_end().to_string()
}

/// Structure-constant JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomLieJson {
    /// Base ring.
    pub ring: RingDescriptor,
    /// Rank.
    pub rank: usize,
    /// Twist matrix, row `i` = `α(e_i)`.
    pub twist: Vec<Vec<String>>,
    /// Twist scalar.
    pub q: String,
    /// Nonzero brackets for `i < j`.
    pub brackets: Vec<BracketJson>,
}

/// One bracket entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    /// First index.
    pub i: usize,
    /// Second index (`i < j`).
    pub j: usize,
    /// Coordinates of `⟨e_i, e_j⟩`.
    pub coeffs: Vec<String>,
}

/// Coordinates of `v` with respect to `basis` when the basis elements have
/// distinct leading monomials with unit leading coefficients (reduction by
/// leading terms).  Fails when `v` is outside the span.
pub fn coordinates_in(basis: &[RingValue], v: &RingValue) -> Result<Vector> {
    let alg = v.ring().clone();
    let base = alg.base().cloned().ok_or_else(|| {
        Error::Unsupported(format!("coordinates need a polynomial-type algebra, got {alg}"))
    })?;
    let mut leads = Vec::with_capacity(basis.len());
    for b in basis {
        let terms = alg.poly_terms(b.value());
        let (e, c) = terms.first().ok_or_else(|| Error::InvalidConstruction("zero basis element".into()))?;
        let inv = base.inverse(c).map_err(|_| {
            Error::Precondition(format!("leading coefficient of basis element {b} is not a unit"))
        })?;
        if leads.iter().any(|(e2, _): &(Vec<i32>, _)| e2 == e) {
            return Err(Error::InvalidConstruction("basis elements share a leading monomial".into()));
        }
        leads.push((e.clone(), inv));
    }
    let mut rest = v.clone();
    let mut coords = vec![RingValue::zero(&base); basis.len()];
    while !rest.is_zero() {
        let (e, c) = alg.poly_terms(rest.value())[0].clone();
        let k = leads.iter().position(|(e2, _)| *e2 == e).ok_or_else(|| {
            Error::Precondition(format!("{v} is not in the span of the module basis"))
        })?;
        let f = base.mul(&c, &leads[k].1);
        coords[k] = &coords[k] + &base.el(f.clone());
        rest = &rest - &(&alg.el(alg.embed_base(&f)) * &basis[k]);
    }
    Ok(coords)
}

/// The hom-Lie algebra `span(basis)·∂` with `⟨a∂, b∂⟩ = (σ(a)∂(b) − σ(b)∂(a))∂`,
/// twist `α(a∂) = σ(a)∂` and `q` the commutation factor of ∂.
pub fn from_derivation(d: &SigmaDerivation, basis: &[RingValue]) -> Result<HomLieAlgebra> {
    let alg = d.algebra();
    let base = alg.base().unwrap().clone();
    let q = match d.q_factor()? {
        Some(q) => q,
        None if basis.iter().all(|b| d.apply(b).map(|x| x.is_zero()).unwrap_or(false)) => RingValue::one(alg),
        None => return Err(Error::Precondition("∂ has no commutation factor q".into())),
    };
    let q = base.el(alg.as_base_constant(q.value()).ok_or_else(|| {
        Error::Unsupported(format!("commutation factor {q} is not a coefficient scalar"))
    })?);
    let sigma = d.sigma();
    let n = basis.len();
    let mut entries = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = &(&sigma.apply(&basis[i]) * &d.apply(&basis[j])?)
                - &(&sigma.apply(&basis[j]) * &d.apply(&basis[i])?);
            entries.insert((i, j), coordinates_in(basis, &v).map_err(|e| match e {
                Error::Precondition(m) => Error::Precondition(format!("bracket not closed: {m}")),
                other => other,
            })?);
        }
    }
    let twist = basis.iter().map(|b| coordinates_in(basis, &sigma.apply(b))).collect::<Result<Matrix>>()?;
    HomLieAlgebra::new(&base, n, &entries, twist, q)
}

/// The hL construction on a finite algebra with endomorphism matrix `s`
/// (row `i` = `σ(e_i)`): `⟨a, b⟩_σ = σ(a)b − σ(b)a`, twist `σ`, `q = 1`.
pub fn hl_functor(a: &FiniteAlgebra, s: &Matrix) -> Result<HomLieAlgebra> {
    a.check_endomorphism(s)?;
    let n = a.rank();
    let mut entries = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let ei = a.unit_vector(i);
            let ej = a.unit_vector(j);
            let v: Vector = a
                .mul(&s[i], &ej)
                .iter()
                .zip(a.mul(&s[j], &ei))
                .map(|(x, y)| x - &y)
                .collect();
            entries.insert((i, j), v);
        }
    }
    HomLieAlgebra::new(a.ring(), n, &entries, s.clone(), RingValue::one(a.ring()))
}

/// The algebra `A·D_w` with `D_w = w(id − σ)`:
/// `⟨aD_w, bD_w⟩ = (σ(a)D_w(b) − σ(b)D_w(a))D_w`, twist `σ`, `q = w/σ(w)`.
pub fn from_rep(a: &FiniteAlgebra, s: &Matrix, w: &[RingValue]) -> Result<HomLieAlgebra> {
    a.check_endomorphism(s)?;
    let n = a.rank();
    let ring = a.ring();
    let sigma = |v: &[RingValue]| linalg::vec_mat(v, s, ring);
    let dw = |v: &[RingValue]| -> Vector {
        let diff: Vector = v.iter().zip(sigma(v)).map(|(x, y)| x - &y).collect();
        a.mul(w, &diff)
    };
    let sw = sigma(w);
    let k = sw.iter().position(|x| !x.is_zero()).ok_or_else(|| {
        Error::Precondition("σ(w) = 0; D_w has no commutation factor".into())
    })?;
    let q = w[k].div_exact(&sw[k]).map_err(|_| {
        Error::Precondition("w/σ(w) is not a scalar of the base ring".into())
    })?;
    if sw.iter().zip(w).any(|(x, y)| &(&q * x) != y) {
        return Err(Error::Precondition("w/σ(w) is not a scalar of the base ring".into()));
    }
    let mut entries = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let ei = a.unit_vector(i);
            let ej = a.unit_vector(j);
            let v: Vector = a
                .mul(&s[i], &dw(&ej))
                .iter()
                .zip(a.mul(&s[j], &dw(&ei)))
                .map(|(x, y)| x - &y)
                .collect();
            entries.insert((i, j), v);
        }
    }
    HomLieAlgebra::new(ring, n, &entries, s.clone(), q)
}

/// A finite group given by its multiplication table; element 0 is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// From a multiplication table (`table[g][h] = gh`), validated.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let m = table.len();
        if m == 0 || table.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(Error::InvalidConstruction("malformed group table".into()));
        }
        for g in 0..m {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidConstruction("element 0 must be the identity".into()));
            }
            if !(0..m).any(|h| table[g][h] == 0) {
                return Err(Error::InvalidConstruction(format!("element {g} has no inverse")));
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidConstruction("table is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { table })
    }

    /// The cyclic group of order `m` (element `k` is the `k`-th power of a
    /// generator).
    pub fn cyclic(m: usize) -> Self {
        FiniteGroup { table: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect() }
    }

    /// Order.
    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// Product `gh`.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }
}

/// A family of hom-Lie algebras on one module indexed by a finite group.
#[derive(Clone, Debug)]
pub struct EquivariantHomLie {
    group: FiniteGroup,
    members: Vec<HomLieAlgebra>,
}

impl EquivariantHomLie {
    /// Build and validate: one member per group element, common rank and
    /// ring, the identity member a Lie algebra (`q = 1`, `α = id`).
    pub fn new(group: FiniteGroup, members: Vec<HomLieAlgebra>) -> Result<Self> {
        if members.len() != group.order() {
            return Err(Error::InvalidConstruction("one member per group element is required".into()));
        }
        let (ring, rank) = (members[0].ring.clone(), members[0].rank);
        if members.iter().any(|m| m.ring != ring || m.rank != rank) {
            return Err(Error::InvalidConstruction("members must share rank and ring".into()));
        }
        let e = &members[0];
        if !e.q.is_one() || e.twist != linalg::identity(&ring, rank) {
            return Err(Error::InvalidConstruction("the identity member must have q = 1 and α = id".into()));
        }
        if !e.check_axioms().passed() {
            return Err(Error::InvalidConstruction("the identity member is not a Lie algebra".into()));
        }
        Ok(EquivariantHomLie { group, members })
    }

    /// The hL construction for every element of a cyclic group generated by
    /// `s` (member `k` uses `s^k`).
    pub fn cyclic_hl(a: &FiniteAlgebra, s: &Matrix, order: usize) -> Result<Self> {
        let ring = a.ring();
        let mut power = linalg::identity(ring, a.rank());
        let mut members = Vec::new();
        for _ in 0..order {
            members.push(hl_functor(a, &power)?);
            power = linalg::mat_mul(&power, s, ring);
        }
        if power != linalg::identity(ring, a.rank()) {
            return Err(Error::InvalidConstruction(format!("σ does not have order dividing {order}")));
        }
        EquivariantHomLie::new(FiniteGroup::cyclic(order), members)
    }

    /// The group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Member for group element `g`.
    pub fn member(&self, g: usize) -> &HomLieAlgebra {
        &self.members[g]
    }

    /// All members.
    pub fn members(&self) -> &[HomLieAlgebra] {
        &self.members
    }

    /// The invariant submodule `L^H = ∩_{h∈H} ker(α_h − id)` with every
    /// member restricted to it.  Requires a field.
    pub fn invariants(&self, subgroup: &[usize]) -> Result<EquivariantHomLie> {
        let ring = self.members[0].ring.clone();
        let n = self.members[0].rank;
        // Row v is invariant iff v·(α_h − I) = 0, i.e. (α_h − I)ᵀ v = 0.
        let mut rows: Matrix = Vec::new();
        for &h in subgroup {
            let a = &self.members[h].twist;
            for k in 0..n {
                rows.push(
                    (0..n)
                        .map(|i| {
                            let d = if i == k { RingValue::one(&ring) } else { RingValue::zero(&ring) };
                            &a[i][k] - &d
                        })
                        .collect(),
                );
            }
        }
        let basis = if rows.is_empty() { linalg::identity(&ring, n) } else { linalg::kernel_field(&ring, &rows, n)? };
        let members = self
            .members
            .iter()
            .map(|m| {
                m.on_subspace(&basis).map_err(|e| {
                    Error::Precondition(format!("invariants are not closed (internal inconsistency): {e}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivariantHomLie { group: self.group.clone(), members })
    }
}

/// Induce from `H` to `G` along the injective map `embed: H → G`: the module
/// of `ψ: G → L` with `ψ(hg) = α_h ψ(g)`, pointwise bracket of the identity
/// member, and `G` acting by `(g'.ψ)(g) = ψ(gg')`.  Every member is checked
/// against the axioms.
pub fn induced(l: &EquivariantHomLie, g: &FiniteGroup, embed: &[usize]) -> Result<EquivariantHomLie> {
    let h_order = l.group.order();
    if embed.len() != h_order || embed[0] != 0 {
        return Err(Error::InvalidConstruction("embedding must send the identity to the identity".into()));
    }
    for a in 0..h_order {
        for b in 0..h_order {
            if embed[l.group.mul(a, b)] != g.mul(embed[a], embed[b]) {
                return Err(Error::InvalidConstruction("embedding is not a homomorphism".into()));
            }
        }
    }
    let base = &l.members[0];
    let ring = base.ring.clone();
    let n = base.rank;
    // Right cosets Hg: representatives in increasing order.
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(x);
        for &h in embed {
            coset_of[g.mul(h, x)] = idx;
        }
    }
    let m = reps.len();
    let dim = m * n;
    // Value of a basis function (rep r, e_i) at group element x:
    // x = h·reps[c]; nonzero only if c == r, value α_h(e_i).
    let h_of = |x: usize| -> usize {
        let c = coset_of[x];
        (0..h_order).find(|&h| g.mul(embed[h], reps[c]) == x).unwrap()
    };
    let value_at = |v: &[RingValue], x: usize| -> Vector {
        let c = coset_of[x];
        let local: Vector = v[c * n..(c + 1) * n].to_vec();
        l.members[h_of(x)].apply_twist(&local)
    };
    // Pointwise brackets must respect the H-action for the result to be
    // well defined; the bracket of basis functions is read off at the
    // representatives.
    let mut entries = BTreeMap::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let mut ua = zero_vec(&ring, dim);
            ua[a] = RingValue::one(&ring);
            let mut ub = zero_vec(&ring, dim);
            ub[b] = RingValue::one(&ring);
            let mut out = zero_vec(&ring, dim);
            for (c, &r) in reps.iter().enumerate() {
                let br = base.bracket(&value_at(&ua, r), &value_at(&ub, r));
                out[c * n..(c + 1) * n].clone_from_slice(&br);
                for x in 0..g.order() {
                    if coset_of[x] != c {
                        continue;
                    }
                    let lhs = base.bracket(&value_at(&ua, x), &value_at(&ub, x));
                    let rhs = l.members[h_of(x)].apply_twist(&br);
                    if lhs != rhs {
                        return Err(Error::Precondition(
                            "the H-action does not preserve the bracket; pointwise product undefined".into(),
                        ));
                    }
                }
            }
            entries.insert((a, b), out);
        }
    }
    let mut members = Vec::new();
    for gp in 0..g.order() {
        // Action matrix: row (r, i) = coordinates of g'.ψ_{r,i}.
        let mut mat = linalg::zeros(&ring, dim, dim);
        for a in 0..dim {
            let mut ua = zero_vec(&ring, dim);
            ua[a] = RingValue::one(&ring);
            for (c, &r) in reps.iter().enumerate() {
                let v = value_at(&ua, g.mul(r, gp));
                mat[a][c * n..(c + 1) * n].clone_from_slice(&v);
            }
        }
        let member = HomLieAlgebra::new(&ring, dim, &entries, mat, RingValue::one(&ring))?;
        let rep = member.check_axioms();
        if !rep.passed() {
            return Err(Error::Precondition(format!(
                "induced member for element {gp} fails the twisted Jacobi identity at {:?}",
                rep.jacobi_witness
            )));
        }
        members.push(member);
    }
    EquivariantHomLie::new(g.clone(), members)
}

#[cfg(test)]
mod tests;

impl std::fmt::Display for HomLieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "rank {} over {}, q = {}", self.rank, self.ring, self.q)?;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                writeln!(f, "<e{i}, e{j}> = {}", Self::format_vector(&self.table[i][j]))?;
            }
        }
        Ok(())
    }
}
