//! σ-derivations on commutative algebras, their canonical forms, the
//! commutation factor `q`, the generator for unique factorisation domains,
//! and the calculus of difference operators `Σ a_i ∂^i`.
//!
//! A σ-derivation `∂` on an algebra `A` (a polynomial, Laurent or quotient
//! level over a coefficient ring) is coefficient-linear and satisfies
//! `∂(xy) = ∂(x) y + σ(x) ∂(y)`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rings::random::{random_element, RandomShape};
use crate::rings::{grlex_cmp, Exps, Ring, RingKind, RingMorphism, RingValue};

/// An algebra endomorphism σ of a polynomial-type level that fixes the
/// coefficient ring.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    map: RingMorphism,
}

impl Endomorphism {
    /// Wrap a ring morphism `A -> A`; it must fix every generator below the
    /// top polynomial level.
    pub fn new(map: RingMorphism) -> Result<Self> {
        let a = map.source().clone();
        if map.target() != &a {
            return Err(Error::InvalidConstruction("σ must map the algebra to itself".into()));
        }
        if !matches!(a.kind(), RingKind::Polynomial { .. }) {
            return Err(Error::InvalidConstruction(format!(
                "σ-derivations need a polynomial-type algebra, got {a}"
            )));
        }
        let base = a.base().unwrap();
        for name in base.generator_names() {
            let g = a.gen(&name)?;
            if map.apply(&g)? != g {
                return Err(Error::InvalidConstruction(format!(
                    "σ must fix the coefficient generator {name}"
                )));
            }
        }
        Ok(Endomorphism { map })
    }

    /// σ given by expressions for the images of the top-level variables.
    pub fn from_strings(algebra: &Ring, images: &[(&str, &str)]) -> Result<Self> {
        Endomorphism::new(RingMorphism::from_strings(algebra, algebra, images)?)
    }

    /// The algebra.
    pub fn algebra(&self) -> &Ring {
        self.map.source()
    }

    /// Apply σ.
    pub fn apply(&self, x: &RingValue) -> RingValue {
        self.map.apply(x).expect("σ applies to elements of its algebra")
    }

    /// Whether σ is the identity.
    pub fn is_identity(&self) -> bool {
        let a = self.algebra();
        a.poly_vars().iter().all(|v| {
            let g = a.gen(&v.name).unwrap();
            self.apply(&g) == g
        })
    }

    /// The underlying ring morphism.
    pub fn morphism(&self) -> &RingMorphism {
        &self.map
    }
}

/// How a σ-derivation is specified.
#[derive(Clone, Debug)]
pub enum DerivationForm {
    /// `∂(x) = coeff · (x − σ(x)) / divisor` (the division must be exact).
    Canonical { coeff: RingValue, divisor: RingValue },
    /// Images of monomials (exponent vectors of the top level); missing
    /// monomials are expanded by the twisted Leibniz rule.
    Table { images: BTreeMap<Exps, RingValue> },
}

/// A σ-derivation on a polynomial-type algebra.
#[derive(Clone, Debug)]
pub struct SigmaDerivation {
    sigma: Endomorphism,
    form: DerivationForm,
}

/// Outcome of a Leibniz-rule check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizReport {
    /// Whether every tested pair satisfied the rule.
    pub ok: bool,
    /// Number of pairs tested.
    pub pairs_checked: usize,
    /// First failing pair, if any.
    pub witness: Option<(RingValue, RingValue)>,
}

fn monomial_value(a: &Ring, e: &[i32]) -> RingValue {
    let base = a.base().unwrap();
    a.el(a.poly_from_terms(vec![(e.to_vec(), base.one())]))
}

impl SigmaDerivation {
    /// `∂ = a (id − σ)`.
    pub fn canonical(sigma: &Endomorphism, a: &RingValue) -> Result<Self> {
        let alg = sigma.algebra();
        if a.ring() != alg {
            return Err(Error::RingMismatch("coefficient must lie in the algebra".into()));
        }
        Ok(SigmaDerivation {
            sigma: sigma.clone(),
            form: DerivationForm::Canonical { coeff: a.clone(), divisor: RingValue::one(alg) },
        })
    }

    /// `∂ = (a / g)(id − σ)` where every `a (x − σ(x))` is divisible by `g`.
    pub fn canonical_scaled(sigma: &Endomorphism, a: &RingValue, g: &RingValue) -> Result<Self> {
        let alg = sigma.algebra();
        if a.ring() != alg || g.ring() != alg {
            return Err(Error::RingMismatch("coefficients must lie in the algebra".into()));
        }
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = SigmaDerivation {
            sigma: sigma.clone(),
            form: DerivationForm::Canonical { coeff: a.clone(), divisor: g.clone() },
        };
        for v in alg.poly_vars() {
            d.apply(&alg.gen(&v.name)?)?;
        }
        Ok(d)
    }

    /// `id − σ`.
    pub fn id_minus_sigma(sigma: &Endomorphism) -> Self {
        SigmaDerivation::canonical(sigma, &RingValue::one(sigma.algebra())).unwrap()
    }

    /// General form from the images of the top-level variables.
    pub fn from_generator_images(sigma: &Endomorphism, images: &[(&str, RingValue)]) -> Result<Self> {
        let alg = sigma.algebra();
        let vars = alg.poly_vars();
        let mut table = BTreeMap::new();
        for (name, img) in images {
            let i = vars.iter().position(|v| v.name == *name).ok_or_else(|| {
                Error::InvalidConstruction(format!("{name} is not a top-level variable of {alg}"))
            })?;
            if img.ring() != alg {
                return Err(Error::RingMismatch(format!("image of {name} must lie in {alg}")));
            }
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            table.insert(e, img.clone());
        }
        for (i, v) in vars.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            if !table.contains_key(&e) {
                return Err(Error::InvalidConstruction(format!("missing image of {}", v.name)));
            }
        }
        Ok(SigmaDerivation { sigma: sigma.clone(), form: DerivationForm::Table { images: table } })
    }

    /// General form from a table of monomial images (monomials given as
    /// algebra elements with a single term and unit coefficient).  The table
    /// must include every top-level variable.
    pub fn from_table(sigma: &Endomorphism, entries: &[(RingValue, RingValue)]) -> Result<Self> {
        let alg = sigma.algebra();
        let mut table = BTreeMap::new();
        for (m, img) in entries {
            let terms = alg.poly_terms(m.value());
            if terms.len() != 1 || !alg.base().unwrap().is_one(&terms[0].1) {
                return Err(Error::InvalidConstruction(format!("{m} is not a monomial")));
            }
            table.insert(terms[0].0.clone(), img.clone());
        }
        let n = alg.num_vars();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            if !table.contains_key(&e) {
                return Err(Error::InvalidConstruction("table must contain every variable".into()));
            }
        }
        Ok(SigmaDerivation { sigma: sigma.clone(), form: DerivationForm::Table { images: table } })
    }

    /// The twisting endomorphism.
    pub fn sigma(&self) -> &Endomorphism {
        &self.sigma
    }

    /// The algebra.
    pub fn algebra(&self) -> &Ring {
        self.sigma.algebra()
    }

    /// The specification.
    pub fn form(&self) -> &DerivationForm {
        &self.form
    }

    /// Apply ∂.
    pub fn apply(&self, x: &RingValue) -> Result<RingValue> {
        let alg = self.algebra();
        if x.ring() != alg {
            return Err(Error::RingMismatch(format!("∂ on {alg} applied to element of {}", x.ring())));
        }
        match &self.form {
            DerivationForm::Canonical { coeff, divisor } => {
                let y = coeff * &(x - &self.sigma.apply(x));
                if divisor.is_one() {
                    Ok(y)
                } else {
                    y.div_exact(divisor)
                }
            }
            DerivationForm::Table { images } => {
                let base = alg.base().unwrap();
                let mut acc = RingValue::zero(alg);
                for (e, c) in alg.poly_terms(x.value()) {
                    let d = self.table_monomial(images, e)?;
                    if d.is_zero() {
                        continue;
                    }
                    let c = alg.el(alg.embed_from(base, c)?);
                    acc = &acc + &(&c * &d);
                }
                Ok(acc)
            }
        }
    }

    fn table_monomial(&self, images: &BTreeMap<Exps, RingValue>, e: &[i32]) -> Result<RingValue> {
        let alg = self.algebra();
        if let Some(v) = images.get(e) {
            return Ok(v.clone());
        }
        if e.iter().all(|&k| k == 0) {
            return Ok(RingValue::zero(alg));
        }
        let n = e.len();
        if let Some(i) = (0..n).find(|&i| e[i] > 0) {
            // ∂(x · m) = ∂(x) m + σ(x) ∂(m)
            let mut unit = vec![0; n];
            unit[i] = 1;
            let mut rest = e.to_vec();
            rest[i] -= 1;
            let x = monomial_value(alg, &unit);
            let m = monomial_value(alg, &rest);
            let dx = self.table_monomial(images, &unit)?;
            let dm = self.table_monomial(images, &rest)?;
            return Ok(&(&dx * &m) + &(&self.sigma.apply(&x) * &dm));
        }
        // Some exponent is negative: ∂(x^{-1} m) with ∂(x^{-1}) = −σ(x)^{-1} ∂(x) x^{-1}.
        let i = (0..n).find(|&i| e[i] < 0).unwrap();
        let mut unit = vec![0; n];
        unit[i] = 1;
        let mut inv_unit = vec![0; n];
        inv_unit[i] = -1;
        let mut rest = e.to_vec();
        rest[i] += 1;
        let x = monomial_value(alg, &unit);
        let xinv = monomial_value(alg, &inv_unit);
        let dx = self.table_monomial(images, &unit)?;
        let sx_inv = self.sigma.apply(&x).inverse()?;
        let dxinv = -(&(&sx_inv * &dx) * &xinv);
        let m = monomial_value(alg, &rest);
        let dm = self.table_monomial(images, &rest)?;
        Ok(&(&dxinv * &m) + &(&self.sigma.apply(&xinv) * &dm))
    }

    /// `∂^n(x)`.
    pub fn apply_power(&self, n: usize, x: &RingValue) -> Result<RingValue> {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.apply(&y)?;
        }
        Ok(y)
    }

    /// Check `∂(xy) = ∂(x)y + σ(x)∂(y)`: first on all pairs of monomials of
    /// low degree (in increasing order), then on `trials` random pairs.
    pub fn check_leibniz(&self, trials: usize, seed: u64) -> Result<LeibnizReport> {
        let alg = self.algebra();
        let mut max_deg = 2;
        if let DerivationForm::Table { images } = &self.form {
            for e in images.keys() {
                max_deg = max_deg.max(e.iter().map(|k| k.abs()).sum::<i32>());
            }
        }
        let monos = low_degree_monomials(alg, max_deg);
        let mut checked = 0;
        let test = |x: &RingValue, y: &RingValue| -> Result<bool> {
            let lhs = self.apply(&(x * y))?;
            let rhs = &(&self.apply(x)? * y) + &(&self.sigma.apply(x) * &self.apply(y)?);
            Ok(lhs == rhs)
        };
        for (i, x) in monos.iter().enumerate() {
            for y in &monos[i..] {
                checked += 1;
                if !test(x, y)? {
                    return Ok(LeibnizReport {
                        ok: false,
                        pairs_checked: checked,
                        witness: Some((x.clone(), y.clone())),
                    });
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = RandomShape { terms: 3, max_deg: 2, coeff: 3 };
        for _ in 0..trials {
            let x = random_element(alg, &mut rng, shape);
            let y = random_element(alg, &mut rng, shape);
            checked += 1;
            if !test(&x, &y)? {
                return Ok(LeibnizReport { ok: false, pairs_checked: checked, witness: Some((x, y)) });
            }
        }
        Ok(LeibnizReport { ok: true, pairs_checked: checked, witness: None })
    }

    /// The scalar `q` with `∂∘σ = q·σ∘∂`, if it exists.  Checking the
    /// variables suffices: both sides are σ²-twisted derivations.
    pub fn q_factor(&self) -> Result<Option<RingValue>> {
        let alg = self.algebra();
        let mut q: Option<RingValue> = None;
        for v in alg.poly_vars() {
            let x = alg.gen(&v.name)?;
            let u = self.sigma.apply(&self.apply(&x)?);
            let w = self.apply(&self.sigma.apply(&x))?;
            if u.is_zero() {
                if !w.is_zero() {
                    return Ok(None);
                }
                continue;
            }
            let Ok(qx) = w.div_exact(&u) else { return Ok(None) };
            match &q {
                None => q = Some(qx),
                Some(q0) if *q0 == qx => {}
                Some(_) => return Ok(None),
            }
        }
        let Some(q) = q else { return Ok(None) };
        // Confirm on low-degree monomials (the relations of a quotient level
        // may interact with the chosen representative).
        for m in low_degree_monomials(alg, 3) {
            let lhs = self.apply(&self.sigma.apply(&m))?;
            let rhs = &q * &self.sigma.apply(&self.apply(&m)?);
            if lhs != rhs {
                return Ok(None);
            }
        }
        Ok(Some(q))
    }

    /// Rewrite as `c (id − σ)` using `x` with `x − σ(x)` a unit:
    /// `c = (x − σ(x))^{-1} ∂(x)`.  The result is verified to agree with ∂ on
    /// every variable, every table entry and a batch of random elements.
    pub fn canonical_form(&self, x: &RingValue) -> Result<SigmaDerivation> {
        let u = x - &self.sigma.apply(x);
        let inv = u.inverse().map_err(|_| {
            Error::Precondition(format!("{x} − σ({x}) = {u} is not a unit"))
        })?;
        let c = &inv * &self.apply(x)?;
        let cand = SigmaDerivation::canonical(&self.sigma, &c)?;
        let alg = self.algebra();
        let mut probes: Vec<RingValue> =
            alg.poly_vars().iter().map(|v| alg.gen(&v.name).unwrap()).collect();
        if let DerivationForm::Table { images } = &self.form {
            probes.extend(images.keys().map(|e| monomial_value(alg, e)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..8 {
            probes.push(random_element(alg, &mut rng, RandomShape::default()));
        }
        for p in &probes {
            if cand.apply(p)? != self.apply(p)? {
                return Err(Error::Precondition(format!(
                    "∂ is not of the form c(id − σ): disagreement at {p}"
                )));
            }
        }
        Ok(cand)
    }

    /// `π^n_i(x)`: the sum over all words with `i` letters σ and `n − i`
    /// letters ∂, computed by `π^n_i = ∂∘π^{n−1}_i + σ∘π^{n−1}_{i−1}`.
    pub fn pi_symbol(&self, n: usize, i: usize, x: &RingValue) -> Result<RingValue> {
        if i > n {
            return Ok(RingValue::zero(self.algebra()));
        }
        // Row of values π^k_j(x), j = 0..=k.
        let mut row = vec![x.clone()];
        for k in 1..=n {
            let mut next = Vec::with_capacity(k + 1);
            for j in 0..=k {
                let mut v = RingValue::zero(self.algebra());
                if j < k {
                    v = &v + &self.apply(&row[j])?;
                }
                if j > 0 {
                    v = &v + &self.sigma.apply(&row[j - 1]);
                }
                next.push(v);
            }
            row = next;
        }
        Ok(row[i].clone())
    }

    /// Check `∂^n(ab) = Σ_i π^n_i(a) ∂^i(b)`.
    pub fn check_general_leibniz(&self, n: usize, a: &RingValue, b: &RingValue) -> Result<bool> {
        let lhs = self.apply_power(n, &(a * b))?;
        let mut rhs = RingValue::zero(self.algebra());
        for i in 0..=n {
            rhs = &rhs + &(&self.pi_symbol(n, i, a)? * &self.apply_power(i, b)?);
        }
        Ok(lhs == rhs)
    }

    /// Multiply the derivation by an element of the algebra.
    pub fn scaled(&self, c: &RingValue) -> Result<SigmaDerivation> {
        match &self.form {
            DerivationForm::Canonical { coeff, divisor } => Ok(SigmaDerivation {
                sigma: self.sigma.clone(),
                form: DerivationForm::Canonical { coeff: coeff * c, divisor: divisor.clone() },
            }),
            DerivationForm::Table { images } => Ok(SigmaDerivation {
                sigma: self.sigma.clone(),
                form: DerivationForm::Table {
                    images: images.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
                },
            }),
        }
    }
}

/// Monomials of total absolute degree `1..=max_deg` in increasing graded
/// order (negative exponents only for Laurent variables).
fn low_degree_monomials(alg: &Ring, max_deg: i32) -> Vec<RingValue> {
    let vars = alg.poly_vars();
    let n = vars.len();
    let mut exps: Vec<Exps> = vec![vec![]];
    for v in vars {
        let lo = if v.laurent { -1 } else { 0 };
        let hi = match &v.relation {
            Some(rel) => (rel.len() as i32 - 2).max(0).min(max_deg),
            None => max_deg,
        };
        let mut next = Vec::new();
        for e in &exps {
            for k in lo..=hi {
                let mut e2 = e.clone();
                e2.push(k);
                next.push(e2);
            }
        }
        exps = next;
    }
    exps.retain(|e| {
        let d: i32 = e.iter().map(|k| k.abs()).sum();
        d >= 1 && d <= max_deg
    });
    exps.sort_by(|a, b| {
        let da: i32 = a.iter().map(|k| k.abs()).sum();
        let db: i32 = b.iter().map(|k| k.abs()).sum();
        da.cmp(&db).then_with(|| grlex_cmp(a, b))
    });
    let _ = n;
    exps.iter().map(|e| monomial_value(alg, e)).collect()
}

/// Result of [`ufd_generator`].
#[derive(Clone, Debug)]
pub struct UfdGenerator {
    /// Monic gcd `g` of the values `(id − σ)(t^k)`.
    pub gcd: RingValue,
    /// `Δ = (id − σ)/g`.
    pub derivation: SigmaDerivation,
    /// `Δ` rescaled by the unit `Δ(t)^{-1}` when `Δ(t)` is a coefficient
    /// unit, so that `Δ(t) = 1`.
    pub normalized: Option<SigmaDerivation>,
    /// Number of terms `(id − σ)(t^k)` consumed before stabilisation.
    pub terms_used: usize,
}

/// For `A = k[t]` with `k` a field and σ ≠ id, compute the generator
/// `Δ = (id − σ)/gcd((id − σ)(A))` of the module of σ-derivations.  The gcd is
/// accumulated over `(id − σ)(t^k)` until it has been stable for two further
/// nonzero terms, with at most `max_terms` terms.
pub fn ufd_generator(sigma: &Endomorphism, max_terms: usize) -> Result<UfdGenerator> {
    let alg = sigma.algebra();
    let k = alg.base().unwrap();
    if alg.num_vars() != 1 || !k.is_field() || alg.poly_vars()[0].laurent || alg.poly_vars()[0].relation.is_some() {
        return Err(Error::Unsupported(format!(
            "the gcd generator is implemented for univariate polynomial rings over a field, not {alg}"
        )));
    }
    if sigma.is_identity() {
        return Err(Error::Precondition("σ is the identity; (id − σ) vanishes".into()));
    }
    let t = alg.gen(&alg.poly_vars()[0].name)?;
    let mut g: Option<Vec<crate::rings::Value>> = None;
    let mut stable = 0;
    let mut used = 0;
    for e in 1..=max_terms.max(1) {
        let te = t.pow(e as u64);
        let v = &te - &sigma.apply(&te);
        used = e;
        if v.is_zero() {
            continue;
        }
        let dense = alg.poly_to_dense(v.value())?;
        let new = match &g {
            None => crate::rings::upoly_gcd(k, &dense, &dense)?,
            Some(old) => crate::rings::upoly_gcd(k, old, &dense)?,
        };
        if g.as_ref() == Some(&new) {
            stable += 1;
            if stable >= 2 {
                break;
            }
        } else {
            stable = 0;
        }
        g = Some(new);
    }
    let g = g.ok_or_else(|| Error::Precondition("(id − σ) vanished on all tested powers".into()))?;
    let gv = alg.el(alg.dense_to_poly(&g));
    let delta = SigmaDerivation::canonical_scaled(sigma, &RingValue::one(alg), &gv)?;
    let dt = delta.apply(&t)?;
    let normalized = match alg.as_base_constant(dt.value()) {
        Some(c) if k.is_unit(&c) => {
            let inv = alg.el(alg.embed_base(&k.inverse(&c)?));
            Some(SigmaDerivation::canonical_scaled(sigma, &inv, &gv)?)
        }
        _ => None,
    };
    Ok(UfdGenerator { gcd: gv, derivation: delta, normalized, terms_used: used })
}

/// A difference operator `Σ_i c_i ∂^i` with coefficients in the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceOperator {
    /// `coeffs[i]` multiplies `∂^i`; trailing zeros are trimmed.
    pub coeffs: Vec<RingValue>,
}

impl DifferenceOperator {
    /// `a ∂^n`.
    pub fn monomial(a: &RingValue, n: usize) -> Self {
        let mut coeffs = vec![RingValue::zero(a.ring()); n + 1];
        coeffs[n] = a.clone();
        DifferenceOperator { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        self
    }

    /// Whether this is the zero operator.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Apply to an element.
    pub fn apply(&self, d: &SigmaDerivation, x: &RingValue) -> Result<RingValue> {
        let mut acc = RingValue::zero(d.algebra());
        let mut dx = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                dx = d.apply(&dx)?;
            }
            if !c.is_zero() {
                acc = &acc + &(c * &dx);
            }
        }
        Ok(acc)
    }
}

/// `⟨a∂^n, b∂^m⟩ = σ(a)∂^n∘(b∂^m) − σ(b)∂^m∘(a∂^n)`, expanded with the
/// general Leibniz rule into `Σ_i (σ(a)π^n_{i−m}(b) − σ(b)π^m_{i−n}(a)) ∂^i`.
pub fn operator_bracket(
    d: &SigmaDerivation,
    a: &RingValue,
    n: usize,
    b: &RingValue,
    m: usize,
) -> Result<DifferenceOperator> {
    let alg = d.algebra();
    let top = n + m;
    let mut coeffs = vec![RingValue::zero(alg); top + 1];
    let sa = d.sigma().apply(a);
    let sb = d.sigma().apply(b);
    for i in 0..=n {
        coeffs[m + i] = &coeffs[m + i] + &(&sa * &d.pi_symbol(n, i, b)?);
    }
    for i in 0..=m {
        coeffs[n + i] = &coeffs[n + i] - &(&sb * &d.pi_symbol(m, i, a)?);
    }
    Ok(DifferenceOperator { coeffs }.trimmed())
}

/// Evaluate the defining composite `σ(a)∂^n(b ∂^m x) − σ(b)∂^m(a ∂^n x)`
/// directly, without expansion.
pub fn operator_bracket_direct(
    d: &SigmaDerivation,
    a: &RingValue,
    n: usize,
    b: &RingValue,
    m: usize,
    x: &RingValue,
) -> Result<RingValue> {
    let sa = d.sigma().apply(a);
    let sb = d.sigma().apply(b);
    let left = &sa * &d.apply_power(n, &(b * &d.apply_power(m, x)?))?;
    let right = &sb * &d.apply_power(m, &(a * &d.apply_power(n, x)?))?;
    Ok(&left - &right)
}
