//! Enveloping algebras of hom-Lie algebras as finitely presented
//! noncommutative rewrite systems.
//!
//! Words are ordered graded-lexicographically (length first, then
//! lexicographically on generator indices), so a relation is oriented by its
//! largest word and every rewrite step strictly decreases the word.  On top of
//! the normal-form engine sit overlap (diamond-lemma) checks, centrality and
//! normal-element solvers, the Jackson presentations and the down-up
//! identification.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homlie::HomLieAlgebra;
use crate::linalg::{self, Matrix};
use crate::rings::{Ring, RingDescriptor, RingMorphism, RingValue};

/// Default bound on the degree of inputs to [`NCPresentation::normal_form`].
pub const DEFAULT_DEGREE_CAP: usize = 64;

// ---------------------------------------------------------------------------
// Words and polynomials
// ---------------------------------------------------------------------------

/// A word in the generators, as a sequence of generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    /// The empty word (the unit).
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Length of the word.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether this is the empty word.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Parse a digit string such as `"10"` (generator indices 0–9).
    pub fn from_digits(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("bad word {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Digit-string encoding (requires indices below 10).
    pub fn to_digits(&self) -> Result<String> {
        self.0
            .iter()
            .map(|&g| {
                char::from_digit(g as u32, 10)
                    .ok_or_else(|| Error::Unsupported("digit encoding needs at most 10 generators".into()))
            })
            .collect()
    }

    /// Human-readable form with the given labels, powers compressed
    /// (`e0^2*e1`); the empty word prints as `1`.
    pub fn format(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == g {
                j += 1;
            }
            let label = labels.get(g).cloned().unwrap_or_else(|| format!("x{g}"));
            if j - i == 1 {
                parts.push(label);
            } else {
                parts.push(format!("{label}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }

    /// Position of the first (or last) occurrence of `pat` as a factor.
    fn find(&self, pat: &[usize], last: bool) -> Option<usize> {
        if pat.len() > self.0.len() {
            return None;
        }
        let positions = 0..=self.0.len() - pat.len();
        let matches = |p: &usize| self.0[*p..*p + pat.len()] == *pat;
        if last {
            positions.rev().find(matches)
        } else {
            positions.clone().find(matches)
        }
    }
}

/// A noncommutative polynomial: sparse map from words to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCPolynomial {
    ring: Ring,
    terms: BTreeMap<Word, RingValue>,
}

impl NCPolynomial {
    /// The zero polynomial.
    pub fn zero(ring: &Ring) -> Self {
        NCPolynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// A constant.
    pub fn constant(c: &RingValue) -> Self {
        Self::monomial(Word::empty(), c)
    }

    /// The unit.
    pub fn one(ring: &Ring) -> Self {
        Self::constant(&RingValue::one(ring))
    }

    /// `c·w`.
    pub fn monomial(w: Word, c: &RingValue) -> Self {
        let mut p = Self::zero(c.ring());
        p.add_term(w, c.clone());
        p
    }

    /// A generator as a polynomial.
    pub fn generator(ring: &Ring, g: usize) -> Self {
        Self::monomial(Word(vec![g]), &RingValue::one(ring))
    }

    /// Build from `(word, coefficient)` pairs, merging repeated words.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Word, RingValue)>) -> Self {
        let mut p = Self::zero(ring);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Coefficient ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Add `c·w` in place.
    pub fn add_term(&mut self, w: Word, c: RingValue) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &RingValue)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether the polynomial is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &RingValue)> {
        self.terms.iter().next_back()
    }

    /// Total degree (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(w, _)| w.len())
    }

    /// Coefficient of a word.
    pub fn coefficient(&self, w: &Word) -> RingValue {
        self.terms.get(w).cloned().unwrap_or_else(|| RingValue::zero(&self.ring))
    }

    /// Sum.
    pub fn add(&self, other: &NCPolynomial) -> NCPolynomial {
        let mut p = self.clone();
        for (w, c) in &other.terms {
            p.add_term(w.clone(), c.clone());
        }
        p
    }

    /// Difference.
    pub fn sub(&self, other: &NCPolynomial) -> NCPolynomial {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> NCPolynomial {
        self.scale(&-RingValue::one(&self.ring))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &RingValue) -> NCPolynomial {
        NCPolynomial::from_terms(&self.ring, self.terms.iter().map(|(w, x)| (w.clone(), c * x)))
    }

    /// Product (concatenation of words).
    pub fn mul(&self, other: &NCPolynomial) -> NCPolynomial {
        let mut p = Self::zero(&self.ring);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                p.add_term(w1.concat(w2), c1 * c2);
            }
        }
        p
    }

    /// Power.
    pub fn pow(&self, e: usize) -> NCPolynomial {
        let mut p = Self::one(&self.ring);
        for _ in 0..e {
            p = p.mul(self);
        }
        p
    }

    /// Apply a coefficient-ring morphism.
    pub fn map_coefficients(&self, phi: &RingMorphism) -> Result<NCPolynomial> {
        let mut p = Self::zero(phi.target());
        for (w, c) in &self.terms {
            p.add_term(w.clone(), phi.apply(c)?);
        }
        Ok(p)
    }

    /// Substitute `images[g]` for every generator `g`.
    pub fn substitute(&self, images: &[NCPolynomial]) -> Result<NCPolynomial> {
        let mut out = Self::zero(&self.ring);
        for (w, c) in &self.terms {
            let mut t = Self::constant(c);
            for &g in &w.0 {
                let img = images
                    .get(g)
                    .ok_or_else(|| Error::InvalidConstruction(format!("no image for generator {g}")))?;
                t = t.mul(img);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Largest generator index occurring, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max()
    }

    /// Human-readable form, largest word first.
    pub fn format(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let body = if body.contains(['+', '-']) { format!("({body})") } else { body };
            let term = if w.is_empty() {
                body
            } else if body == "1" {
                w.format(labels)
            } else {
                format!("{body}*{}", w.format(labels))
            };
            match (k, neg) {
                (0, true) => out.push_str(&format!("-{term}")),
                (0, false) => out.push_str(&term),
                (_, true) => out.push_str(&format!(" - {term}")),
                (_, false) => out.push_str(&format!(" + {term}")),
            }
        }
        out
    }

    /// Whether `self = c·other` for a unit `c` of the coefficient ring.
    pub fn is_unit_multiple_of(&self, other: &NCPolynomial) -> bool {
        let (Some((w1, c1)), Some((w2, c2))) = (self.leading(), other.leading()) else {
            return self.is_zero() && other.is_zero();
        };
        if w1 != w2 || self.len() != other.len() {
            return false;
        }
        let Ok(c) = c1.div_exact(c2) else { return false };
        if c.inverse().is_err() {
            return false;
        }
        other.scale(&c) == *self
    }
}

// ---------------------------------------------------------------------------
// Presentations and the rewriting engine
// ---------------------------------------------------------------------------

/// A rewrite rule `lhs → rhs` with `rhs` strictly below `lhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    /// Leading word.
    pub lhs: Word,
    /// Replacement.
    pub rhs: NCPolynomial,
}

impl Rule {
    /// The relation `lhs − rhs`.
    pub fn relation(&self) -> NCPolynomial {
        NCPolynomial::monomial(self.lhs.clone(), &RingValue::one(self.rhs.ring())).sub(&self.rhs)
    }
}

/// Which occurrence of a reducible factor is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Leftmost occurrence, shortest leading word first.
    LeftmostInnermost,
    /// Rightmost occurrence, longest leading word first.
    RightmostOutermost,
}

/// A finitely presented algebra as a rewrite system under graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPresentation {
    ring: Ring,
    labels: Vec<String>,
    rules: Vec<Rule>,
    degree_cap: usize,
}

/// An unresolved overlap found by [`NCPresentation::confluence_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapFailure {
    /// The ambiguous word.
    pub word: String,
    /// Difference of the two normal forms.
    pub difference: String,
}

/// Result of an overlap-ambiguity check up to a degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    /// Degree bound on ambiguous words.
    pub degree: usize,
    /// Number of ambiguities examined.
    pub overlaps_checked: usize,
    /// Whether every ambiguity resolved.
    pub confluent: bool,
    /// Unresolved ambiguities.
    pub failures: Vec<OverlapFailure>,
    /// Number of irreducible words in each degree `0..=degree`.
    pub irreducible_counts: Vec<usize>,
}

impl NCPresentation {
    /// Build from explicit rules, validating the rewrite invariants.
    pub fn from_rules(ring: &Ring, labels: Vec<String>, rules: Vec<Rule>) -> Result<Self> {
        let g = labels.len();
        let mut seen = std::collections::BTreeSet::new();
        for r in &rules {
            if r.rhs.ring() != ring {
                return Err(Error::RingMismatch("rule coefficients".into()));
            }
            if r.lhs.0.iter().any(|&x| x >= g) || r.rhs.max_generator().is_some_and(|x| x >= g) {
                return Err(Error::InvalidConstruction("rule mentions an unknown generator".into()));
            }
            if let Some((w, _)) = r.rhs.leading() {
                if *w >= r.lhs {
                    return Err(Error::InvalidConstruction(format!(
                        "rule for {} is not decreasing",
                        r.lhs.format(&labels)
                    )));
                }
            }
            if !seen.insert(r.lhs.clone()) {
                return Err(Error::InvalidConstruction(format!("duplicate rule for {}", r.lhs.format(&labels))));
            }
        }
        let mut rules = rules;
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        Ok(NCPresentation { ring: ring.clone(), labels, rules, degree_cap: DEFAULT_DEGREE_CAP })
    }

    /// Orient relations by their leading words, making them monic and
    /// inter-reducing until every leading word is irreducible by the others.
    /// Leading coefficients must be units.
    pub fn from_relations(ring: &Ring, labels: Vec<String>, relations: &[NCPolynomial]) -> Result<Self> {
        let mut pres = NCPresentation { ring: ring.clone(), labels, rules: Vec::new(), degree_cap: usize::MAX };
        let mut pending: Vec<NCPolynomial> = relations.to_vec();
        pending.reverse();
        while let Some(rel) = pending.pop() {
            if rel.ring() != ring {
                return Err(Error::RingMismatch("relation coefficients".into()));
            }
            if rel.max_generator().is_some_and(|x| x >= pres.labels.len()) {
                return Err(Error::InvalidConstruction("relation mentions an unknown generator".into()));
            }
            let red = pres.normal_form(&rel)?;
            let Some((lw, lc)) = red.leading() else { continue };
            let inv = lc.inverse().map_err(|_| {
                Error::Precondition(format!(
                    "leading coefficient {lc} of {} is not a unit",
                    red.format(&pres.labels)
                ))
            })?;
            let lw = lw.clone();
            let monic = red.scale(&inv);
            let mut rhs = monic.neg();
            rhs.add_term(lw.clone(), RingValue::one(ring));
            let (keep, displaced): (Vec<Rule>, Vec<Rule>) =
                pres.rules.drain(..).partition(|r| r.lhs.find(&lw.0, false).is_none());
            pres.rules = keep;
            pending.extend(displaced.iter().map(Rule::relation));
            pres.rules.push(Rule { lhs: lw, rhs });
        }
        // Fully reduce right-hand sides for a canonical system.
        let rules = pres.rules.clone();
        let mut reduced = Vec::new();
        for r in rules {
            let rhs = pres.normal_form(&r.rhs)?;
            reduced.push(Rule { lhs: r.lhs, rhs });
        }
        Self::from_rules(ring, pres.labels, reduced)
    }

    /// Override the degree cap for normal forms.
    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        self.degree_cap = cap;
        self
    }

    /// Coefficient ring.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Generator labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of generators.
    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    /// Rules sorted by leading word.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rule with the given leading word.
    pub fn rule(&self, lhs: &Word) -> Option<&Rule> {
        self.rules.iter().find(|r| r.lhs == *lhs)
    }

    /// Defining relations `lhs − rhs`.
    pub fn relations(&self) -> Vec<NCPolynomial> {
        self.rules.iter().map(Rule::relation).collect()
    }

    /// A generator as a polynomial.
    pub fn gen(&self, g: usize) -> NCPolynomial {
        NCPolynomial::generator(&self.ring, g)
    }

    /// A word with unit coefficient.
    pub fn word(&self, w: &[usize]) -> NCPolynomial {
        NCPolynomial::monomial(Word(w.to_vec()), &RingValue::one(&self.ring))
    }

    fn find_redex(&self, w: &Word, strategy: RewriteStrategy) -> Option<(usize, &Rule)> {
        let mut best: Option<(usize, &Rule)> = None;
        for r in &self.rules {
            let last = strategy == RewriteStrategy::RightmostOutermost;
            if let Some(p) = w.find(&r.lhs.0, last) {
                let better = match (best, strategy) {
                    (None, _) => true,
                    (Some((bp, br)), RewriteStrategy::LeftmostInnermost) => {
                        p < bp || (p == bp && r.lhs.len() < br.lhs.len())
                    }
                    (Some((bp, br)), RewriteStrategy::RightmostOutermost) => {
                        p + r.lhs.len() > bp + br.lhs.len() || (p + r.lhs.len() == bp + br.lhs.len() && r.lhs.len() > br.lhs.len())
                    }
                };
                if better {
                    best = Some((p, r));
                }
            }
        }
        best
    }

    /// Whether a word contains no leading word as a factor.
    pub fn is_irreducible(&self, w: &Word) -> bool {
        self.find_redex(w, RewriteStrategy::LeftmostInnermost).is_none()
    }

    /// Normal form (leftmost-innermost strategy).
    pub fn normal_form(&self, x: &NCPolynomial) -> Result<NCPolynomial> {
        self.normal_form_with(x, RewriteStrategy::LeftmostInnermost)
    }

    /// Normal form with an explicit strategy.  Always terminates: each step
    /// replaces the largest reducible word by strictly smaller words.
    pub fn normal_form_with(&self, x: &NCPolynomial, strategy: RewriteStrategy) -> Result<NCPolynomial> {
        if x.ring() != &self.ring {
            return Err(Error::RingMismatch(format!("element over {} in presentation over {}", x.ring(), self.ring)));
        }
        if let Some(d) = x.degree() {
            if d > self.degree_cap {
                return Err(Error::Budget(format!("degree {d} exceeds the cap {}", self.degree_cap)));
            }
        }
        let mut work = x.clone();
        let mut done = NCPolynomial::zero(&self.ring);
        while let Some((w, c)) = work.terms.pop_last() {
            match self.find_redex(&w, strategy) {
                None => done.add_term(w, c),
                Some((p, rule)) => {
                    let prefix = Word(w.0[..p].to_vec());
                    let suffix = Word(w.0[p + rule.lhs.len()..].to_vec());
                    for (rw, rc) in rule.rhs.terms() {
                        work.add_term(prefix.concat(rw).concat(&suffix), &c * rc);
                    }
                }
            }
        }
        Ok(done)
    }

    /// Irreducible words of length exactly `k`, in increasing order.
    pub fn irreducible_words(&self, k: usize) -> Vec<Word> {
        if self.rules.iter().any(|r| r.lhs.is_empty()) {
            return Vec::new();
        }
        let g = self.labels.len();
        let mut out = Vec::new();
        let mut stack = vec![Word::empty()];
        while let Some(w) = stack.pop() {
            if w.len() == k {
                out.push(w);
                continue;
            }
            for x in 0..g {
                let mut v = w.0.clone();
                v.push(x);
                // Only a suffix can be newly reducible.
                if self.rules.iter().all(|r| !v.ends_with(&r.lhs.0)) {
                    stack.push(Word(v));
                }
            }
        }
        out.sort();
        out
    }

    /// Irreducible words of length at most `d`, in increasing order.
    pub fn irreducible_words_upto(&self, d: usize) -> Vec<Word> {
        (0..=d).flat_map(|k| self.irreducible_words(k)).collect()
    }

    /// Overlap and inclusion ambiguities among leading words whose
    /// ambiguous word has length at most `degree`; each must resolve to
    /// equal normal forms.  By the diamond lemma, success certifies that the
    /// irreducible words up to this degree form a basis.
    pub fn confluence_check(&self, degree: usize) -> Result<ConfluenceReport> {
        let mut checked = 0;
        let mut failures = Vec::new();
        for r1 in &self.rules {
            for r2 in &self.rules {
                let (l1, l2) = (&r1.lhs.0, &r2.lhs.0);
                // Proper overlaps: a suffix of l1 equals a prefix of l2.
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let total = l1.len() + l2.len() - k;
                    if total > degree {
                        continue;
                    }
                    checked += 1;
                    let tail = NCPolynomial::monomial(Word(l2[k..].to_vec()), &RingValue::one(&self.ring));
                    let head = NCPolynomial::monomial(Word(l1[..l1.len() - k].to_vec()), &RingValue::one(&self.ring));
                    let a = self.normal_form(&r1.rhs.mul(&tail))?;
                    let b = self.normal_form(&head.mul(&r2.rhs))?;
                    if a != b {
                        let word = Word(l1.iter().chain(&l2[k..]).copied().collect());
                        failures.push(OverlapFailure {
                            word: word.format(&self.labels),
                            difference: a.sub(&b).format(&self.labels),
                        });
                    }
                }
                // Inclusions: l2 a proper factor of l1.
                if r1.lhs != r2.lhs && l1.len() <= degree {
                    if let Some(p) = r1.lhs.find(l2, false) {
                        checked += 1;
                        let one = RingValue::one(&self.ring);
                        let pre = NCPolynomial::monomial(Word(l1[..p].to_vec()), &one);
                        let post = NCPolynomial::monomial(Word(l1[p + l2.len()..].to_vec()), &one);
                        let a = self.normal_form(&r1.rhs)?;
                        let b = self.normal_form(&pre.mul(&r2.rhs).mul(&post))?;
                        if a != b {
                            failures.push(OverlapFailure {
                                word: r1.lhs.format(&self.labels),
                                difference: a.sub(&b).format(&self.labels),
                            });
                        }
                    }
                }
            }
        }
        let irreducible_counts = (0..=degree).map(|k| self.irreducible_words(k).len()).collect();
        Ok(ConfluenceReport { degree, overlaps_checked: checked, confluent: failures.is_empty(), failures, irreducible_counts })
    }

    /// Normal form of `x·g − g·x` for every generator `g`.
    pub fn commutators(&self, x: &NCPolynomial) -> Result<Vec<NCPolynomial>> {
        (0..self.labels.len())
            .map(|g| {
                let gp = self.gen(g);
                self.normal_form(&x.mul(&gp).sub(&gp.mul(x)))
            })
            .collect()
    }

    /// Whether `x` commutes with every generator (hence is central).
    pub fn is_central(&self, x: &NCPolynomial) -> Result<bool> {
        Ok(self.commutators(x)?.iter().all(NCPolynomial::is_zero))
    }

    /// Basis of the central elements supported on irreducible words of
    /// degree at most `d`.  The coefficient ring must be a field.
    pub fn centre_scan(&self, d: usize) -> Result<Vec<NCPolynomial>> {
        let support = self.irreducible_words_upto(d);
        let one = RingValue::one(&self.ring);
        let images: Vec<Vec<(usize, Word, RingValue)>> = support
            .iter()
            .map(|w| {
                let x = NCPolynomial::monomial(w.clone(), &one);
                let cs = self.commutators(&x)?;
                Ok(flatten_tagged(&cs))
            })
            .collect::<Result<_>>()?;
        let kernel = kernel_of_columns(&self.ring, &images)?;
        Ok(kernel
            .iter()
            .map(|c| NCPolynomial::from_terms(&self.ring, support.iter().cloned().zip(c.iter().cloned())))
            .collect())
    }

    /// Apply a coefficient-ring morphism to all rules.
    pub fn base_change(&self, phi: &RingMorphism) -> Result<NCPresentation> {
        if phi.source() != &self.ring {
            return Err(Error::RingMismatch("base change source".into()));
        }
        let rules = self
            .rules
            .iter()
            .map(|r| Ok(Rule { lhs: r.lhs.clone(), rhs: r.rhs.map_coefficients(phi)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(NCPresentation::from_rules(phi.target(), self.labels.clone(), rules)?.with_degree_cap(self.degree_cap))
    }

    /// Substitute `ε_g → scale·ε_g + offset` in every relation and re-orient.
    pub fn basis_shift(&self, g: usize, scale: &RingValue, offset: &RingValue) -> Result<NCPresentation> {
        if scale.inverse().is_err() {
            return Err(Error::Precondition(format!("shift scalar {scale} is not a unit")));
        }
        let mut images: Vec<NCPolynomial> = (0..self.labels.len()).map(|i| self.gen(i)).collect();
        images[g] = self.gen(g).scale(scale).add(&NCPolynomial::constant(offset));
        let rels = self.relations().iter().map(|r| r.substitute(&images)).collect::<Result<Vec<_>>>()?;
        Ok(NCPresentation::from_relations(&self.ring, self.labels.clone(), &rels)?.with_degree_cap(self.degree_cap))
    }

    /// Inverse of [`basis_shift`](Self::basis_shift) with the same parameters.
    pub fn basis_unshift(&self, g: usize, scale: &RingValue, offset: &RingValue) -> Result<NCPresentation> {
        let inv = scale.inverse().map_err(|_| Error::Precondition(format!("shift scalar {scale} is not a unit")))?;
        self.basis_shift(g, &inv, &-(&inv * offset))
    }

    /// JSON form.
    pub fn to_json(&self) -> Result<PresentationJson> {
        let rules = self
            .rules
            .iter()
            .map(|r| {
                Ok(RuleJson {
                    lhs: r.lhs.to_digits()?,
                    rhs: r
                        .rhs
                        .terms()
                        .rev()
                        .map(|(w, c)| Ok(TermJson { word: w.to_digits()?, coeff: c.to_string() }))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(PresentationJson {
            generators: self.labels.clone(),
            order: "grlex".into(),
            ring: RingDescriptor::of(&self.ring),
            rules,
        })
    }

    /// Rebuild from JSON form.
    pub fn from_json(doc: &PresentationJson) -> Result<NCPresentation> {
        if doc.order != "grlex" {
            return Err(Error::Unsupported(format!("monomial order {}", doc.order)));
        }
        let ring = doc.ring.build()?;
        let rules = doc
            .rules
            .iter()
            .map(|r| {
                let rhs = r
                    .rhs
                    .iter()
                    .map(|t| Ok((Word::from_digits(&t.word)?, ring.parse(&t.coeff)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Rule { lhs: Word::from_digits(&r.lhs)?, rhs: NCPolynomial::from_terms(&ring, rhs) })
            })
            .collect::<Result<Vec<_>>>()?;
        NCPresentation::from_rules(&ring, doc.generators.clone(), rules)
    }

    /// Human-readable rules, one per line.
    pub fn format_rules(&self) -> Vec<String> {
        self.rules
            .iter()
            .map(|r| format!("{} -> {}", r.lhs.format(&self.labels), r.rhs.format(&self.labels)))
            .collect()
    }

    /// Parse an element written as a sum of products of coefficients and
    /// generator powers, e.g. `e2*e1 - (1-xi)*e0^2 + b`.  Factors that are
    /// not generator labels are parsed as coefficients.
    pub fn parse_element(&self, text: &str) -> Result<NCPolynomial> {
        let mut total = NCPolynomial::zero(&self.ring);
        for (negative, term) in split_top_level_terms(text)? {
            let mut word = Vec::new();
            let mut coeff = RingValue::one(&self.ring);
            for factor in split_top_level(&term, '*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {text:?}")));
                }
                let (base, exp) = match factor.rsplit_once('^') {
                    Some((b, e)) if self.labels.iter().any(|l| l == b.trim()) => {
                        let e: usize = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (b.trim(), e)
                    }
                    _ => (factor, 1),
                };
                match self.labels.iter().position(|l| l == base) {
                    Some(g) => word.extend(std::iter::repeat_n(g, exp)),
                    None => coeff = &coeff * &self.ring.parse(factor)?,
                }
            }
            if negative {
                coeff = -&coeff;
            }
            total = total.add(&NCPolynomial::monomial(Word(word), &coeff));
        }
        Ok(total)
    }
}

/// Split at a separator outside parentheses.
fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            parts.push(String::new());
        } else {
            parts.last_mut().expect("nonempty").push(c);
        }
    }
    parts
}

/// Split a sum into signed terms at top-level `+`/`-` (not after `^`, `*`,
/// `/` or `(`).
fn split_top_level_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let splits = (c == '+' || c == '-') && depth == 0 && !matches!(prev, Some('^' | '*' | '/' | '('));
        if splits {
            if !current.trim().is_empty() {
                terms.push((negative, std::mem::take(&mut current)));
            } else if prev.is_some() {
                return Err(Error::Parse(format!("dangling sign in {text:?}")));
            }
            negative = c == '-';
            prev = Some(c);
            continue;
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
        current.push(c);
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
    }
    if current.trim().is_empty() {
        return Err(Error::Parse(format!("empty element {text:?}")));
    }
    terms.push((negative, current));
    Ok(terms)
}

impl fmt::Display for NCPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "<{}> over {}", self.labels.join(", "), self.ring)?;
        for line in self.format_rules() {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Serialised presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    /// Generator labels in increasing order.
    pub generators: Vec<String>,
    /// Monomial order (only `"grlex"`).
    pub order: String,
    /// Coefficient ring.
    pub ring: RingDescriptor,
    /// Rewrite rules.
    pub rules: Vec<RuleJson>,
}

/// Serialised rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleJson {
    /// Leading word as a digit string.
    pub lhs: String,
    /// Right-hand side terms.
    pub rhs: Vec<TermJson>,
}

/// Serialised term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    /// Word as a digit string (empty for the unit).
    pub word: String,
    /// Coefficient expression.
    pub coeff: String,
}

/// Concatenate several polynomials into one with generator-tagged words so
/// that their coordinates can be compared jointly.
fn flatten_tagged(ps: &[NCPolynomial]) -> Vec<(usize, Word, RingValue)> {
    ps.iter()
        .enumerate()
        .flat_map(|(i, p)| p.terms().map(move |(w, c)| (i, w.clone(), c.clone())))
        .collect()
}

/// Kernel of the linear map sending unknown `k` to `columns[k]` (a sparse
/// vector indexed by tagged words).
fn kernel_of_columns(ring: &Ring, columns: &[Vec<(usize, Word, RingValue)>]) -> Result<Matrix> {
    let mut index: BTreeMap<(usize, Word), usize> = BTreeMap::new();
    for col in columns {
        for (i, w, _) in col {
            let next = index.len();
            index.entry((*i, w.clone())).or_insert(next);
        }
    }
    let mut rows = linalg::zeros(ring, index.len(), columns.len());
    for (k, col) in columns.iter().enumerate() {
        for (i, w, c) in col {
            let r = index[&(*i, w.clone())];
            rows[r][k] = &rows[r][k] + c;
        }
    }
    linalg::kernel_field(ring, &rows, columns.len())
}

// ---------------------------------------------------------------------------
// Enveloping algebras of hom-Lie algebras
// ---------------------------------------------------------------------------

/// The defining relations `α(ε_i)ε_j − α(ε_j)ε_i − ⟨ε_i, ε_j⟩`, `i < j`, of the
/// enveloping algebra, for an arbitrary twist `α` (row `i` holds `α(ε_i)`).
pub fn enveloping_relations(l: &HomLieAlgebra) -> Vec<((usize, usize), NCPolynomial)> {
    let ring = l.ring();
    let n = l.rank();
    let alpha = |i: usize| -> NCPolynomial {
        NCPolynomial::from_terms(ring, l.twist()[i].iter().enumerate().map(|(k, c)| (Word(vec![k]), c.clone())))
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = alpha(i).mul(&NCPolynomial::generator(ring, j)).sub(&alpha(j).mul(&NCPolynomial::generator(ring, i)));
            let br = NCPolynomial::from_terms(
                ring,
                l.bracket_basis(i, j).iter().enumerate().map(|(k, c)| (Word(vec![k]), c.clone())),
            );
            out.push(((i, j), lhs.sub(&br)));
        }
    }
    out
}

/// The enveloping algebra as a rewrite system.  Every relation's leading
/// coefficient must be a unit (always the case for diagonal twists with
/// unit entries).
pub fn enveloping_presentation(l: &HomLieAlgebra, labels: Vec<String>) -> Result<NCPresentation> {
    if labels.len() != l.rank() {
        return Err(Error::InvalidConstruction(format!("{} labels for rank {}", labels.len(), l.rank())));
    }
    let rels: Vec<NCPolynomial> = enveloping_relations(l).into_iter().map(|(_, r)| r).collect();
    NCPresentation::from_relations(l.ring(), labels, &rels)
}

/// Default labels `e0, e1, …`.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// One relation of a printed presentation compared with the computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationComparison {
    /// Printed relation.
    pub reference: String,
    /// Computed relation (scaled to the printed leading coefficient when they agree).
    pub computed: String,
    /// Whether they agree up to a unit.
    pub agrees: bool,
}

/// Relation-by-relation comparison with a printed presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationComparison {
    /// Per-relation comparisons.
    pub relations: Vec<RelationComparison>,
    /// Whether every relation agrees.
    pub exact_match: bool,
    /// Human-readable discrepancy notes.
    pub discrepancies: Vec<String>,
}

/// Compare computed relations against printed ones, pairing them by
/// leading word (unit multiples count as equal).
pub fn compare_relations(
    computed: &[NCPolynomial],
    reference: &[(NCPolynomial, Option<String>)],
    labels: &[String],
) -> PresentationComparison {
    let mut rels = Vec::new();
    let mut discrepancies = Vec::new();
    for (r, note) in reference {
        let lead = r.leading().map(|(w, _)| w.clone());
        let partner = computed.iter().find(|c| c.leading().map(|(w, _)| w.clone()) == lead);
        let (agrees, shown) = match partner {
            Some(c) => {
                let scaled = match (r.leading(), c.leading()) {
                    (Some((_, a)), Some((_, b))) => a.div_exact(b).map(|s| c.scale(&s)).unwrap_or_else(|_| c.clone()),
                    _ => c.clone(),
                };
                (r.is_unit_multiple_of(c), scaled.format(labels))
            }
            None => (false, "(no relation with this leading word)".into()),
        };
        if !agrees {
            discrepancies.push(format!(
                "printed relation {} differs from the computed {}{}",
                r.format(labels),
                shown,
                note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
            ));
        }
        rels.push(RelationComparison { reference: r.format(labels), computed: shown, agrees });
    }
    let exact_match = rels.iter().all(|r| r.agrees);
    PresentationComparison { relations: rels, exact_match, discrepancies }
}

fn parse_nc(ring: &Ring, terms: &[(&str, &str)]) -> Result<NCPolynomial> {
    let items = terms
        .iter()
        .map(|(w, c)| Ok((Word::from_digits(w)?, ring.parse(c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(NCPolynomial::from_terms(ring, items))
}

/// Labels `e, h, f` of the Jackson 𝔰𝔩₂.
pub fn sl2_labels() -> Vec<String> {
    ["e", "h", "f"].iter().map(|s| s.to_string()).collect()
}

/// The printed enveloping relations of the Jackson 𝔰𝔩₂ over `ℚ[s0, s1]`
/// (generators `e, h, f` = 0, 1, 2), as relation polynomials.
pub fn sl2_reference_relations(ring: &Ring) -> Result<Vec<(NCPolynomial, Option<String>)>> {
    Ok(vec![
        (parse_nc(ring, &[("00", "-2*s0"), ("10", "s1"), ("01", "-1"), ("0", "-2")])?, None),
        (
            parse_nc(
                ring,
                &[
                    ("02", "-2*s0"),
                    ("12", "s1"),
                    ("01", "s0^2"),
                    ("11", "-s0*s1"),
                    ("21", "-s1^2"),
                    ("1", "s0"),
                    ("2", "2*s1"),
                ],
            )?,
            None,
        ),
        (
            parse_nc(ring, &[("02", "1"), ("00", "s0^2"), ("10", "-s0*s1"), ("20", "-s1^2"), ("0", "s0"), ("1", "-(s1+1)/2")])?,
            None,
        ),
    ])
}

/// The quotient form of the same presentation as displayed alongside it
/// (the first relation is displayed with `+2s₀e²`).
pub fn sl2_reference_quotient(ring: &Ring) -> Result<Vec<(NCPolynomial, Option<String>)>> {
    let mut rels = sl2_reference_relations(ring)?;
    rels[0] = (
        parse_nc(ring, &[("00", "2*s0"), ("10", "s1"), ("01", "-1"), ("0", "-2")])?,
        Some("quotient display; sign of the e^2 term".into()),
    );
    Ok(rels)
}

/// The printed `s₀ = 0, s₁ = q` presentation over `ℚ(q)`.
pub fn sl2q_reference_relations(ring: &Ring) -> Result<Vec<(NCPolynomial, Option<String>)>> {
    Ok(vec![
        (parse_nc(ring, &[("10", "1"), ("01", "-1/q"), ("0", "-2/q")])?, None),
        (parse_nc(ring, &[("12", "1"), ("21", "-q"), ("2", "2*q")])?, Some("constant term of the h·f relation".into())),
        (parse_nc(ring, &[("02", "1"), ("20", "-q^2"), ("1", "-(q+1)/2")])?, None),
    ])
}

/// Enveloping relations of the Jackson 𝔰𝔩₂ specialised to `s₀ = 0, s₁ = q`,
/// over `ℚ(q)`.
pub fn sl2q_relations() -> Result<(Ring, Vec<NCPolynomial>)> {
    let l = crate::covers::jackson_sl2("0", "s1")?;
    let field = Ring::fraction(&Ring::polynomial(&Ring::rationals(), &["q"])?)?;
    let src = l.ring().clone();
    let mut images = Vec::new();
    for name in src.generator_names() {
        let img = if name == "s1" { field.gen("q")? } else { field.int(0) };
        images.push((name, img));
    }
    let pairs: Vec<(&str, RingValue)> = images.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    let phi = RingMorphism::new(&src, &field, &pairs)?;
    let rels = enveloping_relations(&l)
        .into_iter()
        .map(|(_, r)| r.map_coefficients(&phi))
        .collect::<Result<Vec<_>>>()?;
    Ok((field, rels))
}

// ---------------------------------------------------------------------------
// The Jackson enveloping algebra J_b(ξ)
// ---------------------------------------------------------------------------

/// Labels `e0, e1, e{n−1}`.
pub fn jackson_labels(n: usize) -> Vec<String> {
    vec!["e0".into(), "e1".into(), format!("e{}", n - 1)]
}

/// `ℚ(ξ)[b]` with `ξ` a primitive `n`-th root of unity.
pub fn jackson_ring(n: usize) -> Result<Ring> {
    Ring::polynomial(&crate::covers::cyclotomic_field(n)?, &["b"])
}

/// The enveloping algebra of the Jackson subalgebra (`r = 1`) computed from
/// its bracket data, over `ℚ(ξ)[b]`.
pub fn jackson_from_homlie(n: usize) -> Result<NCPresentation> {
    let ring = jackson_ring(n)?;
    let l = crate::covers::jackson_subalgebra(n, 1, &ring.gen("xi")?, &ring.gen("b")?)?;
    enveloping_presentation(&l, jackson_labels(n))
}

/// The shift `ε₀ → (1−ξ²)^{-1}ε₀ + 1` parameters: `(scale, offset)`.
pub fn jackson_shift_parameters(xi: &RingValue) -> Result<(RingValue, RingValue)> {
    let one = RingValue::one(xi.ring());
    let s = &one - &(xi * xi);
    let inv = s.inverse().map_err(|_| Error::Precondition(format!("1 - xi^2 = {s} is not a unit")))?;
    Ok((inv, one))
}

/// The simplified presentation
/// `ε₁ε₀ → ξ^{-1}ε₀ε₁`, `ε_{n−1}ε₀ → ξε₀ε_{n−1}`,
/// `ε_{n−1}ε₁ → ξ²ε₁ε_{n−1} + bε₀ + b(1−ξ²)` for given `ξ, b` in any ring
/// where `ξ` is a unit.
pub fn jackson_presentation(xi: &RingValue, b: &RingValue, labels: Vec<String>) -> Result<NCPresentation> {
    let ring = xi.ring().clone();
    if b.ring() != &ring {
        return Err(Error::RingMismatch("xi and b".into()));
    }
    let xinv = xi.inverse().map_err(|_| Error::Precondition(format!("xi = {xi} is not a unit")))?;
    let one = RingValue::one(&ring);
    let w = |s: &str| Word::from_digits(s).expect("static word");
    let rules = vec![
        Rule { lhs: w("10"), rhs: NCPolynomial::monomial(w("01"), &xinv) },
        Rule { lhs: w("20"), rhs: NCPolynomial::monomial(w("02"), xi) },
        Rule {
            lhs: w("21"),
            rhs: NCPolynomial::from_terms(
                &ring,
                [(w("12"), xi * xi), (w("0"), b.clone()), (Word::empty(), b * &(&one - &(xi * xi)))],
            ),
        },
    ];
    NCPresentation::from_rules(&ring, labels, rules)
}

/// The simplified Jackson presentation over `ℚ(ξ)[b]`.
pub fn jackson_symbolic(n: usize) -> Result<NCPresentation> {
    let ring = jackson_ring(n)?;
    jackson_presentation(&ring.gen("xi")?, &ring.gen("b")?, jackson_labels(n))
}

/// Report of the basis shift from the bracket-derived presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    /// Rules of the bracket-derived presentation.
    pub original: Vec<String>,
    /// Rules after the shift.
    pub shifted: Vec<String>,
    /// Whether the shift reproduces the simplified presentation exactly.
    pub matches_simplified: bool,
    /// Whether shifting back recovers the original rules.
    pub round_trip: bool,
}

/// Shift the bracket-derived Jackson presentation and compare.
pub fn jackson_shift_report(n: usize) -> Result<ShiftReport> {
    let orig = jackson_from_homlie(n)?;
    let xi = orig.ring().gen("xi")?;
    let (scale, offset) = jackson_shift_parameters(&xi)?;
    let shifted = orig.basis_shift(0, &scale, &offset)?;
    let back = shifted.basis_unshift(0, &scale, &offset)?;
    Ok(ShiftReport {
        original: orig.format_rules(),
        shifted: shifted.format_rules(),
        matches_simplified: shifted.rules() == jackson_symbolic(n)?.rules(),
        round_trip: back.rules() == orig.rules(),
    })
}

/// Specialise `b` in the symbolic Jackson presentation to an integer.
pub fn jackson_specialise_b(p: &NCPresentation, b: i64) -> Result<NCPresentation> {
    let field = p.ring().base().cloned().ok_or_else(|| Error::Precondition("ring has no base".into()))?;
    let phi = RingMorphism::new(
        p.ring(),
        &field,
        &[("xi", field.gen("xi")?), ("b", field.int(b))],
    )?;
    p.base_change(&phi)
}

/// Centrality verdicts for the `n`-th powers of the three generators and the
/// lower powers of `ε₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentreReport {
    /// `n`.
    pub n: usize,
    /// Verdict for `ε₀ⁿ, ε₁ⁿ, ε_{n−1}ⁿ`.
    pub nth_powers_central: [bool; 3],
    /// Verdicts for `ε₁^k`, `k = 1..n−1`.
    pub lower_powers_of_e1_central: Vec<bool>,
}

/// Compute the [`CentreReport`] for a Jackson presentation.
pub fn centre_report(p: &NCPresentation, n: usize) -> Result<CentreReport> {
    let mut nth = [false; 3];
    for (g, slot) in nth.iter_mut().enumerate() {
        *slot = p.is_central(&p.gen(g).pow(n))?;
    }
    let lower = (1..n).map(|k| p.is_central(&p.gen(1).pow(k))).collect::<Result<_>>()?;
    Ok(CentreReport { n, nth_powers_central: nth, lower_powers_of_e1_central: lower })
}

/// Degree of a polynomial in one generator (maximum over its words).
pub fn generator_degree(x: &NCPolynomial, g: usize) -> usize {
    x.terms().map(|(w, _)| w.0.iter().filter(|&&y| y == g).count()).max().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Normal elements
// ---------------------------------------------------------------------------

/// The solution space of `Ω·g = τ(g)·Ω` on a given support for a diagonal
/// character `τ(ε_g) = τ_g ε_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalElementSolution {
    /// Support words.
    pub support: Vec<Word>,
    /// Character scalars.
    pub tau: Vec<RingValue>,
    /// Basis of coefficient vectors on the support.
    pub coefficient_basis: Matrix,
    /// Basis of the resulting elements, in normal form.
    pub elements: Vec<NCPolynomial>,
    /// Coefficient vectors whose element reduces to zero.
    pub null_directions: usize,
}

impl NCPresentation {
    /// Whether `Ω·g − τ_g g·Ω` normalises to zero for every generator.
    pub fn is_normal_with(&self, omega: &NCPolynomial, tau: &[RingValue]) -> Result<bool> {
        for (g, t) in tau.iter().enumerate() {
            let gp = self.gen(g);
            let d = self.normal_form(&omega.mul(&gp).sub(&gp.scale(t).mul(omega)))?;
            if !d.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Solve for normal elements on `support` with character `tau`.  The
    /// coefficient ring must be a field.
    pub fn normal_element_solve(&self, support: &[Word], tau: &[RingValue]) -> Result<NormalElementSolution> {
        if support.is_empty() {
            return Err(Error::Precondition("empty support".into()));
        }
        if tau.len() != self.labels.len() {
            return Err(Error::InvalidConstruction(format!("{} character values for {} generators", tau.len(), self.labels.len())));
        }
        let one = RingValue::one(&self.ring);
        let columns = support
            .iter()
            .map(|w| {
                let x = NCPolynomial::monomial(w.clone(), &one);
                let parts = tau
                    .iter()
                    .enumerate()
                    .map(|(g, t)| {
                        let gp = self.gen(g);
                        self.normal_form(&x.mul(&gp).sub(&gp.scale(t).mul(&x)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(flatten_tagged(&parts))
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = kernel_of_columns(&self.ring, &columns)?;
        // Elements spanned, modulo vectors reducing to zero.
        let reduced = support
            .iter()
            .map(|w| Ok(flatten_tagged(&[self.normal_form(&NCPolynomial::monomial(w.clone(), &one))?])))
            .collect::<Result<Vec<_>>>()?;
        let mut elements_raw = Vec::new();
        for c in &basis {
            let mut e = NCPolynomial::zero(&self.ring);
            for (w, x) in support.iter().zip(c) {
                e = e.add(&NCPolynomial::monomial(w.clone(), x));
            }
            elements_raw.push(self.normal_form(&e)?);
        }
        let null_all = kernel_of_columns(&self.ring, &reduced)?;
        let elements = independent_subset(&self.ring, &elements_raw)?;
        Ok(NormalElementSolution {
            support: support.to_vec(),
            tau: tau.to_vec(),
            coefficient_basis: basis,
            null_directions: null_all.len(),
            elements,
        })
    }

    /// Search characters with `τ_g` drawn from `candidates` for which the
    /// support carries a nonzero normal element.
    pub fn normal_characters(&self, support: &[Word], candidates: &[RingValue]) -> Result<Vec<NormalElementSolution>> {
        let g = self.labels.len();
        let mut out = Vec::new();
        let total = candidates.len().checked_pow(g as u32).ok_or_else(|| Error::Budget("character search".into()))?;
        if total > 100_000 {
            return Err(Error::Budget(format!("{total} characters to search")));
        }
        for idx in 0..total {
            let mut rem = idx;
            let tau: Vec<RingValue> = (0..g)
                .map(|_| {
                    let t = candidates[rem % candidates.len()].clone();
                    rem /= candidates.len();
                    t
                })
                .collect();
            let sol = self.normal_element_solve(support, &tau)?;
            if !sol.elements.is_empty() {
                out.push(sol);
            }
        }
        Ok(out)
    }
}

/// A maximal linearly independent subset of polynomials (field coefficients).
fn independent_subset(ring: &Ring, ps: &[NCPolynomial]) -> Result<Vec<NCPolynomial>> {
    let mut out: Vec<NCPolynomial> = Vec::new();
    for p in ps {
        if p.is_zero() {
            continue;
        }
        let mut cols: Vec<Vec<(usize, Word, RingValue)>> = out.iter().map(|q| flatten_tagged(&[q.clone()])).collect();
        cols.push(flatten_tagged(&[p.clone()]));
        if kernel_of_columns(ring, &cols)?.is_empty() {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// The support `ε_{n−1}ε₁, ε₁ε_{n−1}, ε₀², ε₀, 1`.
pub fn omega_support() -> Vec<Word> {
    vec![Word(vec![2, 1]), Word(vec![1, 2]), Word(vec![0, 0]), Word(vec![0]), Word::empty()]
}

/// The character `τ = (1, ξ², ξ^{-2})`.
pub fn omega_character(xi: &RingValue) -> Result<Vec<RingValue>> {
    Ok(vec![RingValue::one(xi.ring()), xi.pow(2), xi.pow_signed(-2)?])
}

/// The printed coefficients of `Ω_p` on [`omega_support`].
pub fn omega_printed_coefficients(xi: &RingValue, b: &RingValue, p: &[RingValue; 3]) -> Result<Vec<RingValue>> {
    let one = RingValue::one(xi.ring());
    let c4 = &(b * &(&(&p[1] * &xi.inverse()?) - &p[0])) * &(&one - xi).inverse()?;
    Ok(vec![p[0].clone(), -&p[1], p[2].clone(), c4, -&(b * &(&p[0] - &p[1]))])
}

/// Per-coefficient comparison of a printed normal element with the solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientComparison {
    /// Support word.
    pub word: String,
    /// Printed coefficient.
    pub printed: String,
    /// Solver coefficient with the quadratic part fixed to the printed one
    /// (`None` when no solution has that quadratic part).
    pub solved: Option<String>,
    /// Agreement.
    pub agrees: bool,
}

/// Verdict on one printed normal element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaComparison {
    /// Parameter vector `p` (as strings).
    pub p: Vec<String>,
    /// Whether the printed element satisfies `Ω·g = τ(g)·Ω` under normal form.
    pub printed_is_normal: bool,
    /// Per-coefficient comparison.
    pub coefficients: Vec<CoefficientComparison>,
}

/// Full normal-element report for `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaReport {
    /// `n`.
    pub n: usize,
    /// Dimension of the coefficient solution space.
    pub solution_dimension: usize,
    /// Dimension of the space of elements (after normal form).
    pub element_dimension: usize,
    /// Basis of normal elements, in normal form.
    pub elements: Vec<String>,
    /// Whether every returned element was re-verified normal.
    pub solutions_verified: bool,
    /// Comparison of the printed family on the basis vectors of `p`.
    pub printed: Vec<OmegaComparison>,
}

/// Solve for normal elements over `Frac(ℚ(ξ)[b])` on [`omega_support`] with
/// the character of [`omega_character`] and compare with the printed `Ω_p`
/// for `p = (1,0,0), (0,1,0), (0,0,1)` (the family is linear in `p`).
pub fn omega_report(n: usize) -> Result<OmegaReport> {
    let sym = jackson_symbolic(n)?;
    let field = Ring::fraction(sym.ring())?;
    let phi = RingMorphism::coerce(sym.ring(), &field)?;
    let pres = sym.base_change(&phi)?;
    let xi = field.gen("xi")?;
    let b = field.gen("b")?;
    let tau = omega_character(&xi)?;
    let support = omega_support();
    let sol = pres.normal_element_solve(&support, &tau)?;
    let mut verified = true;
    for e in &sol.elements {
        verified &= pres.is_normal_with(e, &tau)?;
    }
    let mut printed = Vec::new();
    for k in 0..3 {
        let mut p: [RingValue; 3] = [field.int(0), field.int(0), field.int(0)];
        p[k] = field.int(1);
        let coeffs = omega_printed_coefficients(&xi, &b, &p)?;
        let omega = NCPolynomial::from_terms(&field, support.iter().cloned().zip(coeffs.iter().cloned()));
        let printed_is_normal = pres.is_normal_with(&omega, &tau)?;
        // Fix the three quadratic coefficients and solve for the rest.
        let dim = sol.coefficient_basis.len();
        let rows: Matrix = (0..3).map(|i| (0..dim).map(|j| sol.coefficient_basis[j][i].clone()).collect()).collect();
        let rhs: Vec<RingValue> = coeffs[..3].to_vec();
        let solved = if dim == 0 {
            None
        } else {
            linalg::solve_field(&field, &rows, &rhs)?.map(|lam| {
                (0..support.len())
                    .map(|i| {
                        lam.iter()
                            .zip(&sol.coefficient_basis)
                            .fold(field.int(0), |acc, (l, v)| &acc + &(l * &v[i]))
                    })
                    .collect::<Vec<_>>()
            })
        };
        let coefficients = support
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let s = solved.as_ref().map(|v| v[i].clone());
                CoefficientComparison {
                    word: w.format(pres.labels()),
                    printed: coeffs[i].to_string(),
                    solved: s.as_ref().map(|x| x.to_string()),
                    agrees: s.as_ref() == Some(&coeffs[i]),
                }
            })
            .collect();
        printed.push(OmegaComparison {
            p: p.iter().map(|x| x.to_string()).collect(),
            printed_is_normal,
            coefficients,
        });
    }
    Ok(OmegaReport {
        n,
        solution_dimension: sol.coefficient_basis.len(),
        element_dimension: sol.elements.len(),
        elements: sol.elements.iter().map(|e| e.format(pres.labels())).collect(),
        solutions_verified: verified,
        printed,
    })
}

// ---------------------------------------------------------------------------
// Down-up identification
// ---------------------------------------------------------------------------

/// Residuals of the two down-up relations in a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DownUpReport {
    /// Residual of `d²u − ξ(1+ξ)dud + ξ³ud² − a(1−ξ²)(1−ξ)d`.
    pub first_residual: String,
    /// Residual of `du² − ξ(1+ξ)udu + ξ³u²d − a(1−ξ²)(1−ξ)u`.
    pub second_residual: String,
    /// Whether both reduce to zero.
    pub holds: bool,
}

/// Normalise the down-up relations with `d = ε_d`, `u = ε_u` and parameters
/// `ξ`, `a` in the given presentation.
pub fn downup_check(p: &NCPresentation, d: usize, u: usize, xi: &RingValue, a: &RingValue) -> Result<DownUpReport> {
    let one = RingValue::one(p.ring());
    let alpha = xi * &(&one + xi);
    let beta = xi.pow(3);
    let gamma = &(a * &(&one - &(xi * xi))) * &(&one - xi);
    let w = |v: &[usize]| p.word(v);
    let first = w(&[d, d, u]).sub(&w(&[d, u, d]).scale(&alpha)).add(&w(&[u, d, d]).scale(&beta)).sub(&w(&[d]).scale(&gamma));
    let second = w(&[d, u, u]).sub(&w(&[u, d, u]).scale(&alpha)).add(&w(&[u, u, d]).scale(&beta)).sub(&w(&[u]).scale(&gamma));
    let r1 = p.normal_form(&first)?;
    let r2 = p.normal_form(&second)?;
    Ok(DownUpReport {
        holds: r1.is_zero() && r2.is_zero(),
        first_residual: r1.format(p.labels()),
        second_residual: r2.format(p.labels()),
    })
}

/// Down-up check for the symbolic Jackson presentation with `a = b`.
pub fn jackson_downup(n: usize) -> Result<DownUpReport> {
    let p = jackson_symbolic(n)?;
    let xi = p.ring().gen("xi")?;
    let b = p.ring().gen("b")?;
    downup_check(&p, 2, 1, &xi, &b)
}

// ---------------------------------------------------------------------------
// Ore towers
// ---------------------------------------------------------------------------

/// One step `R[x; ω, Δ]` of an iterated Ore extension: `x·y = ω(y)x + Δ(y)`
/// for earlier variables `y`, with `ω(y) = λ_y y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreStep {
    /// Generator adjoined at this step.
    pub var: usize,
    /// Scalars `λ_y` for earlier variables `y`.
    pub automorphism: Vec<(usize, RingValue)>,
    /// Nonzero values `Δ(y)` for earlier variables `y`.
    pub derivation: Vec<(usize, NCPolynomial)>,
}

/// An iterated Ore extension over the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreTowerSpec {
    /// Steps in order of adjunction.
    pub steps: Vec<OreStep>,
}

/// Consistency verdict for an Ore tower against a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OreReport {
    /// Automorphism scalars are units and derivation values only involve earlier variables.
    pub well_formed: bool,
    /// Each `ω` and `Δ` respects the relations among earlier variables.
    pub well_defined: bool,
    /// The tower's commutation relations hold in the presentation.
    pub matches_presentation: bool,
    /// Failure descriptions.
    pub failures: Vec<String>,
}

impl OreTowerSpec {
    fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.var).collect()
    }

    fn lambda(&self, step: &OreStep, y: usize, ring: &Ring) -> RingValue {
        step.automorphism.iter().find(|(v, _)| *v == y).map(|(_, c)| c.clone()).unwrap_or_else(|| RingValue::one(ring))
    }

    fn delta(&self, step: &OreStep, y: usize, ring: &Ring) -> NCPolynomial {
        step.derivation.iter().find(|(v, _)| *v == y).map(|(_, p)| p.clone()).unwrap_or_else(|| NCPolynomial::zero(ring))
    }

    fn apply_omega(&self, step: &OreStep, x: &NCPolynomial) -> NCPolynomial {
        let ring = x.ring().clone();
        NCPolynomial::from_terms(
            &ring,
            x.terms().map(|(w, c)| {
                let s = w.0.iter().fold(c.clone(), |acc, &y| &acc * &self.lambda(step, y, &ring));
                (w.clone(), s)
            }),
        )
    }

    fn apply_delta(&self, step: &OreStep, x: &NCPolynomial) -> NCPolynomial {
        let ring = x.ring().clone();
        let one = RingValue::one(&ring);
        let mut out = NCPolynomial::zero(&ring);
        for (w, c) in x.terms() {
            for t in 0..w.len() {
                let pre = self.apply_omega(step, &NCPolynomial::monomial(Word(w.0[..t].to_vec()), &one));
                let post = NCPolynomial::monomial(Word(w.0[t + 1..].to_vec()), &one);
                let mid = self.delta(step, w.0[t], &ring);
                out = out.add(&pre.mul(&mid).mul(&post).scale(c));
            }
        }
        out
    }

    /// The relation `x·y − λ_y y·x − Δ(y)` of a step.
    fn step_relation(&self, step: &OreStep, y: usize, ring: &Ring) -> NCPolynomial {
        let one = RingValue::one(ring);
        NCPolynomial::monomial(Word(vec![step.var, y]), &one)
            .sub(&NCPolynomial::monomial(Word(vec![y, step.var]), &self.lambda(step, y, ring)))
            .sub(&self.delta(step, y, ring))
    }

    /// Check the tower against a presentation.
    pub fn check(&self, p: &NCPresentation) -> Result<OreReport> {
        let ring = p.ring();
        let order = self.order();
        let mut failures = Vec::new();
        let mut well_formed = true;
        for (k, step) in self.steps.iter().enumerate() {
            let earlier = &order[..k];
            for (y, c) in &step.automorphism {
                if !earlier.contains(y) || c.inverse().is_err() {
                    well_formed = false;
                    failures.push(format!("automorphism of {} on {} is not a unit on an earlier variable", p.labels()[step.var], p.labels()[*y]));
                }
            }
            for (y, d) in &step.derivation {
                let vars_ok = d.terms().all(|(w, _)| w.0.iter().all(|v| earlier.contains(v)));
                if !earlier.contains(y) || !vars_ok {
                    well_formed = false;
                    failures.push(format!("derivation of {} on {} involves later variables", p.labels()[step.var], p.labels()[*y]));
                }
            }
        }
        let mut matches = true;
        for (k, step) in self.steps.iter().enumerate() {
            for &y in &order[..k] {
                let r = p.normal_form(&self.step_relation(step, y, ring))?;
                if !r.is_zero() {
                    matches = false;
                    failures.push(format!(
                        "relation {}·{} fails in the presentation: residual {}",
                        p.labels()[step.var],
                        p.labels()[y],
                        r.format(p.labels())
                    ));
                }
            }
        }
        let mut defined = true;
        for (k, step) in self.steps.iter().enumerate() {
            for (j, earlier_step) in self.steps[..k].iter().enumerate() {
                for &y in &order[..j] {
                    let rel = self.step_relation(earlier_step, y, ring);
                    let om = p.normal_form(&self.apply_omega(step, &rel))?;
                    let de = p.normal_form(&self.apply_delta(step, &rel))?;
                    if !om.is_zero() || !de.is_zero() {
                        defined = false;
                        failures.push(format!(
                            "step {} does not respect the relation {}: residuals {} and {}",
                            p.labels()[step.var],
                            rel.format(p.labels()),
                            om.format(p.labels()),
                            de.format(p.labels())
                        ));
                    }
                }
            }
        }
        Ok(OreReport { well_formed, well_defined: defined, matches_presentation: matches, failures })
    }
}

/// The tower `B[ε₁][ε₀; τ][ε_{n−1}; ω, Δ]` with `τ(ε₁) = ξε₁`,
/// `ω(ε₁) = ξ²ε₁`, `ω(ε₀) = ξε₀`, `Δ(ε₁) = bε₀ + b(1−ξ²)`, `Δ(ε₀) = 0`.
pub fn jackson_ore_tower(xi: &RingValue, b: &RingValue) -> OreTowerSpec {
    let ring = xi.ring().clone();
    let one = RingValue::one(&ring);
    let delta = NCPolynomial::from_terms(&ring, [(Word(vec![0]), b.clone()), (Word::empty(), b * &(&one - &(xi * xi)))]);
    OreTowerSpec {
        steps: vec![
            OreStep { var: 1, automorphism: vec![], derivation: vec![] },
            OreStep { var: 0, automorphism: vec![(1, xi.clone())], derivation: vec![] },
            OreStep { var: 2, automorphism: vec![(1, xi * xi), (0, xi.clone())], derivation: vec![(1, delta)] },
        ],
    }
}

// ---------------------------------------------------------------------------
// Kummer–Witt presentations
// ---------------------------------------------------------------------------

/// The full enveloping presentation of the Kummer–Witt algebra
/// (`r = 1`) over `ℚ(ξ)[b]`.
pub fn kummer_witt_presentation(n: usize) -> Result<NCPresentation> {
    let ring = jackson_ring(n)?;
    let l = crate::covers::kummer_witt_homlie(n, 1, &ring.gen("xi")?, &ring.gen("b")?)?;
    enveloping_presentation(&l, default_labels(n))
}
