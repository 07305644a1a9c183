//! Seeded random elements, used by property tests and randomized checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::ring::{Ring, RingKind, Value};
use super::value::RingValue;

/// Shape parameters for random elements.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    /// Maximum number of terms per polynomial level.
    pub terms: usize,
    /// Maximum exponent per variable (Laurent variables range symmetrically).
    pub max_deg: i32,
    /// Integer coefficients are drawn from `-coeff..=coeff`.
    pub coeff: i64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { terms: 3, max_deg: 2, coeff: 3 }
    }
}

/// A random element of `ring`.
pub fn random_element<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, shape: RandomShape) -> RingValue {
    RingValue::new(ring, random_value(ring, rng, shape))
}

/// A random nonzero element of `ring`.
pub fn random_nonzero<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, shape: RandomShape) -> RingValue {
    loop {
        let v = random_element(ring, rng, shape);
        if !v.is_zero() {
            return v;
        }
    }
}

fn random_value<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, shape: RandomShape) -> Value {
    match ring.kind() {
        RingKind::Integers => Value::Int(BigInt::from(rng.gen_range(-shape.coeff..=shape.coeff))),
        RingKind::Rationals => {
            let n = rng.gen_range(-shape.coeff..=shape.coeff);
            let d = rng.gen_range(1..=shape.coeff.max(1));
            Value::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
        }
        RingKind::PrimeField { p } => Value::Fp(rng.gen_range(0..*p)),
        RingKind::ExtField { .. } => {
            let dim = ring.level_coords(&ring.zero()).len();
            let p = ring.characteristic();
            ring.from_level_coords((0..dim).map(|_| Value::Fp(rng.gen_range(0..p))).collect())
        }
        RingKind::Cyclotomic { base, phi, .. } => {
            let dim = phi.len() - 1;
            let c = (0..dim)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        random_value(base, rng, shape)
                    } else {
                        base.zero()
                    }
                })
                .collect();
            ring.from_level_coords(c)
        }
        RingKind::Polynomial { base, vars } => {
            let k = rng.gen_range(0..=shape.terms);
            let mut terms = Vec::new();
            for _ in 0..k {
                let e = vars
                    .iter()
                    .map(|v| {
                        if v.laurent {
                            rng.gen_range(-shape.max_deg..=shape.max_deg)
                        } else {
                            rng.gen_range(0..=shape.max_deg)
                        }
                    })
                    .collect();
                terms.push((e, random_value(base, rng, shape)));
            }
            ring.poly_from_terms(terms)
        }
        RingKind::Fraction { base } => {
            let n = random_value(base, rng, shape);
            let small = RandomShape { terms: 2, max_deg: 1, coeff: shape.coeff };
            let mut d = random_value(base, rng, small);
            if base.is_zero(&d) {
                d = base.one();
            }
            ring.make_fraction(n, d).expect("nonzero denominator")
        }
    }
}
