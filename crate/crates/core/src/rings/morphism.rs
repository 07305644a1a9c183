//! Ring homomorphisms between towers, defined by images of generators.

use super::ring::{cyclotomic_polynomial, Ring, RingKind, Value};
use super::value::RingValue;
use crate::error::{Error, Result};

/// A ring homomorphism `source -> target` determined by the images of the
/// tower generators.  Integers map canonically; rationals map when the
/// denominator is invertible in the target.
#[derive(Clone, Debug)]
pub struct RingMorphism {
    source: Ring,
    target: Ring,
    images: Vec<(String, RingValue)>,
}

impl RingMorphism {
    /// Build a morphism from explicit generator images.  Generators without an
    /// explicit image map to the same-named generator of the target.  The
    /// images are checked against every relation of the source tower.
    pub fn new(source: &Ring, target: &Ring, images: &[(&str, RingValue)]) -> Result<Self> {
        if source.characteristic() != 0 && source.characteristic() != target.characteristic() {
            return Err(Error::InvalidConstruction(format!(
                "characteristic {} cannot map to characteristic {}",
                source.characteristic(),
                target.characteristic()
            )));
        }
        let mut imgs = Vec::new();
        for name in source.generator_names() {
            let img = match images.iter().find(|(n, _)| *n == name) {
                Some((_, v)) => {
                    if v.ring() != target {
                        return Err(Error::RingMismatch(format!(
                            "image of {name} lies in {} instead of {target}",
                            v.ring()
                        )));
                    }
                    v.clone()
                }
                None => target.gen(&name).map_err(|_| {
                    Error::InvalidConstruction(format!("no image given for generator {name}"))
                })?,
            };
            imgs.push((name, img));
        }
        for (n, _) in images {
            if !imgs.iter().any(|(m, _)| m == n) {
                return Err(Error::InvalidConstruction(format!("{n} is not a generator of {source}")));
            }
        }
        let m = RingMorphism { source: source.clone(), target: target.clone(), images: imgs };
        m.check_relations(source)?;
        Ok(m)
    }

    /// Build a morphism from images given as expressions in the target.
    pub fn from_strings(source: &Ring, target: &Ring, images: &[(&str, &str)]) -> Result<Self> {
        let parsed: Result<Vec<(&str, RingValue)>> =
            images.iter().map(|(n, s)| Ok((*n, target.parse(s)?))).collect();
        RingMorphism::new(source, target, &parsed?)
    }

    /// Identity morphism.
    pub fn identity(ring: &Ring) -> Self {
        RingMorphism::new(ring, ring, &[]).expect("identity respects relations")
    }

    /// Coercion sending every generator to the same-named target generator.
    pub fn coerce(source: &Ring, target: &Ring) -> Result<Self> {
        RingMorphism::new(source, target, &[])
    }

    /// Source ring.
    pub fn source(&self) -> &Ring {
        &self.source
    }

    /// Target ring.
    pub fn target(&self) -> &Ring {
        &self.target
    }

    /// Image of the named generator.
    pub fn image_of(&self, name: &str) -> Option<&RingValue> {
        self.images.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn img(&self, name: &str) -> &RingValue {
        self.image_of(name).expect("every generator has an image")
    }

    fn check_relations(&self, level: &Ring) -> Result<()> {
        if let Some(b) = level.base() {
            self.check_relations(b)?;
        }
        let t = &self.target;
        match level.kind() {
            RingKind::ExtField { modulus, var, .. } => {
                let x = self.img(var);
                let mut acc = RingValue::zero(t);
                for &c in modulus.iter().rev() {
                    acc = &(&acc * x) + &t.int(c as i64);
                }
                if !acc.is_zero() {
                    return Err(Error::RelationViolated(format!(
                        "image of {var} is not a root of the defining polynomial"
                    )));
                }
            }
            RingKind::Cyclotomic { n, var, .. } => {
                let x = self.img(var);
                let mut acc = RingValue::zero(t);
                for c in cyclotomic_polynomial(*n).iter().rev() {
                    acc = &(&acc * x) + &RingValue::new(t, t.from_bigint(c));
                }
                if !acc.is_zero() {
                    return Err(Error::RelationViolated(format!(
                        "image {x} of {var} is not a root of Phi_{n}"
                    )));
                }
            }
            RingKind::Polynomial { base, vars } => {
                for v in vars {
                    let x = self.img(&v.name);
                    if v.laurent && x.inverse().is_err() {
                        return Err(Error::RelationViolated(format!(
                            "image {x} of the invertible variable {} is not a unit",
                            v.name
                        )));
                    }
                    if let Some(rel) = &v.relation {
                        let mut acc = RingValue::zero(t);
                        for c in rel.iter().rev() {
                            acc = &(&acc * x) + &self.map_level(base, c)?;
                        }
                        if !acc.is_zero() {
                            return Err(Error::RelationViolated(format!(
                                "image {x} of {} violates its relation",
                                v.name
                            )));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn map_level(&self, level: &Ring, v: &Value) -> Result<RingValue> {
        let t = &self.target;
        match (level.kind(), v) {
            (RingKind::Integers, Value::Int(z)) => Ok(RingValue::new(t, t.from_bigint(z))),
            (RingKind::Rationals, Value::Rat(q)) => Ok(RingValue::new(t, t.from_rational(q)?)),
            (RingKind::PrimeField { .. }, Value::Fp(x)) => Ok(t.int(*x as i64)),
            (RingKind::ExtField { var, .. }, Value::Ext(c)) => {
                let x = self.img(var);
                let mut acc = RingValue::zero(t);
                for &ci in c.iter().rev() {
                    acc = &(&acc * x) + &t.int(ci as i64);
                }
                Ok(acc)
            }
            (RingKind::Cyclotomic { base, var, .. }, Value::Cyclo(c)) => {
                let x = self.img(var);
                let mut acc = RingValue::zero(t);
                for ci in c.iter().rev() {
                    acc = &(&acc * x) + &self.map_level(base, ci)?;
                }
                Ok(acc)
            }
            (RingKind::Polynomial { base, vars }, Value::Poly(terms)) => {
                let imgs: Vec<&RingValue> = vars.iter().map(|v| self.img(&v.name)).collect();
                let mut acc = RingValue::zero(t);
                for (e, c) in terms {
                    let mut m = self.map_level(base, c)?;
                    for (x, &k) in imgs.iter().zip(e) {
                        if k != 0 {
                            m = &m * &x.pow_signed(k as i64)?;
                        }
                    }
                    acc = &acc + &m;
                }
                Ok(acc)
            }
            (RingKind::Fraction { base }, Value::Frac(n, d)) => {
                let n = self.map_level(base, n)?;
                let d = self.map_level(base, d)?;
                n.div_exact(&d)
            }
            _ => Err(Error::RingMismatch(format!("value does not belong to {level}"))),
        }
    }

    /// Apply the morphism.
    pub fn apply(&self, x: &RingValue) -> Result<RingValue> {
        if x.ring() != &self.source {
            return Err(Error::RingMismatch(format!(
                "morphism from {} applied to an element of {}",
                self.source,
                x.ring()
            )));
        }
        self.map_level(&self.source, x.value())
    }

    /// The composite `after ∘ self`.
    pub fn then(&self, after: &RingMorphism) -> Result<RingMorphism> {
        if after.source != self.target {
            return Err(Error::RingMismatch("composition of incompatible morphisms".into()));
        }
        let imgs: Result<Vec<(String, RingValue)>> =
            self.images.iter().map(|(n, v)| Ok((n.clone(), after.apply(v)?))).collect();
        let imgs = imgs?;
        let refs: Vec<(&str, RingValue)> = imgs.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
        RingMorphism::new(&self.source, &after.target, &refs)
    }
}
