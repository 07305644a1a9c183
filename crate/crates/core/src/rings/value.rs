//! Ring-tagged elements with operator overloading.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::display::format_value;
use super::parse::parse_value;
use super::ring::{Ring, Value};
use crate::error::{Error, Result};

/// An element together with the ring it lives in.
///
/// The arithmetic operators panic when the operands belong to different
/// rings; the `try_*` methods report [`Error::RingMismatch`] instead.
#[derive(Clone)]
pub struct RingValue {
    ring: Ring,
    value: Value,
}

impl RingValue {
    /// Wrap a raw value (which must be canonical for `ring`).
    pub fn new(ring: &Ring, value: Value) -> Self {
        RingValue { ring: ring.clone(), value }
    }

    /// Parse an expression in `ring`.
    pub fn parse(ring: &Ring, s: &str) -> Result<Self> {
        Ok(RingValue::new(ring, parse_value(ring, s)?))
    }

    /// Zero of `ring`.
    pub fn zero(ring: &Ring) -> Self {
        RingValue::new(ring, ring.zero())
    }

    /// One of `ring`.
    pub fn one(ring: &Ring) -> Self {
        RingValue::new(ring, ring.one())
    }

    /// Image of an integer in `ring`.
    pub fn from_i64(ring: &Ring, n: i64) -> Self {
        RingValue::new(ring, ring.from_i64(n))
    }

    /// The ring of this element.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The raw canonical value.
    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Consume into the raw value.
    pub fn into_value(self) -> Value {
        self.value
    }

    /// Whether this is zero.
    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.value)
    }

    /// Whether this is one.
    pub fn is_one(&self) -> bool {
        self.ring.is_one(&self.value)
    }

    fn check(&self, other: &RingValue) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    /// Checked sum.
    pub fn try_add(&self, other: &RingValue) -> Result<RingValue> {
        self.check(other)?;
        Ok(RingValue::new(&self.ring, self.ring.add(&self.value, &other.value)))
    }

    /// Checked difference.
    pub fn try_sub(&self, other: &RingValue) -> Result<RingValue> {
        self.check(other)?;
        Ok(RingValue::new(&self.ring, self.ring.sub(&self.value, &other.value)))
    }

    /// Checked product.
    pub fn try_mul(&self, other: &RingValue) -> Result<RingValue> {
        self.check(other)?;
        Ok(RingValue::new(&self.ring, self.ring.mul(&self.value, &other.value)))
    }

    /// Exact quotient.
    pub fn div_exact(&self, other: &RingValue) -> Result<RingValue> {
        self.check(other)?;
        Ok(RingValue::new(&self.ring, self.ring.div_exact(&self.value, &other.value)?))
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<RingValue> {
        Ok(RingValue::new(&self.ring, self.ring.inverse(&self.value)?))
    }

    /// Non-negative power.
    pub fn pow(&self, e: u64) -> RingValue {
        RingValue::new(&self.ring, self.ring.pow(&self.value, e))
    }

    /// Signed power (negative exponents need a unit).
    pub fn pow_signed(&self, e: i64) -> Result<RingValue> {
        Ok(RingValue::new(&self.ring, self.ring.pow_signed(&self.value, e)?))
    }

    /// Multiply by an integer.
    pub fn scale_int(&self, n: i64) -> RingValue {
        RingValue::new(&self.ring, self.ring.mul(&self.value, &self.ring.from_i64(n)))
    }
}

impl PartialEq for RingValue {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.ring == other.ring
    }
}
impl Eq for RingValue {}

impl Hash for RingValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_value(&self.ring, &self.value))
    }
}

impl fmt::Debug for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, 'b> $tr<&'b RingValue> for &'a RingValue {
            type Output = RingValue;
            fn $m(self, rhs: &'b RingValue) -> RingValue {
                self.$try(rhs).expect("ring mismatch in arithmetic operator")
            }
        }
        impl $tr<RingValue> for RingValue {
            type Output = RingValue;
            fn $m(self, rhs: RingValue) -> RingValue {
                (&self).$try(&rhs).expect("ring mismatch in arithmetic operator")
            }
        }
        impl<'b> $tr<&'b RingValue> for RingValue {
            type Output = RingValue;
            fn $m(self, rhs: &'b RingValue) -> RingValue {
                (&self).$try(rhs).expect("ring mismatch in arithmetic operator")
            }
        }
        impl<'a> $tr<RingValue> for &'a RingValue {
            type Output = RingValue;
            fn $m(self, rhs: RingValue) -> RingValue {
                self.$try(&rhs).expect("ring mismatch in arithmetic operator")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        RingValue::new(&self.ring, self.ring.neg(&self.value))
    }
}

impl Neg for RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        -&self
    }
}

impl Ring {
    /// Parse an element of this ring.
    pub fn parse(&self, s: &str) -> Result<RingValue> {
        RingValue::parse(self, s)
    }

    /// The named generator as a tagged element.
    pub fn gen(&self, name: &str) -> Result<RingValue> {
        self.generator(name)
            .map(|v| RingValue::new(self, v))
            .ok_or_else(|| Error::InvalidConstruction(format!("no generator {name} in {self}")))
    }

    /// Tagged image of an integer.
    pub fn int(&self, n: i64) -> RingValue {
        RingValue::from_i64(self, n)
    }

    /// Tag a raw value.
    pub fn el(&self, v: Value) -> RingValue {
        RingValue::new(self, v)
    }

    /// Lift an element of a lower tower level.
    pub fn lift(&self, x: &RingValue) -> Result<RingValue> {
        Ok(RingValue::new(self, self.embed_from(x.ring(), x.value())?))
    }
}
