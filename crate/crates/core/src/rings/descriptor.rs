//! JSON ring descriptors: a tower listed from the innermost level outwards.
//!
//! ```json
//! {"tower":[{"kind":"cyclotomic","n":3},{"kind":"polynomial","vars":["b"]}]}
//! ```
//!
//! When the first level is not a base ring (`integers`, `rationals`,
//! `prime-field`, `ext-field`) the tower starts from the integers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::display::format_value;
use super::ring::{PolyVar, Ring, RingKind};
use crate::error::{Error, Result};

/// A serialisable description of a ring tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    /// Levels from the innermost outwards.
    pub tower: Vec<LevelDescriptor>,
}

fn default_xi() -> String {
    "xi".into()
}
fn default_a() -> String {
    "a".into()
}

/// One tower level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LevelDescriptor {
    /// The integers.
    Integers,
    /// The rationals.
    Rationals,
    /// `F_p`.
    PrimeField { p: u64 },
    /// `F_p[var]/(modulus)`, modulus low degree first.
    ExtField {
        p: u64,
        modulus: Vec<u64>,
        #[serde(default = "default_a")]
        var: String,
    },
    /// Adjoin a primitive `n`-th root of unity.
    Cyclotomic {
        n: u64,
        #[serde(default = "default_xi")]
        var: String,
    },
    /// Polynomial variables; `laurent` lists inverted variables and
    /// `relations` maps a variable to a monic univariate relation.
    Polynomial {
        vars: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        laurent: Vec<String>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        relations: BTreeMap<String, String>,
    },
    /// Fraction field of the ring so far.
    Fraction,
}

impl RingDescriptor {
    /// Parse from JSON text.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("ring descriptor: {e}")))
    }

    /// Build the described ring.
    pub fn build(&self) -> Result<Ring> {
        let mut ring: Option<Ring> = None;
        for level in &self.tower {
            let base = || ring.clone().unwrap_or_else(Ring::integers);
            let is_base_kind = matches!(
                level,
                LevelDescriptor::Integers
                    | LevelDescriptor::Rationals
                    | LevelDescriptor::PrimeField { .. }
                    | LevelDescriptor::ExtField { .. }
            );
            if is_base_kind && ring.is_some() {
                return Err(Error::InvalidConstruction(
                    "base levels may only appear first in a tower".into(),
                ));
            }
            ring = Some(match level {
                LevelDescriptor::Integers => Ring::integers(),
                LevelDescriptor::Rationals => Ring::rationals(),
                LevelDescriptor::PrimeField { p } => Ring::prime_field(*p)?,
                LevelDescriptor::ExtField { p, modulus, var } => {
                    Ring::ext_field(*p, modulus.clone(), var)?
                }
                LevelDescriptor::Cyclotomic { n, var } => Ring::cyclotomic(&base(), *n, var)?,
                LevelDescriptor::Polynomial { vars, laurent, relations } => {
                    let b = base();
                    for name in laurent.iter().chain(relations.keys()) {
                        if !vars.contains(name) {
                            return Err(Error::InvalidConstruction(format!(
                                "{name} is not a variable of this level"
                            )));
                        }
                    }
                    let mut pv = Vec::new();
                    for v in vars {
                        let relation = match relations.get(v) {
                            None => None,
                            Some(expr) => Some(univariate_relation(&b, v, expr)?),
                        };
                        pv.push(PolyVar { name: v.clone(), laurent: laurent.contains(v), relation });
                    }
                    Ring::polynomial_with(&b, pv)?
                }
                LevelDescriptor::Fraction => Ring::fraction(&base())?,
            });
        }
        ring.ok_or_else(|| Error::InvalidConstruction("empty tower".into()))
    }

    /// Describe an existing ring.
    pub fn of(ring: &Ring) -> RingDescriptor {
        let mut tower = Vec::new();
        describe(ring, &mut tower);
        if tower.is_empty() {
            tower.push(LevelDescriptor::Integers);
        }
        RingDescriptor { tower }
    }

    /// JSON value.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("descriptor serialises")
    }
}

fn univariate_relation(base: &Ring, var: &str, expr: &str) -> Result<Vec<super::ring::Value>> {
    let tmp = Ring::polynomial(base, &[var])?;
    let v = tmp.parse(expr)?;
    let dense = tmp.poly_to_dense(v.value())?;
    if dense.len() < 2 || !base.is_one(dense.last().unwrap()) {
        return Err(Error::InvalidConstruction(format!(
            "relation {expr} on {var} must be monic of positive degree"
        )));
    }
    Ok(dense)
}

fn describe(ring: &Ring, out: &mut Vec<LevelDescriptor>) {
    if let Some(b) = ring.base() {
        describe(b, out);
    }
    let level = match ring.kind() {
        RingKind::Integers => {
            return;
        }
        RingKind::Rationals => LevelDescriptor::Rationals,
        RingKind::PrimeField { p } => LevelDescriptor::PrimeField { p: *p },
        RingKind::ExtField { p, modulus, var } => {
            LevelDescriptor::ExtField { p: *p, modulus: modulus.clone(), var: var.clone() }
        }
        RingKind::Cyclotomic { n, var, .. } => LevelDescriptor::Cyclotomic { n: *n, var: var.clone() },
        RingKind::Polynomial { base, vars } => {
            let mut relations = BTreeMap::new();
            for v in vars {
                if let Some(rel) = &v.relation {
                    let tmp = Ring::polynomial(base, &[&v.name]).expect("fresh level");
                    let val = tmp.dense_to_poly(rel);
                    relations.insert(v.name.clone(), format_value(&tmp, &val));
                }
            }
            LevelDescriptor::Polynomial {
                vars: vars.iter().map(|v| v.name.clone()).collect(),
                laurent: vars.iter().filter(|v| v.laurent).map(|v| v.name.clone()).collect(),
                relations,
            }
        }
        RingKind::Fraction { .. } => LevelDescriptor::Fraction,
    };
    out.push(level);
}

impl Ring {
    /// Build a ring from a JSON descriptor string.
    pub fn from_descriptor_json(s: &str) -> Result<Ring> {
        RingDescriptor::from_json(s)?.build()
    }
}
