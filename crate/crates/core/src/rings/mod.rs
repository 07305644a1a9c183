//! Exact commutative rings: integers, rationals, finite fields, cyclotomic
//! quotients, sparse (Laurent) polynomials with optional relations, and
//! fraction fields, composed into towers.

mod descriptor;
mod display;
pub mod fp;
mod linsolve;
mod morphism;
mod parse;
pub mod random;
mod ring;
mod upoly;
mod value;

pub use descriptor::{LevelDescriptor, RingDescriptor};
pub use display::format_value;
pub use morphism::RingMorphism;
pub use parse::parse_value;
pub use ring::{cyclotomic_polynomial, euler_phi, grlex_cmp, Exps, PolyVar, Ring, RingKind, Value};
pub use value::RingValue;

pub use upoly::{divrem as upoly_divrem, gcd as upoly_gcd, mul as upoly_mul};

#[cfg(test)]
mod tests;
