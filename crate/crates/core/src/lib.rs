//! Exact computation with twisted derivations, hom-Lie algebras built from
//! them, their enveloping algebras, and arithmetic zeta functions attached to
//! finite fibres.
//!
//! Modules, bottom-up:
//!
//! * [`rings`] — exact ring towers and ring morphisms;
//! * [`linalg`] — linear algebra over those rings;
//! * [`derivations`] — σ-derivations, their canonical forms and operator calculus;
//! * [`homlie`] — hom-Lie algebras from structure constants or derivations;
//! * [`covers`] — Kummer and Artin–Schreier covers and their Witt-type algebras;
//! * [`enveloping`] — noncommutative presentations, rewriting and confluence;
//! * [`zeta`] — point counts, simple modules, Ext¹ and zeta series;
//! * [`cli`] — the `homlie` command-line front end.

pub mod cli;
pub mod covers;
pub mod derivations;
pub mod enveloping;
pub mod error;
pub mod homlie;
pub mod linalg;
pub mod rings;
pub mod zeta;

pub use error::{Error, Result};
