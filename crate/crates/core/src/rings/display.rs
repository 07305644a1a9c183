//! Canonical printing of ring elements.
//!
//! The output is accepted by [`super::parse::parse_value`], and printing is a
//! pure function of the canonical value, so reports are byte-stable.

use num_traits::{One, Signed};

use super::ring::{Ring, RingKind, Value};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    Atom,
    Product,
    Sum,
}

/// Canonical string for `v`, an element of `ring`.
pub fn format_value(ring: &Ring, v: &Value) -> String {
    fmt(ring, v).0
}

fn monomial(names: &[(&str, i64)]) -> String {
    let parts: Vec<String> = names
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(n, e)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    parts.join("*")
}

/// Join `(coefficient, monomial)` pairs into a sum.
fn join_terms(terms: Vec<((String, Shape), bool, bool, String)>) -> (String, Shape) {
    if terms.is_empty() {
        return ("0".into(), Shape::Atom);
    }
    let n = terms.len();
    let mut out = String::new();
    let mut last_shape = Shape::Atom;
    for (k, ((cs, cshape), is_one, is_minus_one, mono)) in terms.into_iter().enumerate() {
        let (s, shape) = if mono.is_empty() {
            (cs, cshape)
        } else if is_one {
            (mono, Shape::Product)
        } else if is_minus_one {
            (format!("-{mono}"), Shape::Product)
        } else if cshape == Shape::Sum {
            (format!("({cs})*{mono}"), Shape::Product)
        } else {
            (format!("{cs}*{mono}"), Shape::Product)
        };
        if k > 0 && !s.starts_with('-') {
            out.push('+');
        }
        out.push_str(&s);
        last_shape = shape;
    }
    if n > 1 {
        (out, Shape::Sum)
    } else {
        (out, last_shape)
    }
}

fn fmt(ring: &Ring, v: &Value) -> (String, Shape) {
    match (ring.kind(), v) {
        (RingKind::Integers, Value::Int(z)) => {
            (z.to_string(), if z.is_negative() { Shape::Product } else { Shape::Atom })
        }
        (RingKind::Rationals, Value::Rat(q)) => {
            if q.denom().is_one() {
                (q.numer().to_string(), if q.is_negative() { Shape::Product } else { Shape::Atom })
            } else {
                (format!("{}/{}", q.numer(), q.denom()), Shape::Product)
            }
        }
        (RingKind::PrimeField { .. }, Value::Fp(x)) => (x.to_string(), Shape::Atom),
        (RingKind::ExtField { var, .. }, Value::Ext(c)) => {
            let terms = c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, x)| **x != 0)
                .map(|(i, x)| {
                    ((x.to_string(), Shape::Atom), *x == 1, false, monomial(&[(var, i as i64)]))
                })
                .collect();
            join_terms(terms)
        }
        (RingKind::Cyclotomic { base, var, .. }, Value::Cyclo(c)) => {
            let minus_one = base.neg(&base.one());
            let terms = c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, x)| !base.is_zero(x))
                .map(|(i, x)| {
                    (fmt(base, x), base.is_one(x), *x == minus_one, monomial(&[(var, i as i64)]))
                })
                .collect();
            join_terms(terms)
        }
        (RingKind::Polynomial { base, vars }, Value::Poly(t)) => {
            let minus_one = base.neg(&base.one());
            let terms = t
                .iter()
                .map(|(e, x)| {
                    let names: Vec<(&str, i64)> =
                        vars.iter().zip(e).map(|(v, &k)| (v.name.as_str(), k as i64)).collect();
                    (fmt(base, x), base.is_one(x), *x == minus_one, monomial(&names))
                })
                .collect();
            join_terms(terms)
        }
        (RingKind::Fraction { base }, Value::Frac(n, d)) => {
            let (ns, nshape) = fmt(base, n);
            if base.is_one(d) {
                return (ns, nshape);
            }
            let (ds, dshape) = fmt(base, d);
            let ns = if nshape == Shape::Sum { format!("({ns})") } else { ns };
            let ds = if dshape == Shape::Atom { ds } else { format!("({ds})") };
            (format!("{ns}/{ds}"), Shape::Product)
        }
        _ => panic!("value does not belong to {ring}"),
    }
}
