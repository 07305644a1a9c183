use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_element, random_nonzero, RandomShape};
use super::*;

fn sample_rings() -> Vec<Ring> {
    let z = Ring::integers();
    let q = Ring::rationals();
    let zxi = Ring::cyclotomic(&z, 3, "xi").unwrap();
    let zxib = Ring::polynomial(&zxi, &["b"]).unwrap();
    let f3 = Ring::prime_field(3).unwrap();
    let nu_rel = vec![f3.zero(), f3.from_i64(-1), f3.zero(), f3.one()];
    let asr = Ring::polynomial_with(
        &f3,
        vec![PolyVar { name: "nu".into(), laurent: false, relation: Some(nu_rel) }, PolyVar::plain("b")],
    )
    .unwrap();
    let qq = Ring::fraction(&Ring::polynomial(&q, &["q"]).unwrap()).unwrap();
    let qt = Ring::laurent(&qq, &["t"]).unwrap();
    let f49 = Ring::ext_field(7, vec![1, 0, 1], "a").unwrap(); // x^2 + 1 irreducible mod 7
    let q5 = Ring::cyclotomic(&q, 5, "xi").unwrap();
    vec![z, q, zxi, zxib, asr, qt, f49, q5]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_and_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in sample_rings() {
            let shape = RandomShape::default();
            let a = random_element(&r, &mut rng, shape);
            let b = random_element(&r, &mut rng, shape);
            let c = random_element(&r, &mut rng, shape);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            let printed = a.to_string();
            let back = r.parse(&printed).unwrap();
            prop_assert_eq!(back, a.clone(), "round trip of {} in {}", printed, r);
        }
    }

    #[test]
    fn exact_division_inverts_multiplication(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in sample_rings() {
            if !r.is_domain() { continue; }
            let shape = RandomShape::default();
            let a = random_element(&r, &mut rng, shape);
            let b = random_nonzero(&r, &mut rng, shape);
            let q = (&a * &b).div_exact(&b).unwrap();
            prop_assert_eq!(q, a);
        }
    }

    #[test]
    fn morphism_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = Ring::integers();
        let src = Ring::polynomial(&Ring::cyclotomic(&z, 3, "xi").unwrap(), &["b"]).unwrap();
        let f7 = Ring::prime_field(7).unwrap();
        let phi = RingMorphism::new(&src, &f7, &[("xi", f7.int(2)), ("b", f7.int(1))]).unwrap();
        let shape = RandomShape::default();
        let a = random_element(&src, &mut rng, shape);
        let b = random_element(&src, &mut rng, shape);
        prop_assert_eq!(phi.apply(&(&a * &b)).unwrap(), &phi.apply(&a).unwrap() * &phi.apply(&b).unwrap());
        prop_assert_eq!(phi.apply(&(&a + &b)).unwrap(), &phi.apply(&a).unwrap() + &phi.apply(&b).unwrap());
    }
}

#[test]
fn cyclotomic_examples() {
    let r = Ring::cyclotomic(&Ring::integers(), 3, "xi").unwrap();
    assert_eq!(r.parse("xi^2").unwrap(), r.parse("-1-xi").unwrap());
    let r4 = Ring::cyclotomic(&Ring::integers(), 4, "xi").unwrap();
    assert_eq!(r4.parse("1-xi^2").unwrap(), r4.int(2));
}

#[test]
fn artin_schreier_base_reduces() {
    let d = RingDescriptor::from_json(
        r#"{"tower":[{"kind":"prime-field","p":3},{"kind":"polynomial","vars":["nu","b"],"relations":{"nu":"nu^3-nu"}}]}"#,
    )
    .unwrap();
    let r = d.build().unwrap();
    assert_eq!(r.parse("nu^3").unwrap(), r.gen("nu").unwrap());
    assert_eq!(r.parse("-2*nu").unwrap(), r.gen("nu").unwrap());
    assert!(!r.is_domain());
}

#[test]
fn descriptor_round_trip() {
    let s = r#"{"tower":[{"kind":"cyclotomic","n":3},{"kind":"polynomial","vars":["b"]}]}"#;
    let r = Ring::from_descriptor_json(s).unwrap();
    assert_eq!(r.to_string(), "ZZ[xi]/Phi_3[b]");
    let d = RingDescriptor::of(&r);
    assert_eq!(d.build().unwrap(), r);
    let d2 = RingDescriptor::of(&Ring::integers());
    assert_eq!(d2.build().unwrap(), Ring::integers());
}

#[test]
fn morphism_examples() {
    let z = Ring::integers();
    let zxi = Ring::cyclotomic(&z, 3, "xi").unwrap();
    let f7 = Ring::prime_field(7).unwrap();
    let phi = RingMorphism::new(&zxi, &f7, &[("xi", f7.int(2))]).unwrap();
    assert_eq!(phi.apply(&zxi.parse("xi^2+xi+1").unwrap()).unwrap(), f7.int(0));
    // 3 is not a primitive cube root of unity mod 7 (3^3 = 6).
    assert!(matches!(
        RingMorphism::new(&zxi, &f7, &[("xi", f7.int(3))]),
        Err(crate::Error::RelationViolated(_))
    ));
    // Z[b, x] -> F_5, b -> 0, x -> 2.
    let zb = Ring::polynomial(&z, &["b", "x"]).unwrap();
    let f5 = Ring::prime_field(5).unwrap();
    let psi = RingMorphism::new(&zb, &f5, &[("b", f5.int(0)), ("x", f5.int(2))]).unwrap();
    assert_eq!(psi.apply(&zb.parse("b*x+3").unwrap()).unwrap(), f5.int(3));
    // Q -> F_p fails on denominators divisible by p.
    let q = Ring::rationals();
    let to5 = RingMorphism::new(&q, &f5, &[]).unwrap();
    assert!(to5.apply(&q.parse("1/5").unwrap()).is_err());
    assert_eq!(to5.apply(&q.parse("1/2").unwrap()).unwrap(), f5.int(3));
    // Composition.
    let zxib = Ring::polynomial(&zxi, &["b"]).unwrap();
    let spec = RingMorphism::new(&zxib, &zxi, &[("b", zxi.int(1))]).unwrap();
    let comp = spec.then(&phi).unwrap();
    let x = zxib.parse("b*xi+3").unwrap();
    assert_eq!(comp.apply(&x).unwrap(), phi.apply(&spec.apply(&x).unwrap()).unwrap());
    assert_eq!(comp.apply(&x).unwrap(), f7.int(5));
}

#[test]
fn parse_errors() {
    let r = Ring::integers();
    assert!(r.parse("").is_err());
    assert!(r.parse("x").is_err());
    assert!(r.parse("(1+2").is_err());
    assert!(r.parse("3/2").is_err());
    assert!(matches!(r.parse("1/0"), Err(crate::Error::DivisionByZero)));
}

#[test]
fn fraction_field_printing_round_trips() {
    let q = Ring::rationals();
    let qq = Ring::fraction(&Ring::polynomial(&q, &["q"]).unwrap()).unwrap();
    let v = qq.parse("(q^2+1)/(2*q-2)").unwrap();
    assert_eq!(qq.parse(&v.to_string()).unwrap(), v);
    assert_eq!(v.to_string(), "(1/2*q^2+1/2)/(q-1)");
}
