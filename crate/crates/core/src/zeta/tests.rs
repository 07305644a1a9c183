use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::enveloping::{NCPolynomial, NCPresentation, Word};
use crate::rings::Ring;

fn w(s: &str) -> Word {
    Word::from_digits(s).unwrap()
}

/// `𝔽_q[x_0, …, x_{g-1}]` (commutative) with extra relations.
fn commutative(ring: &Ring, g: usize, extra: &[NCPolynomial]) -> NCPresentation {
    let labels: Vec<String> = (0..g).map(|i| format!("x{i}")).collect();
    let mut rels = Vec::new();
    for i in 0..g {
        for j in i + 1..g {
            rels.push(NCPolynomial::from_terms(ring, [(Word(vec![j, i]), ring.int(1)), (Word(vec![i, j]), ring.int(-1))]));
        }
    }
    rels.extend(extra.iter().cloned());
    NCPresentation::from_relations(ring, labels, &rels).unwrap()
}

fn hyperbola(p: u64, b: i64) -> NCPresentation {
    let f = Ring::prime_field(p).unwrap();
    let rel = NCPolynomial::from_terms(&f, [(w("01"), f.int(1)), (Word::empty(), f.int(-b))]);
    commutative(&f, 2, &[rel])
}

fn quick(terms: usize, max_dim: usize) -> ZetaConfig {
    ZetaConfig { terms, max_dim, pi_degree: None, centre_degree: 3, budgets: Budgets::default() }
}

#[test]
fn finite_field_tables() {
    for (p, e) in [(2, 1), (2, 4), (3, 3), (7, 1), (7, 2), (7, 3), (5, 2)] {
        let f = FiniteField::new(p, e).unwrap();
        let q = f.size();
        assert_eq!(q as u64, p.pow(e));
        let g = f.exp[1 % (q as usize - 1).max(1)];
        assert_eq!(f.multiplicative_order(g).unwrap(), q as u64 - 1);
        for a in 1..q {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
            // Frobenius is additive.
            let b = (a * 7 + 3) % q;
            assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        }
        assert_eq!(f.decode(f.encode(&f.decode(q - 1))), f.decode(q - 1));
    }
    assert!(FiniteField::new(6, 1).is_err());
    assert!(FiniteField::new(2, 30).is_err());
    let f49 = FiniteField::new(7, 2).unwrap();
    assert_eq!(f49.format(3), "3");
    assert!(f49.format(7 * 2 + 1).contains('z'));
}

#[test]
fn hyperbola_counts() {
    let p = hyperbola(7, 1);
    for k in 1..=3 {
        let f = FiniteField::new(7, k).unwrap();
        let cp = CompiledPresentation::new(&p, &f, &[]).unwrap();
        let pts = one_dim_points(&cp, &Budgets::default()).unwrap();
        assert_eq!(pts.len() as u64, 7u64.pow(k) - 1);
        if k <= 2 {
            assert_eq!(pts, one_dim_points_naive(&cp).unwrap());
        }
    }
    // Over 𝔽_4 presentations coming from an extension-field ring.
    let f4 = Ring::ext_field(2, vec![1, 1, 1], "a").unwrap();
    let a = f4.gen("a").unwrap();
    let rel = NCPolynomial::from_terms(&f4, [(w("01"), f4.int(1)), (Word::empty(), -&a)]);
    let p4 = commutative(&f4, 2, &[rel]);
    for k in 1..=3 {
        let f = FiniteField::new(2, 2 * k).unwrap();
        let cp = CompiledPresentation::new(&p4, &f, &[]).unwrap();
        assert_eq!(one_dim_points(&cp, &Budgets::default()).unwrap().len() as u64, 4u64.pow(k) - 1);
    }
    // Fields of the wrong characteristic or degree are rejected.
    assert!(CompiledPresentation::new(&p4, &FiniteField::new(2, 3).unwrap(), &[]).is_err());
    assert!(CompiledPresentation::new(&p, &FiniteField::new(5, 1).unwrap(), &[]).is_err());
}

#[test]
fn jackson_one_dimensional_locus() {
    let j = jackson_fiber(3, 7, Some(2), 1).unwrap();
    for k in 1..=2 {
        let f = FiniteField::new(7, k).unwrap();
        let cp = CompiledPresentation::new(&j, &f, &[]).unwrap();
        let pts = one_dim_points(&cp, &Budgets::default()).unwrap();
        // A hyperbola ε1ε2 = b in the plane ε0 = 0 plus one isolated point.
        assert_eq!(pts.len() as u64, 7u64.pow(k));
        assert_eq!(pts, one_dim_points_naive(&cp).unwrap());
        assert_eq!(pts.iter().filter(|p| p.values[0] != 0).count(), 1);
    }
    // b = 0: the hyperbola degenerates to the three coordinate axes.
    let j0 = jackson_fiber(3, 7, Some(2), 0).unwrap();
    let f = FiniteField::new(7, 1).unwrap();
    let cp = CompiledPresentation::new(&j0, &f, &[]).unwrap();
    assert_eq!(one_dim_points(&cp, &Budgets::default()).unwrap().len(), 3 * 6 + 1);
    assert!(jackson_fiber(3, 7, Some(3), 1).is_err());
    assert!(jackson_fiber(3, 9, None, 1).is_err());
    assert!(one_dim_points(&cp, &Budgets { point_field: 5, ..Budgets::default() }).is_err());
}

#[test]
fn ext_dimensions_by_hand() {
    let f = FiniteField::new(5, 1).unwrap();
    // Free algebra on three generators: Z¹ has dimension g, inner is 1 or 0.
    let free = CompiledPresentation::from_parts(&f, 3, vec![], vec![]);
    let s = SimpleModuleRep { dim: 1, matrices: vec![vec![1], vec![2], vec![3]] };
    let t = SimpleModuleRep { dim: 1, matrices: vec![vec![0], vec![2], vec![3]] };
    assert_eq!(ext1_dim(&free, &s, &s), 3);
    assert_eq!(inner_dim(&free, &s, &s), 0);
    assert_eq!(inner_dim(&free, &s, &t), 1);
    assert_eq!(ext1_dim(&free, &s, &t), 2);
    // Polynomial ring in two variables: the tangent space at a point.
    let ring = Ring::prime_field(5).unwrap();
    let poly2 = commutative(&ring, 2, &[]);
    let cp = CompiledPresentation::new(&poly2, &f, &[]).unwrap();
    let a = SimpleModuleRep { dim: 1, matrices: vec![vec![1], vec![4]] };
    let b = SimpleModuleRep { dim: 1, matrices: vec![vec![2], vec![4]] };
    assert_eq!(ext1_dim(&cp, &a, &a), 2);
    assert_eq!(ext1_dim(&cp, &a, &b), 0);
    // The node xy = 0 at the origin has a two-dimensional tangent space;
    // smooth points of the axes have one.
    let node = hyperbola(5, 0);
    let cp = CompiledPresentation::new(&node, &f, &[]).unwrap();
    let origin = SimpleModuleRep { dim: 1, matrices: vec![vec![0], vec![0]] };
    let smooth = SimpleModuleRep { dim: 1, matrices: vec![vec![3], vec![0]] };
    assert_eq!(ext1_dim(&cp, &origin, &origin), 2);
    assert_eq!(ext1_dim(&cp, &smooth, &smooth), 1);
}

/// Naive count of absolutely simple two-dimensional representations: every
/// tuple of matrices, divided by the orbit size `|PGL₂(𝔽_p)|`.
fn naive_two_dim_classes(cp: &CompiledPresentation) -> usize {
    let f = cp.field();
    let q = f.size() as u64;
    let g = cp.generators();
    let mut raw = 0usize;
    for idx in 0..q.pow(4 * g as u32) {
        let mut r = idx;
        let digits: Vec<u32> = (0..4 * g)
            .map(|_| {
                let d = (r % q) as u32;
                r /= q;
                d
            })
            .collect();
        let rep = SimpleModuleRep { dim: 2, matrices: digits.chunks(4).map(|c| c.to_vec()).collect() };
        let ok = cp.relations().iter().all(|rel| {
            let mut acc = [0u32; 4];
            for (word, c) in rel {
                let mut m = [1u32, 0, 0, 1];
                for &g in word {
                    let x = &rep.matrices[g];
                    m = [
                        f.add(f.mul(m[0], x[0]), f.mul(m[1], x[2])),
                        f.add(f.mul(m[0], x[1]), f.mul(m[1], x[3])),
                        f.add(f.mul(m[2], x[0]), f.mul(m[3], x[2])),
                        f.add(f.mul(m[2], x[1]), f.mul(m[3], x[3])),
                    ];
                }
                for i in 0..4 {
                    acc[i] = f.add(acc[i], f.mul(*c, m[i]));
                }
            }
            acc == [0; 4]
        });
        if ok && is_absolutely_simple(cp, &rep) {
            raw += 1;
        }
    }
    let pgl = ((q * q - 1) * (q * q - q) / (q - 1)) as usize;
    assert_eq!(raw % pgl, 0);
    raw / pgl
}

#[test]
fn structured_search_matches_orbit_count() {
    for (p, b) in [(3, 1), (3, 0), (3, 2)] {
        let j = jackson_fiber(2, p, None, b).unwrap();
        let central = central_elements(&j, 2).unwrap();
        let f = FiniteField::new(p, 1).unwrap();
        let cp = CompiledPresentation::new(&j, &f, &central).unwrap();
        let s = search_dimension(&cp, 2, 10_000_000).unwrap();
        assert_eq!(s.simples.len(), naive_two_dim_classes(&cp), "p={p} b={b}");
        for (i, a) in s.simples.iter().enumerate() {
            assert!(is_absolutely_simple(&cp, a));
            assert_eq!(hom_dim(&cp, a, a), 1);
            for c in &s.simples[i + 1..] {
                assert_eq!(hom_dim(&cp, a, c), 0);
            }
        }
    }
    // The quantum plane yx = −xy over 𝔽_5 (no central pruning).
    let ring = Ring::prime_field(5).unwrap();
    let rel = NCPolynomial::from_terms(&ring, [(w("10"), ring.int(1)), (w("01"), ring.int(1))]);
    let qp = NCPresentation::from_relations(&ring, vec!["x".into(), "y".into()], &[rel]).unwrap();
    let cp = CompiledPresentation::new(&qp, &FiniteField::new(5, 1).unwrap(), &[]).unwrap();
    assert_eq!(search_dimension(&cp, 2, 10_000_000).unwrap().simples.len(), naive_two_dim_classes(&cp));
    assert!(search_dimension(&cp, 2, 10).is_err());
}

#[test]
fn jackson_simples_over_f7() {
    let j = jackson_fiber(3, 7, Some(2), 1).unwrap();
    let central = central_elements(&j, 3).unwrap();
    assert_eq!(central.len(), 4);
    let f = FiniteField::new(7, 1).unwrap();
    let cp = CompiledPresentation::new(&j, &f, &central).unwrap();
    let s = brute_force_simples(&cp, 3, &Budgets::default()).unwrap();
    let dims: Vec<usize> = (1..=3).map(|d| s.simples.iter().filter(|r| r.dim == d).count()).collect();
    assert_eq!(dims[0], 7);
    assert!(dims[2] > 0);
    // One two-dimensional simple, sharing its central character with the
    // isolated one-dimensional point (ξ² − 1, 0, 0).
    assert_eq!(dims[1], 1);
    let two = s.simples.iter().find(|r| r.dim == 2).unwrap();
    let isolated = SimpleModuleRep { dim: 1, matrices: vec![vec![3], vec![0], vec![0]] };
    assert_eq!(central_character(&cp, two), central_character(&cp, &isolated));
    for r in &s.simples {
        assert!(is_absolutely_simple(&cp, r));
        assert!(central_character(&cp, r).is_some());
    }
    // Larger fields or dimensions exceed the default budget.
    let f343 = FiniteField::new(7, 3).unwrap();
    let cp343 = CompiledPresentation::new(&j, &f343, &central).unwrap();
    assert!(matches!(brute_force_simples(&cp343, 3, &Budgets::default()), Err(Error::Budget(_))));
    assert!(brute_force_simples(&cp, 4, &Budgets::default()).is_err());
}

#[test]
fn quantum_plane_simples_over_f7() {
    // yx = ξxy with ξ = 2 of order 3: three-dimensional simples live off the
    // axes, i.e. where both x³ and y³ act by nonzero scalars.
    let ring = Ring::prime_field(7).unwrap();
    let rel = NCPolynomial::from_terms(&ring, [(w("10"), ring.int(1)), (w("01"), ring.int(-2))]);
    let qp = NCPresentation::from_relations(&ring, vec!["x".into(), "y".into()], &[rel]).unwrap();
    let central = central_elements(&qp, 3).unwrap();
    let labels: Vec<String> = central.iter().map(|c| c.format(qp.labels())).collect();
    assert_eq!(labels, vec!["x^3", "y^3"]);
    let f = FiniteField::new(7, 1).unwrap();
    let cp = CompiledPresentation::new(&qp, &f, &central).unwrap();
    let s = brute_force_simples(&cp, 3, &Budgets::default()).unwrap();
    let three: Vec<_> = s.simples.iter().filter(|r| r.dim == 3).collect();
    assert!(s.simples.iter().all(|r| r.dim != 2));
    // One simple for each pair of nonzero values of (x³, y³).
    assert_eq!(three.len(), 36);
    for r in three {
        let chi = central_character(&cp, r).unwrap();
        assert!(chi.iter().all(|&v| v != 0));
    }
    // The one-dimensional simples are the two axes.
    assert_eq!(s.simples.iter().filter(|r| r.dim == 1).count(), 13);
}

#[test]
fn ext_classes_and_trace() {
    let c = ExtClass::from_matrix(&[vec![2, 0], vec![1, 0]], 3);
    assert_eq!(c.0, vec![0, 0, 0, 0, 0, 0, 0, 1, 2]);
    assert_eq!(c.trace(), 3);
    let big = ExtClass::from_matrix(&[vec![1; 4], vec![1; 4], vec![1; 4], vec![1; 4]], 3);
    assert_eq!(big.0.len(), 16);
    let mut sum = BTreeMap::new();
    sum.insert(c.clone(), 2);
    sum.insert(ExtClass::from_matrix(&[vec![1]], 3), 1);
    assert_eq!(trace_t(&sum), 7);
}

#[test]
fn series_examples() {
    // The affine line: ζ_azu = 1/(1 − qt), nothing ramified.
    let ring = Ring::prime_field(5).unwrap();
    let line = commutative(&ring, 1, &[]);
    let z = zeta_element(&line, &quick(4, 1)).unwrap();
    let expected: Vec<BigRational> = (0..=4).map(|j| BigRational::from_integer(BigInt::from(5i64.pow(j)))).collect();
    assert_eq!(z.zeta_azu.coefficients, expected);
    assert!(z.zeta_ram.coefficients[1..].iter().all(|c| c.is_zero()));
    assert!(z.zeta_tangent.coefficients[1..].iter().all(|c| c.is_zero()));
    assert!(z.zeta_azu.round_trip_ok());
    // An algebra with no points: every series is 1.
    let empty = NCPresentation::from_relations(&ring, vec!["x".into()], &[NCPolynomial::one(&ring)]).unwrap();
    let z = zeta_element(&empty, &quick(3, 2)).unwrap();
    for s in [&z.zeta_ram, &z.zeta_azu, &z.zeta_tangent] {
        assert_eq!(s.coefficients[0], BigRational::one());
        assert!(s.coefficients[1..].iter().all(|c| c.is_zero()));
    }
    // The node xy = 0 over 𝔽_3 is commutative: every point is Azumaya of degree 1.
    let node = hyperbola(3, 0);
    let z = zeta_element(&node, &quick(2, 1)).unwrap();
    assert_eq!(z.levels[0].ram_points, 0);
    assert_eq!(z.levels[0].azumaya_points, 5);
    assert!(zeta_element(&node, &ZetaConfig { terms: 9, ..quick(9, 1) }).is_err());
}

#[test]
fn jackson_zeta_fibre() {
    let j = jackson_fiber(3, 7, Some(2), 1).unwrap();
    let config = ZetaConfig { terms: 2, max_dim: 3, pi_degree: Some(3), centre_degree: 3, budgets: Budgets::default() };
    let z = zeta_element(&j, &config).unwrap();
    assert_eq!(z, zeta_element(&j, &config).unwrap());
    let l1 = &z.levels[0];
    assert!(l1.complete);
    assert_eq!(l1.one_dim_points, 7);
    // Every one-dimensional simple lies over a ramified point.
    assert!(l1.ram_points > 0 && l1.azumaya_points > 0);
    assert!(l1.ram_count >= 7);
    assert_eq!(z.zeta_ram.coefficients[1], BigRational::from_integer(BigInt::from(l1.ram_count)));
    assert_eq!(z.zeta_tangent.counts[0] as u64, l1.trace);
    for s in [&z.zeta_ram, &z.zeta_azu, &z.zeta_tangent] {
        assert!(s.round_trip_ok());
    }
    let j13 = jackson_fiber(3, 13, None, 1).unwrap();
    let z13 = zeta_element(&j13, &ZetaConfig { terms: 1, max_dim: 1, ..config.clone() }).unwrap();
    let prod = arithmetic_product(vec![(13, z13.clone()), (7, z.clone())]).unwrap();
    assert_eq!(prod.fibers[0].0, 7);
    assert!(arithmetic_product(vec![(7, z.clone()), (7, z)]).is_err());
    assert!(arithmetic_product(vec![(5, z13)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_log_round_trip(counts in proptest::collection::vec(-50i64..50, 1..7)) {
        let s = ZetaSeries::from_counts(&counts);
        prop_assert!(s.round_trip_ok());
        prop_assert_eq!(s.coefficients[1].clone(), BigRational::from_integer(BigInt::from(counts[0])));
    }

    #[test]
    fn ext_class_is_permutation_invariant(entries in proptest::collection::vec(0u64..5, 4), rot in 0usize..4) {
        let m = vec![entries[..2].to_vec(), entries[2..].to_vec()];
        let mut e = entries.clone();
        e.rotate_left(rot);
        let m2 = vec![e[..2].to_vec(), e[2..].to_vec()];
        let a = ExtClass::from_matrix(&m, 3);
        prop_assert_eq!(&a, &ExtClass::from_matrix(&m2, 3));
        prop_assert_eq!(a.trace(), entries.iter().sum::<u64>());
    }

    #[test]
    fn field_axioms(a in 0u32..343, b in 0u32..343, c in 0u32..343) {
        let f = FiniteField::new(7, 3).unwrap();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }
}
