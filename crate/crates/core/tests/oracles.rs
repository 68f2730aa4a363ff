//! Cross-checks between independent computations, and structural
//! invariants over random inputs.

use kmq_core::brylinski::verification_grid;
use kmq_core::gcm::validate_gcm;
use kmq_core::loop_algebra::LoopAlgebra;
use kmq_core::qanalog::{freudenthal_dim, freudenthal_dims, kostant_partition, q_multiplicity};
use kmq_core::rational::int;
use kmq_core::roots::positive_roots_with_mult;
use kmq_core::verma::{shapovalov_slice, VermaModule};
use kmq_core::{Gcm, QPolynomial, RootVector, Weight};
use num_bigint::BigInt;
use proptest::prelude::*;

fn sample_gcms() -> Vec<Gcm> {
    vec![
        Gcm::finite_a(2),
        Gcm::affine_a(1),
        validate_gcm(vec![vec![2, -1], vec![-2, 2]]).unwrap(),
        validate_gcm(vec![vec![2, -3], vec![-3, 2]]).unwrap(),
        validate_gcm(vec![vec![2, -1], vec![-3, 2]]).unwrap(),
    ]
}

fn enumerate(beta: &RootVector, colored: &[RootVector], from: usize, parts: u32, out: &mut QPolynomial) {
    if beta.is_zero() {
        out.add_term(parts, BigInt::from(1));
        return;
    }
    for (i, r) in colored.iter().enumerate().skip(from) {
        if r.is_below(beta) {
            enumerate(&(beta - r), colored, i, parts + 1, out);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kostant_matches_enumeration(which in 0usize..5, a in 0i64..=3, b in 0i64..=3) {
        let gcm = &sample_gcms()[which];
        let beta = RootVector::new(vec![a, b]);
        let table = positive_roots_with_mult(gcm, &beta).unwrap();
        let mut colored = Vec::new();
        for (r, m) in table.iter() {
            colored.extend(std::iter::repeat_n(r.clone(), m as usize));
        }
        let mut expected = QPolynomial::zero();
        enumerate(&beta, &colored, 0, 0, &mut expected);
        prop_assert_eq!(kostant_partition(&beta, &table).unwrap(), expected);
    }

    #[test]
    fn multiplicities_are_weyl_invariant(which in 0usize..5) {
        let gcm = &sample_gcms()[which];
        let corner = RootVector::new(vec![5, 5]);
        let table = positive_roots_with_mult(gcm, &corner).unwrap();
        for (root, mult) in table.iter() {
            for i in 0..2 {
                let image = gcm.reflect_root(root, i);
                if image.in_positive_cone() && !image.is_zero() && table.covers(&image) {
                    prop_assert_eq!(table.mult(&image), Some(mult), "s_{} {}", i, root);
                }
            }
        }
    }

    #[test]
    fn form_is_symmetric_and_reflections_are_isometries(
        which in 0usize..5,
        b in proptest::collection::vec(-4i64..=4, 2),
        c in proptest::collection::vec(-4i64..=4, 2),
        i in 0usize..2,
    ) {
        let gcm = &sample_gcms()[which];
        let (b, c) = (RootVector::new(b), RootVector::new(c));
        prop_assert_eq!(gcm.root_pairing(&b, &c), gcm.root_pairing(&c, &b));
        let (sb, sc) = (gcm.reflect_root(&b, i), gcm.reflect_root(&c, i));
        prop_assert_eq!(gcm.reflect_root(&sb, i), b.clone());
        prop_assert_eq!(gcm.root_pairing(&sb, &sc), gcm.root_pairing(&b, &c));
    }

    #[test]
    fn finite_q_analog_specializes_to_dimension(l0 in 0i64..=3, l1 in 0i64..=3, a in 0i64..=4, b in 0i64..=4) {
        let gcm = Gcm::finite_a(2);
        let lambda = Weight::from_ints(&[l0, l1], &[]);
        let mu = lambda.sub_root(&RootVector::new(vec![a, b]), &gcm);
        let m = q_multiplicity(&lambda, &mu, &gcm).unwrap();
        prop_assert_eq!(m.eval_at_one(), freudenthal_dim(&lambda, &mu, &gcm).unwrap());
        if mu.is_dominant() {
            prop_assert!(m.has_nonnegative_coefficients());
        }
    }

    #[test]
    fn affine_dimensions_are_weyl_invariant(alpha in 0i64..=2, extra in 0i64..=1) {
        let gcm = Gcm::affine_a(1);
        let h = alpha + extra;
        let lambda = Weight::affine_triple(int(alpha), int(h), int(0));
        let corner = RootVector::new(vec![4, 4]);
        let table = positive_roots_with_mult(&gcm, &corner).unwrap();
        let dims = freudenthal_dims(&lambda, &corner, &gcm, &table).unwrap();
        for (gamma, d) in &dims {
            let mu = lambda.sub_root(gamma, &gcm);
            for i in 0..2 {
                let image = gcm.reflect_weight(&mu, i);
                let Some(g2) = gcm.root_difference(&lambda, &image).unwrap() else { continue };
                if let Some(d2) = dims.get(&g2) {
                    prop_assert_eq!(d, d2, "μ={} s_{}", mu, i);
                }
            }
        }
    }
}

#[test]
fn shapovalov_rank_matches_freudenthal_on_a2_affine() {
    let alg = LoopAlgebra::sl(3);
    let gcm = alg.gcm().clone();
    for lambda in [Weight::from_ints(&[1, 0, 0], &[0]), Weight::from_ints(&[0, 1, 1], &[0])] {
        let corner = RootVector::new(vec![2, 1, 1]);
        let module = VermaModule::new(alg.clone(), lambda.clone(), corner.clone()).unwrap();
        for gamma in corner.box_points() {
            let slice = module.slice(&gamma).unwrap();
            assert!(slice.gram.is_symmetric() && slice.pivots_nonnegative());
            let mu = lambda.sub_root(&gamma, &gcm);
            let expected = freudenthal_dim(&lambda, &mu, &gcm).unwrap();
            assert_eq!(BigInt::from(slice.dim()), expected, "λ={lambda} γ={gamma}");
        }
    }
}

#[test]
fn shapovalov_rank_matches_freudenthal_on_a1_affine_grid() {
    let alg = LoopAlgebra::sl(2);
    let gcm = alg.gcm().clone();
    for (lambda, mu) in verification_grid(2, 2).unwrap() {
        let s = shapovalov_slice(&alg, &lambda, &mu).unwrap();
        assert_eq!(BigInt::from(s.dim()), freudenthal_dim(&lambda, &mu, &gcm).unwrap());
        assert_eq!(s.basis.len(), s.gram.rows());
    }
}

#[test]
fn level_zero_q_analog_is_not_a_dimension_count() {
    // L(0) is trivial, yet the alternating sum below it does not vanish.
    let gcm = Gcm::affine_a(1);
    let zero = Weight::affine_triple(int(0), int(0), int(0));
    let below = Weight::affine_triple(int(0), int(0), int(-1));
    assert_eq!(freudenthal_dim(&zero, &below, &gcm).unwrap(), BigInt::from(0));
    let m = q_multiplicity(&zero, &below, &gcm).unwrap();
    assert_eq!(m, QPolynomial::from_terms([(1, -1), (2, 1)]));
}
