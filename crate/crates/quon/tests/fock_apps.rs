use proptest::prelude::*;

use quon::apps::{
    check_contravariant_det, check_varchenko_det, check_varchenko_exponents, contravariant_closed_matrix,
    contravariant_matrix, varchenko_matches_gram, BilinearData,
};
use quon::fock::{check_ccr, coproduct, inner_product, Weight};

fn word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..=4, 0..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutation_relation(i in 1u8..=4, j in 1u8..=4, w in word()) {
        prop_assert!(check_ccr(i, j, &w));
    }

    #[test]
    fn form_is_hermitian(x in word()) {
        let y: Vec<u8> = x.iter().rev().copied().collect();
        prop_assert_eq!(inner_product(&x, &y), inner_product(&y, &x).conjugate());
    }

    #[test]
    fn different_weights_are_orthogonal(x in word(), y in word()) {
        prop_assume!(Weight::of_word(&x) != Weight::of_word(&y));
        prop_assert!(inner_product(&x, &y).is_zero());
    }

    #[test]
    fn coproduct_has_every_splitting(w in word()) {
        let terms = coproduct(&w);
        prop_assert_eq!(terms.len(), 1 << w.len());
        for t in &terms {
            prop_assert_eq!(t.left.len() + t.right.len(), w.len());
        }
    }

    #[test]
    fn contravariant_determinant(b in prop::collection::vec(-3i64..=3, 6)) {
        let m = vec![vec![b[0], b[1], b[2]], vec![b[1], b[3], b[4]], vec![b[2], b[4], b[5]]];
        prop_assert!(check_contravariant_det(&BilinearData::new(m).unwrap()).unwrap());
    }
}

#[test]
fn empty_word_has_norm_one() {
    assert!(inner_product(&[], &[]).is_one());
}

#[test]
fn varchenko_matrices() {
    for n in 1..=4 {
        assert!(varchenko_matches_gram(n).unwrap(), "n = {n}");
        assert!(check_varchenko_exponents(n).unwrap(), "n = {n}");
    }
    for n in 1..=3 {
        assert!(check_varchenko_det(n).unwrap(), "n = {n}");
    }
}

#[test]
fn contravariant_recursion_and_closed_form() {
    for n in 1..=4 {
        assert_eq!(contravariant_matrix(n).unwrap(), contravariant_closed_matrix(n), "n = {n}");
        assert!(check_contravariant_det(&BilinearData::constant(n, 2)).unwrap());
    }
}

#[test]
fn bilinear_data_must_be_symmetric() {
    assert!(BilinearData::new(vec![vec![2, 1], vec![0, 2]]).is_err());
    assert!(BilinearData::from_json(r#"{"b": [[2,-1],[-1,2]]}"#).is_ok());
}
