use proptest::prelude::*;

use quon::det::degenerate_weights;
use quon::fock::{inner_product, Weight};
use quon::gram::{build, build_generic, mult_factor, rhat, Basis};
use quon::perm::Perm;

fn perm_of(n: usize) -> impl Strategy<Value = Perm> {
    Just((1..=n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn weight() -> impl Strategy<Value = Weight> {
    (1usize..=5).prop_flat_map(|n| {
        let mut ws = degenerate_weights(n);
        ws.push(Weight::generic(n));
        prop::sample::select(ws)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_factor_at_five((g1, g2) in (perm_of(5), perm_of(5))) {
        let basis = Basis::generic(5);
        let lhs = rhat(&basis, &g1).unwrap().times(&rhat(&basis, &g2).unwrap());
        let rhs = rhat(&basis, &g1.compose(&g2)).unwrap().scale_left(&mult_factor(&basis, &g1, &g2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_products_multiply_exactly((g, k) in (perm_of(5), 1usize..5)) {
        // s_k·g is reduced exactly when the length goes up
        let basis = Basis::generic(5);
        let s = Perm::cycle(k, k + 1, 5).unwrap();
        let sg = s.compose(&g);
        let prod = rhat(&basis, &s).unwrap().times(&rhat(&basis, &g).unwrap());
        prop_assert_eq!(sg.length() == g.length() + 1, prod == rhat(&basis, &sg).unwrap());
    }

    #[test]
    fn entries_agree_with_the_fock_form(nu in weight(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let a = build(&nu).unwrap();
        let (i, j) = (i.index(a.size()), j.index(a.size()));
        let words = a.basis().words();
        prop_assert_eq!(a.get(i, j), &inner_product(&words[i], &words[j]));
    }

    #[test]
    fn gram_matrices_are_hermitian_and_reversal_symmetric(nu in weight()) {
        let a = build(&nu).unwrap();
        prop_assert!(a.is_hermitian());
        prop_assert!(a.is_reversal_symmetric());
    }
}

#[test]
fn sizes_are_multinomial() {
    for nu in degenerate_weights(5) {
        let denom: usize = nu.multiplicities().values().map(|&m| (1..=m).product::<usize>()).product();
        assert_eq!(build(&nu).unwrap().size(), 120 / denom, "{nu}");
    }
}

#[test]
fn one_parameter_matrix_is_symmetric() {
    let a = build_generic(&Weight::generic(4)).unwrap().one_param();
    for i in 0..a.size() {
        for j in 0..a.size() {
            assert_eq!(a.get(i, j), a.get(j, i));
        }
    }
}
