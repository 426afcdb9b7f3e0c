use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quon::algebra::{Mono, ParamVar, Poly};
use quon::det::{
    bareiss, cyclotomic, degenerate_weights, det_at_point, det_divides, det_formula, det_level, det_poly,
    positivity_check, random_hermitian_point, similarity,
};
use quon::fock::Weight;
use std::sync::Arc;

use quon::gram::{build_generic, factor_a_m, Basis};
use quon::perm::Perm;

fn small_poly() -> impl Strategy<Value = Poly> {
    let vars = [ParamVar::Pair(1, 2), ParamVar::Pair(2, 1), ParamVar::Pair(1, 1)];
    prop::collection::vec((0usize..3, 0u32..3, -2i64..=2), 0..3).prop_map(move |ts| {
        ts.into_iter().map(|(v, e, c)| Poly::term(Mono::from_pairs([(vars[v], e)]), c)).sum()
    })
}

fn leibniz(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    Perm::all(n)
        .iter()
        .map(|g| {
            let t: Poly = (0..n).map(|i| m[i][g.at(i + 1) - 1].clone()).product();
            if g.length() % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn elimination_matches_leibniz(m in (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(small_poly(), n), n))) {
        let want = leibniz(&m);
        prop_assert_eq!(det_poly(m.clone()), want.clone());
        prop_assert_eq!(bareiss(m), want);
    }

    #[test]
    fn formula_matches_at_random_points(seed in any::<u64>()) {
        let nu = Weight::generic(4);
        let a = build_generic(&nu).unwrap();
        let p = random_hermitian_point(&nu.labels(), 0.95, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(det_at_point(&a, &p).unwrap(), det_formula(&nu).unwrap().eval(&p).unwrap());
    }

    #[test]
    fn positive_definite_inside_the_unit_polydisc(seed in any::<u64>(), k in any::<prop::sample::Index>()) {
        let mut ws = degenerate_weights(4);
        ws.push(Weight::generic(4));
        let nu = ws[k.index(ws.len())].clone();
        let p = random_hermitian_point(&nu.labels(), 0.95, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(positivity_check(&nu, &p, 1e-9).unwrap().positive);
    }
}

#[test]
fn cyclotomic_factors_of_one_minus_q_power() {
    for k in 1..=30u32 {
        let prod: Poly = (1..=k).filter(|d| k % d == 0).map(cyclotomic).product();
        let target = Poly::one_minus(&Mono::q_pow(k));
        assert!(prod == target || prod == -target, "k = {k}");
    }
}

#[test]
fn degenerate_determinants_divide() {
    for n in 2..=3 {
        for nu in degenerate_weights(n) {
            assert!(det_divides(&nu).unwrap(), "{nu}");
        }
    }
}

#[test]
fn similar_to_a_symmetric_matrix() {
    for n in 2..=4 {
        assert!(similarity(n).is_ok(), "n = {n}");
    }
}

#[test]
fn level_determinants() {
    for n in 1..=3 {
        let nu = Weight::generic(n);
        let basis = Arc::new(Basis::generic(n));
        for m in 1..=n {
            let a = factor_a_m(&basis, m).unwrap().to_dense();
            assert_eq!(det_poly(a.rows().to_vec()), det_level(&nu, m).unwrap().expand(), "n = {n}, m = {m}");
        }
    }
    let nu = Weight::generic(4);
    let basis = Arc::new(Basis::generic(4));
    let p = random_hermitian_point(&nu.labels(), 0.9, &mut ChaCha8Rng::seed_from_u64(3));
    for m in 1..=4 {
        let a = factor_a_m(&basis, m).unwrap().to_dense();
        assert_eq!(det_at_point(&a, &p).unwrap(), det_level(&nu, m).unwrap().eval(&p).unwrap(), "m = {m}");
    }
}

#[test]
fn formula_degrees_match_elimination() {
    for n in 2..=3 {
        let nu = Weight::generic(n);
        let f = det_formula(&nu).unwrap();
        let e = det_poly(build_generic(&nu).unwrap().rows().to_vec());
        assert_eq!(f.total_degree(), e.total_degree());
        assert_eq!(f.degree_in(ParamVar::Pair(1, 2)), e.degree_in(ParamVar::Pair(1, 2)));
    }
}

#[test]
fn points_outside_the_disc_are_rejected() {
    let nu = Weight::generic(2);
    let p = quon::algebra::Assignment::one_param(quon::algebra::gauss_int(2));
    assert!(positivity_check(&nu, &p, 1e-9).is_err());
}
