use proptest::prelude::*;

use quon::algebra::text::parse_fraction;
use quon::algebra::{BoxFraction, Mono, Poly};
use quon::det::degenerate_weights;
use quon::fock::Weight;
use quon::gram::{build, Basis};
use quon::inverse::{
    chain_term_count, check_inv_factor_d, check_solomon_euler, inv_degenerate, inv_full, lambda_sigma,
    lambda_template, pos_q_hat, pos_q_interval, InverseMethod, LambdaAlgo, LambdaTable,
};
use quon::lattice::{schroeder_counts, Subdivision};
use quon::perm::{is_tree_like, Perm};

fn frac(s: &str) -> BoxFraction {
    parse_fraction(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn perm(s: &str) -> Perm {
    s.parse().unwrap()
}

fn tree_like_of(n: usize) -> impl Strategy<Value = Perm> {
    prop::sample::select(Perm::all(n).into_iter().filter(is_tree_like).collect::<Vec<_>>())
}

fn abs_sq(m: &Mono) -> Mono {
    m.mul(&m.conjugate())
}

#[test]
fn four_letter_coefficients() {
    let q = |a: usize, b: usize| {
        (a..=b)
            .flat_map(|i| (a..=b).filter(move |&j| j != i).map(move |j| format!("q{i}{j}")))
            .collect::<Vec<_>>()
            .join("*")
    };
    let (q12, q23, q34, q123, q234) = (q(1, 2), q(2, 3), q(3, 4), q(1, 3), q(2, 4));
    let b = |s: &str| format!("Box{{{s}}}");
    let (b12, b23, b34, b123, b234, b1234) = (b("1,2"), b("2,3"), b("3,4"), b("1,2,3"), b("2,3,4"), b("1,2,3,4"));
    let expected = [
        ("2134", format!("-(1 - {q123}*{q34}) / ({b12}*{b123}*{b34}*{b1234})")),
        ("1324", format!("-(1 - {q123}*{q234}) / ({b23}*{b123}*{b234}*{b1234})")),
        ("1243", format!("-(1 - {q12}*{q234}) / ({b12}*{b34}*{b234}*{b1234})")),
        ("2143", format!("1 / ({b12}*{b34}*{b1234})")),
        ("3214", format!("(1 - {q12}*{q23}) / ({b12}*{b23}*{b123}*{b1234})")),
        ("3124", format!("-{q12} / ({b12}*{b123}*{b1234})")),
        ("2314", format!("-{q23} / ({b23}*{b123}*{b1234})")),
        ("1432", format!("(1 - {q23}*{q34}) / ({b23}*{b34}*{b234}*{b1234})")),
        ("1423", format!("-{q23} / ({b23}*{b234}*{b1234})")),
        ("1342", format!("-{q34} / ({b34}*{b234}*{b1234})")),
    ];
    for (g, want) in &expected {
        for a in LambdaAlgo::ALL {
            assert_eq!(lambda_template(&perm(g), a), frac(want), "Λ({g}) by {a:?}");
        }
    }

    let id = format!(
        "(1 - 1/{b12} - 1/{b23} - 1/{b34} + 1/({b12}*{b34}) + (-1 + 1/{b12} + 1/{b23})/{b123} \
         + (-1 + 1/{b23} + 1/{b34})/{b234}) / {b1234}"
    );
    assert_eq!(lambda_template(&Perm::identity(4), LambdaAlgo::Recursive), frac(&id));
}

#[test]
fn coefficients_with_first_above_last_come_from_the_flip() {
    for n in 2..=5 {
        let w = Perm::longest(1, n, n).unwrap();
        for g in Perm::all(n).into_iter().filter(|g| g.at(1) > g.at(n)) {
            let gw = g.compose(&w);
            let mut want = lambda_template(&gw, LambdaAlgo::Fast).mul_mono(&abs_sq(&pos_q_hat(&gw)));
            if n % 2 == 0 {
                want = -want;
            }
            assert_eq!(lambda_template(&g, LambdaAlgo::Fast), want, "{g}");
        }
    }
}

#[test]
fn eight_letter_coefficient_factors_over_blocks() {
    let sub = |iv: &[(usize, usize)]| lambda_sigma(&Subdivision::new(iv.to_vec()).unwrap());
    let product = [
        sub(&[(1, 4), (5, 5), (6, 8)]),
        sub(&[(1, 3), (4, 4)]),
        sub(&[(1, 1), (2, 3)]),
        sub(&[(2, 2), (3, 3)]),
        sub(&[(6, 6), (7, 8)]),
        sub(&[(7, 7), (8, 8)]),
    ]
    .iter()
    .fold(BoxFraction::one(), |acc, f| &acc * f)
    .mul_mono(&pos_q_interval(1, 3).mul(&pos_q_interval(7, 8)));
    assert_eq!(lambda_template(&perm("41325786"), LambdaAlgo::Fast), -product);
}

#[test]
fn cofactor_coefficients_match_the_templates() {
    for n in 1..=3 {
        let nu = Weight::generic(n);
        let table = LambdaTable::from_expansion(&inv_full(&nu, InverseMethod::Brute).unwrap()).unwrap();
        let fast = LambdaTable::compute(&nu, LambdaAlgo::Fast).unwrap();
        for g in Perm::all(n) {
            assert_eq!(table.get(&g), fast.get(&g), "n = {n}, g = {g}");
        }
    }
}

#[test]
fn chain_expansion_has_one_term_per_chain() {
    let c = schroeder_counts(7);
    for n in 1..=7 {
        assert_eq!(num_bigint::BigInt::from(chain_term_count(n)), c[n - 1]);
    }
}

#[test]
fn factor_inverses_and_alternating_shuffles() {
    for n in 1..=5 {
        let basis = Basis::generic(n);
        assert!(check_solomon_euler(&basis).unwrap(), "n = {n}");
        for m in 1..n {
            assert!(check_inv_factor_d(&basis, m).unwrap(), "n = {n}, m = {m}");
        }
    }
}

#[test]
fn degenerate_inverses_invert() {
    for n in 2..=4 {
        for nu in degenerate_weights(n) {
            let x = inv_degenerate(&nu, InverseMethod::Fast).unwrap();
            let a = build(&nu).unwrap().map(|p: &Poly| BoxFraction::from_poly(p.clone()));
            assert!(a.mul(&x).is_identity(), "{nu}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficients_are_real(g in (1usize..=6).prop_flat_map(tree_like_of)) {
        let l = lambda_template(&g, LambdaAlgo::Fast);
        prop_assert_eq!(l.conjugate(), l);
    }

    #[test]
    fn algorithms_agree_at_six(g in tree_like_of(6)) {
        let base = lambda_template(&g, LambdaAlgo::Recursive);
        for a in LambdaAlgo::ALL {
            prop_assert_eq!(lambda_template(&g, a), base.clone());
        }
    }

    #[test]
    fn non_tree_like_coefficients_vanish(v in Just((1..=6u8).collect::<Vec<_>>()).prop_shuffle()) {
        let g = Perm::from_images(v).unwrap();
        prop_assert_eq!(lambda_template(&g, LambdaAlgo::Fast).is_zero(), !is_tree_like(&g));
    }
}
