use proptest::prelude::*;

use quon::algebra::text::{parse_fraction, parse_poly};
use quon::algebra::{gauss, rat, Assignment, BoxFactor, BoxFraction, Mono, ParamVar, Poly};

const VARS: [(u8, u8); 5] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)];

fn mono() -> impl Strategy<Value = Mono> {
    prop::collection::vec((0..VARS.len(), 0u32..3), 0..3).prop_map(|es| {
        Mono::from_pairs(es.into_iter().map(|(k, e)| (ParamVar::Pair(VARS[k].0, VARS[k].1), e)))
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((mono(), -3i64..=3), 0..4)
        .prop_map(|ts| ts.into_iter().map(|(m, c)| Poly::term(m, c)).sum())
}

fn boxed() -> impl Strategy<Value = BoxFactor> {
    mono().prop_filter_map("nontrivial box", |m| BoxFactor::new(m).ok())
}

fn fraction() -> impl Strategy<Value = BoxFraction> {
    (poly(), prop::collection::vec((boxed(), 1u32..3), 0..3)).prop_map(|(n, d)| BoxFraction::new(n, d))
}

fn point() -> Assignment {
    let v = |a: i64, b: i64| gauss(rat(a, 7), rat(b, 11));
    Assignment::hermitian([((1, 1), gauss(rat(1, 3), rat(0, 1))), ((1, 2), v(1, 2)), ((1, 3), v(-2, 1))])
        .expect("hermitian point")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_undoes_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn conjugation_is_a_ring_involution(a in poly(), b in poly()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    }

    #[test]
    fn poly_text_round_trips(a in poly()) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn fraction_text_round_trips(f in fraction()) {
        prop_assert_eq!(parse_fraction(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly()) {
        let p = point();
        prop_assert_eq!(p.eval(&(&a * &b)).unwrap(), p.eval(&a).unwrap() * p.eval(&b).unwrap());
        prop_assert_eq!(p.eval(&(&a + &b)).unwrap(), p.eval(&a).unwrap() + p.eval(&b).unwrap());
    }

    #[test]
    fn fraction_arithmetic_matches_evaluation(f in fraction(), g in fraction()) {
        let p = point();
        let (x, y) = (p.eval_fraction(&f).unwrap(), p.eval_fraction(&g).unwrap());
        prop_assert_eq!(p.eval_fraction(&(&f + &g)).unwrap(), &x + &y);
        prop_assert_eq!(p.eval_fraction(&(&f * &g)).unwrap(), x * y);
    }

    #[test]
    fn clearing_the_denominator(f in fraction()) {
        prop_assert_eq!(f.times_poly_exact(&f.den_poly()), Some(f.num().clone()));
    }

    #[test]
    fn one_parameter_specialisation_is_multiplicative(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).one_param(), &a.one_param() * &b.one_param());
    }
}

#[test]
fn box_is_one_minus_its_monomial() {
    let b = BoxFactor::over_letters(&[1, 2]).unwrap();
    assert_eq!(b.poly(), parse_poly("1 - q12*q21").unwrap());
    assert!(BoxFactor::new(Mono::one()).is_err());
}
