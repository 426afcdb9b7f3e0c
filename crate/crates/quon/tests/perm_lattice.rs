use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use quon::lattice::{
    bracketing_to_chain, chain_to_bracketing, enumerate_bracketings, enumerate_chains, enumerate_subdivisions,
    schroeder_counts, Bracketing, Subdivision,
};
use quon::perm::{is_tree_like, young_data, young_sequence, Perm};

fn perm_of(n: usize) -> impl Strategy<Value = Perm> {
    Just((1..=n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn two_perms() -> impl Strategy<Value = (Perm, Perm, Perm)> {
    (1usize..=7).prop_flat_map(|n| (perm_of(n), perm_of(n), perm_of(n)))
}

proptest! {
    #[test]
    fn group_laws((g, h, k) in two_perms()) {
        let n = g.n();
        prop_assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
        prop_assert!(g.compose(&g.inverse()).is_identity());
        prop_assert_eq!(g.compose(&Perm::identity(n)), g.clone());
        for x in 1..=n {
            prop_assert_eq!(g.compose(&h).at(x), g.at(h.at(x)));
        }
    }

    #[test]
    fn place_action_is_a_left_action((g, h, _) in two_perms()) {
        let word: Vec<u8> = (1..=g.n() as u8).map(|c| 10 + c).collect();
        prop_assert_eq!(g.compose(&h).act(&word), g.act(&h.act(&word)));
        let moved = g.act(&word);
        for p in 1..=g.n() {
            prop_assert_eq!(moved[p - 1], word[g.inverse().at(p) - 1]);
        }
    }

    #[test]
    fn length_is_invariant_under_inversion((g, _, _) in two_perms()) {
        prop_assert_eq!(g.length(), g.inverse().length());
        let n = g.n();
        let w = Perm::longest(1, n, n).unwrap();
        prop_assert_eq!(g.length() + g.compose(&w).length(), n * (n - 1) / 2);
    }

    #[test]
    fn young_data_factors_stay_in_the_subgroup((g, _, _) in two_perms()) {
        let yd = young_data(&g);
        for f in &yd.factors {
            prop_assert!(f.in_young_subgroup(&yd.sigma));
        }
        prop_assert!(g.in_young_subgroup(&yd.sigma));
        let product = yd.factors.iter().fold(Perm::identity(g.n()), |acc, f| acc.compose(f));
        prop_assert_eq!(product, g.clone());
        // minimality: no block of σ(g) splits further
        for &(a, b) in yd.sigma.intervals() {
            prop_assert!(g.young_cuts_in(a, b).is_empty());
        }
    }

    #[test]
    fn shuffle_factorisation((g, _, _) in two_perms(), mask in any::<u8>()) {
        let n = g.n();
        let cuts: Vec<usize> = (1..n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
        let s = Subdivision::from_cuts(1, n, &cuts);
        let (a, h) = g.shuffle_factor(&s);
        prop_assert_eq!(a.compose(&h), g.clone());
        prop_assert!(h.in_young_subgroup(&s));
        for &(x, y) in s.intervals() {
            prop_assert!((x..y).all(|p| a.at(p) < a.at(p + 1)));
        }
    }

    #[test]
    fn young_sequence_decides_tree_likeness((g, _, _) in two_perms()) {
        prop_assert_eq!(young_sequence(&g).tree_like, is_tree_like(&g));
    }
}

#[test]
fn tree_like_permutations_number_twice_the_chains() {
    let c = schroeder_counts(7);
    for n in 2..=7 {
        let count = Perm::all(n).iter().filter(|g| is_tree_like(g)).count();
        assert_eq!(BigInt::from(count), &c[n - 1] * 2, "n = {n}");
    }
}

#[test]
fn all_permutations_are_distinct_and_sorted() {
    let all = Perm::all(5);
    assert_eq!(all.len(), 120);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn subdivisions_number_two_to_the_cuts() {
    for n in 1..=7 {
        assert_eq!(enumerate_subdivisions(n).len(), 1 << (n - 1));
    }
}

#[test]
fn chains_and_bracketings_correspond() {
    for n in 1..=6 {
        let chains = enumerate_chains(n);
        let brackets: BTreeSet<Bracketing> = chains.iter().map(chain_to_bracketing).collect();
        assert_eq!(brackets.len(), chains.len(), "n = {n}");
        for c in &chains {
            assert_eq!(&bracketing_to_chain(&chain_to_bracketing(c)).unwrap(), c);
        }
        assert_eq!(enumerate_bracketings(n).len(), chains.len());
    }
}

#[test]
fn bracketing_text_round_trips() {
    for b in enumerate_bracketings(5) {
        let s = b.to_string();
        assert_eq!(s.parse::<Bracketing>().unwrap(), b, "{s}");
    }
}

#[test]
fn cycles_and_longest_elements() {
    assert_eq!(Perm::cycle(1, 3, 3).unwrap().to_string(), "312");
    assert_eq!(Perm::longest(2, 4, 4).unwrap().to_string(), "1432");
    assert!(Perm::cycle(2, 5, 4).is_err());
}
