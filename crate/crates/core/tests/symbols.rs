use crystalft::delaney::{count_candidates, enumerate_candidates, known, reflection_map, Boundary, DelaneySymbol};
use proptest::prelude::*;
use proptest::sample::Index;

/// Known symbols plus every (3, 3) loop candidate.
fn pool() -> Vec<DelaneySymbol> {
    let mut v = vec![known::cubic(), known::square(), known::icosahedral(), known::truncated_square()];
    v.extend(enumerate_candidates(3, 3, Boundary::Loop).unwrap().map(|c| c.symbol));
    v
}

fn shuffle(n: usize, keys: &[u64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (keys[i % keys.len()], i));
    // idx lists old elements in new order; invert to get old -> new.
    let mut perm = vec![0; n];
    for (new, &old) in idx.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

#[test]
fn candidate_counts_follow_the_formula() {
    for (n, k, b) in [
        (3, 1, Boundary::Loop),
        (3, 3, Boundary::Loop),
        (4, 2, Boundary::Loop),
        (4, 4, Boundary::Loop),
        (2, 4, Boundary::Periodic),
        (3, 6, Boundary::Periodic),
    ] {
        let streamed = enumerate_candidates(n, k, b).unwrap().count() as u128;
        assert_eq!(streamed, count_candidates(n, k, b).unwrap(), "n={n} k={k}");
    }
}

#[test]
fn candidates_are_valid_and_distinct() {
    let all: Vec<_> = enumerate_candidates(4, 4, Boundary::Loop).unwrap().collect();
    let mut seen = std::collections::HashSet::new();
    for c in &all {
        c.symbol.validate().unwrap();
        assert_eq!(c.symbol.size(), 16);
        assert!(seen.insert(c.m12.clone()));
    }
}

#[test]
fn reflection_witnesses_self_duality_of_candidates() {
    let r = reflection_map(3);
    for c in enumerate_candidates(3, 3, Boundary::Loop).unwrap() {
        assert!(c.symbol.is_isomorphism(&c.symbol.dual(), &r));
        assert!(c.symbol.is_self_dual());
    }
}

proptest! {
    #[test]
    fn text_round_trip(i in any::<Index>(), keys in prop::collection::vec(any::<u64>(), 1..20)) {
        let pool = pool();
        let s = i.get(&pool);
        let s = s.relabel(&shuffle(s.size(), &keys));
        let back: DelaneySymbol = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn dual_is_an_involution(i in any::<Index>()) {
        let pool = pool();
        let s = i.get(&pool);
        prop_assert_eq!(&s.dual().dual(), s);
        prop_assert!(s.dual().validate().is_ok());
    }

    #[test]
    fn relabelling_gives_isomorphic_symbols(i in any::<Index>(), keys in prop::collection::vec(any::<u64>(), 1..20)) {
        let pool = pool();
        let s = i.get(&pool);
        let perm = shuffle(s.size(), &keys);
        let t = s.relabel(&perm);
        prop_assert!(t.validate().is_ok());
        prop_assert!(s.is_isomorphism(&t, &perm));
        let there = s.find_isomorphism(&t);
        let back = t.find_isomorphism(s);
        prop_assert!(there.is_some() && back.is_some());
        prop_assert!(s.is_isomorphism(&t, &there.unwrap()));
        prop_assert_eq!(s.is_self_dual(), t.is_self_dual());
    }

    #[test]
    fn isomorphism_search_is_symmetric(i in any::<Index>(), j in any::<Index>()) {
        let pool = pool();
        let (a, b) = (i.get(&pool), j.get(&pool));
        prop_assert_eq!(a.find_isomorphism(b).is_some(), b.find_isomorphism(a).is_some());
    }
}
