//! Algebraic laws checked on seeded random elements.

mod common;

use cloneforge_core::cocycle::{caret_norm_sq, cocycle, norm_sq, verify_cocycle_identity};
use cloneforge_core::intmap::{from_tree_pair, to_tree_pair};
use cloneforge_core::{GroupElement, PLMap, Permutation, SymmetricSystem, ThompsonGroup};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v2() -> ThompsonGroup<SymmetricSystem> {
    ThompsonGroup::new(SymmetricSystem::full(2).unwrap())
}

fn sample(g: &ThompsonGroup<SymmetricSystem>, seed: u64, carets: usize) -> GroupElement<Permutation> {
    g.random_element(carets, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn map(d: u32, seed: u64, carets: usize) -> PLMap {
    PLMap::random(d, carets, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(s in any::<u64>(), a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        let g = v2();
        let (x, y, z) = (sample(&g, s, a), sample(&g, s ^ 1, b), sample(&g, s ^ 2, c));
        let left = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_and_identity(s in any::<u64>(), a in 0usize..5) {
        let g = v2();
        let x = sample(&g, s, a);
        prop_assert!(g.is_identity(&g.multiply(&x, &g.invert(&x)).unwrap()));
        prop_assert!(g.is_identity(&g.multiply(&g.invert(&x), &x).unwrap()));
        prop_assert_eq!(g.multiply(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn expansion_does_not_change_the_element(s in any::<u64>(), a in 0usize..4, k in 1usize..6) {
        let g = v2();
        let x = sample(&g, s, a);
        let n = x.pair().level();
        let k = 1 + (k - 1) % n;
        let bigger = g.expand(x.pair(), k).unwrap();
        prop_assert!(g.equal_by_expansion(&bigger, x.pair()).unwrap());
        prop_assert_eq!(g.canonical_form(bigger), x);
    }

    #[test]
    fn tree_pairs_and_maps_agree(s in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let g = v2();
        let (x, y) = (sample(&g, s, a), sample(&g, s ^ 7, b));
        let mx = from_tree_pair(&g, &x).unwrap();
        let my = from_tree_pair(&g, &y).unwrap();
        prop_assert_eq!(from_tree_pair(&g, &g.multiply(&x, &y).unwrap()).unwrap(), mx.then(&my).unwrap());
        prop_assert_eq!(to_tree_pair(&g, &mx).unwrap(), x);
    }

    #[test]
    fn pi_is_a_homomorphism(s in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let g = ThompsonGroup::new(SymmetricSystem::hat(2).unwrap());
        let (x, y) = (g.random_element(a, &mut ChaCha8Rng::seed_from_u64(s)).unwrap(),
                      g.random_element(b, &mut ChaCha8Rng::seed_from_u64(!s)).unwrap());
        let v = v2();
        let lhs = g.pi_map(&g.multiply(&x, &y).unwrap()).unwrap();
        let rhs = v.multiply(&g.pi_map(&x).unwrap(), &g.pi_map(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn theta_is_additive(s in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let g = ThompsonGroup::new(SymmetricSystem::hat(2).unwrap());
        let (x, y) = (g.random_element(a, &mut ChaCha8Rng::seed_from_u64(s)).unwrap(),
                      g.random_element(b, &mut ChaCha8Rng::seed_from_u64(!s)).unwrap());
        let xy = g.multiply(&x, &y).unwrap();
        prop_assert_eq!(g.theta(&xy).unwrap(), g.theta(&x).unwrap() + g.theta(&y).unwrap());
        prop_assert_eq!(g.in_d(&x).unwrap(), g.theta(&x).unwrap() == 0);
    }

    #[test]
    fn map_group_laws(d in 2u32..5, s in any::<u64>(), a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        let (x, y, z) = (map(d, s, a), map(d, s ^ 3, b), map(d, s ^ 5, c));
        prop_assert_eq!(x.compose(&y).unwrap().compose(&z).unwrap(), x.compose(&y.compose(&z).unwrap()).unwrap());
        prop_assert!(x.compose(&x.invert()).unwrap().is_identity());
        prop_assert_eq!(PLMap::parse(&x.to_string(), d).unwrap(), x.clone());
        let (top, sigma, bottom) = x.to_trees();
        prop_assert_eq!(PLMap::from_trees(&top, &sigma, &bottom).unwrap(), x);
    }

    #[test]
    fn cocycle_matches_brute_force(d in 2u32..4, s in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let (x, y) = (map(d, s, a), map(d, !s, b));
        prop_assert_eq!(cocycle(&x).unwrap(), common::brute_cocycle(&x));
        prop_assert!(verify_cocycle_identity(&x, &y).unwrap());
        let vector = cocycle(&x).unwrap().norm_sq();
        prop_assert_eq!(caret_norm_sq(&x) as i64, vector);
        prop_assert_eq!(norm_sq(&x) as i64, (d as i64 - 1) * vector);
    }
}
