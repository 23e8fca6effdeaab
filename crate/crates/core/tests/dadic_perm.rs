use cloneforge_core::dadic::{enumerate_partitions, fuss_catalan_by_leaves, is_standard_partition};
use cloneforge_core::{Address, DAdic, DAryTree, Permutation, StdInterval, StdPartition};
use num_bigint::BigUint;

#[test]
fn tree_counts_are_fuss_catalan() {
    for d in 2..5 {
        for carets in 0..5 {
            let m = 1 + carets * (d - 1);
            let trees = DAryTree::all_with_leaves(d, m);
            assert_eq!(BigUint::from(trees.len()), fuss_catalan_by_leaves(d, m), "d={d} m={m}");
            let parts = enumerate_partitions(d, m)
                .unwrap()
                .into_iter()
                .filter(|p| p.len() == m)
                .count();
            assert_eq!(parts, trees.len());
        }
    }
}

#[test]
fn partitions_and_trees_correspond() {
    for p in enumerate_partitions(3, 7).unwrap() {
        let t = DAryTree::from_partition(&p);
        assert_eq!(t.to_partition(), p);
        assert!(is_standard_partition(&p.breakpoints(), 3));
        assert_eq!(StdPartition::from_breakpoints(&p.breakpoints(), 3).unwrap(), p);
    }
    let third = DAdic::new(1, 1, 3);
    let bad = [DAdic::zero(3), DAdic::new(5, 2, 3), DAdic::one(3)];
    assert!(!is_standard_partition(&bad, 3));
    assert!(StdPartition::from_breakpoints(&[DAdic::zero(3), third, DAdic::one(3)], 3).is_err());
}

#[test]
fn dadic_arithmetic_is_exact() {
    let x = DAdic::parse("5/9", 3).unwrap();
    assert_eq!(x, DAdic::new(5, 2, 3));
    assert_eq!(x.add(&DAdic::new(4, 2, 3)), DAdic::one(3));
    assert_eq!(DAdic::new(3, 2, 3).depth(), 1);
    assert_eq!(x.scale(1).scale(-1), x);
    let j = StdInterval::from_address(Address::from_digits(&[1, 2]), 3);
    assert_eq!(j.left(), DAdic::new(5, 2, 3));
    assert_eq!(j.dth_points().len(), 2);
}

#[test]
fn zeta_keeps_cyclic_permutations_cyclic() {
    for d in 2..4 {
        for n in 1..=5 {
            for j in 0..n {
                let r = Permutation::rotation(n, j);
                for k in 1..=n {
                    let z = r.zeta(k, d).unwrap();
                    assert!(z.is_cyclic(), "d={d} n={n} j={j} k={k}");
                    assert_eq!(z.unzeta(k, d), Some(r.clone()));
                }
            }
        }
    }
}

#[test]
fn permutation_text_forms() {
    let p = Permutation::parse("[2,1,3]", None).unwrap();
    assert_eq!(p.cycle_string(), "(1 2)");
    assert_eq!(Permutation::parse(&p.to_string(), Some(3)).unwrap(), p);
    assert_eq!(Permutation::parse("(1 3 2)", Some(3)).unwrap().images(), &[3, 1, 2]);
    assert!(Permutation::parse("[1,1,2]", None).is_err());
}
