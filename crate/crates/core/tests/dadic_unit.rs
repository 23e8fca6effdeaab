use cloneforge_core::dadic::*;
use cloneforge_core::*;
use num_bigint::BigInt;

fn q(a: i64, k: u32, d: u32) -> DAdic {
    DAdic::new(a, k, d)
}

#[test]
fn normalize_examples() {
    let x = normalize(2, 1, 2);
    assert_eq!((x.numerator().clone(), x.depth()), (BigInt::from(1), 0));
    let x = normalize(3, 2, 2);
    assert_eq!((x.numerator().clone(), x.depth()), (BigInt::from(3), 2));
    let x = normalize(6, 2, 3);
    assert_eq!((x.numerator().clone(), x.depth()), (BigInt::from(2), 1));
}

#[test]
fn normalize_is_idempotent_and_value_based() {
    let x = normalize(12, 4, 2);
    let y = normalize(x.numerator().clone(), x.depth(), 2);
    assert_eq!(x, y);
    assert_eq!(normalize(3, 2, 2), normalize(12, 4, 2));
}

#[test]
fn dth_points_examples() {
    assert_eq!(StdInterval::unit(2).dth_points(), vec![q(1, 1, 2)]);
    let i = StdInterval::new(1u32, 1, 3).unwrap();
    assert_eq!(i.dth_points(), vec![q(4, 2, 3), q(5, 2, 3)]);
    let i = StdInterval::new(1u32, 1, 2).unwrap();
    assert_eq!(i.dth_points(), vec![q(3, 2, 2)]);
}

#[test]
fn dth_point_recovers_interval() {
    let i = StdInterval::new(7u32, 3, 3).unwrap();
    for p in i.dth_points() {
        assert_eq!(StdInterval::from_dth_point(&p), Some(i.clone()));
    }
}

#[test]
fn standard_partition_examples() {
    assert!(is_standard_partition(
        &[q(0, 0, 2), q(1, 1, 2), q(3, 2, 2), q(1, 0, 2)],
        2
    ));
    // 1/3 cannot be written over a power of two
    assert!(DAdic::parse("1/3", 2).is_err());
    assert!(!is_standard_partition(
        &[q(0, 0, 2), q(1, 2, 2), q(3, 2, 2), q(1, 0, 2)],
        2
    ));
}

#[test]
fn min_interior_count_examples() {
    assert_eq!(min_interior_count(&q(1, 1, 2)), 1);
    assert_eq!(min_interior_count(&q(3, 3, 2)), 3);
    assert_eq!(min_interior_count(&q(2, 2, 3)), 2);
}

#[test]
fn common_refinement_examples() {
    let p = |pts: &[(i64, u32)]| {
        let v: Vec<DAdic> = pts.iter().map(|&(a, k)| q(a, k, 2)).collect();
        StdPartition::from_breakpoints(&v, 2).unwrap()
    };
    let half = p(&[(0, 0), (1, 1), (1, 0)]);
    assert_eq!(half.common_refinement(&half).unwrap(), half);
    let quarter = p(&[(0, 0), (1, 2), (1, 1), (1, 0)]);
    assert_eq!(half.common_refinement(&quarter).unwrap(), quarter);
    // {0,3/4,1} is not standard, but its completion forces 1/2
    let three_quarter = StdPartition::completion(&[q(0, 0, 2), q(3, 2, 2), q(1, 0, 2)], 2).unwrap();
    assert_eq!(three_quarter, p(&[(0, 0), (1, 1), (3, 2), (1, 0)]));
    assert_eq!(
        half.common_refinement(&three_quarter).unwrap(),
        p(&[(0, 0), (1, 1), (3, 2), (1, 0)])
    );
}

#[test]
fn enumerate_examples() {
    let one = enumerate_partitions(2, 1).unwrap();
    assert_eq!(one, vec![StdPartition::trivial(2)]);
    assert_eq!(enumerate_partitions(2, 3).unwrap().len(), 4);
    assert_eq!(enumerate_partitions(3, 3).unwrap().len(), 2);
}

#[test]
fn enumeration_cap_is_reported() {
    let err = enumerate_partitions_capped(2, 30, 1000).unwrap_err();
    assert!(matches!(err, Error::EnumerationCap { .. }));
}

#[test]
fn text_form() {
    assert_eq!(q(3, 2, 2).to_string(), "3/2^2");
    assert_eq!(DAdic::parse("3/2^2", 2).unwrap(), q(3, 2, 2));
    assert_eq!(DAdic::parse("5/8", 2).unwrap(), q(5, 3, 2));
    let p = StdPartition::from_breakpoints(&[q(0, 0, 2), q(1, 1, 2), q(1, 0, 2)], 2).unwrap();
    assert_eq!(p.to_string(), "{0, 1/2^1, 1}");
}

#[test]
fn interval_validation() {
    assert!(StdInterval::new(4u32, 2, 2).is_err());
    assert!(StdInterval::new(3u32, 2, 2).is_ok());
}
