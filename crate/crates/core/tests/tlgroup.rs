use cloneforge_core::cloning::{check, Property, Verdict};
use cloneforge_core::intmap::{from_tree_pair, generator, to_tree_pair};
use cloneforge_core::{
    CloningSystem, DAryTree, Error, PairRecord, Permutation, Sample, SymmetricSystem, SystemProperties, ThompsonGroup,
    TrivialSystem,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v2() -> ThompsonGroup<SymmetricSystem> {
    ThompsonGroup::new(SymmetricSystem::full(2).unwrap())
}

#[test]
fn pi0_text_form() {
    let g = v2();
    let text = "pair d=2 sys=symmetric top=(.(..)) perm=[2,1,3] bottom=(.(..))";
    let pi0 = g.parse_pair(text).unwrap();
    assert_eq!(g.format_pair(pi0.pair()), text);
    assert_eq!(from_tree_pair(&g, &pi0).unwrap(), generator("pi0").unwrap());
}

#[test]
fn missing_bottom_is_reported() {
    let f = ThompsonGroup::new(TrivialSystem::new(2).unwrap());
    match f.parse_pair("pair d=2 top=(..)") {
        Err(Error::Parse { msg, .. }) => assert!(msg.contains("bottom"), "{msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn parse_errors_point_into_the_input() {
    let g = v2();
    let text = "pair d=2 sys=symmetric top=(.(.x)) perm=[2,1,3] bottom=(.(..))";
    match g.parse_pair(text) {
        Err(Error::Parse { offset, .. }) => assert!((27..35).contains(&offset), "offset {offset}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(g
        .parse_pair("pair d=3 sys=symmetric top=(...) perm=[1,2,3] bottom=(...)")
        .is_err());
    assert!(g
        .parse_pair("pair d=2 sys=symmetric top=(..) perm=[2,1] bottom=(.(..))")
        .is_err());
}

#[test]
fn records_round_trip_through_json() {
    let g = v2();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for carets in 0..6 {
        let e = g.random_element(carets, &mut rng).unwrap();
        let json = serde_json::to_string(&g.to_record(e.pair())).unwrap();
        let back: PairRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(g.from_record(&back).unwrap(), e);
        assert_eq!(g.parse_pair(&g.format_pair(e.pair())).unwrap(), e);
    }
}

#[test]
fn non_reduced_input_is_canonicalized() {
    let g = v2();
    let pi0 = g
        .parse_pair("pair d=2 sys=symmetric top=(.(..)) perm=[2,1,3] bottom=(.(..))")
        .unwrap();
    let expanded = g.expand(pi0.pair(), 3).unwrap();
    let text = g.format_pair(&expanded);
    assert_eq!(g.parse_pair(&text).unwrap(), pi0);
}

#[test]
fn generators_have_the_expected_pairs() {
    let g = v2();
    for name in ["A", "B", "C", "pi0"] {
        let m = generator(name).unwrap();
        let e = to_tree_pair(&g, &m).unwrap();
        assert_eq!(from_tree_pair(&g, &e).unwrap(), m, "{name}");
    }
    let a = to_tree_pair(&g, &generator("A").unwrap()).unwrap();
    assert_eq!(a.pair().top.to_string(), "(.(..))");
    assert_eq!(a.pair().bottom.to_string(), "((..).)");
    assert_eq!(g.theta(&a).unwrap(), 1);
}

#[test]
fn kernel_of_pi() {
    let g = ThompsonGroup::new(SymmetricSystem::hat(2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let e = g.random_element(3, &mut rng).unwrap();
        let in_k = g.in_kernel_k(&e).unwrap();
        let image = g.pi_map(&e).unwrap();
        assert_eq!(in_k, v2().is_identity(&image));
    }
    assert!(g.in_kernel_k(&g.identity()).unwrap());
}

#[test]
fn asymptotic_sequence_shapes() {
    for d in [2, 3] {
        let g = ThompsonGroup::new(SymmetricSystem::hat(d).unwrap());
        for n in 1..=4 {
            let e = g.ac_sequence_element(n).unwrap();
            assert!(g.in_d(&e).unwrap());
            assert_eq!(e.pair().top.right_depth(), n + 2);
            let (a, b) = g.ab_pair(n).unwrap();
            assert!(!g.commutes(&a, &b).unwrap(), "d={d} n={n}");
        }
    }
    let g = ThompsonGroup::new(SymmetricSystem::hat(2).unwrap());
    assert_eq!(g.ac_sequence_element(1).unwrap().pair().level(), 5);
}

#[test]
fn late_elements_fail_to_commute_with_early_sequence_terms() {
    // ac(n) need not commute with elements deep on the right spine
    let g = ThompsonGroup::new(SymmetricSystem::hat(2).unwrap());
    let ac = g.ac_sequence_element(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let found = (0..200).any(|_| {
        let e = g.random_right_depth(3, 2, &mut rng).unwrap();
        !g.commutes(&ac, &e).unwrap()
    });
    assert!(found);
}

#[test]
fn leaf_limit_is_enforced() {
    let g = v2().with_max_leaves(4);
    let a = to_tree_pair(&g, &generator("A").unwrap()).unwrap();
    let e = g.expand(a.pair(), 1).unwrap();
    assert!(matches!(g.expand(&e, 1), Err(Error::LevelOverflow { .. })));
}

/// The symmetric system with its clone index shifted by one, which breaks
/// the cloning axioms.
#[derive(Clone, Debug)]
struct ShiftedClone(SymmetricSystem);

impl CloningSystem for ShiftedClone {
    type Elem = Permutation;
    fn arity(&self) -> usize {
        self.0.arity()
    }
    fn name(&self) -> String {
        "shifted".into()
    }
    fn identity(&self, n: usize) -> Permutation {
        self.0.identity(n)
    }
    fn mul(&self, n: usize, g: &Permutation, h: &Permutation) -> Permutation {
        self.0.mul(n, g, h)
    }
    fn inv(&self, n: usize, g: &Permutation) -> Permutation {
        self.0.inv(n, g)
    }
    fn rho(&self, n: usize, g: &Permutation) -> Permutation {
        self.0.rho(n, g)
    }
    fn clone_at(&self, n: usize, k: usize, g: &Permutation) -> Permutation {
        self.0.clone_at(n, if k > 1 { k - 1 } else { k }, g)
    }
    fn unclone(&self, n: usize, k: usize, g2: &Permutation) -> Option<Permutation> {
        self.0.unclone(n, if k > 1 { k - 1 } else { k }, g2)
    }
    fn contains(&self, n: usize, g: &Permutation) -> bool {
        self.0.contains(n, g)
    }
    fn sample(&self, n: usize, budget: usize, rng: &mut dyn RngCore) -> Sample<Permutation> {
        self.0.sample(n, budget, rng)
    }
    fn properties(&self) -> SystemProperties {
        self.0.properties()
    }
    fn format_elem(&self, n: usize, g: &Permutation) -> String {
        self.0.format_elem(n, g)
    }
    fn parse_elem(&self, n: usize, text: &str) -> cloneforge_core::Result<Permutation> {
        self.0.parse_elem(n, text)
    }
}

#[test]
fn checkers_catch_a_wrong_clone_index() {
    let sys = ShiftedClone(SymmetricSystem::full(2).unwrap());
    let reports: Vec<_> = [Property::C1, Property::C2, Property::C3]
        .into_iter()
        .map(|p| check(&sys, p, 4, 1000, 1))
        .collect();
    let failing: Vec<_> = reports.iter().filter(|r| r.verdict == Verdict::Fails).collect();
    assert!(!failing.is_empty(), "{reports:?}");
    assert!(failing.iter().all(|r| r.witness.is_some()));
}

#[test]
fn tree_text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in 2..5 {
        for carets in 0..6 {
            let t = DAryTree::random(d, carets, &mut rng);
            assert_eq!(DAryTree::parse(&t.to_string(), d).unwrap(), t);
            assert_eq!(t.leaf_count(), 1 + carets * (d - 1));
        }
    }
}

#[test]
fn asymptotic_commutation_certificate() {
    for d in [2, 3] {
        let g = ThompsonGroup::new(TrivialSystem::new(d).unwrap()).with_max_leaves(128);
        let cert = g.ac_certificate(3, 20, 7).unwrap();
        assert!(cert.passed, "{:?}", cert.failures().collect::<Vec<_>>());
        assert_eq!(cert.facts.len(), 3 * 3 + 6);
    }
}
