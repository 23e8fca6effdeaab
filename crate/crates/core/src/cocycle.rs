//! The cocycle `c(v) = (v − 1)χ_X` on the coset space `V_d / V_[0,1/d)`,
//! with finitely supported integer vectors and the partition norm formula.
//!
//! A coset `gV_[0,1/d)` is determined by the restriction of `g` to
//! `[0, 1/d)`. `X` is the set of cosets on which that restriction is a single
//! standard-affine piece, so cosets in `X` correspond to standard intervals
//! `J = g([0, 1/d))` of positive depth.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dadic::{check_base, enumerate_partitions, Address, DAdic, StdInterval, StdPartition};
use crate::error::{Error, Result};
use crate::intmap::{merge_pieces, PLMap};
use crate::perm::Permutation;

fn first() -> Address {
    Address(vec![0])
}

/// The restriction of a representative to `[0, 1/d)`, as maximal pieces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetHandle {
    d: u32,
    pieces: Vec<(Address, Address)>,
}

impl CosetHandle {
    /// The coset of `g`.
    pub fn of(g: &PLMap) -> CosetHandle {
        let d = g.base();
        let mut out = Vec::new();
        g.push_through(&first(), &first(), &mut out);
        out.sort();
        CosetHandle {
            d,
            pieces: merge_pieces(d, out),
        }
    }

    /// The coset in `X` whose representatives carry `[0, 1/d)` onto `j`.
    pub fn of_interval(d: u32, j: Address) -> CosetHandle {
        CosetHandle {
            d,
            pieces: vec![(first(), j)],
        }
    }

    pub fn base(&self) -> u32 {
        self.d
    }

    pub fn pieces(&self) -> &[(Address, Address)] {
        &self.pieces
    }

    pub fn in_x(&self) -> bool {
        self.pieces.len() == 1
    }

    /// `g([0, 1/d))` for a coset in `X`.
    pub fn image_interval(&self) -> Option<&Address> {
        self.in_x().then(|| &self.pieces[0].1)
    }

    /// `v · gV = (v ∘ g)V`.
    pub fn translate(&self, v: &PLMap) -> CosetHandle {
        let mut out = Vec::new();
        for (s, t) in &self.pieces {
            v.push_through(s, t, &mut out);
        }
        out.sort();
        CosetHandle {
            d: self.d,
            pieces: merge_pieces(self.d, out),
        }
    }
}

pub fn coset_of(g: &PLMap) -> CosetHandle {
    CosetHandle::of(g)
}

pub fn in_x(h: &CosetHandle) -> bool {
    h.in_x()
}

impl fmt::Display for CosetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &Address| format!("{}/{}^{}", w.index(self.d), self.d, w.len());
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(s, t)| format!("{}->{}", show(s), show(t)))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl fmt::Debug for CosetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coset({self})")
    }
}

/// Domain partition, range partition and the matching of their intervals:
/// interval `i` of `p1` goes onto interval `phi(i)` of `p2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalTriplet {
    pub p1: StdPartition,
    pub p2: StdPartition,
    pub phi: Permutation,
}

impl CanonicalTriplet {
    pub fn to_map(&self) -> Result<PLMap> {
        let d = self.p1.base();
        let pieces = self
            .p1
            .addresses()
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), self.p2.addresses()[self.phi.apply(i + 1) - 1].clone()))
            .collect();
        PLMap::from_pieces(d, pieces)
    }

    /// Number of breakpoints of depth at least 2 in both partitions, as in [`norm_sq`](fn@norm_sq).
    pub fn norm_sq(&self) -> usize {
        self.p1.extra_point_count() + self.p2.extra_point_count()
    }
}

impl fmt::Display for CanonicalTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P1={} P2={} phi={}", self.p1, self.p2, self.phi)
    }
}

/// Whether `v` restricted to the standard interval `j` is one standard-affine piece.
pub fn is_affine_on(v: &PLMap, j: &Address) -> bool {
    let img = v.image_of_interval(j);
    if img.len() == 1 {
        return true;
    }
    let pieces: Vec<(&Address, &Address)> = v.pieces().filter(|(s, _)| j.is_prefix_of(s)).collect();
    let Some((s0, t0)) = pieces.first() else { return false };
    let u0 = s0.strip_prefix(j).unwrap();
    if t0.len() < u0.len() || !t0.0.ends_with(&u0.0) {
        return false;
    }
    let base = Address(t0.0[..t0.len() - u0.len()].to_vec());
    pieces
        .iter()
        .all(|(s, t)| **t == base.concat(&s.strip_prefix(j).unwrap()))
}

/// Standard intervals of positive depth whose interior contains a point of `p`.
pub fn intervals_meeting(p: &StdPartition) -> BTreeSet<Address> {
    let d = p.base();
    let mut out = BTreeSet::new();
    for x in p.interior_breakpoints() {
        let k = x.depth() as usize;
        let idx = x.numerator_at(k as u32).unwrap().to_biguint().unwrap();
        let a = Address::from_index(&idx, k as u32, d);
        for len in 1..k {
            out.insert(Address(a.0[..len].to_vec()));
        }
    }
    out
}

/// Maximal pieces of `v`, checked against the defining property: a standard
/// interval carries a single affine piece iff its interior misses `P1`.
pub fn canonical_triplet(v: &PLMap) -> Result<CanonicalTriplet> {
    let d = v.base();
    let p1 = v.domain_partition();
    let p2 = v.range_partition();
    let targets: Vec<&Address> = v.pieces().map(|(_, t)| t).collect();
    let phi = Permutation::from_one_line(
        targets
            .iter()
            .map(|t| p2.addresses().binary_search(t).unwrap() + 1)
            .collect(),
    )?;
    let meeting = intervals_meeting(&p1);
    let depth = p1.addresses().iter().map(Address::len).max().unwrap_or(0);
    let mut stack = vec![Address::root()];
    while let Some(j) = stack.pop() {
        let affine = is_affine_on(v, &j);
        let misses = j.is_empty() && p1.len() == 1 || !j.is_empty() && !meeting.contains(&j);
        if affine != misses {
            return Err(Error::InvalidMap(format!(
                "maximality fails on {}: affine = {affine}",
                StdInterval::from_address(j, d)
            )));
        }
        // below an interval missing P1 everything is affine and misses P1
        if j.len() < depth && (j.is_empty() || !misses) {
            stack.extend((0..d as usize).map(|c| j.child(c)));
        }
    }
    Ok(CanonicalTriplet { p1, p2, phi })
}

/// The least `d`-th point of the standard interval `j` lying in `points`.
pub fn f_point(j: &Address, points: &[DAdic], d: u32) -> Result<DAdic> {
    let interval = StdInterval::from_address(j.clone(), d);
    interval
        .dth_points()
        .into_iter()
        .find(|x| points.contains(x))
        .ok_or_else(|| Error::Precondition(format!("{interval} has no d-th point in the given set")))
}

/// Finitely supported integer vector on cosets; zero entries are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleVector {
    entries: BTreeMap<CosetHandle, i64>,
}

impl CocycleVector {
    pub fn new() -> CocycleVector {
        CocycleVector::default()
    }

    pub fn add_at(&mut self, h: CosetHandle, c: i64) {
        let e = self.entries.entry(h.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.entries.remove(&h);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CosetHandle, i64)> {
        self.entries.iter().map(|(h, c)| (h, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sq(&self) -> i64 {
        self.entries.values().map(|c| c * c).sum()
    }

    pub fn coefficient(&self, h: &CosetHandle) -> i64 {
        self.entries.get(h).copied().unwrap_or(0)
    }

    /// Left translation of every coset by `v`.
    pub fn translate(&self, v: &PLMap) -> CocycleVector {
        let mut out = CocycleVector::new();
        for (h, c) in &self.entries {
            out.add_at(h.translate(v), *c);
        }
        out
    }

    pub fn plus(&self, other: &CocycleVector) -> CocycleVector {
        let mut out = self.clone();
        for (h, c) in &other.entries {
            out.add_at(h.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> CocycleVector {
        CocycleVector {
            entries: self.entries.iter().map(|(h, c)| (h.clone(), -c)).collect(),
        }
    }

    pub fn to_records(&self) -> Vec<CosetEntry> {
        self.entries
            .iter()
            .map(|(h, c)| CosetEntry {
                coset: h.to_string(),
                coefficient: *c,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetEntry {
    pub coset: String,
    pub coefficient: i64,
}

/// `c(v) = χ_{v·(X − X_P1)} − χ_{X − X_P2}` on the canonical triplet of `v`.
pub fn cocycle(v: &PLMap) -> Result<CocycleVector> {
    let t = canonical_triplet(v)?;
    let d = v.base();
    let mut out = CocycleVector::new();
    let plus: BTreeSet<CosetHandle> = intervals_meeting(&t.p1)
        .into_iter()
        .map(|j| CosetHandle::of_interval(d, j).translate(v))
        .collect();
    let minus: BTreeSet<CosetHandle> = intervals_meeting(&t.p2)
        .into_iter()
        .map(|j| CosetHandle::of_interval(d, j))
        .collect();
    if let Some(h) = plus.intersection(&minus).next() {
        return Err(Error::InvalidMap(format!(
            "translated and untranslated supports share {h}"
        )));
    }
    for h in plus {
        out.add_at(h, 1);
    }
    for h in minus {
        out.add_at(h, -1);
    }
    Ok(out)
}

/// `|P1 ∖ {0, 1/d, …, 1}| + |P2 ∖ {0, 1/d, …, 1}|`. For `d = 2` this is
/// `‖c(v)‖²`; for larger `d` each split interval contributes `d − 1` points,
/// so the count is `(d − 1)‖c(v)‖²` (see [`caret_norm_sq`]).
pub fn norm_sq(v: &PLMap) -> usize {
    v.domain_partition().extra_point_count() + v.range_partition().extra_point_count()
}

/// `|X − X_P1| + |X − X_P2|`: the carets below the root in the trees of both
/// partitions. Equals `‖c(v)‖²` for every `d`.
pub fn caret_norm_sq(v: &PLMap) -> usize {
    intervals_meeting(&v.domain_partition()).len() + intervals_meeting(&v.range_partition()).len()
}

/// `c(v1 ∘ v2) = v1 · c(v2) + c(v1)`.
pub fn verify_cocycle_identity(v1: &PLMap, v2: &PLMap) -> Result<bool> {
    let lhs = cocycle(&v1.compose(v2)?)?;
    let rhs = cocycle(v2)?.translate(v1).plus(&cocycle(v1)?);
    Ok(lhs == rhs)
}

pub const DEFAULT_CENSUS_CAP: usize = 5_000_000;

/// The elements of `V_d` with [`norm_sq`] below `radius_sq`, sorted by norm and
/// text. For `d = 2` the bound is on `‖c(v)‖²` itself.
#[derive(Clone, Debug)]
pub struct Census {
    pub d: u32,
    pub radius_sq: usize,
    /// Deepest breakpoint an element below the radius can have.
    pub depth_bound: usize,
    pub elements: Vec<(usize, PLMap)>,
}

impl Census {
    pub fn count(&self) -> usize {
        self.elements.len()
    }
}

/// Exact enumeration of `{v : norm_sq(v) < radius_sq}`. A breakpoint of depth
/// `k ≥ 2` forces at least `k − 1` breakpoints of depth at least 2 in the same
/// partition, so partitions with fewer than `radius_sq` such points cover
/// every candidate.
pub fn properness_census(d: u32, radius_sq: usize) -> Result<Census> {
    properness_census_capped(d, radius_sq, DEFAULT_CENSUS_CAP)
}

pub fn properness_census_capped(d: u32, radius_sq: usize, cap: usize) -> Result<Census> {
    check_base(d as usize)?;
    let du = d as usize;
    // one caret at the root, then d − 1 extra points per further caret
    let max_carets = if radius_sq == 0 {
        0
    } else {
        1 + (radius_sq - 1) / (du - 1)
    };
    let max_intervals = 1 + (du - 1) * max_carets;
    let parts: Vec<StdPartition> = enumerate_partitions(du, max_intervals)?
        .into_iter()
        .filter(|p| p.extra_point_count() < radius_sq.max(1))
        .collect();
    let mut by_len: BTreeMap<usize, Vec<&StdPartition>> = BTreeMap::new();
    for p in &parts {
        by_len.entry(p.len()).or_default().push(p);
    }
    let mut elements = Vec::new();
    let mut work = 0usize;
    for (m, group) in &by_len {
        let perms = Permutation::all(*m);
        for p1 in group {
            for p2 in group {
                let norm = p1.extra_point_count() + p2.extra_point_count();
                if norm >= radius_sq {
                    continue;
                }
                work += perms.len();
                if work > cap {
                    return Err(Error::EnumerationCap {
                        cap,
                        requested: format!("census d={d} R={radius_sq}"),
                    });
                }
                for phi in &perms {
                    let t = CanonicalTriplet {
                        p1: (*p1).clone(),
                        p2: (*p2).clone(),
                        phi: phi.clone(),
                    };
                    let v = t.to_map()?;
                    if v.piece_count() == *m {
                        elements.push((norm, v));
                    }
                }
            }
        }
    }
    elements.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.to_string().cmp(&b.1.to_string())));
    let depth_bound = radius_sq.max(1);
    Ok(Census {
        d,
        radius_sq,
        depth_bound,
        elements,
    })
}
