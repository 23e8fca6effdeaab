//! Exact d-adic rationals, standard d-adic intervals and standard partitions.
//!
//! A standard interval `[a/d^k, (a+1)/d^k)` is identified with its address:
//! the base-`d` expansion of `a` written with exactly `k` digits. Containment
//! of standard intervals is then the prefix relation on addresses, and
//! left-to-right order of disjoint intervals is lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported arity. Address digits are stored as `u8`.
pub const MAX_BASE: usize = 255;

pub fn check_base(d: usize) -> Result<()> {
    if (2..=MAX_BASE).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidBase(d))
    }
}

fn pow(d: u32, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(d), k as usize)
}

/// An exact rational `numerator / base^depth`, kept in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DAdic {
    numerator: BigInt,
    depth: u32,
    base: u32,
}

/// Reduces `a / d^k` to canonical form.
pub fn normalize(a: impl Into<BigInt>, k: u32, d: u32) -> DAdic {
    DAdic::new(a, k, d)
}

impl DAdic {
    pub fn new(a: impl Into<BigInt>, k: u32, d: u32) -> DAdic {
        assert!(d >= 2, "d-adic base must be at least 2");
        let mut numerator = a.into();
        let mut depth = k;
        let big_d = BigInt::from(d);
        if numerator.is_zero() {
            depth = 0;
        }
        while depth > 0 {
            let (q, r) = numerator.div_rem(&big_d);
            if !r.is_zero() {
                break;
            }
            numerator = q;
            depth -= 1;
        }
        DAdic {
            numerator,
            depth,
            base: d,
        }
    }

    pub fn zero(d: u32) -> DAdic {
        DAdic::new(0, 0, d)
    }

    pub fn one(d: u32) -> DAdic {
        DAdic::new(1, 0, d)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Numerator of this value written over `d^k`; `None` if `k` is too shallow.
    pub fn numerator_at(&self, k: u32) -> Option<BigInt> {
        (k >= self.depth).then(|| &self.numerator * pow(self.base, k - self.depth))
    }

    pub fn add(&self, other: &DAdic) -> DAdic {
        assert_eq!(self.base, other.base, "d-adic base mismatch");
        let k = self.depth.max(other.depth);
        let a = self.numerator_at(k).unwrap() + other.numerator_at(k).unwrap();
        DAdic::new(a, k, self.base)
    }

    pub fn sub(&self, other: &DAdic) -> DAdic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DAdic {
        DAdic {
            numerator: -&self.numerator,
            depth: self.depth,
            base: self.base,
        }
    }

    /// Multiplies by `d^e` (`e` may be negative).
    pub fn scale(&self, e: i64) -> DAdic {
        if e >= 0 {
            let shift = e as u32;
            if shift <= self.depth {
                DAdic::new(self.numerator.clone(), self.depth - shift, self.base)
            } else {
                DAdic::new(&self.numerator * pow(self.base, shift - self.depth), 0, self.base)
            }
        } else {
            DAdic::new(self.numerator.clone(), self.depth + (-e) as u32, self.base)
        }
    }

    pub fn is_integer(&self) -> bool {
        self.depth == 0
    }

    /// True when the value is an integer multiple of `d^-k`.
    pub fn is_multiple_of_depth(&self, k: u32) -> bool {
        self.depth <= k
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.numerator.is_negative() && *self <= DAdic::one(self.base)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::NAN) / (self.base as f64).powi(self.depth as i32)
    }
}

impl PartialOrd for DAdic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DAdic {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.base, other.base, "d-adic base mismatch");
        let k = self.depth.max(other.depth);
        self.numerator_at(k).unwrap().cmp(&other.numerator_at(k).unwrap())
    }
}

impl fmt::Display for DAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}^{}", self.numerator, self.base, self.depth)
        }
    }
}

impl DAdic {
    /// Parses `"a/d^k"`, `"a/m"` (with `m` a power of `d`) or an integer.
    pub fn parse(text: &str, d: u32) -> Result<DAdic> {
        let err = |msg: &str| Error::Parse {
            offset: 0,
            msg: format!("{msg}: {text:?}"),
        };
        let text = text.trim();
        let Some((num, den)) = text.split_once('/') else {
            let a = BigInt::from_str(text).map_err(|_| err("bad integer"))?;
            return Ok(DAdic::new(a, 0, d));
        };
        let a = BigInt::from_str(num.trim()).map_err(|_| err("bad numerator"))?;
        let den = den.trim();
        if let Some((b, k)) = den.split_once('^') {
            let b: u32 = b.trim().parse().map_err(|_| err("bad base"))?;
            let k: u32 = k.trim().parse().map_err(|_| err("bad exponent"))?;
            if b != d {
                return Err(err("base does not match"));
            }
            return Ok(DAdic::new(a, k, d));
        }
        let mut m = BigInt::from_str(den).map_err(|_| err("bad denominator"))?;
        let mut k = 0;
        let big_d = BigInt::from(d);
        while m > BigInt::one() {
            let (q, r) = m.div_rem(&big_d);
            if !r.is_zero() {
                return Err(err("denominator is not a power of the base"));
            }
            m = q;
            k += 1;
        }
        if m != BigInt::one() {
            return Err(err("denominator must be positive"));
        }
        Ok(DAdic::new(a, k, d))
    }
}

/// A word over `{0, …, d−1}`. Used both as a vertex/leaf address in a d-ary
/// tree and as the name of a standard d-adic interval.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Address(pub Vec<u8>);

impl Address {
    pub fn root() -> Address {
        Address(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Address {
        let mut w = self.0.clone();
        w.push(i as u8);
        Address(w)
    }

    pub fn parent(&self) -> Option<Address> {
        (!self.0.is_empty()).then(|| Address(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn last_digit(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn strip_prefix(&self, prefix: &Address) -> Option<Address> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Address(s.to_vec()))
    }

    pub fn concat(&self, suffix: &Address) -> Address {
        let mut w = self.0.clone();
        w.extend_from_slice(&suffix.0);
        Address(w)
    }

    /// The rightmost vertex at the given depth: `(d−1)^n`.
    pub fn right_spine(d: usize, n: usize) -> Address {
        Address(vec![(d - 1) as u8; n])
    }

    pub fn from_digits(digits: &[u8]) -> Address {
        Address(digits.to_vec())
    }

    /// The address of `[a/d^k, (a+1)/d^k)`.
    pub fn from_index(a: &BigUint, k: u32, d: u32) -> Address {
        let mut digits = vec![0u8; k as usize];
        let mut a = a.clone();
        let big_d = BigUint::from(d);
        for slot in digits.iter_mut().rev() {
            let (q, r) = a.div_rem(&big_d);
            *slot = r.to_u8().unwrap();
            a = q;
        }
        Address(digits)
    }

    pub fn index(&self, d: u32) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::zero(), |acc, &x| acc * d + BigUint::from(x))
    }

    pub fn left(&self, d: u32) -> DAdic {
        DAdic::new(BigInt::from(self.index(d)), self.len() as u32, d)
    }

    pub fn right(&self, d: u32) -> DAdic {
        DAdic::new(BigInt::from(self.index(d)) + 1, self.len() as u32, d)
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address(\"{self}\")")
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for &x in &self.0 {
            if x < 10 {
                write!(f, "{x}")?;
            } else {
                write!(f, "[{x}]")?;
            }
        }
        Ok(())
    }
}

/// A standard d-adic interval `[a/d^k, (a+1)/d^k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StdInterval {
    base: u32,
    address: Address,
}

impl StdInterval {
    pub fn new(a: impl Into<BigUint>, k: u32, d: u32) -> Result<StdInterval> {
        check_base(d as usize)?;
        let a = a.into();
        let bound = num_traits::pow(BigUint::from(d), k as usize);
        if a >= bound {
            return Err(Error::InvalidInterval(format!(
                "index {a} out of range for depth {k}, base {d}"
            )));
        }
        Ok(StdInterval {
            base: d,
            address: Address::from_index(&a, k, d),
        })
    }

    pub fn from_address(address: Address, d: u32) -> StdInterval {
        debug_assert!(address.0.iter().all(|&x| (x as u32) < d));
        StdInterval { base: d, address }
    }

    pub fn unit(d: u32) -> StdInterval {
        StdInterval {
            base: d,
            address: Address::root(),
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn address(&self) -> &Address {
        &self.address
    }

    pub fn depth(&self) -> u32 {
        self.address.len() as u32
    }

    pub fn index(&self) -> BigUint {
        self.address.index(self.base)
    }

    pub fn left(&self) -> DAdic {
        self.address.left(self.base)
    }

    pub fn right(&self) -> DAdic {
        self.address.right(self.base)
    }

    pub fn contains_point(&self, x: &DAdic) -> bool {
        self.left() <= *x && *x < self.right()
    }

    pub fn contains(&self, other: &StdInterval) -> bool {
        self.address.is_prefix_of(&other.address)
    }

    pub fn children(&self) -> impl Iterator<Item = StdInterval> + '_ {
        (0..self.base as usize).map(|i| StdInterval {
            base: self.base,
            address: self.address.child(i),
        })
    }

    /// The `d − 1` interior subdivision points `(dc+n)/d^{l+1}`, `1 ≤ n < d`.
    pub fn dth_points(&self) -> Vec<DAdic> {
        let c = BigInt::from(self.index());
        let d = self.base;
        let l = self.depth();
        (1..d).map(|n| DAdic::new(&c * d + n, l + 1, d)).collect()
    }

    /// Recovers the interval from any one of its d-th points.
    pub fn from_dth_point(p: &DAdic) -> Option<StdInterval> {
        if p.depth() == 0 {
            return None;
        }
        let d = p.base();
        let num = p.numerator().to_biguint()?;
        let (c, _) = num.div_rem(&BigUint::from(d));
        Some(StdInterval {
            base: d,
            address: Address::from_index(&c, p.depth() - 1, d),
        })
    }
}

impl fmt::Display for StdInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left(), self.right())
    }
}

/// A standard d-adic partition of `[0,1)`, stored as its intervals in
/// left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StdPartition {
    base: u32,
    intervals: Vec<Address>,
}

impl StdPartition {
    pub fn trivial(d: u32) -> StdPartition {
        StdPartition {
            base: d,
            intervals: vec![Address::root()],
        }
    }

    /// Builds a partition from interval addresses, validating that they tile `[0,1)`.
    pub fn from_addresses(d: u32, intervals: Vec<Address>) -> Result<StdPartition> {
        check_base(d as usize)?;
        if !tiles_unit_interval(d, &intervals) {
            return Err(Error::NotStandardPartition(format!(
                "intervals {:?} do not tile [0,1)",
                intervals.iter().map(|a| a.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(StdPartition { base: d, intervals })
    }

    pub(crate) fn from_addresses_unchecked(d: u32, intervals: Vec<Address>) -> StdPartition {
        StdPartition { base: d, intervals }
    }

    pub fn from_breakpoints(points: &[DAdic], d: u32) -> Result<StdPartition> {
        check_base(d as usize)?;
        let bad = |msg: String| Error::NotStandardPartition(msg);
        if points.len() < 2 || points[0] != DAdic::zero(d) || *points.last().unwrap() != DAdic::one(d) {
            return Err(bad("breakpoints must start at 0 and end at 1".into()));
        }
        let mut intervals = Vec::with_capacity(points.len() - 1);
        for w in points.windows(2) {
            let (x, y) = (&w[0], &w[1]);
            if x.base() != d || y.base() != d {
                return Err(Error::BaseMismatch);
            }
            let gap = y.sub(x);
            if gap.numerator() != &BigInt::one() || !x.is_multiple_of_depth(gap.depth()) {
                return Err(bad(format!("[{x}, {y}) is not a standard interval")));
            }
            let k = gap.depth();
            let a = x
                .numerator_at(k)
                .unwrap()
                .to_biguint()
                .ok_or_else(|| bad(format!("{x} is negative")))?;
            intervals.push(Address::from_index(&a, k, d));
        }
        Ok(StdPartition { base: d, intervals })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn addresses(&self) -> &[Address] {
        &self.intervals
    }

    pub fn intervals(&self) -> impl Iterator<Item = StdInterval> + '_ {
        self.intervals
            .iter()
            .map(|a| StdInterval::from_address(a.clone(), self.base))
    }

    pub fn breakpoints(&self) -> Vec<DAdic> {
        let mut pts: Vec<DAdic> = self.intervals.iter().map(|a| a.left(self.base)).collect();
        pts.push(DAdic::one(self.base));
        pts
    }

    pub fn interior_breakpoints(&self) -> Vec<DAdic> {
        self.intervals.iter().skip(1).map(|a| a.left(self.base)).collect()
    }

    /// `|P ∖ {0, 1/d, …, 1}|`.
    pub fn extra_point_count(&self) -> usize {
        self.breakpoints().iter().filter(|p| p.depth() > 1).count()
    }

    pub fn contains_point(&self, x: &DAdic) -> bool {
        self.breakpoints().binary_search(x).is_ok()
    }

    /// The smallest standard partition containing every given point of `[0,1]`.
    pub fn completion(points: &[DAdic], d: u32) -> Result<StdPartition> {
        check_base(d as usize)?;
        for p in points {
            if p.base() != d {
                return Err(Error::BaseMismatch);
            }
            if !p.in_unit_interval() {
                return Err(Error::InvalidInterval(format!("{p} lies outside [0,1]")));
            }
        }
        let mut out = Vec::new();
        let mut stack = vec![Address::root()];
        while let Some(a) = stack.pop() {
            let (lo, hi) = (a.left(d), a.right(d));
            if points.iter().any(|p| lo < *p && *p < hi) {
                for i in (0..d as usize).rev() {
                    stack.push(a.child(i));
                }
            } else {
                out.push(a);
            }
        }
        Ok(StdPartition {
            base: d,
            intervals: out,
        })
    }

    /// Coarsest standard partition refining both inputs.
    pub fn common_refinement(&self, other: &StdPartition) -> Result<StdPartition> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let mut pts = self.breakpoints();
        pts.extend(other.breakpoints());
        pts.sort();
        pts.dedup();
        StdPartition::completion(&pts, self.base)
    }
}

impl fmt::Display for StdPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.breakpoints().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", pts.join(", "))
    }
}

fn tiles_unit_interval(d: u32, intervals: &[Address]) -> bool {
    if intervals.is_empty() {
        return false;
    }
    if intervals.iter().any(|a| a.0.iter().any(|&x| x as u32 >= d)) {
        return false;
    }
    let mut cursor = DAdic::zero(d);
    for a in intervals {
        if a.left(d) != cursor {
            return false;
        }
        cursor = a.right(d);
    }
    cursor == DAdic::one(d)
}

/// True iff the sorted `points` form a standard d-adic partition.
pub fn is_standard_partition(points: &[DAdic], d: u32) -> bool {
    StdPartition::from_breakpoints(points, d).is_ok()
}

/// For `b/d^k` in canonical form, any standard partition containing it has at
/// least `k` interior points; returns that `k`.
pub fn min_interior_count(b: &DAdic) -> usize {
    b.depth() as usize
}

/// Number of d-ary trees with `m` leaves (zero unless `m ≡ 1 mod d−1`).
pub fn fuss_catalan_by_leaves(d: usize, m: usize) -> BigUint {
    if m == 0 || !(m - 1).is_multiple_of(d - 1) {
        return BigUint::zero();
    }
    let j = (m - 1) / (d - 1);
    // C(dj, j) / ((d-1)j + 1)
    let mut binom = BigUint::one();
    for i in 0..j {
        binom = binom * BigUint::from(d * j - i) / BigUint::from(i + 1);
    }
    binom / BigUint::from((d - 1) * j + 1)
}

/// Default ceiling on the number of partitions produced by [`enumerate_partitions`].
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

/// All standard partitions with at most `max_intervals` intervals, ordered by
/// interval count and then lexicographically on breakpoints.
pub fn enumerate_partitions(d: usize, max_intervals: usize) -> Result<Vec<StdPartition>> {
    enumerate_partitions_capped(d, max_intervals, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_capped(d: usize, max_intervals: usize, cap: usize) -> Result<Vec<StdPartition>> {
    check_base(d)?;
    let total: BigUint = (1..=max_intervals).map(|m| fuss_catalan_by_leaves(d, m)).sum();
    if total > BigUint::from(cap) {
        return Err(Error::EnumerationCap {
            cap,
            requested: total.to_string(),
        });
    }
    let mut out = Vec::new();
    let mut m = 1;
    while m <= max_intervals {
        let mut batch: Vec<StdPartition> = shapes_with_leaves(d, m, &Address::root())
            .into_iter()
            .map(|intervals| StdPartition {
                base: d as u32,
                intervals,
            })
            .collect();
        batch.sort_by_key(|a| a.breakpoints());
        out.extend(batch);
        m += d - 1;
    }
    Ok(out)
}

/// Leaf lists of every d-ary tree rooted at `at` with exactly `m` leaves.
pub(crate) fn shapes_with_leaves(d: usize, m: usize, at: &Address) -> Vec<Vec<Address>> {
    if m == 1 {
        return vec![vec![at.clone()]];
    }
    if m < d || !(m - 1).is_multiple_of(d - 1) {
        return Vec::new();
    }
    // distribute m leaves among d children, each child count ≡ 1 mod (d−1)
    let mut results = Vec::new();
    fn go(
        d: usize,
        child: usize,
        remaining: usize,
        at: &Address,
        acc: &mut Vec<Address>,
        results: &mut Vec<Vec<Address>>,
    ) {
        let left = d - child;
        if left == 0 {
            if remaining == 0 {
                results.push(acc.clone());
            }
            return;
        }
        let mut c = 1;
        while c + (left - 1) <= remaining {
            if left == 1 && c != remaining {
                c += d - 1;
                continue;
            }
            for sub in shapes_with_leaves(d, c, &at.child(child)) {
                let len = acc.len();
                acc.extend(sub);
                go(d, child + 1, remaining - c, at, acc, results);
                acc.truncate(len);
            }
            c += d - 1;
        }
    }
    go(d, 0, m, at, &mut Vec::new(), &mut results);
    results
}
