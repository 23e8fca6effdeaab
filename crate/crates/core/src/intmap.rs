//! The interval-map model of `V_d`: right-continuous bijections of `[0,1)`
//! that carry each piece of a standard partition affinely onto a piece of
//! another standard partition.
//!
//! A piece is a pair of interval addresses `source → target`. Maps are kept
//! with maximal pieces, so structural equality is equality of maps.
//!
//! Tree pairs read top to bottom: `[T, σ, U]` sends the `σ(k)`-th leaf
//! interval of `T` onto the `k`-th leaf interval of `U`. With this reading
//! the product `e1·e2` of tree pairs is the map "apply `e1`, then `e2`", so
//! `from_tree_pair(e1·e2) = compose(from_tree_pair(e2), from_tree_pair(e1))`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cloning::{CloningSystem, SymmetricSystem, TrivialSystem};
use crate::dadic::{check_base, Address, DAdic, StdInterval, StdPartition};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tlgroup::{GroupElement, ThompsonGroup, TreePair};
use crate::trees::DAryTree;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PLMap {
    d: u32,
    pieces: BTreeMap<Address, Address>,
}

impl PLMap {
    pub fn identity(d: u32) -> PLMap {
        PLMap {
            d,
            pieces: BTreeMap::from([(Address::root(), Address::root())]),
        }
    }

    /// Builds a map from `(source, target)` pieces; sources and targets must
    /// each tile `[0,1)`.
    pub fn from_pieces(d: u32, pieces: Vec<(Address, Address)>) -> Result<PLMap> {
        check_base(d as usize)?;
        let mut sorted = pieces;
        sorted.sort();
        let sources: Vec<Address> = sorted.iter().map(|p| p.0.clone()).collect();
        let mut targets: Vec<Address> = sorted.iter().map(|p| p.1.clone()).collect();
        targets.sort();
        StdPartition::from_addresses(d, sources).map_err(|e| Error::InvalidMap(format!("sources: {e}")))?;
        StdPartition::from_addresses(d, targets).map_err(|e| Error::InvalidMap(format!("targets: {e}")))?;
        Ok(PLMap::merged(d, sorted))
    }

    /// Pieces must already be sorted by source and valid.
    fn merged(d: u32, sorted: Vec<(Address, Address)>) -> PLMap {
        PLMap {
            d,
            pieces: merge_pieces(d, sorted).into_iter().collect(),
        }
    }

    /// `[T, σ, U]`: leaf `σ(k)` of `T` goes onto leaf `k` of `U`.
    pub fn from_trees(top: &DAryTree, sigma: &Permutation, bottom: &DAryTree) -> Result<PLMap> {
        if top.arity() != bottom.arity() {
            return Err(Error::BaseMismatch);
        }
        let n = top.leaf_count();
        if bottom.leaf_count() != n || sigma.degree() != n {
            return Err(Error::DegreeMismatch(top.leaf_count(), bottom.leaf_count()));
        }
        let pieces = (1..=n)
            .map(|k| (top.leaves()[sigma.apply(k) - 1].clone(), bottom.leaves()[k - 1].clone()))
            .collect();
        PLMap::from_pieces(top.arity() as u32, pieces)
    }

    pub fn base(&self) -> u32 {
        self.d
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Address, &Address)> {
        self.pieces.iter()
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces.keys().next().is_some_and(Address::is_empty)
    }

    /// Deepest address among sources and targets.
    pub fn depth(&self) -> usize {
        self.pieces.iter().map(|(s, t)| s.len().max(t.len())).max().unwrap_or(0)
    }

    pub fn domain_partition(&self) -> StdPartition {
        StdPartition::from_addresses_unchecked(self.d, self.pieces.keys().cloned().collect())
    }

    pub fn range_partition(&self) -> StdPartition {
        let mut t: Vec<Address> = self.pieces.values().cloned().collect();
        t.sort();
        StdPartition::from_addresses_unchecked(self.d, t)
    }

    /// Top tree, leaf permutation and bottom tree of the reduced tree pair.
    pub fn to_trees(&self) -> (DAryTree, Permutation, DAryTree) {
        let d = self.d as usize;
        let top: Vec<Address> = self.pieces.keys().cloned().collect();
        let mut bottom: Vec<Address> = self.pieces.values().cloned().collect();
        bottom.sort();
        let sigma: Vec<usize> = bottom
            .iter()
            .map(|t| {
                let (s, _) = self.pieces.iter().find(|(_, tt)| *tt == t).unwrap();
                top.binary_search(s).unwrap() + 1
            })
            .collect();
        (
            DAryTree::from_leaves_unchecked(d, top),
            Permutation::from_one_line(sigma).unwrap(),
            DAryTree::from_leaves_unchecked(d, bottom),
        )
    }

    /// The source piece containing the standard interval `w`, if one does.
    fn piece_containing(&self, w: &Address) -> Option<(&Address, &Address)> {
        self.pieces
            .range(..=w.clone())
            .next_back()
            .filter(|(s, _)| s.is_prefix_of(w))
    }

    fn pieces_inside(&self, w: &Address) -> impl Iterator<Item = (&Address, &Address)> {
        let w2 = w.clone();
        self.pieces
            .range(w.clone()..)
            .take_while(move |(s, _)| w2.is_prefix_of(s))
    }

    /// `m(x)` for `x ∈ [0,1)`.
    pub fn evaluate(&self, x: &DAdic) -> Result<DAdic> {
        if x.base() != self.d {
            return Err(Error::BaseMismatch);
        }
        if !x.in_unit_interval() || *x == DAdic::one(self.d) {
            return Err(Error::InvalidInterval(format!("{x} is outside [0,1)")));
        }
        let depth = self.pieces.keys().map(Address::len).max().unwrap_or(0) as u32;
        let scaled = x.scale(depth as i64);
        let floor = if scaled.depth() == 0 {
            scaled.numerator().clone()
        } else {
            let den = num_traits::pow(BigInt::from(self.d), scaled.depth() as usize);
            num_integer::Integer::div_floor(scaled.numerator(), &den)
        };
        let addr = Address::from_index(&floor.to_biguint().unwrap(), depth, self.d);
        let (s, t) = self.piece_containing(&addr).expect("sources tile [0,1)");
        let shift = s.len() as i64 - t.len() as i64;
        Ok(t.left(self.d).add(&x.sub(&s.left(self.d)).scale(shift)))
    }

    /// Image of the standard interval `w`, as the list of target intervals of
    /// the pieces it meets (a single interval when `w` lies inside one piece).
    pub fn image_of_interval(&self, w: &Address) -> Vec<Address> {
        if let Some((s, t)) = self.piece_containing(w) {
            return vec![t.concat(&w.strip_prefix(s).unwrap())];
        }
        self.pieces_inside(w).map(|(_, t)| t.clone()).collect()
    }

    /// True when the map is the identity on the standard interval `w`.
    pub fn fixes_interval(&self, w: &Address) -> bool {
        if let Some((s, t)) = self.piece_containing(w) {
            return s == t;
        }
        self.pieces_inside(w).all(|(s, t)| s == t)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PLMap) -> Result<PLMap> {
        if self.d != other.d {
            return Err(Error::BaseMismatch);
        }
        let mut out = Vec::with_capacity(self.pieces.len() + other.pieces.len());
        for (s2, t2) in &other.pieces {
            self.push_through(s2, t2, &mut out);
        }
        out.sort();
        Ok(PLMap::merged(self.d, out))
    }

    /// Pieces of `self ∘ (s → t)` for a single piece `s → t`.
    pub(crate) fn push_through(&self, s: &Address, t: &Address, out: &mut Vec<(Address, Address)>) {
        if let Some((s1, t1)) = self.piece_containing(t) {
            out.push((s.clone(), t1.concat(&t.strip_prefix(s1).unwrap())));
        } else {
            for (s1, t1) in self.pieces_inside(t) {
                out.push((s.concat(&s1.strip_prefix(t).unwrap()), t1.clone()));
            }
        }
    }

    /// `other ∘ self`: apply `self` first. This is the tree-pair product order.
    pub fn then(&self, other: &PLMap) -> Result<PLMap> {
        other.compose(self)
    }

    pub fn invert(&self) -> PLMap {
        let mut out: Vec<(Address, Address)> = self.pieces.iter().map(|(s, t)| (t.clone(), s.clone())).collect();
        out.sort();
        PLMap::merged(self.d, out)
    }

    pub fn pow(&self, e: i64) -> PLMap {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut acc = PLMap::identity(self.d);
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base).unwrap();
        }
        acc
    }

    /// `g⁻¹ ∘ self ∘ g`.
    pub fn conjugate_by(&self, g: &PLMap) -> Result<PLMap> {
        g.invert().compose(&self.compose(g)?)
    }

    /// Target addresses listed in source order.
    fn target_sequence(&self) -> Vec<&Address> {
        self.pieces.values().collect()
    }

    /// Order preserving, so a homeomorphism of `[0,1]`: membership in `F_d`.
    pub fn is_in_f(&self) -> bool {
        self.target_sequence().windows(2).all(|w| w[0] < w[1])
    }

    /// Cyclic order preserving, so a homeomorphism of the circle: membership in `T_d`.
    pub fn is_in_t(&self) -> bool {
        let t = self.target_sequence();
        let n = t.len();
        n <= 1 || (0..n).filter(|&i| t[i] > t[(i + 1) % n]).count() == 1
    }

    /// Maximal intervals `[a, b)` off which the map is the identity.
    pub fn support(&self) -> Vec<(DAdic, DAdic)> {
        let mut out: Vec<(DAdic, DAdic)> = Vec::new();
        for (s, t) in &self.pieces {
            if s == t {
                continue;
            }
            let (a, b) = (s.left(self.d), s.right(self.d));
            match out.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => out.push((a, b)),
            }
        }
        out
    }

    /// True when the map is the identity outside `[a, b)`.
    pub fn supported_in(&self, a: &DAdic, b: &DAdic) -> bool {
        self.support().iter().all(|(x, y)| a <= x && y <= b)
    }

    /// The map acting on `[a, a + d^-k)` as a copy of `self` shrunk by `d^-k`,
    /// and as the identity elsewhere. Fails when a shrunk piece is not standard.
    pub fn embed(&self, a: &DAdic, k: u32) -> Result<PLMap> {
        let d = self.d;
        let width = DAdic::new(1, k, d);
        let b = a.add(&width);
        if a.base() != d || *a < DAdic::zero(d) || b > DAdic::one(d) {
            return Err(Error::InvalidInterval(format!("[{a}, {b}) is not inside [0,1)")));
        }
        let place = |w: &Address| -> Result<Address> {
            let left = a.add(&w.left(d).scale(-(k as i64)));
            let depth = w.len() as u32 + k;
            interval_at(&left, depth, d)
                .ok_or_else(|| Error::InvalidMap(format!("piece {w} does not land on a standard interval")))
        };
        let mut pieces = Vec::new();
        for (s, t) in &self.pieces {
            pieces.push((place(s)?, place(t)?));
        }
        for w in decompose(&DAdic::zero(d), a, d)
            .into_iter()
            .chain(decompose(&b, &DAdic::one(d), d))
        {
            pieces.push((w.clone(), w));
        }
        PLMap::from_pieces(d, pieces)
    }

    /// A random element of `V_d` built on two random trees with `carets` carets.
    pub fn random<R: Rng + ?Sized>(d: u32, carets: usize, rng: &mut R) -> PLMap {
        PLMap::random_on(d, &[], &[Address::root()], carets, rng)
    }

    /// A random map that is the identity on each interval of `fixed` and
    /// permutes a random refinement of the intervals of `free`.
    pub fn random_on<R: Rng + ?Sized>(
        d: u32,
        fixed: &[Address],
        free: &[Address],
        carets: usize,
        rng: &mut R,
    ) -> PLMap {
        let grow = |rng: &mut R| {
            let mut leaves: Vec<Address> = free.to_vec();
            for _ in 0..carets {
                let i = rng.gen_range(0..leaves.len());
                let at = leaves.remove(i);
                for c in (0..d as usize).rev() {
                    leaves.insert(i, at.child(c));
                }
            }
            leaves
        };
        let src = grow(rng);
        let mut tgt = grow(rng);
        tgt.shuffle(rng);
        let mut pieces: Vec<(Address, Address)> = src.into_iter().zip(tgt).collect();
        pieces.extend(fixed.iter().map(|w| (w.clone(), w.clone())));
        PLMap::from_pieces(d, pieces).expect("random pieces tile [0,1)")
    }

    /// A random order-preserving element of `F_d`.
    pub fn random_f<R: Rng + ?Sized>(d: u32, carets: usize, rng: &mut R) -> PLMap {
        let du = d as usize;
        let src = DAryTree::random(du, carets, rng);
        let tgt = DAryTree::random(du, carets, rng);
        PLMap::from_trees(&src, &Permutation::identity(src.leaf_count()), &tgt).unwrap()
    }

    /// Parses `"a/d^k->b/d^m; …"`, each side naming the standard interval with
    /// left endpoint `a/d^k` at depth `k`.
    pub fn parse(text: &str, d: u32) -> Result<PLMap> {
        let mut pieces = Vec::new();
        let mut offset = 0;
        for part in text.split(';') {
            let lead = part.len() - part.trim_start().len();
            let body = part.trim();
            if !body.is_empty() {
                let (l, r) = body
                    .split_once("->")
                    .ok_or_else(|| Error::parse(offset + lead, "expected '->' in piece"))?;
                let s = parse_interval(l.trim(), d).map_err(|e| e.at_offset(offset + lead))?;
                let t = parse_interval(r.trim(), d)
                    .map_err(|e| e.at_offset(offset + lead + l.len() + 2 + (r.len() - r.trim_start().len())))?;
                pieces.push((s, t));
            }
            offset += part.len() + 1;
        }
        PLMap::from_pieces(d, pieces).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// Merges runs of `d` sibling sources sent in order onto `d` siblings.
/// Input must be sorted by source.
pub(crate) fn merge_pieces(d: u32, sorted: Vec<(Address, Address)>) -> Vec<(Address, Address)> {
    let du = d as usize;
    let mut stack: Vec<(Address, Address)> = Vec::with_capacity(sorted.len());
    for piece in sorted {
        stack.push(piece);
        while stack.len() >= du {
            let tail = &stack[stack.len() - du..];
            let (Some(sp), Some(tp)) = (tail[0].0.parent(), tail[0].1.parent()) else {
                break;
            };
            let siblings = tail
                .iter()
                .enumerate()
                .all(|(i, (s, t))| *s == sp.child(i) && *t == tp.child(i));
            if !siblings {
                break;
            }
            stack.truncate(stack.len() - du);
            stack.push((sp, tp));
        }
    }
    stack
}

fn parse_interval(text: &str, d: u32) -> Result<Address> {
    let (a, rest) = text
        .split_once('/')
        .ok_or_else(|| Error::parse(0, format!("expected a/d^k, got {text:?}")))?;
    let (b, k) = rest
        .split_once('^')
        .ok_or_else(|| Error::parse(a.len() + 1, "expected '^'"))?;
    let a: BigUint = a
        .trim()
        .parse()
        .map_err(|_| Error::parse(0, format!("bad index {a:?}")))?;
    let b: u32 = b
        .trim()
        .parse()
        .map_err(|_| Error::parse(a.to_string().len() + 1, format!("bad base {b:?}")))?;
    if b != d {
        return Err(Error::parse(0, format!("base {b} does not match {d}")));
    }
    let k: u32 = k
        .trim()
        .parse()
        .map_err(|_| Error::parse(0, format!("bad depth {k:?}")))?;
    StdInterval::new(a, k, d)
        .map(|i| i.address().clone())
        .map_err(|e| Error::parse(0, e.to_string()))
}

/// The standard interval of the given depth starting at `left`, if `left` is
/// a multiple of `d^-depth` in `[0,1)`.
pub fn interval_at(left: &DAdic, depth: u32, d: u32) -> Option<Address> {
    let idx = left.numerator_at(depth)?.to_biguint()?;
    StdInterval::new(idx, depth, d).ok().map(|i| i.address().clone())
}

/// Coarsest decomposition of `[a, b)` into standard intervals.
pub fn decompose(a: &DAdic, b: &DAdic, d: u32) -> Vec<Address> {
    let mut out = Vec::new();
    let mut x = a.clone();
    while x < *b {
        let mut depth = x.depth();
        while depth > 0 && x.add(&DAdic::new(1, depth - 1, d)) <= *b && x.is_multiple_of_depth(depth - 1) {
            depth -= 1;
        }
        while x.add(&DAdic::new(1, depth, d)) > *b {
            depth += 1;
        }
        out.push(interval_at(&x, depth, d).expect("aligned by construction"));
        x = x.add(&DAdic::new(1, depth, d));
    }
    out
}

impl fmt::Display for PLMap {
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

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap(d={}, {})", self.d, self)
    }
}

impl Serialize for PLMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            d: u32,
            pieces: String,
        }
        Repr {
            d: self.d,
            pieces: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            d: u32,
            pieces: String,
        }
        let r = Repr::deserialize(de)?;
        PLMap::parse(&r.pieces, r.d).map_err(serde::de::Error::custom)
    }
}

fn addr(s: &str) -> Address {
    Address(s.bytes().map(|b| b - b'0').collect())
}

fn digits(d: u32, index: u64, depth: u32) -> Address {
    Address::from_index(&BigUint::from(index), depth, d)
}

/// The generators `A`, `B`, `C`, `π₀` of `V_2`.
pub fn generator(name: &str) -> Result<PLMap> {
    let p = |v: &[(&str, &str)]| PLMap::from_pieces(2, v.iter().map(|(s, t)| (addr(s), addr(t))).collect());
    match name {
        "A" => p(&[("0", "00"), ("10", "01"), ("11", "1")]),
        "B" => p(&[("0", "0"), ("10", "100"), ("110", "101"), ("111", "11")]),
        "C" => p(&[("0", "11"), ("10", "0"), ("11", "10")]),
        "pi0" | "π₀" | "pi_0" => p(&[("0", "10"), ("10", "0"), ("11", "11")]),
        other => Err(Error::InvalidElement(format!("unknown generator {other:?}"))),
    }
}

/// `x₀ ∈ F_d`: the caret with a caret on its last leaf, over the caret with a
/// caret on its first leaf.
pub fn x0(d: u32) -> PLMap {
    let du = d as usize;
    let top = DAryTree::caret(du).add_caret(du).unwrap();
    let bottom = DAryTree::caret(du).add_caret(1).unwrap();
    PLMap::from_trees(&top, &Permutation::identity(top.leaf_count()), &bottom).unwrap()
}

/// `x₁`: a copy of `x₀` acting on the last `1/d` of the interval.
pub fn x1(d: u32) -> PLMap {
    x0(d).embed(&DAdic::new(d as i64 - 1, 1, d), 1).unwrap()
}

/// Rotation of the circle by `1/d`.
pub fn rotation(d: u32) -> PLMap {
    let pieces = (0..d as u64)
        .map(|i| (digits(d, i, 1), digits(d, (i + 1) % d as u64, 1)))
        .collect();
    PLMap::from_pieces(d, pieces).unwrap()
}

/// `X₁ = [0, 1/d²)`.
pub fn x1_set(_d: u32) -> Address {
    addr("00")
}

/// `X₂ = [1/d², 2/d²)`.
pub fn x2_set(_d: u32) -> Address {
    addr("01")
}

/// First ping-pong element: a cyclic shift of `3d − 2` intervals that nests
/// `X₁ ∪ X₂` inside `X₂`.
pub fn h1(d: u32) -> PLMap {
    let d64 = d as u64;
    let mut domain: Vec<Address> = (0..2 * d64).map(|j| digits(d, j, 2)).collect();
    domain.extend((2..d64).map(|i| digits(d, i, 1)));
    let mut slots = vec![digits(d, 0, 2)];
    slots.extend((0..d64).map(|m| digits(d, d64 + m, 3)));
    slots.extend((2..d64).map(|j| digits(d, j, 2)));
    slots.extend((1..d64).map(|i| digits(d, i, 1)));
    let n = domain.len();
    debug_assert_eq!(n, slots.len());
    let pieces = (0..n)
        .map(|i| (domain[i].clone(), slots[(i + 1) % n].clone()))
        .collect();
    PLMap::from_pieces(d, pieces).unwrap()
}

/// Second ping-pong element: order preserving, squeezing `[0, 1/d)` into `X₁`.
pub fn h2(d: u32) -> PLMap {
    let d64 = d as u64;
    let mut pieces: Vec<(Address, Address)> = (0..d64).map(|j| (digits(d, j, 2), digits(d, j, 3))).collect();
    pieces.extend((0..d64 - 1).map(|m| (digits(d, d64 + m, 2), digits(d, 1 + m, 2))));
    pieces.push((digits(d, 2 * d64 - 1, 2), digits(d, 1, 1)));
    pieces.extend((2..d64).map(|i| (digits(d, i, 1), digits(d, i, 1))));
    PLMap::from_pieces(d, pieces).unwrap()
}

/// Order-preserving map fixing `[0, 1/d)` whose domain cuts the right vine at
/// depth `n + 1` and whose range cuts `[1/d, 2/d)` down to depth `n + 1`.
fn vine_shift(d: u32, n: u32) -> PLMap {
    let d64 = d as u64;
    let last = |depth: u32| digits(d, d64.pow(depth) - 1, depth);
    let mut domain = vec![digits(d, 0, 1)];
    domain.extend((1..d64 - 1).map(|i| digits(d, i, 1)));
    for depth in 2..=n + 1 {
        let parent = last(depth - 1);
        let count = if depth == n + 1 { d64 } else { d64 - 1 };
        domain.extend((0..count).map(|c| parent.child(c as usize)));
    }
    let mut range = vec![digits(d, 0, 1)];
    // 1·0^(j−2) carries the depth-j pieces: all d children at depth n + 1, the last d − 1 above
    let mut spine = vec![digits(d, 1, 1)];
    for _ in 2..=n {
        let next = spine.last().unwrap().child(0);
        spine.push(next);
    }
    range.extend((0..d64).map(|c| spine[n as usize - 1].child(c as usize)));
    for j in (0..n as usize - 1).rev() {
        range.extend((1..d64).map(|c| spine[j].child(c as usize)));
    }
    range.extend((2..d64).map(|i| digits(d, i, 1)));
    PLMap::from_trees(
        &DAryTree::from_leaves(d as usize, domain).unwrap(),
        &Permutation::identity(range.len()),
        &DAryTree::from_leaves(d as usize, range).unwrap(),
    )
    .unwrap()
}

/// The `n`-th element of a sequence in `V_[0,1/d) ∩ F_d` fixing no standard
/// interval inside `[1/d, 1)`. For `d = 2` the first construction step is the
/// identity, so the sequence starts one step later.
pub fn v_n(d: u32, n: u32) -> Result<PLMap> {
    check_base(d as usize)?;
    if n == 0 {
        return Err(Error::Precondition("v_n is defined for n ≥ 1".into()));
    }
    Ok(vine_shift(d, if d == 2 { n + 1 } else { n }))
}

/// Distinct `(source depth, target depth)` pairs among the pieces.
pub fn piece_patterns(m: &PLMap) -> BTreeSet<(usize, usize)> {
    m.pieces().map(|(s, t)| (s.len(), t.len())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// A list of checked facts, replayable from the recorded parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub facts: Vec<Fact>,
    /// Observations that qualify the claim without failing the certificate.
    pub flags: Vec<String>,
    pub passed: bool,
}

impl Certificate {
    pub fn new(claim: &str) -> Certificate {
        Certificate {
            claim: claim.into(),
            params: BTreeMap::new(),
            facts: Vec::new(),
            flags: Vec::new(),
            passed: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn fact(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) -> bool {
        self.facts.push(Fact {
            name: name.into(),
            holds,
            detail: detail.into(),
        });
        self.passed &= holds;
        holds
    }

    pub fn failures(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter().filter(|f| !f.holds)
    }
}

/// Checks the nesting `h₁(X₁) ⊆ X₂`, `h₂(X₂) ⊆ X₁`, the same for `X₁ ∪ X₂`
/// under powers up to `max_len`, and that no nonempty word of length at most
/// `max_len` in `h₁, h₂` is the identity. Reduced words that also use
/// `h₁⁻¹, h₂⁻¹` are searched as well; an identity among them is flagged.
pub fn pingpong_certificate(d: u32, max_len: usize) -> Result<Certificate> {
    pingpong_certificate_for(d, &h1(d), &h2(d), max_len)
}

pub fn pingpong_certificate_for(d: u32, g1: &PLMap, g2: &PLMap, max_len: usize) -> Result<Certificate> {
    check_base(d as usize)?;
    let mut cert = Certificate::new("pingpong")
        .param("d", d)
        .param("max_len", max_len as u64);
    let (x1, x2) = (x1_set(d), x2_set(d));
    let inside =
        |m: &PLMap, w: &Address, target: &Address| m.image_of_interval(w).iter().all(|i| target.is_prefix_of(i));
    cert.fact(
        "h1(X1) ⊆ X2",
        inside(g1, &x1, &x2),
        format!("h1(X1) = {:?}", g1.image_of_interval(&x1)),
    );
    cert.fact(
        "h2(X2) ⊆ X1",
        inside(g2, &x2, &x1),
        format!("h2(X2) = {:?}", g2.image_of_interval(&x2)),
    );
    cert.fact(
        "X1 ∩ X2 = ∅",
        !x1.is_prefix_of(&x2) && !x2.is_prefix_of(&x1),
        "disjoint standard intervals",
    );
    let (mut p1, mut p2) = (PLMap::identity(d), PLMap::identity(d));
    let mut bad_powers = Vec::new();
    for n in 1..=max_len {
        p1 = p1.compose(g1)?;
        p2 = p2.compose(g2)?;
        for w in [&x1, &x2] {
            if !inside(&p1, w, &x2) {
                bad_powers.push(format!("h1^{n}({w})"));
            }
            if !inside(&p2, w, &x1) {
                bad_powers.push(format!("h2^{n}({w})"));
            }
        }
    }
    cert.fact(
        "powers nest X1 ∪ X2",
        bad_powers.is_empty(),
        if bad_powers.is_empty() {
            format!("h1^n, h2^n for 1 ≤ n ≤ {max_len}")
        } else {
            bad_powers.join(", ")
        },
    );
    let letters = [
        (g1.clone(), "h1"),
        (g2.clone(), "h2"),
        (g1.invert(), "h1^-1"),
        (g2.invert(), "h2^-1"),
    ];
    let (count, offending) = first_identity_word(d, &letters[..2], max_len)?;
    cert.fact(
        "positive words are nontrivial",
        offending.is_none(),
        match &offending {
            Some(w) => format!("identity word {w}"),
            None => format!("{count} words of length 1..={max_len}"),
        },
    );
    let (count, offending) = first_identity_word(d, &letters, max_len)?;
    cert.params.insert("reduced_words_checked".into(), count.into());
    if let Some(w) = offending {
        cert.flags
            .push(format!("reduced word with inverse letters is the identity: {w}"));
    }
    Ok(cert)
}

/// Breadth-first search over reduced words in the given letters (a letter and
/// its inverse sit `letters.len() / 2` apart when inverses are present).
/// Returns the number of words visited and a shortest word equal to the identity.
fn first_identity_word(d: u32, letters: &[(PLMap, &str)], max_len: usize) -> Result<(u64, Option<String>)> {
    let half = letters.len() / 2;
    let cancels = |a: usize, b: usize| letters.len() == 4 && (a + half == b || b + half == a);
    let mut count = 0u64;
    let mut queue: VecDeque<(PLMap, Vec<usize>)> = VecDeque::from([(PLMap::identity(d), Vec::new())]);
    while let Some((m, word)) = queue.pop_front() {
        if word.len() == max_len {
            continue;
        }
        for (i, (g, _)) in letters.iter().enumerate() {
            if word.last().is_some_and(|&l| cancels(l, i)) {
                continue;
            }
            let next = m.compose(g)?;
            let mut w = word.clone();
            w.push(i);
            count += 1;
            if next.is_identity() {
                let text = w.iter().map(|&j| letters[j].1).collect::<Vec<_>>().join("*");
                return Ok((count, Some(text)));
            }
            queue.push_back((next, w));
        }
    }
    Ok((count, None))
}

/// Checks that the rotation translates of `[0, 1/d)` cover `[0, 1)`, so an
/// element of `V_[0,1/d)` lying in `V_[0,1/d)^(h^i)` for `i = 1, …, d−1` is
/// trivial, and reports whether one conjugator already suffices.
pub fn weak_malnormality_certificate(d: u32) -> Result<Certificate> {
    check_base(d as usize)?;
    let h = rotation(d);
    let mut cert = Certificate::new("weak_malnormality").param("d", d);
    let first = digits(d, 0, 1);
    let step = h.image_of_interval(&first);
    cert.fact(
        "h([0,1/d)) = [1/d,2/d)",
        step == vec![digits(d, 1, 1)],
        format!(
            "h([0,1/d)) = {}",
            step.iter()
                .map(|w| StdInterval::from_address(w.clone(), d).to_string())
                .collect::<String>()
        ),
    );
    let mut translates = Vec::new();
    let mut covered = BTreeSet::new();
    let mut hp = PLMap::identity(d);
    for _ in 0..d {
        let img = hp.image_of_interval(&first);
        covered.extend(img.iter().cloned());
        translates.extend(img.into_iter().map(|w| StdInterval::from_address(w, d).to_string()));
        hp = hp.compose(&h)?;
    }
    let all: BTreeSet<Address> = (0..d as u64).map(|i| digits(d, i, 1)).collect();
    cert.fact("translates cover [0,1)", covered == all, translates.join(" ∪ "));
    let conjugators: Vec<String> = (1..d)
        .map(|i| if i == 1 { "h".into() } else { format!("h^{i}") })
        .collect();
    cert.params.insert("conjugators".into(), serde_json::json!(conjugators));
    // an element fixing [0,1/d) and every translate is the identity on [0,1)
    let fix_all = PLMap::from_pieces(d, all.iter().map(|w| (w.clone(), w.clone())).collect())?;
    cert.fact(
        "fixing every translate forces the identity",
        fix_all.is_identity(),
        "pieces on [i/d,(i+1)/d) merge to the identity",
    );
    if d > 2 {
        // swap the first two children of [1/d, 2/d): fixes [0,1/d) and h⁻¹([0,1/d)) = [(d−1)/d, 1)
        let mid = digits(d, 1, 1);
        let mut pieces: Vec<(Address, Address)> = (0..d as u64)
            .filter(|&i| i != 1)
            .map(|i| (digits(d, i, 1), digits(d, i, 1)))
            .collect();
        pieces.push((mid.child(0), mid.child(1)));
        pieces.push((mid.child(1), mid.child(0)));
        pieces.extend((2..d as usize).map(|c| (mid.child(c), mid.child(c))));
        let w = PLMap::from_pieces(d, pieces)?;
        let in_v = w.fixes_interval(&first);
        let conj = h.compose(&w.compose(&h.invert())?)?;
        let in_conj = conj.fixes_interval(&first);
        let nontrivial = !w.is_identity();
        cert.fact(
            "single conjugator leaves a nontrivial intersection",
            in_v && in_conj && nontrivial,
            format!("witness {w}"),
        );
        cert.flags.push(format!(
            "for d = {d} the intersection with one conjugate by h is nontrivial; {} conjugates are needed",
            d - 1
        ));
    } else {
        cert.fact("single conjugator suffices", true, "two translates already cover [0,1)");
    }
    Ok(cert)
}

/// Audits the sequence `v_1, …, v_max_n` and the centralizer of `V_[0,1/d)`:
/// maps supported in `[0,1/d)` commute with `V_[0,1/d)`, and maps moving
/// points on both sides of `1/d` have pairwise distinct conjugates by the `v_n`.
pub fn centralizer_certificate(d: u32, samples: usize, max_n: u32, seed: u64) -> Result<Certificate> {
    check_base(d as usize)?;
    let mut cert = Certificate::new("centralizer")
        .param("d", d)
        .param("samples", samples as u64)
        .param("max_n", max_n)
        .param("seed", seed);
    let first = digits(d, 0, 1);
    let vs: Vec<PLMap> = (1..=max_n).map(|n| v_n(d, n)).collect::<Result<_>>()?;
    for (i, v) in vs.iter().enumerate() {
        let n = i + 1;
        cert.fact(format!("v_{n} in F_d"), v.is_in_f(), v.to_string());
        cert.fact(
            format!("v_{n} fixes [0,1/d)"),
            v.fixes_interval(&first),
            "identity piece on [0,1/d)",
        );
        let bound = (v.depth() + 1).max(6);
        let fixed = fixed_interval_right_of(v, d, bound);
        cert.fact(
            format!("v_{n} fixes no standard interval in [1/d,1)"),
            fixed.is_none(),
            match fixed {
                Some(w) => format!("fixes {}", StdInterval::from_address(w, d)),
                None => format!("checked to depth {bound}, beyond map depth {}", v.depth()),
            },
        );
    }
    let distinct = vs.iter().collect::<BTreeSet<_>>().len() == vs.len();
    cert.fact("v_n pairwise distinct", distinct, format!("n = 1..={max_n}"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rest: Vec<Address> = (1..d as u64).map(|i| digits(d, i, 1)).collect();
    let mut commute_fail = None;
    for t in 0..samples {
        let g = PLMap::random_on(d, &rest, std::slice::from_ref(&first), 1 + t % 3, &mut rng);
        let extra = PLMap::random_on(d, std::slice::from_ref(&first), &rest, 1 + t % 3, &mut rng);
        for v in vs.iter().chain(std::iter::once(&extra)) {
            if g.compose(v)? != v.compose(&g)? {
                commute_fail.get_or_insert(format!("g = {g}, v = {v}"));
            }
        }
    }
    cert.fact(
        "maps supported in [0,1/d) commute with V_[0,1/d)",
        commute_fail.is_none(),
        commute_fail.unwrap_or_else(|| format!("{samples} maps against v_1..v_{max_n} and a random element each")),
    );

    let mut tested = 0;
    let mut conj_fail = None;
    let mut attempts = 0;
    while tested < samples && attempts < samples * 100 {
        attempts += 1;
        let g = PLMap::random(d, 2 + attempts % 4, &mut rng);
        let moves_left = !g.fixes_interval(&first);
        let moves_right = rest.iter().any(|w| !g.fixes_interval(w));
        if !(moves_left && moves_right) {
            continue;
        }
        tested += 1;
        let conjugates: Vec<PLMap> = vs.iter().map(|v| g.conjugate_by(v)).collect::<Result<_>>()?;
        if conjugates.iter().collect::<BTreeSet<_>>().len() != conjugates.len() {
            conj_fail.get_or_insert(format!("g = {g}"));
        }
    }
    cert.fact(
        "conjugates by v_n are pairwise distinct",
        conj_fail.is_none() && tested >= samples,
        conj_fail.unwrap_or_else(|| format!("{tested} maps moving points on both sides of 1/d")),
    );
    Ok(cert)
}

/// A standard interval inside `[1/d, 1)` of depth at most `max_depth` on
/// which `m` is the identity.
pub fn fixed_interval_right_of(m: &PLMap, d: u32, max_depth: usize) -> Option<Address> {
    let mut stack: Vec<Address> = (1..d as u64).map(|i| digits(d, i, 1)).collect();
    while let Some(w) = stack.pop() {
        if m.fixes_interval(&w) {
            return Some(w);
        }
        if w.len() < max_depth {
            stack.extend((0..d as usize).map(|c| w.child(c)));
        }
    }
    None
}

/// The π-image of a tree-pair element as an interval map.
pub fn from_tree_pair<S: CloningSystem>(group: &ThompsonGroup<S>, e: &GroupElement<S::Elem>) -> Result<PLMap> {
    let p = e.pair();
    let sigma = group.system().rho(p.top.leaf_count(), &p.decoration);
    PLMap::from_trees(&p.top, &sigma, &p.bottom)
}

/// The element of `V_d` represented by `m`.
pub fn to_tree_pair(group: &ThompsonGroup<SymmetricSystem>, m: &PLMap) -> Result<GroupElement<Permutation>> {
    if group.system().arity() as u32 != m.base() {
        return Err(Error::BaseMismatch);
    }
    let (top, sigma, bottom) = m.to_trees();
    group.element(TreePair {
        top,
        decoration: sigma,
        bottom,
    })
}

/// The element of `F_d` represented by an order-preserving `m`.
pub fn to_f_pair(group: &ThompsonGroup<TrivialSystem>, m: &PLMap) -> Result<GroupElement<()>> {
    if !m.is_in_f() {
        return Err(Error::Precondition(format!("{m} is not order preserving")));
    }
    let (top, _, bottom) = m.to_trees();
    group.element(TreePair {
        top,
        decoration: (),
        bottom,
    })
}

/// Embeds an order-preserving map into any system as `[T, 1, U]`.
pub fn embed_f<S: CloningSystem>(group: &ThompsonGroup<S>, m: &PLMap) -> Result<GroupElement<S::Elem>> {
    if !m.is_in_f() {
        return Err(Error::Precondition(format!("{m} is not order preserving")));
    }
    let (top, _, bottom) = m.to_trees();
    let n = top.leaf_count();
    group.element(TreePair {
        top,
        decoration: group.system().identity(n),
        bottom,
    })
}
