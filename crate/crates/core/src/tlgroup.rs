//! The Thompson-like group `𝒯_d(G_*)` of a cloning system, as equivalence
//! classes of triples `[T, g, U]` under expansion.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cloning::{CloningSystem, SymmetricSystem};
use crate::dadic::{Address, DAdic};
use crate::error::{Error, Result};
use crate::intmap::{self, Certificate, PLMap};
use crate::perm::Permutation;
use crate::trees::DAryTree;

pub const DEFAULT_MAX_LEAVES: usize = 64;

/// A representative `[top, decoration, bottom]`. Both trees have the same
/// number of leaves `n` and the decoration lies in `G_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePair<E> {
    pub top: DAryTree,
    pub decoration: E,
    pub bottom: DAryTree,
}

impl<E> TreePair<E> {
    pub fn level(&self) -> usize {
        self.bottom.leaf_count()
    }
}

/// A triple in reduced form; equal elements have equal fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement<E>(TreePair<E>);

impl<E> GroupElement<E> {
    pub fn pair(&self) -> &TreePair<E> {
        &self.0
    }

    pub fn into_pair(self) -> TreePair<E> {
        self.0
    }
}

/// Serialized form of an element: trees and decoration in their text forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub d: usize,
    pub system: String,
    pub top: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decoration: Option<String>,
    pub bottom: String,
}

#[derive(Clone, Debug)]
pub struct ThompsonGroup<S: CloningSystem> {
    sys: S,
    max_leaves: usize,
}

impl<S: CloningSystem> ThompsonGroup<S> {
    pub fn new(sys: S) -> Self {
        ThompsonGroup {
            sys,
            max_leaves: DEFAULT_MAX_LEAVES,
        }
    }

    pub fn with_max_leaves(mut self, max_leaves: usize) -> Self {
        self.max_leaves = max_leaves;
        self
    }

    pub fn system(&self) -> &S {
        &self.sys
    }

    pub fn arity(&self) -> usize {
        self.sys.arity()
    }

    pub fn max_leaves(&self) -> usize {
        self.max_leaves
    }

    pub fn validate(&self, p: &TreePair<S::Elem>) -> Result<()> {
        let d = self.arity();
        if p.top.arity() != d || p.bottom.arity() != d {
            return Err(Error::BaseMismatch);
        }
        let n = p.bottom.leaf_count();
        if p.top.leaf_count() != n {
            return Err(Error::DegreeMismatch(p.top.leaf_count(), n));
        }
        if n > self.max_leaves {
            return Err(Error::LevelOverflow {
                count: n,
                limit: self.max_leaves,
            });
        }
        if !self.sys.contains(n, &p.decoration) {
            return Err(Error::InvalidElement(format!(
                "decoration {} is not in G_{n} of the {} system",
                self.sys.format_elem(n, &p.decoration),
                self.sys.name()
            )));
        }
        Ok(())
    }

    /// Validates and reduces a triple.
    pub fn element(&self, p: TreePair<S::Elem>) -> Result<GroupElement<S::Elem>> {
        self.validate(&p)?;
        Ok(self.canonical_form(p))
    }

    pub fn identity(&self) -> GroupElement<S::Elem> {
        let leaf = DAryTree::leaf(self.arity());
        GroupElement(TreePair {
            top: leaf.clone(),
            decoration: self.sys.identity(1),
            bottom: leaf,
        })
    }

    pub fn is_identity(&self, e: &GroupElement<S::Elem>) -> bool {
        *e == self.identity()
    }

    /// Caret on leaf `k` of the bottom tree and on leaf `ρ(g)(k)` of the top
    /// tree; the decoration becomes `(g)κ_k`.
    pub fn expand(&self, p: &TreePair<S::Elem>, k: usize) -> Result<TreePair<S::Elem>> {
        let n = p.level();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let grown = n + self.arity() - 1;
        if grown > self.max_leaves {
            return Err(Error::LevelOverflow {
                count: grown,
                limit: self.max_leaves,
            });
        }
        let j = self.sys.rho(n, &p.decoration).apply(k);
        Ok(TreePair {
            top: p.top.add_caret(j)?,
            decoration: self.sys.clone_at(n, k, &p.decoration),
            bottom: p.bottom.add_caret(k)?,
        })
    }

    /// Inverse of the expansion at the least possible bottom leaf.
    pub fn reduce_once(&self, p: &TreePair<S::Elem>) -> Option<TreePair<S::Elem>> {
        let d = self.arity();
        let n = p.level();
        if n < d {
            return None;
        }
        let m = n - d + 1;
        for k in 1..=m {
            if !p.bottom.is_removable(k) {
                continue;
            }
            let Some(h) = self.sys.unclone(m, k, &p.decoration) else {
                continue;
            };
            let j = self.sys.rho(m, &h).apply(k);
            if !p.top.is_removable(j) {
                continue;
            }
            return Some(TreePair {
                top: p.top.remove_caret(j)?,
                decoration: h,
                bottom: p.bottom.remove_caret(k)?,
            });
        }
        None
    }

    pub fn canonical_form(&self, mut p: TreePair<S::Elem>) -> GroupElement<S::Elem> {
        while let Some(r) = self.reduce_once(&p) {
            p = r;
        }
        GroupElement(p)
    }

    /// Expands at bottom leaves, in order.
    pub fn replay(&self, p: &TreePair<S::Elem>, script: &[usize]) -> Result<TreePair<S::Elem>> {
        script.iter().try_fold(p.clone(), |acc, &k| self.expand(&acc, k))
    }

    /// Expansions realizing carets on the top tree at the given leaves.
    fn replay_top(&self, p: &TreePair<S::Elem>, script: &[usize]) -> Result<TreePair<S::Elem>> {
        script.iter().try_fold(p.clone(), |acc, &j| {
            let k = self.sys.rho(acc.level(), &acc.decoration).inverse().apply(j);
            self.expand(&acc, k)
        })
    }

    /// `[T, g, U][U, h, W] = [T, gh, W]` after a common expansion of `U` and `V`.
    pub fn multiply(&self, e1: &GroupElement<S::Elem>, e2: &GroupElement<S::Elem>) -> Result<GroupElement<S::Elem>> {
        let (_, ops1, ops2) = e1.0.bottom.least_common_expansion(&e2.0.top)?;
        let a = self.replay(&e1.0, &ops1)?;
        let b = self.replay_top(&e2.0, &ops2)?;
        debug_assert_eq!(a.bottom, b.top);
        let n = a.level();
        Ok(self.canonical_form(TreePair {
            top: a.top,
            decoration: self.sys.mul(n, &a.decoration, &b.decoration),
            bottom: b.bottom,
        }))
    }

    pub fn invert(&self, e: &GroupElement<S::Elem>) -> GroupElement<S::Elem> {
        let p = &e.0;
        GroupElement(TreePair {
            top: p.bottom.clone(),
            decoration: self.sys.inv(p.level(), &p.decoration),
            bottom: p.top.clone(),
        })
    }

    pub fn pow(&self, e: &GroupElement<S::Elem>, k: i64) -> Result<GroupElement<S::Elem>> {
        let base = if k < 0 { self.invert(e) } else { e.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.multiply(&acc, &base)?;
        }
        Ok(acc)
    }

    /// `e1⁻¹ e2⁻¹ e1 e2`.
    pub fn commutator(&self, e1: &GroupElement<S::Elem>, e2: &GroupElement<S::Elem>) -> Result<GroupElement<S::Elem>> {
        let a = self.multiply(&self.invert(e1), &self.invert(e2))?;
        self.multiply(&self.multiply(&a, e1)?, e2)
    }

    pub fn commutes(&self, e1: &GroupElement<S::Elem>, e2: &GroupElement<S::Elem>) -> Result<bool> {
        Ok(self.multiply(e1, e2)? == self.multiply(e2, e1)?)
    }

    /// Equality of the classes of two triples, decided by expanding both to a
    /// common bottom tree and comparing top trees and decorations.
    pub fn equal_by_expansion(&self, p1: &TreePair<S::Elem>, p2: &TreePair<S::Elem>) -> Result<bool> {
        let (_, ops1, ops2) = p1.bottom.least_common_expansion(&p2.bottom)?;
        let a = self.replay(p1, &ops1)?;
        let b = self.replay(p2, &ops2)?;
        Ok(a.top == b.top && a.decoration == b.decoration)
    }

    fn require(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "the {} system is not {what}",
                self.sys.name()
            )))
        }
    }

    fn require_ac(&self) -> Result<()> {
        let p = self.sys.properties();
        self.require(p.slightly_pure, "slightly pure")?;
        self.require(p.fully_compatible, "fully compatible")?;
        self.require(p.uniform, "uniform")
    }

    /// `[T, g, U] ↦ [T, ρ(g), U]` into `V_d`.
    pub fn pi_map(&self, e: &GroupElement<S::Elem>) -> Result<GroupElement<Permutation>> {
        self.require(self.sys.properties().fully_compatible, "fully compatible")?;
        let v = ThompsonGroup::new(SymmetricSystem::full(self.arity())?).with_max_leaves(self.max_leaves);
        let p = &e.0;
        v.element(TreePair {
            top: p.top.clone(),
            decoration: self.sys.rho(p.level(), &p.decoration),
            bottom: p.bottom.clone(),
        })
    }

    /// Membership in the kernel `𝒦` of the π-map: some representative has
    /// equal trees and a decoration in `ker ρ`.
    pub fn in_kernel_k(&self, e: &GroupElement<S::Elem>) -> Result<bool> {
        self.require(self.sys.properties().fully_compatible, "fully compatible")?;
        let p = &e.0;
        Ok(p.top == p.bottom && self.sys.rho(p.level(), &p.decoration).is_identity())
    }

    /// `δr(T) − δr(U)`, defined when `ρ(g)` fixes the rightmost leaf.
    pub fn theta(&self, e: &GroupElement<S::Elem>) -> Result<i64> {
        let p = &e.0;
        if !self.sys.rho(p.level(), &p.decoration).fixes_last() {
            return Err(Error::Precondition("the π-image moves the rightmost leaf".into()));
        }
        Ok(p.top.right_depth() as i64 - p.bottom.right_depth() as i64)
    }

    pub fn in_d(&self, e: &GroupElement<S::Elem>) -> Result<bool> {
        Ok(self.theta(e)? == 0)
    }

    /// Right depth of the reduced representative of an element of `D_d`.
    pub fn minimal_right_depth(&self, e: &GroupElement<S::Elem>) -> Result<usize> {
        if !self.in_d(e)? {
            return Err(Error::Precondition("element is not in D_d".into()));
        }
        Ok(e.0.bottom.right_depth())
    }

    /// A random element on two random trees with `carets` carets each.
    pub fn random_element(&self, carets: usize, rng: &mut dyn RngCore) -> Result<GroupElement<S::Elem>> {
        let d = self.arity();
        let top = DAryTree::random(d, carets, rng);
        let bottom = DAryTree::random(d, carets, rng);
        let n = top.leaf_count();
        let decoration = self.sys.sample(n, 2, rng).elems.pop().unwrap();
        self.element(TreePair {
            top,
            decoration,
            bottom,
        })
    }

    /// A random element with a representative `[R, g, S]` where `R` and `S`
    /// have right depth `m`, `extra` carets off the right spine, and `ρ(g)`
    /// fixes the last leaf. Its minimal right depth is at most `m`.
    pub fn random_right_depth(&self, m: usize, extra: usize, rng: &mut dyn RngCore) -> Result<GroupElement<S::Elem>> {
        let d = self.arity();
        let grow = |rng: &mut dyn RngCore| -> Result<DAryTree> {
            let mut t = DAryTree::right_vine(d, m);
            for _ in 0..extra {
                let k = rng.gen_range(1..t.leaf_count());
                t = t.add_caret(k)?;
            }
            Ok(t)
        };
        let top = grow(rng)?;
        let bottom = grow(rng)?;
        let n = top.leaf_count();
        let decoration = (0..64)
            .map(|_| self.sys.sample(n, 2, rng).elems.pop().unwrap())
            .find(|g| self.sys.rho(n, g).fixes_last())
            .unwrap_or_else(|| self.sys.identity(n));
        self.element(TreePair {
            top,
            decoration,
            bottom,
        })
    }

    /// `[T_n, 1, U_n]`: `T_n` and `U_n` are the right vine of depth `n` with
    /// two different three-caret trees of right depth 2 grafted at `(d−1)^n`.
    pub fn ac_sequence_element(&self, n: usize) -> Result<GroupElement<S::Elem>> {
        self.require_ac()?;
        let d = self.arity();
        let vine = DAryTree::right_vine(d, n);
        let spine = Address::right_spine(d, n);
        let s1 = DAryTree::caret(d).add_caret(d)?.add_caret(1)?;
        let s2 = DAryTree::caret(d).add_caret(d)?.add_caret(d)?;
        let top = vine.graft(&spine, &s1)?;
        let bottom = vine.graft(&spine, &s2)?;
        let level = top.leaf_count();
        self.element(TreePair {
            top,
            decoration: self.sys.identity(level),
            bottom,
        })
    }

    /// Non-commuting copies of `[x₀, x₁]` supported in `[1 − 1/d^n, 1)`,
    /// embedded with trivial decoration; see [`ab_maps`].
    pub fn ab_pair(&self, n: usize) -> Result<(GroupElement<S::Elem>, GroupElement<S::Elem>)> {
        self.require_ac()?;
        if n == 0 {
            return Err(Error::Precondition("ab_pair is defined for n ≥ 1".into()));
        }
        let (a, b) = ab_maps(self.arity() as u32, n as u32)?;
        Ok((intmap::embed_f(self, &a)?, intmap::embed_f(self, &b)?))
    }

    /// For each `n ≤ max_n`: `ac(n)` lies in `D`, commutes with `samples`
    /// random elements of minimal right depth `m` for every `m ≤ n`, and
    /// `ab_pair(n)` does not commute and has the stated supports.
    pub fn ac_certificate(&self, max_n: usize, samples: usize, seed: u64) -> Result<Certificate> {
        let d = self.arity() as u32;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cert = Certificate::new("asymptotic_commutation")
            .param("d", d)
            .param("system", self.sys.name())
            .param("max_n", max_n)
            .param("samples", samples)
            .param("seed", seed);
        for n in 1..=max_n {
            let e = self.ac_sequence_element(n)?;
            cert.fact(format!("ac({n}) in D"), self.in_d(&e)?, self.display(&e).to_string());
            for m in 1..=n {
                let (mut got, mut tries, mut bad) = (0, 0, None);
                while got < samples && tries < samples * 50 {
                    tries += 1;
                    let x = self.random_right_depth(m, 1 + tries % 4, &mut rng)?;
                    if self.minimal_right_depth(&x)? != m {
                        continue;
                    }
                    got += 1;
                    if bad.is_none() && !self.commutes(&e, &x)? {
                        bad = Some(self.display(&x).to_string());
                    }
                }
                let detail = match &bad {
                    Some(x) => format!("fails on {x}"),
                    None => format!("{got} samples"),
                };
                cert.fact(
                    format!("ac({n}) commutes with E_{m}"),
                    got == samples && bad.is_none(),
                    detail,
                );
            }
            let (a, b) = ab_maps(d, n as u32)?;
            let one = DAdic::one(d);
            let a_lo = one.sub(&DAdic::new(1, n as u32, d));
            let b_lo = one.sub(&DAdic::new(d as i64 + 1, n as u32 + 1, d));
            cert.fact(
                format!("supports of a_{n}, b_{n}"),
                a.supported_in(&a_lo, &one) && b.supported_in(&b_lo, &one),
                format!("a in [{a_lo}, 1), b in [{b_lo}, 1)"),
            );
            let (ea, eb) = self.ab_pair(n)?;
            cert.fact(
                format!("a_{n} b_{n} != b_{n} a_{n}"),
                !self.commutes(&ea, &eb)?,
                format!("a = {a}; b = {b}"),
            );
        }
        Ok(cert)
    }

    pub fn to_record(&self, e: &TreePair<S::Elem>) -> PairRecord {
        PairRecord {
            d: self.arity(),
            system: self.sys.name(),
            top: e.top.to_string(),
            decoration: self
                .sys
                .decoration_key()
                .map(|_| self.sys.format_elem(e.level(), &e.decoration)),
            bottom: e.bottom.to_string(),
        }
    }

    pub fn from_record(&self, r: &PairRecord) -> Result<GroupElement<S::Elem>> {
        if r.d != self.arity() {
            return Err(Error::BaseMismatch);
        }
        if r.system != self.sys.name() {
            return Err(Error::SystemMismatch(format!(
                "expected {}, got {}",
                self.sys.name(),
                r.system
            )));
        }
        let top = DAryTree::parse(&r.top, r.d)?;
        let bottom = DAryTree::parse(&r.bottom, r.d)?;
        let n = bottom.leaf_count();
        let decoration = match &r.decoration {
            Some(t) => self.sys.parse_elem(n, t)?,
            None if self.sys.decoration_key().is_none() => self.sys.identity(n),
            None => return Err(Error::InvalidElement("missing decoration".into())),
        };
        self.element(TreePair {
            top,
            decoration,
            bottom,
        })
    }

    /// `pair d=2 sys=symmetric top=(.(..)) perm=[2,1,3] bottom=(.(..))`.
    pub fn format_pair(&self, p: &TreePair<S::Elem>) -> String {
        let mut s = format!("pair d={} sys={} top={}", self.arity(), self.sys.name(), p.top);
        if let Some(key) = self.sys.decoration_key() {
            s += &format!(" {key}={}", self.sys.format_elem(p.level(), &p.decoration));
        }
        s + &format!(" bottom={}", p.bottom)
    }

    /// Parses the text form written by `format_pair`; errors carry byte offsets.
    pub fn parse_pair(&self, text: &str) -> Result<GroupElement<S::Elem>> {
        let fields = parse_pair_fields(text)?;
        let get = |key: &str| fields.iter().find(|f| f.0 == key);
        let d_field = get("d").ok_or_else(|| Error::parse(text.len(), "missing field d="))?;
        let d: usize = d_field
            .1
            .parse()
            .map_err(|_| Error::parse(d_field.2, format!("bad arity {:?}", d_field.1)))?;
        if d != self.arity() {
            return Err(Error::parse(
                d_field.2,
                format!("arity {d} does not match {}", self.arity()),
            ));
        }
        if let Some(f) = get("sys") {
            if f.1 != self.sys.name() {
                return Err(Error::parse(
                    f.2,
                    format!("system {} does not match {}", f.1, self.sys.name()),
                ));
            }
        }
        let tree = |key: &str| -> Result<DAryTree> {
            let f = get(key).ok_or_else(|| Error::parse(text.len(), format!("missing field {key}=")))?;
            DAryTree::parse(&f.1, d).map_err(|e| e.at_offset(f.2))
        };
        let top = tree("top")?;
        let bottom = tree("bottom")?;
        let n = bottom.leaf_count();
        if top.leaf_count() != n {
            return Err(Error::parse(
                0,
                format!("top has {} leaves, bottom has {n}", top.leaf_count()),
            ));
        }
        let decoration = match self.sys.decoration_key() {
            None => self.sys.identity(n),
            Some(key) => match get(key) {
                Some(f) => self.sys.parse_elem(n, &f.1).map_err(|e| e.at_offset(f.2))?,
                None => self.sys.identity(n),
            },
        };
        self.element(TreePair {
            top,
            decoration,
            bottom,
        })
    }

    pub fn display<'a>(&'a self, e: &'a GroupElement<S::Elem>) -> impl fmt::Display + 'a {
        DisplayPair {
            group: self,
            pair: &e.0,
        }
    }
}

struct DisplayPair<'a, S: CloningSystem> {
    group: &'a ThompsonGroup<S>,
    pair: &'a TreePair<S::Elem>,
}

impl<S: CloningSystem> fmt::Display for DisplayPair<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.group.format_pair(self.pair))
    }
}

/// Splits `key=value` fields on whitespace outside brackets, with the byte
/// offset of each value.
pub fn parse_pair_fields(text: &str) -> Result<Vec<(String, String, usize)>> {
    let mut tokens: Vec<(usize, String)> = Vec::new();
    let mut depth = 0i32;
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth <= 0 {
            if let Some(s) = start.take() {
                tokens.push((s, text[s..i].to_string()));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s, text[s..].to_string()));
    }
    if depth != 0 {
        return Err(Error::parse(text.len(), "unbalanced brackets"));
    }
    let mut iter = tokens.into_iter();
    match iter.next() {
        Some((_, w)) if w == "pair" => {}
        Some((off, w)) => return Err(Error::parse(off, format!("expected 'pair', found {w:?}"))),
        None => return Err(Error::parse(0, "empty input")),
    }
    let mut out: Vec<(String, String, usize)> = Vec::new();
    for (off, tok) in iter {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(off, format!("expected key=value, found {tok:?}")))?;
        if out.iter().any(|f| f.0 == k) {
            return Err(Error::parse(off, format!("duplicate field {k}")));
        }
        if !["d", "sys", "top", "bottom", "perm", "dec"].contains(&k) {
            return Err(Error::parse(off, format!("unknown field {k}")));
        }
        out.push((k.to_string(), v.to_string(), off + k.len() + 1));
    }
    Ok(out)
}

/// The interval maps behind `ab_pair`. With `g₀ = x₀⁻¹x₁⁻¹x₀x₁` in the
/// tree-pair product, `a_n` is `g₀` shrunk onto `[1 − 1/d^n, 1)` and `b_n` is
/// `g₀` shrunk onto the first child of that interval, so the supports overlap
/// without being nested.
pub fn ab_maps(d: u32, n: u32) -> Result<(PLMap, PLMap)> {
    let (x0, x1) = (intmap::x0(d), intmap::x1(d));
    let g0 = x0.invert().then(&x1.invert())?.then(&x0)?.then(&x1)?;
    let start = DAdic::one(d).sub(&DAdic::new(1, n, d));
    Ok((g0.embed(&start, n)?, g0.embed(&start, n + 1)?))
}
