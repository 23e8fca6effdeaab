//! d-ary cloning systems `(G_n, ρ_n, κ_k^n)`, the concrete systems used
//! throughout the crate, and checkers for the axioms and structural properties.
//!
//! Cloning maps are right actions: `clone_at(n, k, g)` is `(g)κ_k^n`.

use std::fmt::Debug;
use std::hash::Hash;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dadic::check_base;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finite batch of elements of `G_n`, flagged when it is all of `G_n`.
#[derive(Clone, Debug)]
pub struct Sample<E> {
    pub elems: Vec<E>,
    pub exhaustive: bool,
}

/// Properties a system claims for itself; the checkers test the claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemProperties {
    pub fully_compatible: bool,
    pub pure: bool,
    pub slightly_pure: bool,
    pub uniform: bool,
}

pub trait CloningSystem: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn arity(&self) -> usize;
    fn name(&self) -> String;
    fn identity(&self, n: usize) -> Self::Elem;
    /// The product `gh` in `G_n`.
    fn mul(&self, n: usize, g: &Self::Elem, h: &Self::Elem) -> Self::Elem;
    fn inv(&self, n: usize, g: &Self::Elem) -> Self::Elem;
    fn rho(&self, n: usize, g: &Self::Elem) -> Permutation;
    /// `(g)κ_k^n ∈ G_{n+d−1}` for `1 ≤ k ≤ n`.
    fn clone_at(&self, n: usize, k: usize, g: &Self::Elem) -> Self::Elem;
    /// The unique `g ∈ G_n` with `(g)κ_k^n = g2`, if any.
    fn unclone(&self, n: usize, k: usize, g2: &Self::Elem) -> Option<Self::Elem>;
    /// Whether `g` is a valid element of `G_n`.
    fn contains(&self, n: usize, g: &Self::Elem) -> bool;
    fn sample(&self, n: usize, budget: usize, rng: &mut dyn RngCore) -> Sample<Self::Elem>;
    fn properties(&self) -> SystemProperties;
    fn format_elem(&self, n: usize, g: &Self::Elem) -> String;
    fn parse_elem(&self, n: usize, text: &str) -> Result<Self::Elem>;

    fn is_identity(&self, n: usize, g: &Self::Elem) -> bool {
        *g == self.identity(n)
    }

    /// Field name used for the decoration in the textual element form.
    fn decoration_key(&self) -> Option<&'static str> {
        Some("dec")
    }
}

/// `G_n = {1}`; generates `F_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialSystem {
    d: usize,
}

impl TrivialSystem {
    pub fn new(d: usize) -> Result<TrivialSystem> {
        check_base(d)?;
        Ok(TrivialSystem { d })
    }
}

impl CloningSystem for TrivialSystem {
    type Elem = ();

    fn arity(&self) -> usize {
        self.d
    }
    fn name(&self) -> String {
        "trivial".into()
    }
    fn identity(&self, _: usize) {}
    fn mul(&self, _: usize, _: &(), _: &()) {}
    fn inv(&self, _: usize, _: &()) {}
    fn rho(&self, n: usize, _: &()) -> Permutation {
        Permutation::identity(n)
    }
    fn clone_at(&self, _: usize, _: usize, _: &()) {}
    fn unclone(&self, _: usize, _: usize, _: &()) -> Option<()> {
        Some(())
    }
    fn contains(&self, _: usize, _: &()) -> bool {
        true
    }
    fn sample(&self, _: usize, _: usize, _: &mut dyn RngCore) -> Sample<()> {
        Sample {
            elems: vec![()],
            exhaustive: true,
        }
    }
    fn properties(&self) -> SystemProperties {
        SystemProperties {
            fully_compatible: true,
            pure: true,
            slightly_pure: true,
            uniform: true,
        }
    }
    fn format_elem(&self, _: usize, _: &()) -> String {
        "1".into()
    }
    fn parse_elem(&self, _: usize, text: &str) -> Result<()> {
        match text.trim() {
            "" | "1" | "()" => Ok(()),
            other => Err(Error::parse(0, format!("trivial decoration must be 1, got {other:?}"))),
        }
    }
    fn decoration_key(&self) -> Option<&'static str> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetricVariant {
    /// `S_n`; generates `V_d`.
    Full,
    /// Permutations fixing `n`; generates `V̂_d`.
    Hat,
    /// Powers of `(1 2 … n)`; generates `T_d`.
    Cyclic,
}

/// `G_n ⊆ S_n` with `ρ_n` the inclusion and `κ_k^n = ζ_k^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSystem {
    d: usize,
    variant: SymmetricVariant,
}

impl SymmetricSystem {
    pub fn new(d: usize, variant: SymmetricVariant) -> Result<SymmetricSystem> {
        check_base(d)?;
        Ok(SymmetricSystem { d, variant })
    }

    pub fn full(d: usize) -> Result<SymmetricSystem> {
        SymmetricSystem::new(d, SymmetricVariant::Full)
    }

    pub fn hat(d: usize) -> Result<SymmetricSystem> {
        SymmetricSystem::new(d, SymmetricVariant::Hat)
    }

    pub fn cyclic(d: usize) -> Result<SymmetricSystem> {
        SymmetricSystem::new(d, SymmetricVariant::Cyclic)
    }

    pub fn variant(&self) -> SymmetricVariant {
        self.variant
    }

    fn level_order(&self, n: usize) -> Option<usize> {
        let fact = |m: usize| (1..=m).try_fold(1usize, |acc, x| acc.checked_mul(x));
        match self.variant {
            SymmetricVariant::Full => fact(n),
            SymmetricVariant::Hat => fact(n.saturating_sub(1)),
            SymmetricVariant::Cyclic => Some(n.max(1)),
        }
    }
}

impl CloningSystem for SymmetricSystem {
    type Elem = Permutation;

    fn arity(&self) -> usize {
        self.d
    }
    fn name(&self) -> String {
        match self.variant {
            SymmetricVariant::Full => "symmetric",
            SymmetricVariant::Hat => "hat",
            SymmetricVariant::Cyclic => "cyclic",
        }
        .into()
    }
    fn identity(&self, n: usize) -> Permutation {
        Permutation::identity(n)
    }
    fn mul(&self, _: usize, g: &Permutation, h: &Permutation) -> Permutation {
        g.compose(h).expect("decorations at one level share a degree")
    }
    fn inv(&self, _: usize, g: &Permutation) -> Permutation {
        g.inverse()
    }
    fn rho(&self, _: usize, g: &Permutation) -> Permutation {
        g.clone()
    }
    fn clone_at(&self, _: usize, k: usize, g: &Permutation) -> Permutation {
        g.zeta(k, self.d).expect("clone index within range")
    }
    fn unclone(&self, n: usize, k: usize, g2: &Permutation) -> Option<Permutation> {
        if g2.degree() != n + self.d - 1 {
            return None;
        }
        g2.unzeta(k, self.d).filter(|g| self.contains(n, g))
    }
    fn contains(&self, n: usize, g: &Permutation) -> bool {
        g.degree() == n
            && match self.variant {
                SymmetricVariant::Full => true,
                SymmetricVariant::Hat => g.fixes_last(),
                SymmetricVariant::Cyclic => g.is_cyclic(),
            }
    }
    fn sample(&self, n: usize, budget: usize, rng: &mut dyn RngCore) -> Sample<Permutation> {
        if self.level_order(n).is_some_and(|m| m <= budget.max(1)) {
            let elems = match self.variant {
                SymmetricVariant::Full => Permutation::all(n),
                SymmetricVariant::Hat => Permutation::all(n.saturating_sub(1))
                    .into_iter()
                    .map(|p| {
                        let mut v = p.images().to_vec();
                        if n > 0 {
                            v.push(n);
                        }
                        Permutation::from_one_line(v).unwrap()
                    })
                    .collect(),
                SymmetricVariant::Cyclic => (0..n.max(1)).map(|j| Permutation::rotation(n, j)).collect(),
            };
            return Sample {
                elems,
                exhaustive: true,
            };
        }
        let mut elems = vec![Permutation::identity(n)];
        while elems.len() < budget {
            let p = match self.variant {
                SymmetricVariant::Full => Permutation::random(n, rng),
                SymmetricVariant::Hat => {
                    let mut v = Permutation::random(n - 1, rng).images().to_vec();
                    v.push(n);
                    Permutation::from_one_line(v).unwrap()
                }
                SymmetricVariant::Cyclic => Permutation::rotation(n, rng.gen_range(0..n)),
            };
            elems.push(p);
        }
        Sample {
            elems,
            exhaustive: false,
        }
    }
    fn properties(&self) -> SystemProperties {
        let hat = self.variant == SymmetricVariant::Hat;
        SystemProperties {
            fully_compatible: true,
            pure: false,
            slightly_pure: hat,
            uniform: true,
        }
    }
    fn format_elem(&self, _: usize, g: &Permutation) -> String {
        g.to_string()
    }
    fn parse_elem(&self, n: usize, text: &str) -> Result<Permutation> {
        let p = Permutation::parse(text, Some(n))?;
        if !self.contains(n, &p) {
            return Err(Error::InvalidElement(format!(
                "{p} is not in the {} system at level {n}",
                self.name()
            )));
        }
        Ok(p)
    }
    fn decoration_key(&self) -> Option<&'static str> {
        Some("perm")
    }
}

/// A group usable as the coordinate group of [`ProductEndoSystem`], together
/// with a family of endomorphisms.
pub trait BaseGroup: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;
    type Endo: Clone + Debug + PartialEq + Send + Sync;

    fn name(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn apply(&self, phi: &Self::Endo, a: &Self::Elem) -> Self::Elem;
    /// Preimage of `a` under `phi`, if any.
    fn preimage(&self, phi: &Self::Endo, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_injective(&self, phi: &Self::Endo) -> bool;
    fn is_identity_endo(&self, phi: &Self::Endo) -> bool;
    fn identity_endo(&self) -> Self::Endo;
    /// All elements, when the group is finite.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn parse(&self, text: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
}

/// `(ℤ, +)` with endomorphisms `x ↦ c·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integers {
    /// Random samples are drawn from `[-range, range]`.
    pub range: i64,
}

impl Default for Integers {
    fn default() -> Self {
        Integers { range: 50 }
    }
}

impl BaseGroup for Integers {
    type Elem = i64;
    type Endo = i64;

    fn name(&self) -> String {
        "Z".into()
    }
    fn identity(&self) -> i64 {
        0
    }
    fn op(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn inv(&self, a: &i64) -> i64 {
        -a
    }
    fn apply(&self, c: &i64, a: &i64) -> i64 {
        c * a
    }
    fn preimage(&self, c: &i64, a: &i64) -> Option<i64> {
        (*c != 0 && a % c == 0).then(|| a / c)
    }
    fn is_injective(&self, c: &i64) -> bool {
        *c != 0
    }
    fn is_identity_endo(&self, c: &i64) -> bool {
        *c == 1
    }
    fn identity_endo(&self) -> i64 {
        1
    }
    fn elements(&self) -> Option<Vec<i64>> {
        None
    }
    fn random(&self, rng: &mut dyn RngCore) -> i64 {
        rng.gen_range(-self.range..=self.range)
    }
    fn parse(&self, text: &str) -> Result<i64> {
        text.trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad integer {text:?}")))
    }
    fn format(&self, a: &i64) -> String {
        a.to_string()
    }
}

/// `ℤ/m` with endomorphisms `x ↦ c·x mod m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclic {
    pub m: u64,
}

impl BaseGroup for Cyclic {
    type Elem = u64;
    type Endo = u64;

    fn name(&self) -> String {
        format!("Z/{}", self.m)
    }
    fn identity(&self) -> u64 {
        0
    }
    fn op(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.m
    }
    fn inv(&self, a: &u64) -> u64 {
        (self.m - a % self.m) % self.m
    }
    fn apply(&self, c: &u64, a: &u64) -> u64 {
        (c % self.m) * a % self.m
    }
    fn preimage(&self, c: &u64, a: &u64) -> Option<u64> {
        (0..self.m).find(|x| self.apply(c, x) == *a)
    }
    fn is_injective(&self, c: &u64) -> bool {
        num_integer::gcd(*c % self.m, self.m) == 1
    }
    fn is_identity_endo(&self, c: &u64) -> bool {
        c % self.m == 1 % self.m
    }
    fn identity_endo(&self) -> u64 {
        1
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.m).collect())
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.m)
    }
    fn parse(&self, text: &str) -> Result<u64> {
        let x: u64 = text
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad residue {text:?}")))?;
        if x >= self.m {
            return Err(Error::parse(0, format!("residue {x} not below {}", self.m)));
        }
        Ok(x)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductVariant {
    /// `Π^n(G) = G^n`.
    Full,
    /// `Ψ^n(G) = {1} × G^{n−1}`.
    Restricted,
}

/// Direct-product system: `(g_1,…,g_n)κ_k = (g_1,…,g_{k−1}, φ_1(g_k),…,φ_d(g_k), g_{k+1},…,g_n)`
/// with trivial `ρ`.
#[derive(Clone, Debug)]
pub struct ProductEndoSystem<G: BaseGroup> {
    group: G,
    endos: Vec<G::Endo>,
    variant: ProductVariant,
}

impl<G: BaseGroup> ProductEndoSystem<G> {
    pub fn new(group: G, endos: Vec<G::Endo>, variant: ProductVariant) -> Result<Self> {
        check_base(endos.len())?;
        if let Some(i) = endos.iter().position(|phi| !group.is_injective(phi)) {
            return Err(Error::Precondition(format!(
                "endomorphism {} ({:?}) is not injective",
                i + 1,
                endos[i]
            )));
        }
        Ok(ProductEndoSystem { group, endos, variant })
    }

    pub fn identities(group: G, d: usize, variant: ProductVariant) -> Result<Self> {
        let e = group.identity_endo();
        ProductEndoSystem::new(group, vec![e; d], variant)
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn variant(&self) -> ProductVariant {
        self.variant
    }
}

impl<G: BaseGroup> CloningSystem for ProductEndoSystem<G> {
    type Elem = Vec<G::Elem>;

    fn arity(&self) -> usize {
        self.endos.len()
    }
    fn name(&self) -> String {
        "endo".into()
    }
    fn identity(&self, n: usize) -> Vec<G::Elem> {
        vec![self.group.identity(); n]
    }
    fn mul(&self, _: usize, g: &Vec<G::Elem>, h: &Vec<G::Elem>) -> Vec<G::Elem> {
        g.iter().zip(h).map(|(a, b)| self.group.op(a, b)).collect()
    }
    fn inv(&self, _: usize, g: &Vec<G::Elem>) -> Vec<G::Elem> {
        g.iter().map(|a| self.group.inv(a)).collect()
    }
    fn rho(&self, n: usize, _: &Vec<G::Elem>) -> Permutation {
        Permutation::identity(n)
    }
    fn clone_at(&self, _: usize, k: usize, g: &Vec<G::Elem>) -> Vec<G::Elem> {
        let mut out = Vec::with_capacity(g.len() + self.endos.len() - 1);
        out.extend_from_slice(&g[..k - 1]);
        out.extend(self.endos.iter().map(|phi| self.group.apply(phi, &g[k - 1])));
        out.extend_from_slice(&g[k..]);
        out
    }
    fn unclone(&self, n: usize, k: usize, g2: &Vec<G::Elem>) -> Option<Vec<G::Elem>> {
        let d = self.endos.len();
        if g2.len() != n + d - 1 || k == 0 || k > n {
            return None;
        }
        let x = self.group.preimage(&self.endos[0], &g2[k - 1])?;
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&g2[..k - 1]);
        out.push(x);
        out.extend_from_slice(&g2[k - 1 + d..]);
        (self.clone_at(n, k, &out) == *g2 && self.contains(n, &out)).then_some(out)
    }
    fn contains(&self, n: usize, g: &Vec<G::Elem>) -> bool {
        g.len() == n
            && match self.variant {
                ProductVariant::Full => true,
                ProductVariant::Restricted => g.first().is_none_or(|x| *x == self.group.identity()),
            }
    }
    fn sample(&self, n: usize, budget: usize, rng: &mut dyn RngCore) -> Sample<Vec<G::Elem>> {
        let free = match self.variant {
            ProductVariant::Full => n,
            ProductVariant::Restricted => n.saturating_sub(1),
        };
        let lead = n - free;
        if let Some(all) = self.group.elements() {
            let total = (all.len() as u128).checked_pow(free as u32);
            if total.is_some_and(|t| t <= budget.max(1) as u128) {
                let mut elems = vec![vec![self.group.identity(); lead]];
                for _ in 0..free {
                    elems = elems
                        .into_iter()
                        .flat_map(|prefix| {
                            all.iter().map(move |x| {
                                let mut v = prefix.clone();
                                v.push(x.clone());
                                v
                            })
                        })
                        .collect();
                }
                return Sample {
                    elems,
                    exhaustive: true,
                };
            }
        }
        let mut elems = vec![self.identity(n)];
        while elems.len() < budget {
            let mut v = vec![self.group.identity(); lead];
            v.extend((0..free).map(|_| self.group.random(rng)));
            elems.push(v);
        }
        Sample {
            elems,
            exhaustive: false,
        }
    }
    fn properties(&self) -> SystemProperties {
        let uniform = self.endos.iter().all(|phi| self.group.is_identity_endo(phi));
        SystemProperties {
            fully_compatible: true,
            pure: true,
            slightly_pure: true,
            uniform,
        }
    }
    fn format_elem(&self, _: usize, g: &Vec<G::Elem>) -> String {
        format!(
            "({})",
            g.iter().map(|x| self.group.format(x)).collect::<Vec<_>>().join(",")
        )
    }
    fn parse_elem(&self, n: usize, text: &str) -> Result<Vec<G::Elem>> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "tuple decoration must be written (g1,...,gn)"))?;
        let v = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|s| self.group.parse(s))
                .collect::<Result<Vec<_>>>()?
        };
        if !self.contains(n, &v) {
            return Err(Error::InvalidElement(format!(
                "{t} is not in the endo system at level {n}"
            )));
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Verified on every element of every tested level.
    Holds,
    /// Verified on a strict sample of some level.
    HoldsOnSample,
    Fails,
}

/// A replayable counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub level: usize,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub i: Option<usize>,
    pub g: String,
    pub h: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub system: String,
    pub d: usize,
    pub levels: Vec<usize>,
    /// Number of elements drawn at each tested level.
    pub sample_sizes: Vec<usize>,
    /// Number of individual identities evaluated.
    pub cases: u64,
    pub seed: u64,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Fails
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    C1,
    C2,
    C3,
    FullyCompatible,
    Pure,
    SlightlyPure,
    Uniform,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::C1,
        Property::C2,
        Property::C3,
        Property::FullyCompatible,
        Property::Pure,
        Property::SlightlyPure,
        Property::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::C1 => "C1",
            Property::C2 => "C2",
            Property::C3 => "C3",
            Property::FullyCompatible => "fully_compatible",
            Property::Pure => "pure",
            Property::SlightlyPure => "slightly_pure",
            Property::Uniform => "uniform",
        }
    }
}

/// Checks `property` at every level `1..=max_level`, drawing up to `budget`
/// elements per level from a ChaCha stream seeded with `seed`.
pub fn check<S: CloningSystem>(sys: &S, property: Property, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport {
        property: property.name().into(),
        system: sys.name(),
        d: sys.arity(),
        levels: Vec::new(),
        sample_sizes: Vec::new(),
        cases: 0,
        seed,
        verdict: Verdict::Holds,
        witness: None,
    };
    for n in 1..=max_level {
        let sample = sys.sample(n, budget, &mut rng);
        report.levels.push(n);
        report.sample_sizes.push(sample.elems.len());
        if !sample.exhaustive {
            report.verdict = Verdict::HoldsOnSample;
        }
        let outcome = match property {
            Property::C1 => level_c1(sys, n, &sample.elems, &mut report.cases),
            Property::C2 => level_c2(sys, n, &sample.elems, &mut report.cases),
            Property::C3 => level_c3(sys, n, &sample.elems, false, &mut report.cases),
            Property::FullyCompatible => level_c3(sys, n, &sample.elems, true, &mut report.cases),
            Property::Pure => level_pure(sys, n, &sample.elems, false, &mut report.cases),
            Property::SlightlyPure => level_pure(sys, n, &sample.elems, true, &mut report.cases),
            Property::Uniform => level_uniform(sys, n, &sample.elems, &mut report.cases),
        };
        if let Err(w) = outcome {
            report.verdict = Verdict::Fails;
            report.witness = Some(w);
            break;
        }
    }
    report
}

pub fn check_c1<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::C1, max_level, budget, seed)
}

pub fn check_c2<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::C2, max_level, budget, seed)
}

pub fn check_c3<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::C3, max_level, budget, seed)
}

pub fn check_fully_compatible<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::FullyCompatible, max_level, budget, seed)
}

pub fn check_pure<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::Pure, max_level, budget, seed)
}

pub fn check_slightly_pure<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::SlightlyPure, max_level, budget, seed)
}

pub fn check_uniform<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> CheckReport {
    check(sys, Property::Uniform, max_level, budget, seed)
}

/// Runs every checker.
pub fn classify<S: CloningSystem>(sys: &S, max_level: usize, budget: usize, seed: u64) -> Vec<CheckReport> {
    Property::ALL
        .iter()
        .map(|&p| check(sys, p, max_level, budget, seed))
        .collect()
}

fn witness<S: CloningSystem>(sys: &S, n: usize, g: &S::Elem, h: Option<&S::Elem>, detail: String) -> Witness {
    Witness {
        level: n,
        k: None,
        l: None,
        i: None,
        g: sys.format_elem(n, g),
        h: h.map(|h| sys.format_elem(n, h)),
        detail,
    }
}

fn level_c1<S: CloningSystem>(
    sys: &S,
    n: usize,
    elems: &[S::Elem],
    cases: &mut u64,
) -> std::result::Result<(), Witness> {
    let m = n + sys.arity() - 1;
    for g in elems {
        for h in elems {
            let gh = sys.mul(n, g, h);
            let rho_h = sys.rho(n, h);
            for k in 1..=n {
                *cases += 1;
                let lhs = sys.clone_at(n, k, &gh);
                let rhs = sys.mul(m, &sys.clone_at(n, rho_h.apply(k), g), &sys.clone_at(n, k, h));
                if lhs != rhs {
                    let detail = format!(
                        "(gh)κ_k = {} but (g)κ_ρ(h)k (h)κ_k = {}",
                        sys.format_elem(m, &lhs),
                        sys.format_elem(m, &rhs)
                    );
                    return Err(Witness {
                        k: Some(k),
                        ..witness(sys, n, g, Some(h), detail)
                    });
                }
            }
        }
    }
    Ok(())
}

fn level_c2<S: CloningSystem>(
    sys: &S,
    n: usize,
    elems: &[S::Elem],
    cases: &mut u64,
) -> std::result::Result<(), Witness> {
    let e = sys.arity() - 1;
    let m = n + e;
    for g in elems {
        for k in 1..=n {
            for l in k + 1..=n {
                *cases += 1;
                let lhs = sys.clone_at(m, k, &sys.clone_at(n, l, g));
                let rhs = sys.clone_at(m, l + e, &sys.clone_at(n, k, g));
                if lhs != rhs {
                    let detail = format!(
                        "((g)κ_l)κ_k = {} but ((g)κ_k)κ_(l+d-1) = {}",
                        sys.format_elem(m + e, &lhs),
                        sys.format_elem(m + e, &rhs)
                    );
                    return Err(Witness {
                        k: Some(k),
                        l: Some(l),
                        ..witness(sys, n, g, None, detail)
                    });
                }
            }
        }
    }
    Ok(())
}

fn level_c3<S: CloningSystem>(
    sys: &S,
    n: usize,
    elems: &[S::Elem],
    all_indices: bool,
    cases: &mut u64,
) -> std::result::Result<(), Witness> {
    let d = sys.arity();
    for g in elems {
        let zeta_base = sys.rho(n, g);
        for k in 1..=n {
            let lhs = sys.rho(n + d - 1, &sys.clone_at(n, k, g));
            let rhs = zeta_base.zeta(k, d).expect("k in range");
            for i in 1..=n + d - 1 {
                if !all_indices && (k..k + d).contains(&i) {
                    continue;
                }
                *cases += 1;
                if lhs.apply(i) != rhs.apply(i) {
                    let detail = format!("ρ((g)κ_k)(i) = {} but (ρ(g))ζ_k(i) = {}", lhs.apply(i), rhs.apply(i));
                    return Err(Witness {
                        k: Some(k),
                        i: Some(i),
                        ..witness(sys, n, g, None, detail)
                    });
                }
            }
        }
    }
    Ok(())
}

fn level_pure<S: CloningSystem>(
    sys: &S,
    n: usize,
    elems: &[S::Elem],
    slightly: bool,
    cases: &mut u64,
) -> std::result::Result<(), Witness> {
    for g in elems {
        *cases += 1;
        let r = sys.rho(n, g);
        let ok = if slightly { r.fixes_last() } else { r.is_identity() };
        if !ok {
            return Err(witness(sys, n, g, None, format!("ρ(g) = {}", r.cycle_string())));
        }
    }
    Ok(())
}

fn level_uniform<S: CloningSystem>(
    sys: &S,
    n: usize,
    elems: &[S::Elem],
    cases: &mut u64,
) -> std::result::Result<(), Witness> {
    let d = sys.arity();
    let m = n + d - 1;
    for g in elems {
        for k in 1..=n {
            let gk = sys.clone_at(n, k, g);
            let reference = sys.clone_at(m, k, &gk);
            for l in k + 1..k + d {
                *cases += 1;
                let other = sys.clone_at(m, l, &gk);
                if other != reference {
                    let detail = format!(
                        "((g)κ_k)κ_k = {} but ((g)κ_k)κ_l = {}",
                        sys.format_elem(m + d - 1, &reference),
                        sys.format_elem(m + d - 1, &other)
                    );
                    return Err(Witness {
                        k: Some(k),
                        l: Some(l),
                        ..witness(sys, n, g, None, detail)
                    });
                }
            }
        }
    }
    Ok(())
}
