//! Finite permutations and the symmetric-group cloning maps `ζ_k^n`.
//!
//! Permutations act on `{1, …, n}` and are stored in one-line notation.
//! Composition is `(σ∘τ)(i) = σ(τ(i))`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n).collect())
    }

    pub fn from_one_line(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidElement(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Product of the given cycles, read right to left, on `{1, …, n}`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut p = Permutation::identity(n);
        for c in cycles.iter().rev() {
            let mut images: Vec<usize> = (1..=n).collect();
            let mut seen = std::collections::HashSet::new();
            for (j, &x) in c.iter().enumerate() {
                if x == 0 || x > n || !seen.insert(x) {
                    return Err(Error::InvalidElement(format!("bad cycle {c:?} for degree {n}")));
                }
                images[x - 1] = c[(j + 1) % c.len()];
            }
            p = Permutation(images).compose(&p)?;
        }
        Ok(p)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut v: Vec<usize> = (1..=n).collect();
        v.swap(a - 1, b - 1);
        Permutation(v)
    }

    /// `j`-th power of the n-cycle `(1 2 … n)`.
    pub fn rotation(n: usize, j: usize) -> Permutation {
        Permutation((0..n).map(|i| (i + j) % n + 1).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation(other.0.iter().map(|&i| self.0[i - 1]).collect()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// The standard cloning map `(σ)ζ_k^n`: position `k` becomes a block of
    /// `d` consecutive positions mapped in order onto a block at `σ(k)`.
    pub fn zeta(&self, k: usize, d: usize) -> Result<Permutation> {
        let n = self.degree();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let s = |i: usize| self.0[i - 1];
        let sk = s(k);
        let e = d - 1;
        let images = (1..=n + e)
            .map(|i| {
                if i <= k && s(i) <= sk {
                    s(i)
                } else if i < k && s(i) > sk {
                    s(i) + e
                } else if i > k + e && s(i - e) < sk {
                    s(i - e)
                } else if i >= k + e && s(i - e) >= sk {
                    s(i - e) + e
                } else {
                    // k < i < k + d − 1
                    sk + i - k
                }
            })
            .collect();
        Ok(Permutation(images))
    }

    /// Partial inverse of [`Permutation::zeta`].
    pub fn unzeta(&self, k: usize, d: usize) -> Option<Permutation> {
        let m = self.degree();
        let e = d - 1;
        if m <= e || k == 0 || k > m - e {
            return None;
        }
        let tk = self.apply(k);
        if (0..d).any(|j| self.apply(k + j) != tk + j) {
            return None;
        }
        let collapse = |x: usize| if x <= tk { x } else { x - e };
        let images: Vec<usize> = (1..=m - e)
            .map(|i| {
                if i <= k {
                    collapse(self.apply(i))
                } else {
                    collapse(self.apply(i + e))
                }
            })
            .collect();
        let sigma = Permutation(images);
        (sigma.zeta(k, d).ok()? == *self).then_some(sigma)
    }

    /// True iff `self` is a power of `(1 2 … n)`.
    pub fn is_cyclic(&self) -> bool {
        let n = self.degree();
        n == 0 || (0..n).all(|i| self.0[i] == (self.0[0] - 1 + i) % n + 1)
    }

    pub fn fixes_last(&self) -> bool {
        self.0.last().is_none_or(|&x| x == self.degree())
    }

    /// Disjoint cycles of length at least two, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    pub fn cycle_string(&self) -> String {
        let cs = self.cycles();
        if cs.is_empty() {
            return "()".into();
        }
        cs.iter()
            .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
            .collect()
    }

    /// All of `S_n`, in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation(cur.clone())];
        while next_permutation(&mut cur) {
            out.push(Permutation(cur.clone()));
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        let mut v: Vec<usize> = (1..=n).collect();
        v.shuffle(rng);
        Permutation(v)
    }

    /// Parses one-line `"[2,3,1]"` or cycle notation `"(1 2)(3 4)"`. For cycle
    /// notation the degree is `degree` if given, otherwise the largest entry.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Permutation> {
        let trimmed = text.trim_start();
        let lead = text.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if let Some(inner) = trimmed.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(lead + trimmed.len(), "expected ']'"))?;
            let mut images = Vec::new();
            let mut offset = lead + 1;
            if !inner.trim().is_empty() {
                for part in inner.split(',') {
                    let x = part
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(offset, format!("bad entry {:?}", part.trim())))?;
                    images.push(x);
                    offset += part.len() + 1;
                }
            }
            let p = Permutation::from_one_line(images).map_err(|e| Error::parse(lead, e.to_string()))?;
            if let Some(n) = degree {
                if n != p.degree() {
                    return Err(Error::parse(lead, format!("expected degree {n}, got {}", p.degree())));
                }
            }
            return Ok(p);
        }
        let bytes = trimmed.as_bytes();
        let mut cycles = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if bytes[i] != b'(' {
                return Err(Error::parse(lead + i, "expected '(' or '['"));
            }
            let close = trimmed[i..]
                .find(')')
                .ok_or_else(|| Error::parse(lead + trimmed.len(), "unclosed cycle"))?
                + i;
            let mut c = Vec::new();
            for tok in trimmed[i + 1..close].split(|ch: char| ch.is_whitespace() || ch == ',') {
                if tok.is_empty() {
                    continue;
                }
                c.push(
                    tok.parse::<usize>()
                        .map_err(|_| Error::parse(lead + i + 1, format!("bad cycle entry {tok:?}")))?,
                );
            }
            cycles.push(c);
            i = close + 1;
        }
        let max = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = degree.unwrap_or(max);
        Permutation::from_cycles(n, &cycles).map_err(|e| Error::parse(lead, e.to_string()))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
