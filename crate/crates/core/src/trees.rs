//! Rooted planar d-ary trees.
//!
//! A tree is stored as the left-to-right list of its leaf addresses. The leaf
//! addresses of a d-ary tree are exactly the interval addresses of the
//! standard partition it describes, so conversion in either direction is free.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dadic::{check_base, shapes_with_leaves, Address, StdPartition};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DAryTree {
    d: usize,
    leaves: Vec<Address>,
}

impl DAryTree {
    pub fn leaf(d: usize) -> DAryTree {
        DAryTree {
            d,
            leaves: vec![Address::root()],
        }
    }

    pub fn caret(d: usize) -> DAryTree {
        DAryTree::leaf(d).add_caret(1).expect("a leaf has leaf 1")
    }

    /// Builds a tree from its leaf addresses, validating the shape.
    pub fn from_leaves(d: usize, leaves: Vec<Address>) -> Result<DAryTree> {
        StdPartition::from_addresses(d as u32, leaves.clone())?;
        Ok(DAryTree { d, leaves })
    }

    pub(crate) fn from_leaves_unchecked(d: usize, leaves: Vec<Address>) -> DAryTree {
        DAryTree { d, leaves }
    }

    /// The right vine: a caret at the root, then one at each rightmost leaf.
    pub fn right_vine(d: usize, depth: usize) -> DAryTree {
        let mut t = DAryTree::leaf(d);
        for _ in 0..depth {
            let n = t.leaf_count();
            t = t.add_caret(n).unwrap();
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaves(&self) -> &[Address] {
        &self.leaves
    }

    pub fn caret_count(&self) -> usize {
        (self.leaves.len() - 1) / (self.d - 1)
    }

    /// Adds a caret to the `k`-th leaf (1-indexed).
    pub fn add_caret(&self, k: usize) -> Result<DAryTree> {
        self.check_index(k)?;
        let at = &self.leaves[k - 1];
        let mut leaves = Vec::with_capacity(self.leaves.len() + self.d - 1);
        leaves.extend_from_slice(&self.leaves[..k - 1]);
        leaves.extend((0..self.d).map(|i| at.child(i)));
        leaves.extend_from_slice(&self.leaves[k..]);
        Ok(DAryTree { d: self.d, leaves })
    }

    /// Removes the caret whose children are leaves `k..k+d−1`, if there is one.
    pub fn remove_caret(&self, k: usize) -> Option<DAryTree> {
        if !self.is_removable(k) {
            return None;
        }
        let parent = self.leaves[k - 1].parent()?;
        let mut leaves = Vec::with_capacity(self.leaves.len() + 1 - self.d);
        leaves.extend_from_slice(&self.leaves[..k - 1]);
        leaves.push(parent);
        leaves.extend_from_slice(&self.leaves[k - 1 + self.d..]);
        Some(DAryTree { d: self.d, leaves })
    }

    /// True when leaves `k..k+d−1` are the children of a single caret.
    pub fn is_removable(&self, k: usize) -> bool {
        if k == 0 || k + self.d - 1 > self.leaves.len() {
            return false;
        }
        let first = &self.leaves[k - 1];
        let Some(parent) = first.parent() else { return false };
        (0..self.d).all(|i| self.leaves[k - 1 + i] == parent.child(i))
    }

    /// Edge distance from the root to the rightmost leaf.
    pub fn right_depth(&self) -> usize {
        self.leaves.last().map_or(0, Address::len)
    }

    pub fn depth(&self) -> usize {
        self.leaves.iter().map(Address::len).max().unwrap_or(0)
    }

    pub fn to_partition(&self) -> StdPartition {
        StdPartition::from_addresses_unchecked(self.d as u32, self.leaves.clone())
    }

    pub fn from_partition(p: &StdPartition) -> DAryTree {
        DAryTree {
            d: p.base() as usize,
            leaves: p.addresses().to_vec(),
        }
    }

    /// 1-based position of a leaf address.
    pub fn leaf_index(&self, a: &Address) -> Option<usize> {
        self.leaves.binary_search(a).ok().map(|i| i + 1)
    }

    /// True when `v` is a vertex (internal node or leaf) of the tree.
    pub fn has_vertex(&self, v: &Address) -> bool {
        let i = self.leaves.partition_point(|a| a < v);
        i < self.leaves.len() && v.is_prefix_of(&self.leaves[i])
    }

    /// The subtree hanging at vertex `v`, re-rooted.
    pub fn subtree_at(&self, v: &Address) -> Option<DAryTree> {
        if !self.has_vertex(v) {
            return None;
        }
        let leaves: Vec<Address> = self.leaves.iter().filter_map(|a| a.strip_prefix(v)).collect();
        Some(DAryTree { d: self.d, leaves })
    }

    /// Replaces the leaf at `v` by the tree `sub`.
    pub fn graft(&self, v: &Address, sub: &DAryTree) -> Result<DAryTree> {
        if sub.d != self.d {
            return Err(Error::BaseMismatch);
        }
        let k = self
            .leaf_index(v)
            .ok_or_else(|| Error::Precondition(format!("{v} is not a leaf")))?;
        let mut leaves = Vec::with_capacity(self.leaves.len() + sub.leaves.len() - 1);
        leaves.extend_from_slice(&self.leaves[..k - 1]);
        leaves.extend(sub.leaves.iter().map(|a| v.concat(a)));
        leaves.extend_from_slice(&self.leaves[k..]);
        Ok(DAryTree { d: self.d, leaves })
    }

    /// Smallest common expansion of two trees, with the caret insertion scripts
    /// (1-based leaf index at time of insertion) that produce it from each input.
    pub fn least_common_expansion(&self, other: &DAryTree) -> Result<(DAryTree, Vec<usize>, Vec<usize>)> {
        if self.d != other.d {
            return Err(Error::BaseMismatch);
        }
        let d = self.d;
        let mut a = self.leaves.clone();
        let mut b = other.leaves.clone();
        let (mut ops_a, mut ops_b) = (Vec::new(), Vec::new());
        let mut i = 0;
        while i < a.len() {
            if a[i] == b[i] {
                i += 1;
            } else if a[i].is_prefix_of(&b[i]) {
                let at = a[i].clone();
                a.splice(i..=i, (0..d).map(|c| at.child(c)));
                ops_a.push(i + 1);
            } else {
                debug_assert!(b[i].is_prefix_of(&a[i]));
                let at = b[i].clone();
                b.splice(i..=i, (0..d).map(|c| at.child(c)));
                ops_b.push(i + 1);
            }
        }
        Ok((DAryTree { d, leaves: a }, ops_a, ops_b))
    }

    pub fn replay(&self, ops: &[usize]) -> Result<DAryTree> {
        ops.iter().try_fold(self.clone(), |t, &k| t.add_caret(k))
    }

    /// True when `self` is obtained from `other` by adding carets.
    pub fn is_expansion_of(&self, other: &DAryTree) -> bool {
        self.d == other.d && other.leaves.iter().all(|v| self.has_vertex(v))
    }

    /// True when both trees are obtained by hanging (possibly different)
    /// subtrees at a common leaf `v` of a common tree.
    pub fn agree_away_from(&self, other: &DAryTree, v: &Address) -> bool {
        if self.d != other.d || !self.has_vertex(v) || !other.has_vertex(v) {
            return false;
        }
        let outside = |t: &DAryTree| {
            t.leaves
                .iter()
                .filter(|a| !v.is_prefix_of(a))
                .cloned()
                .collect::<Vec<_>>()
        };
        outside(self) == outside(other)
    }

    /// Every tree with exactly `m` leaves, in lexicographic order of leaf lists.
    pub fn all_with_leaves(d: usize, m: usize) -> Vec<DAryTree> {
        let mut out: Vec<DAryTree> = shapes_with_leaves(d, m, &Address::root())
            .into_iter()
            .map(|leaves| DAryTree { d, leaves })
            .collect();
        out.sort();
        out
    }

    /// A tree grown from a leaf by `carets` caret insertions at uniformly chosen leaves.
    pub fn random<R: Rng + ?Sized>(d: usize, carets: usize, rng: &mut R) -> DAryTree {
        let mut t = DAryTree::leaf(d);
        for _ in 0..carets {
            let k = rng.gen_range(1..=t.leaf_count());
            t = t.add_caret(k).unwrap();
        }
        t
    }

    pub fn parse(text: &str, d: usize) -> Result<DAryTree> {
        check_base(d)?;
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut leaves = Vec::new();
        let mut path = Vec::new();
        parse_node(bytes, &mut pos, d, &mut path, &mut leaves)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(Error::parse(pos, "trailing input after tree"));
        }
        Ok(DAryTree { d, leaves })
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.leaves.len() {
            Err(Error::IndexOutOfRange {
                index: k,
                len: self.leaves.len(),
            })
        } else {
            Ok(())
        }
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_node(bytes: &[u8], pos: &mut usize, d: usize, path: &mut Vec<u8>, leaves: &mut Vec<Address>) -> Result<()> {
    skip_ws(bytes, pos);
    match bytes.get(*pos) {
        Some(b'.') => {
            *pos += 1;
            leaves.push(Address(path.clone()));
            Ok(())
        }
        Some(b'(') => {
            *pos += 1;
            for i in 0..d {
                skip_ws(bytes, pos);
                if bytes.get(*pos) == Some(&b')') {
                    return Err(Error::parse(
                        *pos,
                        format!("caret closed after {i} children, expected {d}"),
                    ));
                }
                path.push(i as u8);
                parse_node(bytes, pos, d, path, leaves)?;
                path.pop();
            }
            skip_ws(bytes, pos);
            if bytes.get(*pos) != Some(&b')') {
                return Err(Error::parse(*pos, format!("expected ')' after {d} children")));
            }
            *pos += 1;
            Ok(())
        }
        Some(&c) => Err(Error::parse(
            *pos,
            format!("unexpected character {:?} in tree", c as char),
        )),
        None => Err(Error::parse(*pos, "unexpected end of tree")),
    }
}

impl fmt::Display for DAryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &DAryTree, v: &Address, idx: &mut usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if t.leaves.get(*idx) == Some(v) {
                *idx += 1;
                return write!(f, ".");
            }
            write!(f, "(")?;
            for i in 0..t.d {
                go(t, &v.child(i), idx, f)?;
            }
            write!(f, ")")
        }
        go(self, &Address::root(), &mut 0, f)
    }
}

impl fmt::Debug for DAryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DAryTree(d={}, {})", self.d, self)
    }
}
