//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cloneforge_core::cocycle::CocycleVector;
use cloneforge_core::intmap::{generator, interval_at};
use cloneforge_core::{Address, CosetHandle, DAdic, PLMap};

/// Every address of length `1..=depth`.
pub fn addresses_up_to(d: u32, depth: usize) -> Vec<Address> {
    let mut out = Vec::new();
    let mut level = vec![Address::root()];
    for _ in 0..depth {
        level = level
            .iter()
            .flat_map(|a| (0..d as usize).map(move |c| a.child(c)))
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// `(v − 1)χ_X` evaluated coset by coset: `+1` at `v·x` for `x ∈ X` with
/// `v·x ∉ X`, and `−1` at `y ∈ X` with `v⁻¹·y ∉ X`. Cosets in `X` are swept
/// through image intervals of depth up to the map depth plus a margin.
pub fn brute_cocycle(v: &PLMap) -> CocycleVector {
    let d = v.base();
    let depth = v.depth() + 2;
    let inv = v.invert();
    let mut out = CocycleVector::new();
    for j in addresses_up_to(d, depth) {
        let x = CosetHandle::of_interval(d, j);
        let vx = x.translate(v);
        if !vx.in_x() {
            out.add_at(vx, 1);
        }
        if !x.translate(&inv).in_x() {
            out.add_at(x, -1);
        }
    }
    out
}

/// `|{x ∈ X : v·x ∉ X}| + |{y ∈ X : v⁻¹·y ∉ X}|` by the same sweep.
pub fn brute_norm_sq(v: &PLMap) -> i64 {
    brute_cocycle(v).norm_sq()
}

fn interval(a: i64, k: u32, d: u32) -> Address {
    interval_at(&DAdic::new(a, k, d), k, d).expect("aligned")
}

/// The second element of the bicentralizer sequence written row by row from
/// its explicit table, valid for `d ≥ 3`.
pub fn v2_table(d: u32) -> PLMap {
    let di = d as i64;
    let (d2, d3) = (di * di, di * di * di);
    let mut rows = vec![(interval(0, 1, d), interval(0, 1, d))];
    for i in 1..=di - 2 {
        rows.push((interval(i, 1, d), interval(d2 + i - 1, 3, d)));
    }
    rows.push((interval(d2 - di, 2, d), interval(d2 + di - 2, 3, d)));
    rows.push((interval(d2 - di + 1, 2, d), interval(d2 + di - 1, 3, d)));
    for j in 2..=di - 2 {
        rows.push((interval(d2 - di + j, 2, d), interval(di + j - 1, 2, d)));
    }
    rows.push((interval(d3 - di, 3, d), interval(2 * di - 2, 2, d)));
    rows.push((interval(d3 - di + 1, 3, d), interval(2 * di - 1, 2, d)));
    for j in 2..=di - 1 {
        rows.push((interval(d3 - di + j, 3, d), interval(j, 1, d)));
    }
    PLMap::from_pieces(d, rows).expect("table tiles [0,1)")
}

pub const LETTERS: [&str; 8] = ["A", "A^-1", "B", "B^-1", "C", "C^-1", "pi0", "pi0^-1"];

pub fn letter_map(name: &str) -> PLMap {
    match name.strip_suffix("^-1") {
        Some(g) => generator(g).unwrap().invert(),
        None => generator(name).unwrap(),
    }
}

/// All words of length `1..=max_len` over the given letters.
pub fn words(letters: &[&'static str], max_len: usize) -> Vec<Vec<&'static str>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<&'static str>> = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut v = w.clone();
                    v.push(*l);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Composite map of a word read as a product of tree pairs: the first letter acts first.
pub fn word_map(word: &[&str]) -> PLMap {
    word.iter()
        .fold(PLMap::identity(2), |acc, l| acc.then(&letter_map(l)).unwrap())
}

pub fn histogram<T: Ord + Clone>(items: impl IntoIterator<Item = T>) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for x in items {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}
