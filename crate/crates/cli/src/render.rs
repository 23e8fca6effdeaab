//! Static tree-pair diagrams: the top tree hangs down, the bottom tree is
//! drawn upside down beneath it, and dashed lines match leaves.

use std::collections::BTreeSet;
use std::fmt::Write;

use cloneforge_core::{Address, DAryTree, Permutation};

pub struct Diagram<'a> {
    pub top: &'a DAryTree,
    /// Leaf `sigma(k)` of the top tree is matched with leaf `k` of the bottom tree.
    pub sigma: &'a Permutation,
    pub bottom: &'a DAryTree,
    pub caption: String,
}

fn node_id(prefix: char, a: &Address) -> String {
    let mut s = prefix.to_string();
    for c in &a.0 {
        write!(s, "_{c}").unwrap();
    }
    s
}

/// Internal vertices of a tree in breadth-first order, then left to right.
fn internal_vertices(t: &DAryTree) -> Vec<Address> {
    let mut set = BTreeSet::new();
    for leaf in t.leaves() {
        for len in 0..leaf.len() {
            set.insert(Address(leaf.0[..len].to_vec()));
        }
    }
    let mut v: Vec<Address> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

pub fn to_dot(diag: &Diagram) -> String {
    let mut out = String::new();
    writeln!(out, "digraph pair {{").unwrap();
    writeln!(out, "  label={:?};", diag.caption).unwrap();
    writeln!(out, "  labelloc=b;").unwrap();
    writeln!(out, "  node [shape=point, width=0.08];").unwrap();
    writeln!(out, "  edge [arrowhead=none];").unwrap();
    for (prefix, tree) in [('t', diag.top), ('b', diag.bottom)] {
        writeln!(out, "  subgraph {} {{", if prefix == 't' { "top" } else { "bottom" }).unwrap();
        writeln!(out, "    ordering=out;").unwrap();
        for (i, leaf) in tree.leaves().iter().enumerate() {
            writeln!(out, "    {} [xlabel=\"{}\"];", node_id(prefix, leaf), i + 1).unwrap();
        }
        for v in internal_vertices(tree) {
            for c in 0..tree.arity() {
                let (parent, child) = (node_id(prefix, &v), node_id(prefix, &v.child(c)));
                // the bottom tree points upward so that its leaves sit above its root
                if prefix == 't' {
                    writeln!(out, "    {parent} -> {child};").unwrap();
                } else {
                    writeln!(out, "    {child} -> {parent};").unwrap();
                }
            }
        }
        writeln!(out, "  }}").unwrap();
    }
    let top_leaves = diag.top.leaves();
    for (k, leaf) in diag.bottom.leaves().iter().enumerate() {
        let source = &top_leaves[diag.sigma.apply(k + 1) - 1];
        writeln!(
            out,
            "  {} -> {} [style=dashed];",
            node_id('t', source),
            node_id('b', leaf)
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

const STEP_X: f64 = 36.0;
const STEP_Y: f64 = 30.0;
const GAP: f64 = 60.0;
const MARGIN: f64 = 24.0;

/// Horizontal position of each vertex: leaves evenly spaced, internal
/// vertices centred over their extreme leaves.
fn x_of(t: &DAryTree, v: &Address) -> f64 {
    let under: Vec<usize> = t
        .leaves()
        .iter()
        .enumerate()
        .filter(|(_, l)| v.is_prefix_of(l))
        .map(|(i, _)| i)
        .collect();
    let mid = (under[0] + under[under.len() - 1]) as f64 / 2.0;
    MARGIN + mid * STEP_X
}

pub fn to_svg(diag: &Diagram) -> String {
    let n = diag.top.leaf_count();
    let (dt, db) = (diag.top.depth() as f64, diag.bottom.depth() as f64);
    let top_leaf_y = MARGIN + dt * STEP_Y;
    let bottom_leaf_y = top_leaf_y + GAP;
    let width = 2.0 * MARGIN + (n.max(2) - 1) as f64 * STEP_X;
    let height = bottom_leaf_y + db * STEP_Y + 2.0 * MARGIN;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<g stroke="black" stroke-width="1.5" fill="none">"#).unwrap();
    let y_top = |v: &Address, leaf: bool| {
        if leaf {
            top_leaf_y
        } else {
            MARGIN + v.len() as f64 * STEP_Y
        }
    };
    let y_bottom = |v: &Address, leaf: bool| {
        if leaf {
            bottom_leaf_y
        } else {
            bottom_leaf_y + (db - v.len() as f64) * STEP_Y
        }
    };
    for (tree, y) in [
        (diag.top, &y_top as &dyn Fn(&Address, bool) -> f64),
        (diag.bottom, &y_bottom),
    ] {
        for v in internal_vertices(tree) {
            for c in 0..tree.arity() {
                let child = v.child(c);
                let leaf = tree.leaf_index(&child).is_some();
                writeln!(
                    out,
                    r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
                    x_of(tree, &v),
                    y(&v, false),
                    x_of(tree, &child),
                    y(&child, leaf)
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r#"<g stroke="gray" stroke-width="1" stroke-dasharray="4 3">"#).unwrap();
    let top_leaves = diag.top.leaves();
    for (k, leaf) in diag.bottom.leaves().iter().enumerate() {
        let source = &top_leaves[diag.sigma.apply(k + 1) - 1];
        writeln!(
            out,
            r#"<line x1="{:.1}" y1="{top_leaf_y:.1}" x2="{:.1}" y2="{bottom_leaf_y:.1}"/>"#,
            x_of(diag.top, source),
            x_of(diag.bottom, leaf)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="10" text-anchor="middle">"#
    )
    .unwrap();
    for (i, leaf) in top_leaves.iter().enumerate() {
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            x_of(diag.top, leaf),
            top_leaf_y + 12.0,
            i + 1
        )
        .unwrap();
    }
    for (i, leaf) in diag.bottom.leaves().iter().enumerate() {
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            x_of(diag.bottom, leaf),
            bottom_leaf_y - 4.0,
            i + 1
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
        width / 2.0,
        height - 8.0,
        escape(&diag.caption)
    )
    .unwrap();
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
