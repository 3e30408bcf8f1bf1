//! Canonical labeling of edge graphs by color refinement with
//! individualization, exhaustive over the remaining ties.
//!
//! Exact for any size; fast enough for the graphs the search visits. Twin
//! vertices (whose transposition is an automorphism) are branched on once.

use std::collections::HashMap;

use super::EdgeGraph;

/// Isomorphism-invariant key: vertex count followed by the packed
/// transition bits in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphKey(Vec<u64>);

/// Canonical vertex order: position `p` holds the original index placed there.
pub fn canonical_order(g: &EdgeGraph) -> Vec<usize> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let colors = refine(g, vec![0; n]);
    let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
    explore(g, colors, &mut best);
    best.expect("at least one leaf").1
}

pub fn canonical_key(g: &EdgeGraph) -> GraphKey {
    key_for(g, &canonical_order(g))
}

/// The graph with vertices listed in canonical order (ids unchanged).
pub fn canonical_form(g: &EdgeGraph) -> EdgeGraph {
    g.permuted(&canonical_order(g))
}

pub fn isomorphic(g: &EdgeGraph, h: &EdgeGraph) -> bool {
    g.len() == h.len() && g.edge_count() == h.edge_count() && canonical_key(g) == canonical_key(h)
}

/// A vertex bijection `g -> h` preserving edges, if one exists.
pub fn isomorphism(g: &EdgeGraph, h: &EdgeGraph) -> Option<HashMap<String, String>> {
    if g.len() != h.len() || g.edge_count() != h.edge_count() {
        return None;
    }
    let og = canonical_order(g);
    let oh = canonical_order(h);
    if key_for(g, &og) != key_for(h, &oh) {
        return None;
    }
    Some(
        og.iter()
            .zip(&oh)
            .map(|(&a, &b)| (g.id(a).to_string(), h.id(b).to_string()))
            .collect(),
    )
}

fn key_for(g: &EdgeGraph, order: &[usize]) -> GraphKey {
    let n = order.len();
    let mut words = vec![n as u64];
    let mut current = 0u64;
    let mut filled = 0;
    for &i in order {
        for &j in order {
            current = (current << 1) | u64::from(g.has_edge(i, j));
            filled += 1;
            if filled == 64 {
                words.push(current);
                current = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        words.push(current << (64 - filled));
    }
    GraphKey(words)
}

fn code_for(g: &EdgeGraph, order: &[usize]) -> Vec<bool> {
    order
        .iter()
        .flat_map(|&i| order.iter().map(move |&j| g.has_edge(i, j)))
        .collect()
}

fn explore(g: &EdgeGraph, colors: Vec<usize>, best: &mut Option<(Vec<bool>, Vec<usize>)>) {
    let n = g.len();
    let Some(cell_color) = first_nontrivial_cell(&colors) else {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| colors[v]);
        let code = code_for(g, &order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == cell_color).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        if tried.iter().any(|&u| twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        explore(g, refine(g, individualize(&colors, v)), best);
    }
}

fn first_nontrivial_cell(colors: &[usize]) -> Option<usize> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &c in colors {
        *counts.entry(c).or_default() += 1;
    }
    counts
        .into_iter()
        .filter(|&(_, k)| k > 1)
        .map(|(c, _)| c)
        .min()
}

fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    colors
        .iter()
        .enumerate()
        .map(|(x, &c)| if x == v { 2 * c } else { 2 * c + 1 })
        .collect()
}

/// Whether swapping `u` and `v` is an automorphism.
fn twins(g: &EdgeGraph, u: usize, v: usize) -> bool {
    if g.has_edge(u, u) != g.has_edge(v, v) || g.has_edge(u, v) != g.has_edge(v, u) {
        return false;
    }
    (0..g.len())
        .filter(|&x| x != u && x != v)
        .all(|x| g.has_edge(u, x) == g.has_edge(v, x) && g.has_edge(x, u) == g.has_edge(x, v))
}

/// Iterated refinement by (color, loop, sorted out-colors, sorted in-colors),
/// renumbering colors by rank of signature so the result is invariant.
fn refine(g: &EdgeGraph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.len();
    let mut classes = count_classes(&colors);
    loop {
        let signatures: Vec<(usize, bool, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut outs: Vec<usize> = g.out_neighbors(v).iter().map(|&w| colors[w]).collect();
                let mut ins: Vec<usize> = g.in_neighbors(v).iter().map(|&w| colors[w]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (colors[v], g.has_edge(v, v), outs, ins)
            })
            .collect();
        let mut distinct = signatures.clone();
        distinct.sort();
        distinct.dedup();
        colors = signatures
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        let next = distinct.len();
        if next == classes {
            return colors;
        }
        classes = next;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}
