//! Seeded random instances for property suites and `selftest`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::filtrating::BoundaryLedger;
use crate::shift::EdgeGraph;
use crate::template::Template;
use crate::trace::{graph_moves, template_moves, GraphCalculus, MoveStep, MoveTrace};

/// Edge graph on `n` vertices "0".."n-1" with each edge present with
/// probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> EdgeGraph {
    let ids = (0..n).map(|i| i.to_string()).collect();
    let adj = (0..n * n).map(|_| rng.gen_bool(density)).collect();
    EdgeGraph::new(ids, adj).expect("square adjacency")
}

/// Random irreducible edge graph on `n` vertices: a Hamiltonian cycle plus
/// random chords.
pub fn random_irreducible_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> EdgeGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut adj: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(density)).collect();
    for i in 0..n {
        adj[order[i] * n + order[(i + 1) % n]] = true;
    }
    let ids = (0..n).map(|i| i.to_string()).collect();
    EdgeGraph::new(ids, adj).expect("square adjacency")
}

/// Splits `total` into `parts` positive summands, uniformly over compositions.
fn composition<R: Rng>(rng: &mut R, total: usize, parts: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, total - 1, parts - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(total);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            part
        })
        .collect()
}

/// Random valid connected template with between 1 and `max_lines` branch
/// lines and at most `max_strips` strips (raised to the line count if
/// smaller). Half-twists are drawn from -1..=2.
pub fn random_template<R: Rng>(rng: &mut R, max_lines: usize, max_strips: usize) -> Template {
    let lines = rng.gen_range(1..=max_lines.max(1));
    let strips = rng.gen_range(lines..=max_strips.max(lines));
    loop {
        let in_counts = composition(rng, strips, lines);
        let out_counts = composition(rng, strips, lines);
        let mut ins: Vec<Vec<usize>> = Vec::new();
        let mut targets: Vec<usize> = (0..strips).collect();
        targets.shuffle(rng);
        let mut next = targets.into_iter();
        for &k in &in_counts {
            ins.push(next.by_ref().take(k).collect());
        }
        let mut outs: Vec<Vec<usize>> = Vec::new();
        let mut s = 0;
        for &k in &out_counts {
            outs.push((s..s + k).collect());
            s += k;
        }
        let line_ids = (0..lines).map(|b| format!("B{b}")).collect();
        let strip_data = (0..strips)
            .map(|s| (format!("s{s}"), rng.gen_range(-1..=2)))
            .collect();
        let t = Template::from_slots(line_ids, &ins, &outs, strip_data);
        if t.validate().is_empty() {
            return t;
        }
    }
}

/// Applies up to `steps` uniformly chosen moves, never exceeding
/// `max_vertices`. Stops early if no move is available.
pub fn random_graph_walk<R: Rng>(
    rng: &mut R,
    g: &EdgeGraph,
    calculus: GraphCalculus,
    steps: usize,
    max_vertices: usize,
) -> (EdgeGraph, MoveTrace) {
    let mut current = g.clone();
    let mut trace = Vec::new();
    for _ in 0..steps {
        let moves: Vec<(MoveStep, EdgeGraph)> = graph_moves(&current, calculus)
            .into_iter()
            .filter(|(_, h)| h.len() <= max_vertices)
            .collect();
        let Some((step, next)) = moves.choose(rng).cloned() else {
            break;
        };
        trace.push(step);
        current = next;
    }
    (current, MoveTrace::new(trace))
}

/// Template analogue of [`random_graph_walk`], bounding the line count.
pub fn random_template_walk<R: Rng>(
    rng: &mut R,
    t: &Template,
    steps: usize,
    max_lines: usize,
) -> (Template, MoveTrace) {
    let mut current = t.clone();
    let mut trace = Vec::new();
    for _ in 0..steps {
        let moves: Vec<(MoveStep, Template)> = template_moves(&current)
            .into_iter()
            .filter(|(_, r)| r.lines().len() <= max_lines)
            .collect();
        let Some((step, next)) = moves.choose(rng).cloned() else {
            break;
        };
        trace.push(step);
        current = next;
    }
    (current, MoveTrace::new(trace))
}

/// Ledger with 1..=`max_components` components per side and genera in
/// 0..=`max_genus`.
pub fn random_ledger<R: Rng>(
    rng: &mut R,
    max_components: usize,
    max_genus: usize,
) -> BoundaryLedger {
    let mut side = || -> Vec<usize> {
        let k = rng.gen_range(1..=max_components.max(1));
        (0..k).map(|_| rng.gen_range(0..=max_genus)).collect()
    };
    let entrance = side();
    let exit = side();
    BoundaryLedger::new(entrance, exit)
}
