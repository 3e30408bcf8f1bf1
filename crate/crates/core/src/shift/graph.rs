use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use super::{AdjacencyMatrix, ShiftError};

/// Directed multigraph read off an adjacency matrix: `a_ij` parallel edges
/// from vertex `i` to vertex `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl VertexGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, ShiftError> {
        check_unique(&vertices)?;
        if let Some(&(s, t)) = edges
            .iter()
            .find(|&&(s, t)| s >= vertices.len() || t >= vertices.len())
        {
            return Err(ShiftError::UnknownVertex(format!("#{}", s.max(t))));
        }
        Ok(Self { vertices, edges })
    }

    /// Vertices are named `1..=n`; edges are listed row by row with multiplicity.
    pub fn from_matrix(a: &AdjacencyMatrix) -> Self {
        let n = a.dim();
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..a.get(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Self { vertices, edges }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency_matrix(&self) -> Result<AdjacencyMatrix, ShiftError> {
        let n = self.vertices.len();
        let mut entries = vec![0u64; n * n];
        for &(s, t) in &self.edges {
            entries[s * n + t] += 1;
        }
        AdjacencyMatrix::new(n, entries)
    }

    /// The edge graph: one vertex `e<k>` per edge, and `e_i -> e_j` whenever
    /// `e_i` ends where `e_j` starts.
    pub fn edge_graph(&self) -> EdgeGraph {
        let m = self.edges.len();
        let ids = (1..=m).map(|k| format!("e{k}")).collect();
        let mut adj = vec![false; m * m];
        for (i, &(_, head)) in self.edges.iter().enumerate() {
            for (j, &(tail, _)) in self.edges.iter().enumerate() {
                adj[i * m + j] = head == tail;
            }
        }
        EdgeGraph { ids, adj }
    }
}

/// Free-function form of [`VertexGraph::edge_graph`].
pub fn edge_graph_of(g: &VertexGraph) -> EdgeGraph {
    g.edge_graph()
}

/// Directed graph with at most one edge per ordered vertex pair; its
/// transition matrix presents a vertex shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeGraph {
    ids: Vec<String>,
    adj: Vec<bool>,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    vertices: Vec<&'a str>,
    edges: Vec<[&'a str; 2]>,
}

impl EdgeGraph {
    pub fn new(ids: Vec<String>, adj: Vec<bool>) -> Result<Self, ShiftError> {
        check_unique(&ids)?;
        if adj.len() != ids.len() * ids.len() {
            return Err(ShiftError::ShapeMismatch {
                expected: ids.len() * ids.len(),
                found: adj.len(),
            });
        }
        Ok(Self { ids, adj })
    }

    pub fn from_edges(ids: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, ShiftError> {
        let n = ids.len();
        let mut adj = vec![false; n * n];
        for &(s, t) in edges {
            if s >= n || t >= n {
                return Err(ShiftError::UnknownVertex(format!("#{}", s.max(t))));
            }
            adj[s * n + t] = true;
        }
        Self::new(ids, adj)
    }

    /// Reads a 0/1 matrix as a transition matrix on vertices `1..=n`.
    pub fn from_transition(a: &AdjacencyMatrix) -> Result<Self, ShiftError> {
        if !a.is_zero_one() {
            return Err(ShiftError::NotZeroOne);
        }
        let n = a.dim();
        let ids = (1..=n).map(|i| i.to_string()).collect();
        let adj = (0..n * n).map(|k| a.get(k / n, k % n) == 1).collect();
        Ok(Self { ids, adj })
    }

    /// Edge graph presenting the same shift as an arbitrary adjacency matrix:
    /// 0/1 matrices are taken as transition matrices, anything else goes
    /// through the vertex graph.
    pub fn presenting(a: &AdjacencyMatrix) -> Self {
        Self::from_transition(a).unwrap_or_else(|_| VertexGraph::from_matrix(a).edge_graph())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|v| v == id)
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize, ShiftError> {
        self.index_of(id)
            .ok_or_else(|| ShiftError::UnknownVertex(id.to_string()))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.len() + j]
    }

    pub fn out_neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.has_edge(i, j)).collect()
    }

    pub fn in_neighbors(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.has_edge(i, j)).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n * n)
            .filter(|&k| self.adj[k])
            .map(|k| (k / n, k % n))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count()
    }

    pub fn transition_matrix(&self) -> AdjacencyMatrix {
        let n = self.len().max(1);
        let entries = if self.is_empty() {
            vec![0]
        } else {
            self.adj.iter().map(|&b| u64::from(b)).collect()
        };
        AdjacencyMatrix::new(n, entries).expect("square by construction")
    }

    /// Same vertices, every edge reversed.
    pub fn reverse(&self) -> Self {
        let n = self.len();
        let mut adj = vec![false; n * n];
        for (i, j) in self.edges() {
            adj[j * n + i] = true;
        }
        Self {
            ids: self.ids.clone(),
            adj,
        }
    }

    pub fn periodic_point_count(&self, k: usize) -> BigUint {
        self.transition_matrix().periodic_point_count(k)
    }

    /// Strong connectivity: every ordered pair of vertices is joined by a path.
    pub fn is_irreducible(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let forward = self.reachable_from(0, false);
        let backward = self.reachable_from(0, true);
        forward.iter().all(|&b| b) && backward.iter().all(|&b| b)
    }

    fn reachable_from(&self, start: usize, reversed: bool) -> Vec<bool> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for (w, seen_w) in seen.iter_mut().enumerate() {
                let edge = if reversed {
                    self.has_edge(w, v)
                } else {
                    self.has_edge(v, w)
                };
                if edge && !*seen_w {
                    *seen_w = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Subgraph on the given vertices, in the given order.
    pub(crate) fn permuted(&self, order: &[usize]) -> Self {
        let n = order.len();
        let ids = order.iter().map(|&i| self.ids[i].clone()).collect();
        let mut adj = vec![false; n * n];
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                adj[a * n + b] = self.has_edge(i, j);
            }
        }
        Self { ids, adj }
    }

    /// Returns a copy with every vertex renamed through `rename`.
    pub fn relabeled(&self, rename: &HashMap<String, String>) -> Self {
        let ids = self
            .ids
            .iter()
            .map(|id| rename.get(id).cloned().unwrap_or_else(|| id.clone()))
            .collect();
        Self {
            ids,
            adj: self.adj.clone(),
        }
    }

    fn sorted_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        order
    }

    /// `{vertices: [...], edges: [[src, dst], ...]}` sorted by vertex id.
    pub fn to_json(&self) -> serde_json::Value {
        let order = self.sorted_order();
        let vertices = order.iter().map(|&i| self.ids[i].as_str()).collect();
        let mut edges = Vec::new();
        for &i in &order {
            for &j in &order {
                if self.has_edge(i, j) {
                    edges.push([self.ids[i].as_str(), self.ids[j].as_str()]);
                }
            }
        }
        serde_json::to_value(GraphJson { vertices, edges }).expect("plain data")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let order = self.sorted_order();
        let mut out = format!("digraph \"{name}\" {{\n");
        for &i in &order {
            let _ = writeln!(out, "  \"{}\";", self.ids[i]);
        }
        for &i in &order {
            for &j in &order {
                if self.has_edge(i, j) {
                    let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.ids[i], self.ids[j]);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn check_unique(ids: &[String]) -> Result<(), ShiftError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(ShiftError::DuplicateVertex(id.clone()));
        }
    }
    Ok(())
}

/// Deterministic fresh name: `base`, then `base'`, `base''`, ... until unused.
pub(crate) fn fresh_id(base: String, taken: impl Fn(&str) -> bool) -> String {
    let mut name = base;
    while taken(&name) {
        name.push('\'');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[u64]]) -> AdjacencyMatrix {
        AdjacencyMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Direct construction: list edges, join e_i -> e_j iff head(e_i) = tail(e_j).
    fn brute_edge_graph(edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        edges
            .iter()
            .map(|&(_, h)| edges.iter().map(|&(t, _)| h == t).collect())
            .collect()
    }

    fn rows_of(g: &EdgeGraph) -> Vec<Vec<bool>> {
        (0..g.len())
            .map(|i| (0..g.len()).map(|j| g.has_edge(i, j)).collect())
            .collect()
    }

    #[test]
    fn two_loops_give_complete_edge_graph() {
        let g = VertexGraph::from_matrix(&matrix(&[&[2]]));
        let f = g.edge_graph();
        assert_eq!(f.len(), 2);
        assert_eq!(rows_of(&f), vec![vec![true, true], vec![true, true]]);
        assert_eq!(rows_of(&f), brute_edge_graph(g.edges()));
    }

    #[test]
    fn single_loop_gives_single_loop() {
        let f = VertexGraph::from_matrix(&matrix(&[&[1]])).edge_graph();
        assert_eq!(rows_of(&f), vec![vec![true]]);
    }

    #[test]
    fn two_cycle_edge_graph() {
        let g = VertexGraph::from_matrix(&matrix(&[&[0, 1], &[1, 0]]));
        let f = g.edge_graph();
        assert_eq!(rows_of(&f), vec![vec![false, true], vec![true, false]]);
    }

    #[test]
    fn edge_graph_of_multigraph_is_zero_one() {
        let a = matrix(&[&[2, 1, 0], &[0, 0, 3], &[1, 1, 1]]);
        let g = VertexGraph::from_matrix(&a);
        let f = edge_graph_of(&g);
        assert!(f.transition_matrix().is_zero_one());
        assert_eq!(f.len(), 9);
        assert_eq!(rows_of(&f), brute_edge_graph(g.edges()));
        // The edge shift and the vertex-graph shift have the same periodic data.
        for k in 1..=6 {
            assert_eq!(f.periodic_point_count(k), a.periodic_point_count(k));
        }
    }

    #[test]
    fn irreducibility() {
        let full = EdgeGraph::from_transition(&matrix(&[&[1, 1], &[1, 1]])).unwrap();
        let loops = EdgeGraph::from_transition(&matrix(&[&[1, 0], &[0, 1]])).unwrap();
        let cycle = EdgeGraph::from_transition(&matrix(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(full.is_irreducible());
        assert!(!loops.is_irreducible());
        assert!(cycle.is_irreducible());
    }

    #[test]
    fn json_export_sorted() {
        let g = EdgeGraph::from_edges(vec!["b".into(), "a".into()], &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(
            g.to_json().to_string(),
            r#"{"edges":[["a","a"],["b","a"]],"vertices":["a","b"]}"#
        );
    }

    #[test]
    fn rejects_non_zero_one_transition() {
        assert!(EdgeGraph::from_transition(&matrix(&[&[2]])).is_err());
        assert_eq!(EdgeGraph::presenting(&matrix(&[&[2]])).len(), 2);
    }
}
