//! State splitting, amalgamation and edge expansion on edge graphs.
//!
//! Splits are binary: a vertex `v` becomes `va` and `vb`. An n-ary split is a
//! sequence of binary ones. Fresh names are derived from the parent id so a
//! recorded move sequence replays to the same labels.

use serde::{Deserialize, Serialize};

use super::graph::fresh_id;
use super::{EdgeGraph, ShiftError};

/// Which side of a vertex a split or amalgamation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
}

impl EdgeGraph {
    /// Out-split `v`: the out-edges of `v` into `block` go to `va`, the rest
    /// to `vb`; every in-edge of `v` is copied to both.
    ///
    /// A self-loop at `v` is one out-edge (assigned to the block that owns
    /// it) and, as an in-edge, is copied toward both `va` and `vb`.
    pub fn out_split(&self, v: &str, block: &[String]) -> Result<EdgeGraph, ShiftError> {
        let vi = self.require(v)?;
        let outs = self.out_neighbors(vi);
        if outs.len() < 2 {
            return Err(ShiftError::DegreeTooSmall {
                vertex: v.to_string(),
                direction: Direction::Out,
                degree: outs.len(),
            });
        }
        let first = self.block_indices(vi, &outs, block)?;

        let taken = |name: &str| self.ids().iter().any(|id| id == name && id != v);
        let va = fresh_id(format!("{v}a"), taken);
        let vb = fresh_id(format!("{v}b"), |name| taken(name) || name == va);

        let n = self.len();
        let mut ids: Vec<String> = Vec::with_capacity(n + 1);
        let mut new_index = vec![0usize; n];
        for (i, id) in self.ids().iter().enumerate() {
            new_index[i] = ids.len();
            if i == vi {
                ids.push(va.clone());
                ids.push(vb.clone());
            } else {
                ids.push(id.clone());
            }
        }
        let a = new_index[vi];
        let b = a + 1;
        let mut edges = Vec::new();
        for (x, y) in self.edges() {
            let source = if x == vi {
                if first.contains(&y) {
                    a
                } else {
                    b
                }
            } else {
                new_index[x]
            };
            if y == vi {
                edges.push((source, a));
                edges.push((source, b));
            } else {
                edges.push((source, new_index[y]));
            }
        }
        EdgeGraph::from_edges(ids, &edges)
    }

    /// In-split: reverse, out-split, reverse back. `block` lists in-neighbors.
    pub fn in_split(&self, v: &str, block: &[String]) -> Result<EdgeGraph, ShiftError> {
        self.reverse()
            .out_split(v, block)
            .map(|g| g.reverse())
            .map_err(|e| match e {
                ShiftError::DegreeTooSmall { vertex, degree, .. } => ShiftError::DegreeTooSmall {
                    vertex,
                    direction: Direction::In,
                    degree,
                },
                other => other,
            })
    }

    fn block_indices(
        &self,
        vi: usize,
        neighbors: &[usize],
        block: &[String],
    ) -> Result<Vec<usize>, ShiftError> {
        let mut first = Vec::with_capacity(block.len());
        for id in block {
            let j = self.require(id)?;
            if !neighbors.contains(&j) {
                return Err(ShiftError::InvalidPartition(format!(
                    "`{id}` is not a neighbor of `{}`",
                    self.id(vi)
                )));
            }
            if !first.contains(&j) {
                first.push(j);
            }
        }
        if first.is_empty() || first.len() == neighbors.len() {
            return Err(ShiftError::InvalidPartition(format!(
                "block must be a nonempty proper subset of the {} neighbors of `{}`",
                neighbors.len(),
                self.id(vi)
            )));
        }
        Ok(first)
    }

    /// Merge `v1` and `v2` into one vertex, undoing an out-split
    /// (`Direction::Out`) or an in-split (`Direction::In`).
    pub fn amalgamate(
        &self,
        v1: &str,
        v2: &str,
        direction: Direction,
    ) -> Result<EdgeGraph, ShiftError> {
        match direction {
            Direction::Out => self.out_amalgamate(v1, v2),
            Direction::In => self.reverse().out_amalgamate(v1, v2).map(|g| g.reverse()),
        }
    }

    fn out_amalgamate(&self, v1: &str, v2: &str) -> Result<EdgeGraph, ShiftError> {
        let i1 = self.require(v1)?;
        let i2 = self.require(v2)?;
        let reject = |reason: &str| ShiftError::NotAmalgamable {
            first: v1.to_string(),
            second: v2.to_string(),
            reason: reason.to_string(),
        };
        if i1 == i2 {
            return Err(reject("a vertex cannot be merged with itself"));
        }
        let n = self.len();
        if (0..n).any(|x| self.has_edge(x, i1) != self.has_edge(x, i2)) {
            return Err(reject("predecessor sets differ"));
        }
        if (0..n).any(|y| y != i2 && self.has_edge(i1, y) && self.has_edge(i2, y)) {
            return Err(reject("successor sets overlap"));
        }
        if self.out_neighbors(i1).is_empty() || self.out_neighbors(i2).is_empty() {
            return Err(reject("a merged vertex has no successors"));
        }
        let (keep, drop) = if i1 < i2 { (i1, i2) } else { (i2, i1) };
        let merged = merged_name(self, v1, v2);

        let mut ids = Vec::with_capacity(n - 1);
        let mut new_index = vec![usize::MAX; n];
        for (i, id) in self.ids().iter().enumerate() {
            if i == drop {
                continue;
            }
            new_index[i] = ids.len();
            ids.push(if i == keep {
                merged.clone()
            } else {
                id.clone()
            });
        }
        new_index[drop] = new_index[keep];
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&(_, y)| y != i2)
            .map(|(x, y)| (new_index[x], new_index[y]))
            .collect();
        EdgeGraph::from_edges(ids, &edges)
    }

    /// Subdivide the edge `from -> to` by a fresh vertex `from~to`.
    pub fn expand(&self, from: &str, to: &str) -> Result<EdgeGraph, ShiftError> {
        let u = self.require(from)?;
        let w = self.require(to)?;
        if !self.has_edge(u, w) {
            return Err(ShiftError::MissingEdge {
                from: from.to_string(),
                to: to.to_string(),
            });
        }
        let z = fresh_id(format!("{from}~{to}"), |name| self.index_of(name).is_some());
        let n = self.len();
        let mut ids = self.ids().to_vec();
        ids.push(z);
        let mut edges: Vec<_> = self.edges().into_iter().filter(|&e| e != (u, w)).collect();
        edges.push((u, n));
        edges.push((n, w));
        EdgeGraph::from_edges(ids, &edges)
    }

    /// Remove a vertex with exactly one predecessor and one successor,
    /// joining them directly. Inverse of [`EdgeGraph::expand`].
    pub fn contract(&self, vertex: &str) -> Result<EdgeGraph, ShiftError> {
        let z = self.require(vertex)?;
        let reject = |reason: &str| ShiftError::NotContractible {
            vertex: vertex.to_string(),
            reason: reason.to_string(),
        };
        let preds = self.in_neighbors(z);
        let succs = self.out_neighbors(z);
        if preds.len() != 1 || succs.len() != 1 {
            return Err(reject("needs in-degree 1 and out-degree 1"));
        }
        let (u, w) = (preds[0], succs[0]);
        if u == z || w == z {
            return Err(reject("vertex carries a self-loop"));
        }
        if self.has_edge(u, w) {
            return Err(reject("contraction would create a parallel edge"));
        }
        let mut new_index = vec![usize::MAX; self.len()];
        let mut ids = Vec::with_capacity(self.len() - 1);
        for (i, id) in self.ids().iter().enumerate() {
            if i != z {
                new_index[i] = ids.len();
                ids.push(id.clone());
            }
        }
        let mut edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&(x, y)| x != z && y != z)
            .map(|(x, y)| (new_index[x], new_index[y]))
            .collect();
        edges.push((new_index[u], new_index[w]));
        EdgeGraph::from_edges(ids, &edges)
    }
}

/// `pa` + `pb` merge back to `p` when that name is free; otherwise `v1+v2`.
fn merged_name(g: &EdgeGraph, v1: &str, v2: &str) -> String {
    let taken = |name: &str| g.ids().iter().any(|id| id == name && id != v1 && id != v2);
    for (x, y) in [(v1, v2), (v2, v1)] {
        if let (Some(p), Some(q)) = (x.strip_suffix('a'), y.strip_suffix('b')) {
            if p == q && !p.is_empty() && !taken(p) {
                return p.to_string();
            }
        }
    }
    fresh_id(format!("{v1}+{v2}"), taken)
}

pub fn out_split(g: &EdgeGraph, v: &str, block: &[String]) -> Result<EdgeGraph, ShiftError> {
    g.out_split(v, block)
}

pub fn in_split(g: &EdgeGraph, v: &str, block: &[String]) -> Result<EdgeGraph, ShiftError> {
    g.in_split(v, block)
}

pub fn amalgamate(
    g: &EdgeGraph,
    v1: &str,
    v2: &str,
    direction: Direction,
) -> Result<EdgeGraph, ShiftError> {
    g.amalgamate(v1, v2, direction)
}

pub fn expand(g: &EdgeGraph, from: &str, to: &str) -> Result<EdgeGraph, ShiftError> {
    g.expand(from, to)
}

pub fn contract(g: &EdgeGraph, z: &str) -> Result<EdgeGraph, ShiftError> {
    g.contract(z)
}
