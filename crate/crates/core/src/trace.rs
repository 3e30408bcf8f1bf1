//! Recorded move sequences and the move sets the searches walk.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::shift::{Direction, EdgeGraph, ShiftError};
use crate::template::{slide_move, split_inverse, split_move, Template, TemplateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {step}: {source}")]
    Shift { step: usize, source: ShiftError },
    #[error("step {step}: {source}")]
    Template { step: usize, source: TemplateError },
    #[error("step {step}: a {kind} move does not apply to {object}")]
    WrongObject {
        step: usize,
        kind: &'static str,
        object: &'static str,
    },
    #[error("malformed trace: {0}")]
    Malformed(String),
}

/// One move with its site. Vertex, line and strip names refer to the
/// object the move is applied to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MoveStep {
    OutSplit {
        vertex: String,
        block: Vec<String>,
    },
    InSplit {
        vertex: String,
        block: Vec<String>,
    },
    Amalgamation {
        first: String,
        second: String,
        direction: Direction,
    },
    Expand {
        from: String,
        to: String,
    },
    Contract {
        vertex: String,
    },
    Slide {
        line: String,
        slot: usize,
    },
    Split {
        line: String,
        cut: usize,
    },
    SplitInverse {
        first: String,
        second: String,
    },
}

impl MoveStep {
    pub fn kind(&self) -> &'static str {
        match self {
            MoveStep::OutSplit { .. } => "out-split",
            MoveStep::InSplit { .. } => "in-split",
            MoveStep::Amalgamation { .. } => "amalgamation",
            MoveStep::Expand { .. } => "expand",
            MoveStep::Contract { .. } => "contract",
            MoveStep::Slide { .. } => "slide",
            MoveStep::Split { .. } => "split",
            MoveStep::SplitInverse { .. } => "split-inverse",
        }
    }

    pub fn is_graph_move(&self) -> bool {
        !matches!(
            self,
            MoveStep::Slide { .. } | MoveStep::Split { .. } | MoveStep::SplitInverse { .. }
        )
    }

    pub fn apply_graph(&self, g: &EdgeGraph) -> Result<EdgeGraph, ShiftError> {
        match self {
            MoveStep::OutSplit { vertex, block } => g.out_split(vertex, block),
            MoveStep::InSplit { vertex, block } => g.in_split(vertex, block),
            MoveStep::Amalgamation {
                first,
                second,
                direction,
            } => g.amalgamate(first, second, *direction),
            MoveStep::Expand { from, to } => g.expand(from, to),
            MoveStep::Contract { vertex } => g.contract(vertex),
            _ => unreachable!("template move passed to apply_graph"),
        }
    }

    pub fn apply_template(&self, t: &Template) -> Result<Template, TemplateError> {
        match self {
            MoveStep::Slide { line, slot } => slide_move(t, line, *slot),
            MoveStep::Split { line, cut } => split_move(t, line, *cut),
            MoveStep::SplitInverse { first, second } => split_inverse(t, first, second),
            _ => unreachable!("graph move passed to apply_template"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub steps: Vec<MoveStep>,
}

impl MoveTrace {
    pub fn new(steps: Vec<MoveStep>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn replay_graph(&self, g: &EdgeGraph) -> Result<EdgeGraph, TraceError> {
        let mut current = g.clone();
        for (step, m) in self.steps.iter().enumerate() {
            if !m.is_graph_move() {
                return Err(TraceError::WrongObject {
                    step,
                    kind: m.kind(),
                    object: "an edge graph",
                });
            }
            current = m
                .apply_graph(&current)
                .map_err(|source| TraceError::Shift { step, source })?;
        }
        Ok(current)
    }

    pub fn replay_template(&self, t: &Template) -> Result<Template, TraceError> {
        let mut current = t.clone();
        for (step, m) in self.steps.iter().enumerate() {
            if m.is_graph_move() {
                return Err(TraceError::WrongObject {
                    step,
                    kind: m.kind(),
                    object: "a template",
                });
            }
            current = m
                .apply_template(&current)
                .map_err(|source| TraceError::Template { step, source })?;
        }
        Ok(current)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self, TraceError> {
        serde_json::from_str(text).map_err(|e| TraceError::Malformed(e.to_string()))
    }
}

/// Which surgeries a graph search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphCalculus {
    /// Splits and amalgamations.
    Conjugacy,
    /// Splits, amalgamations, expansions and contractions.
    FlowEquivalence,
}

/// Every applicable move with its result, in a fixed order: out-splits,
/// in-splits, amalgamations, then (for flow equivalence) expansions and
/// contractions. Of the two labelings of a binary partition only the one
/// whose first block holds the least neighbor is listed.
pub fn graph_moves(g: &EdgeGraph, calculus: GraphCalculus) -> Vec<(MoveStep, EdgeGraph)> {
    let mut moves = Vec::new();
    let n = g.len();
    for (in_direction, neighbors) in [
        (
            false,
            (0..n).map(|v| g.out_neighbors(v)).collect::<Vec<_>>(),
        ),
        (true, (0..n).map(|v| g.in_neighbors(v)).collect::<Vec<_>>()),
    ] {
        for (v, nb) in neighbors.iter().enumerate() {
            let d = nb.len();
            if d < 2 {
                continue;
            }
            let full = (1usize << (d - 1)) - 1;
            for mask in 0..full {
                let block: Vec<String> = std::iter::once(nb[0])
                    .chain((1..d).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| nb[i]))
                    .map(|j| g.id(j).to_string())
                    .collect();
                let vertex = g.id(v).to_string();
                let step = if in_direction {
                    MoveStep::InSplit { vertex, block }
                } else {
                    MoveStep::OutSplit { vertex, block }
                };
                if let Ok(h) = step.apply_graph(g) {
                    moves.push((step, h));
                }
            }
        }
    }
    for direction in [Direction::Out, Direction::In] {
        for i in 0..n {
            for j in i + 1..n {
                let step = MoveStep::Amalgamation {
                    first: g.id(i).to_string(),
                    second: g.id(j).to_string(),
                    direction,
                };
                if let Ok(h) = step.apply_graph(g) {
                    moves.push((step, h));
                }
            }
        }
    }
    if calculus == GraphCalculus::FlowEquivalence {
        for (u, w) in g.edges() {
            let step = MoveStep::Expand {
                from: g.id(u).to_string(),
                to: g.id(w).to_string(),
            };
            if let Ok(h) = step.apply_graph(g) {
                moves.push((step, h));
            }
        }
        for z in 0..n {
            let step = MoveStep::Contract {
                vertex: g.id(z).to_string(),
            };
            if let Ok(h) = step.apply_graph(g) {
                moves.push((step, h));
            }
        }
    }
    moves
}

/// Every applicable template move with its result: slides, splits, then
/// converse splits.
pub fn template_moves(t: &Template) -> Vec<(MoveStep, Template)> {
    let mut moves = Vec::new();
    for line in t.lines() {
        if line.incoming == 2 {
            let step = MoveStep::Slide {
                line: line.id.clone(),
                slot: 0,
            };
            if let Ok(r) = step.apply_template(t) {
                moves.push((step, r));
            }
        }
    }
    for line in t.lines() {
        for cut in 1..line.outgoing {
            let step = MoveStep::Split {
                line: line.id.clone(),
                cut,
            };
            if let Ok(r) = step.apply_template(t) {
                moves.push((step, r));
            }
        }
    }
    for a in t.lines() {
        for b in t.lines() {
            if a.id != b.id && a.incoming == b.incoming {
                let step = MoveStep::SplitInverse {
                    first: a.id.clone(),
                    second: b.id.clone(),
                };
                if let Ok(r) = step.apply_template(t) {
                    moves.push((step, r));
                }
            }
        }
    }
    moves
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{isomorphic, AdjacencyMatrix};
    use crate::template::bundled;

    fn full2() -> EdgeGraph {
        EdgeGraph::from_transition(&AdjacencyMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap())
            .unwrap()
    }

    #[test]
    fn trace_json_round_trip() {
        let trace = MoveTrace::new(vec![
            MoveStep::OutSplit {
                vertex: "1".into(),
                block: vec!["1".into()],
            },
            MoveStep::Amalgamation {
                first: "1a".into(),
                second: "1b".into(),
                direction: Direction::Out,
            },
        ]);
        let text = trace.to_json();
        assert!(text.contains("\"kind\": \"out-split\""));
        assert_eq!(MoveTrace::from_json(&text).unwrap(), trace);
        assert_eq!(trace.replay_graph(&full2()).unwrap(), full2());
    }

    #[test]
    fn move_lists() {
        let g = full2();
        let moves = graph_moves(&g, GraphCalculus::Conjugacy);
        // one out-split and one in-split per vertex, no amalgamation
        assert_eq!(moves.len(), 4);
        for (_, h) in &moves {
            assert_eq!(h.len(), 3);
        }
        let flow = graph_moves(&g, GraphCalculus::FlowEquivalence);
        assert_eq!(flow.len(), 8);
        let t = bundled::lorenz00();
        let kinds: Vec<&str> = template_moves(&t).iter().map(|(m, _)| m.kind()).collect();
        assert_eq!(kinds, vec!["slide", "split"]);
        let s = bundled::load("lorenz00_split").unwrap();
        let back: Vec<_> = template_moves(&s)
            .into_iter()
            .filter(|(m, _)| m.kind() == "split-inverse")
            .collect();
        assert!(back.iter().any(|(_, r)| *r == t));
        assert!(isomorphic(&s.crush().unwrap(), &s.crush().unwrap()));
    }

    #[test]
    fn wrong_object_is_reported() {
        let trace = MoveTrace::new(vec![MoveStep::Slide {
            line: "L".into(),
            slot: 0,
        }]);
        assert!(matches!(
            trace.replay_graph(&full2()),
            Err(TraceError::WrongObject { step: 0, .. })
        ));
    }
}
