//! Bounded bidirectional search over the move calculi.
//!
//! Both endpoints grow breadth-first, always expanding the smaller frontier,
//! with states deduplicated by canonical key. When a new layer touches the
//! other side, the least shared key is the meeting point, so results do not
//! depend on thread scheduling. The backward half of a path is replayed from
//! the meeting state by picking, at each step, the first move whose result
//! has the next key; the trace therefore uses the names of the forward side
//! and replays from the source exactly.

use std::collections::HashMap;
use std::hash::Hash;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{
    flow_equivalence_certificate, periodic_certificate, Certificate, InvariantVerdict,
};
use crate::shift::{canonical_key, EdgeGraph, GraphKey};
use crate::template::{Template, TemplateError, TemplateKey};
use crate::trace::{graph_moves, template_moves, GraphCalculus, MoveStep, MoveTrace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_states: usize,
    pub time_limit: Duration,
}

impl SearchBudget {
    pub fn new(
        max_depth: usize,
        max_states: usize,
        time_limit: Duration,
    ) -> Result<Self, SearchError> {
        if max_depth == 0 || max_states == 0 || time_limit.is_zero() {
            return Err(SearchError::InvalidBudget(
                "depth, state cap and time limit must all be positive".into(),
            ));
        }
        Ok(Self {
            max_depth,
            max_states,
            time_limit,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Equivalent { trace: MoveTrace },
    Distinguished { certificate: Certificate },
    Unknown { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Distinct states stored on both sides.
    pub states: usize,
}

impl SearchResult {
    pub fn trace(&self) -> Option<&MoveTrace> {
        match &self.verdict {
            Verdict::Equivalent { trace } => Some(trace),
            _ => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self.verdict, Verdict::Equivalent { .. })
    }
}

trait Space: Sync {
    type State: Clone + Send + Sync;
    type Key: Ord + Hash + Clone + Send + Sync;

    fn key(&self, s: &Self::State) -> Self::Key;
    fn successors(&self, s: &Self::State) -> Vec<(MoveStep, Self::State)>;
}

struct GraphSpace(GraphCalculus);

impl Space for GraphSpace {
    type State = EdgeGraph;
    type Key = GraphKey;

    fn key(&self, s: &EdgeGraph) -> GraphKey {
        canonical_key(s)
    }

    fn successors(&self, s: &EdgeGraph) -> Vec<(MoveStep, EdgeGraph)> {
        graph_moves(s, self.0)
    }
}

struct TemplateSpace;

impl Space for TemplateSpace {
    type State = Template;
    type Key = TemplateKey;

    fn key(&self, s: &Template) -> TemplateKey {
        s.canonical_key()
    }

    fn successors(&self, s: &Template) -> Vec<(MoveStep, Template)> {
        template_moves(s)
    }
}

struct Node<S, K> {
    state: S,
    /// Key one step closer to this side's root, and the move from there.
    parent: Option<(K, MoveStep)>,
}

struct Side<S, K> {
    nodes: HashMap<K, Node<S, K>>,
    frontier: Vec<K>,
    depth: usize,
}

impl<S, K: Hash + Eq + Clone> Side<S, K> {
    fn new(root: S, key: K) -> Self {
        let mut nodes = HashMap::new();
        nodes.insert(
            key.clone(),
            Node {
                state: root,
                parent: None,
            },
        );
        Self {
            nodes,
            frontier: vec![key],
            depth: 0,
        }
    }

    /// Moves from the root to `key`, in order.
    fn path_to(&self, key: &K) -> Vec<MoveStep> {
        let mut steps = Vec::new();
        let mut k = key.clone();
        while let Some((parent, step)) = &self.nodes[&k].parent {
            steps.push(step.clone());
            k = parent.clone();
        }
        steps.reverse();
        steps
    }

    /// Keys from `key` back to the root, excluding `key`.
    fn keys_to_root(&self, key: &K) -> Vec<K> {
        let mut keys = Vec::new();
        let mut k = key.clone();
        while let Some((parent, _)) = &self.nodes[&k].parent {
            keys.push(parent.clone());
            k = parent.clone();
        }
        keys
    }
}

/// A frontier key with its successors and their keys.
type Expansion<P> = (
    <P as Space>::Key,
    Vec<(MoveStep, <P as Space>::State, <P as Space>::Key)>,
);

fn bidirectional<P: Space>(
    space: &P,
    source: &P::State,
    target: &P::State,
    budget: SearchBudget,
) -> SearchResult {
    let start = Instant::now();
    let (ks, kt) = (space.key(source), space.key(target));
    if ks == kt {
        return SearchResult {
            verdict: Verdict::Equivalent {
                trace: MoveTrace::default(),
            },
            states: 1,
        };
    }
    let mut forward = Side::new(source.clone(), ks);
    let mut backward = Side::new(target.clone(), kt);
    let unknown =
        |reason: String, f: &Side<P::State, P::Key>, b: &Side<P::State, P::Key>| SearchResult {
            verdict: Verdict::Unknown { reason },
            states: f.nodes.len() + b.nodes.len(),
        };

    while forward.depth + backward.depth < budget.max_depth {
        let expand_forward = forward.frontier.len() <= backward.frontier.len();
        let (side, other) = if expand_forward {
            (&mut forward, &backward)
        } else {
            (&mut backward, &forward)
        };
        if side.frontier.is_empty() {
            return unknown(
                "one side exhausted its reachable states without meeting the other".into(),
                &forward,
                &backward,
            );
        }
        let layer: Vec<Expansion<P>> = side
            .frontier
            .par_iter()
            .map(|k| {
                let succ = space
                    .successors(&side.nodes[k].state)
                    .into_iter()
                    .map(|(m, s)| {
                        let key = space.key(&s);
                        (m, s, key)
                    })
                    .collect();
                (k.clone(), succ)
            })
            .collect();
        let mut next = Vec::new();
        for (parent, succ) in layer {
            for (step, state, key) in succ {
                if side.nodes.contains_key(&key) {
                    continue;
                }
                side.nodes.insert(
                    key.clone(),
                    Node {
                        state,
                        parent: Some((parent.clone(), step)),
                    },
                );
                next.push(key);
            }
        }
        side.frontier = next;
        side.depth += 1;

        let meeting = side
            .frontier
            .iter()
            .filter(|k| other.nodes.contains_key(*k))
            .min()
            .cloned();
        if let Some(meet) = meeting {
            return match stitch(space, &forward, &backward, &meet) {
                Some(trace) => SearchResult {
                    verdict: Verdict::Equivalent { trace },
                    states: forward.nodes.len() + backward.nodes.len(),
                },
                None => unknown(
                    "a backward move has no forward inverse".into(),
                    &forward,
                    &backward,
                ),
            };
        }
        if forward.nodes.len() + backward.nodes.len() > budget.max_states {
            return unknown(
                format!("state cap {} exceeded", budget.max_states),
                &forward,
                &backward,
            );
        }
        if start.elapsed() > budget.time_limit {
            return unknown(
                format!("time limit {:?} exceeded", budget.time_limit),
                &forward,
                &backward,
            );
        }
    }
    unknown(
        format!("no path within depth {}", budget.max_depth),
        &forward,
        &backward,
    )
}

/// Walks forward to the meeting point, then replays the backward path
/// through inverse moves. `None` if some backward move has no inverse.
fn stitch<P: Space>(
    space: &P,
    forward: &Side<P::State, P::Key>,
    backward: &Side<P::State, P::Key>,
    meet: &P::Key,
) -> Option<MoveTrace> {
    let mut steps = forward.path_to(meet);
    let mut current = forward.nodes[meet].state.clone();
    for next_key in backward.keys_to_root(meet) {
        let (step, state) = space
            .successors(&current)
            .into_iter()
            .find(|(_, s)| space.key(s) == next_key)?;
        steps.push(step);
        current = state;
    }
    Some(MoveTrace::new(steps))
}

/// Splits and amalgamations; refuted by periodic-point counts up to
/// `max_depth + 4`.
pub fn conjugacy_search(g: &EdgeGraph, f: &EdgeGraph, budget: SearchBudget) -> SearchResult {
    if let InvariantVerdict::Distinguished(certificate) = periodic_certificate(
        &g.transition_matrix(),
        &f.transition_matrix(),
        budget.max_depth + 4,
    ) {
        return SearchResult {
            verdict: Verdict::Distinguished { certificate },
            states: 0,
        };
    }
    bidirectional(&GraphSpace(GraphCalculus::Conjugacy), g, f, budget)
}

/// Adds expansions and contractions; refuted by Parry–Sullivan and Bowen–Franks.
pub fn flow_equiv_search(g: &EdgeGraph, f: &EdgeGraph, budget: SearchBudget) -> SearchResult {
    if let InvariantVerdict::Distinguished(certificate) =
        flow_equivalence_certificate(&g.transition_matrix(), &f.transition_matrix())
    {
        return SearchResult {
            verdict: Verdict::Distinguished { certificate },
            states: 0,
        };
    }
    bidirectional(&GraphSpace(GraphCalculus::FlowEquivalence), g, f, budget)
}

/// Slides, splits and their converses. Every template move keeps the
/// crushed graph within its conjugacy class, so periodic counts and the
/// flow-equivalence invariants of the crushed graphs both refute.
pub fn germ_equiv_search(
    t1: &Template,
    t2: &Template,
    budget: SearchBudget,
) -> Result<SearchResult, SearchError> {
    let (a, b) = (
        t1.crush()?.transition_matrix(),
        t2.crush()?.transition_matrix(),
    );
    for verdict in [
        flow_equivalence_certificate(&a, &b),
        periodic_certificate(&a, &b, budget.max_depth + 4),
    ] {
        if let InvariantVerdict::Distinguished(certificate) = verdict {
            return Ok(SearchResult {
                verdict: Verdict::Distinguished { certificate },
                states: 0,
            });
        }
    }
    Ok(bidirectional(&TemplateSpace, t1, t2, budget))
}
