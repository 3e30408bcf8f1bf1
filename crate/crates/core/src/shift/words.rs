use std::fmt;

use serde::Serialize;

use super::{EdgeGraph, ShiftError};

/// A primitive closed path, stored as its least rotation (by vertex id).
///
/// Each word stands for one periodic orbit of the shift; the orbit has
/// `period()` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PeriodicWord {
    symbols: Vec<String>,
}

impl PeriodicWord {
    /// Checks that `symbols` is a closed path in `g` and normalizes the rotation.
    pub fn new(g: &EdgeGraph, symbols: Vec<String>) -> Result<Self, ShiftError> {
        if symbols.is_empty() {
            return Err(ShiftError::NotClosedPath("empty word".into()));
        }
        let idx = symbols
            .iter()
            .map(|s| {
                g.index_of(s)
                    .ok_or_else(|| ShiftError::UnknownVertex(s.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (p, &a) in idx.iter().enumerate() {
            let b = idx[(p + 1) % idx.len()];
            if !g.has_edge(a, b) {
                return Err(ShiftError::NotClosedPath(format!(
                    "no edge `{}` -> `{}`",
                    g.id(a),
                    g.id(b)
                )));
            }
        }
        let best = (0..symbols.len())
            .map(|r| rotate(&symbols, r))
            .min()
            .expect("nonempty");
        Ok(Self { symbols: best })
    }

    pub fn period(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// True when the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.symbols.len();
        (1..n).all(|r| !n.is_multiple_of(r) || rotate(&self.symbols, r) != self.symbols)
    }
}

impl fmt::Display for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let separator = if self.symbols.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            " "
        };
        f.write_str(&self.symbols.join(separator))
    }
}

fn rotate(symbols: &[String], r: usize) -> Vec<String> {
    symbols[r..].iter().chain(&symbols[..r]).cloned().collect()
}

/// All primitive periodic words of period `1..=k`, ordered by period then
/// lexicographically.
pub fn periodic_words(g: &EdgeGraph, k: usize) -> Vec<PeriodicWord> {
    let n = g.len();
    let mut rank: Vec<usize> = (0..n).collect();
    rank.sort_by(|&a, &b| g.id(a).cmp(g.id(b)));
    // position of each vertex in id order
    let mut pos = vec![0; n];
    for (p, &v) in rank.iter().enumerate() {
        pos[v] = p;
    }
    let mut words = Vec::new();
    for period in 1..=k {
        let mut found = Vec::new();
        for start in 0..n {
            let mut path = vec![start];
            extend(g, &pos, start, period, &mut path, &mut found);
        }
        found.sort();
        words.extend(found);
    }
    words
}

fn extend(
    g: &EdgeGraph,
    pos: &[usize],
    start: usize,
    period: usize,
    path: &mut Vec<usize>,
    found: &mut Vec<PeriodicWord>,
) {
    let last = *path.last().expect("nonempty");
    if path.len() == period {
        if g.has_edge(last, start) {
            let symbols: Vec<String> = path.iter().map(|&v| g.id(v).to_string()).collect();
            // Keep only the least rotation of a primitive word.
            if (1..period).all(|r| rotate(&symbols, r) > symbols) {
                found.push(PeriodicWord { symbols });
            }
        }
        return;
    }
    for next in g.out_neighbors(last) {
        if pos[next] >= pos[start] {
            path.push(next);
            extend(g, pos, start, period, path, found);
            path.pop();
        }
    }
}
