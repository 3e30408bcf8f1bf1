//! Attachment patterns over dividing curves, the genus and puncture bounds
//! they must satisfy, the closed boundary surfaces they produce, and the
//! Euler-characteristic bookkeeping for realizing the result.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::template::ThickenedBoundary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltratingError {
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("pattern does not partition the dividing curves: {0}")]
    PartitionMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(
        "infeasible ledger: r is {entrance} from the entrance side but {exit} from the exit side"
    )]
    Infeasible { entrance: i64, exit: i64 },
}

/// Curves `C_i` receiving one `Σ_{g,k} × [0,1]`, with `k = |C_i|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Block {
    pub curves: Vec<usize>,
    pub genus: usize,
}

impl Block {
    pub fn punctures(&self) -> usize {
        self.curves.len()
    }

    /// `χ(Σ_{g,k}) = 2 - 2g - k`.
    pub fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.curves.len() as i64
    }
}

/// A partition of a set of dividing curves into blocks with genera.
/// Curves within a block are sorted and blocks are ordered by least curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AttachmentPattern {
    blocks: Vec<Block>,
}

impl AttachmentPattern {
    pub fn new(blocks: Vec<Block>) -> Result<Self, FiltratingError> {
        let mut seen = HashSet::new();
        let mut blocks: Vec<Block> = blocks
            .into_iter()
            .map(|mut b| {
                b.curves.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.curves.is_empty() {
                return Err(FiltratingError::InvalidPattern("empty block".into()));
            }
            for &c in &b.curves {
                if !seen.insert(c) {
                    return Err(FiltratingError::InvalidPattern(format!(
                        "curve {c} appears in two blocks"
                    )));
                }
            }
        }
        blocks.sort_by_key(|b| b.curves[0]);
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn curves(&self) -> BTreeSet<usize> {
        self.blocks
            .iter()
            .flat_map(|b| b.curves.iter().copied())
            .collect()
    }

    /// The image under a relabeling of curves.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block {
                curves: b.curves.iter().map(|&c| perm[c]).collect(),
                genus: b.genus,
            })
            .collect();
        Self::new(blocks).expect("a permutation keeps blocks disjoint")
    }

    pub fn to_json(&self, ctx: ManifoldContext) -> serde_json::Value {
        serde_json::json!({
            "blocks": self.blocks,
            "m": ctx.m,
            "bounds_ok": bounds_ok(self, ctx),
        })
    }
}

impl fmt::Display for AttachmentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let curves: Vec<String> = b.curves.iter().map(ToString::to_string).collect();
                format!("({{{}}},{})", curves.join(","), b.genus)
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Compact form `0,1:0 2:1`: blocks separated by spaces or `;`, each a
/// comma list of curves, a colon, and the genus.
impl FromStr for AttachmentPattern {
    type Err = FiltratingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |tok: &str| {
            FiltratingError::InvalidPattern(format!("expected `curves:genus`, found `{tok}`"))
        };
        let blocks = s
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                let (curves, genus) = tok.split_once(':').ok_or_else(|| bad(tok))?;
                let curves = curves
                    .split(',')
                    .map(|c| c.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad(tok))?;
                let genus = genus.trim().parse().map_err(|_| bad(tok))?;
                Ok(Block { curves, genus })
            })
            .collect::<Result<Vec<_>, FiltratingError>>()?;
        if blocks.is_empty() {
            return Err(FiltratingError::InvalidPattern("no blocks".into()));
        }
        Self::new(blocks)
    }
}

/// The ambient closed manifold is `M' # m S^1×S^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ManifoldContext {
    pub m: usize,
}

/// The first bound a block breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "bound", rename_all = "kebab-case")]
pub enum BoundViolation {
    /// `g_i ≤ m + 1` fails.
    GenusTooLarge {
        block: usize,
        genus: usize,
        limit: usize,
    },
    /// `k_i ≤ 4m - 3g_i + 3` (or `k_i ≤ m + 1` when `g_i = m + 1`) fails.
    TooManyCurves {
        block: usize,
        curves: usize,
        limit: usize,
    },
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundViolation::GenusTooLarge {
                block,
                genus,
                limit,
            } => {
                write!(f, "block {block}: genus {genus} exceeds m+1 = {limit}")
            }
            BoundViolation::TooManyCurves {
                block,
                curves,
                limit,
            } => {
                write!(f, "block {block}: {curves} curves exceed the limit {limit}")
            }
        }
    }
}

/// Largest admissible `k` for genus `g`, or `None` when `g > m + 1`.
pub fn max_curves(genus: usize, m: usize) -> Option<usize> {
    if genus <= m {
        Some(4 * m + 3 - 3 * genus)
    } else if genus == m + 1 {
        Some(m + 1)
    } else {
        None
    }
}

pub fn first_violation(p: &AttachmentPattern, ctx: ManifoldContext) -> Option<BoundViolation> {
    p.blocks
        .iter()
        .enumerate()
        .find_map(|(i, b)| match max_curves(b.genus, ctx.m) {
            None => Some(BoundViolation::GenusTooLarge {
                block: i,
                genus: b.genus,
                limit: ctx.m + 1,
            }),
            Some(limit) if b.punctures() > limit => Some(BoundViolation::TooManyCurves {
                block: i,
                curves: b.punctures(),
                limit,
            }),
            Some(_) => None,
        })
}

pub fn bounds_ok(p: &AttachmentPattern, ctx: ManifoldContext) -> bool {
    first_violation(p, ctx).is_none()
}

/// A 2-handle on every curve: singleton blocks of genus 0.
pub fn model_of_germ(b: &ThickenedBoundary) -> AttachmentPattern {
    let blocks = b
        .curve_ids()
        .into_iter()
        .map(|c| Block {
            curves: vec![c],
            genus: 0,
        })
        .collect();
    AttachmentPattern::new(blocks).expect("distinct curve ids")
}

/// A group of curve permutations, closed from its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Vec<usize>>,
}

impl PermutationGroup {
    pub fn generated_by(degree: usize, generators: &[Vec<usize>]) -> Result<Self, FiltratingError> {
        for g in generators {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if sorted != (0..degree).collect::<Vec<_>>() {
                return Err(FiltratingError::InvalidPattern(format!(
                    "{g:?} is not a permutation of 0..{degree}"
                )));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut seen: HashSet<Vec<usize>> = HashSet::from([identity]);
        let mut next = 0;
        while next < elements.len() {
            let current = elements[next].clone();
            next += 1;
            for g in generators {
                let product: Vec<usize> = current.iter().map(|&x| g[x]).collect();
                if seen.insert(product.clone()) {
                    elements.push(product);
                }
            }
        }
        elements.sort();
        Ok(Self { degree, elements })
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut generators = Vec::new();
        if degree >= 2 {
            let mut swap: Vec<usize> = (0..degree).collect();
            swap.swap(0, 1);
            generators.push(swap);
            generators.push((0..degree).map(|i| (i + 1) % degree).collect());
        }
        Self::generated_by(degree, &generators).expect("valid generators")
    }

    /// One permutation per line in one-line notation (`1 0 2` swaps curves
    /// 0 and 1); `#` starts a comment.
    pub fn parse(text: &str, degree: usize) -> Result<Self, FiltratingError> {
        let mut generators = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let perm = content
                .split_whitespace()
                .map(|tok| tok.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| FiltratingError::Parse {
                    line: n + 1,
                    message: format!("bad permutation `{content}`"),
                })?;
            if perm.len() != degree {
                return Err(FiltratingError::Parse {
                    line: n + 1,
                    message: format!("expected {degree} entries, found {}", perm.len()),
                });
            }
            generators.push(perm);
        }
        Self::generated_by(degree, &generators)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }
}

/// Set partitions of `0..n` as restricted growth strings, in lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0; n];
    fn rec(rgs: &mut Vec<usize>, pos: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if pos == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for v in 0..=max + 1 {
            rgs[pos] = v;
            rec(rgs, pos + 1, max.max(v), out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(&mut rgs, 1, 0, &mut out);
    out
}

/// Every pattern over `curves` satisfying the bounds for `ctx`: partitions
/// in restricted-growth order, genus vectors lexicographically within each.
/// With a symmetry group, only the least pattern of each orbit is kept.
pub fn enumerate_patterns(
    curves: &[usize],
    ctx: ManifoldContext,
    symmetry: Option<&PermutationGroup>,
) -> Result<Vec<AttachmentPattern>, FiltratingError> {
    let mut curves = curves.to_vec();
    curves.sort_unstable();
    curves.dedup();
    if let Some(group) = symmetry {
        if curves.iter().any(|&c| c >= group.degree()) {
            return Err(FiltratingError::InvalidPattern(format!(
                "symmetry group acts on {} curves but curve ids reach {}",
                group.degree(),
                curves.last().copied().unwrap_or(0)
            )));
        }
    }
    let m = ctx.m;
    let patterns: Vec<AttachmentPattern> = set_partitions(curves.len())
        .into_par_iter()
        .flat_map_iter(|rgs| {
            let nblocks = rgs.iter().max().map_or(0, |&x| x + 1);
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); nblocks];
            for (i, &b) in rgs.iter().enumerate() {
                members[b].push(curves[i]);
            }
            // Admissible genera per block, ascending.
            let choices: Vec<Vec<usize>> = members
                .iter()
                .map(|c| {
                    (0..=m + 1)
                        .filter(|&g| max_curves(g, m).is_some_and(|k| c.len() <= k))
                        .collect()
                })
                .collect();
            genus_vectors(&choices)
                .into_iter()
                .map(move |genera| {
                    let blocks = members
                        .iter()
                        .zip(&genera)
                        .map(|(c, &genus)| Block {
                            curves: c.clone(),
                            genus,
                        })
                        .collect();
                    AttachmentPattern::new(blocks).expect("a partition")
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(match symmetry {
        None => patterns,
        Some(group) => patterns
            .into_par_iter()
            .filter(|p| group.elements().iter().all(|g| p.permuted(g) >= *p))
            .collect(),
    })
}

fn genus_vectors(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for &g in options {
                let mut v = prefix.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Genera of the closed entrance and exit surfaces after attachment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryLedger {
    pub entrance: Vec<usize>,
    pub exit: Vec<usize>,
}

/// Counts read off a ledger: `t` entrance components, `t1` of genus > 1,
/// `t2` of genus 0; `s`, `s1`, `s2` likewise for the exit side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LedgerCounts {
    pub t: usize,
    pub t1: usize,
    pub t2: usize,
    pub s: usize,
    pub s1: usize,
    pub s2: usize,
}

impl BoundaryLedger {
    pub fn new(entrance: Vec<usize>, exit: Vec<usize>) -> Self {
        Self { entrance, exit }
    }

    pub fn counts(&self) -> LedgerCounts {
        let count = |v: &[usize], f: fn(usize) -> bool| v.iter().filter(|&&g| f(g)).count();
        LedgerCounts {
            t: self.entrance.len(),
            t1: count(&self.entrance, |g| g > 1),
            t2: count(&self.entrance, |g| g == 0),
            s: self.exit.len(),
            s1: count(&self.exit, |g| g > 1),
            s2: count(&self.exit, |g| g == 0),
        }
    }

    pub fn euler_entrance(&self) -> i64 {
        self.entrance.iter().map(|&g| 2 - 2 * g as i64).sum()
    }

    pub fn euler_exit(&self) -> i64 {
        self.exit.iter().map(|&g| 2 - 2 * g as i64).sum()
    }
}

/// Glue `Σ_{g_i,k_i} × [0,1]` along each block; each side gains a copy of
/// every `Σ_{g_i,k_i}`, and components merge through blocks whose curves
/// lie on different components.
pub fn assemble_boundary(
    b: &ThickenedBoundary,
    p: &AttachmentPattern,
) -> Result<BoundaryLedger, FiltratingError> {
    let expected: BTreeSet<usize> = b.curve_ids().into_iter().collect();
    let got = p.curves();
    if expected != got {
        let missing: Vec<_> = expected.difference(&got).collect();
        let extra: Vec<_> = got.difference(&expected).collect();
        return Err(FiltratingError::PartitionMismatch(format!(
            "missing curves {missing:?}, unknown curves {extra:?}"
        )));
    }
    let side = |euler: Vec<i64>, component_of: &dyn Fn(usize) -> usize| -> Vec<usize> {
        let n = euler.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for block in p.blocks() {
            let first = component_of(block.curves[0]);
            for &c in &block.curves[1..] {
                let (a, z) = (find(&mut parent, first), find(&mut parent, component_of(c)));
                parent[a.max(z)] = a.min(z);
            }
        }
        let mut chi = vec![0i64; n];
        for (c, &e) in euler.iter().enumerate() {
            let r = find(&mut parent, c);
            chi[r] += e;
        }
        for block in p.blocks() {
            let r = find(&mut parent, component_of(block.curves[0]));
            chi[r] += block.euler();
        }
        (0..n)
            .filter(|&c| find(&mut parent, c) == c)
            .map(|c| {
                debug_assert!(chi[c] <= 2 && chi[c] % 2 == 0);
                ((2 - chi[c]) / 2) as usize
            })
            .collect()
    };
    let curve = |c: usize| &b.curves[b.curves.iter().position(|d| d.id == c).expect("checked")];
    let entrance = side(
        b.entrance_components.iter().map(|c| c.euler).collect(),
        &|c| curve(c).entrance,
    );
    let exit = side(b.exit_components.iter().map(|c| c.euler).collect(), &|c| {
        curve(c).exit
    });
    Ok(BoundaryLedger { entrance, exit })
}

/// `Σ(2 - 2g⁺) = Σ(2 - 2g⁻)`.
pub fn euler_feasible(l: &BoundaryLedger) -> bool {
    l.euler_entrance() == l.euler_exit()
}

/// `n = Σ m_i + Σ n_j + r`, with the `m_i` (one per entrance component of
/// genus > 1) and `n_j` (likewise on the exit side) left unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NFormula {
    pub entrance_terms: usize,
    pub exit_terms: usize,
    pub r: i64,
}

impl fmt::Display for NFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = (1..=self.entrance_terms)
            .map(|i| format!("m_{i}"))
            .collect();
        terms.extend((1..=self.exit_terms).map(|j| format!("n_{j}")));
        terms.push(self.r.to_string());
        write!(f, "n = {}", terms.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Accounting {
    pub r_entrance: i64,
    pub r_exit: i64,
    pub n: NFormula,
}

/// `r = Σ_{g⁺>1} g⁺ - t1 + s2 = Σ_{g⁻>1} g⁻ - s1 + t2`; the two sides agree
/// exactly when the ledger is Euler-feasible.
pub fn realization_accounting(l: &BoundaryLedger) -> Result<Accounting, FiltratingError> {
    let c = l.counts();
    let big = |v: &[usize]| v.iter().filter(|&&g| g > 1).map(|&g| g as i64).sum::<i64>();
    let r_entrance = big(&l.entrance) - c.t1 as i64 + c.s2 as i64;
    let r_exit = big(&l.exit) - c.s1 as i64 + c.t2 as i64;
    if r_entrance != r_exit {
        return Err(FiltratingError::Infeasible {
            entrance: r_entrance,
            exit: r_exit,
        });
    }
    Ok(Accounting {
        r_entrance,
        r_exit,
        n: NFormula {
            entrance_terms: c.t1,
            exit_terms: c.s1,
            r: r_entrance,
        },
    })
}
