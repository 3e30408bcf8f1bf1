//! Templates in branch-line normal form.
//!
//! A template is a list of branch lines, each with ordered incoming and
//! outgoing slots, and a list of strips joining an outgoing slot to an
//! incoming slot. Incoming slots are the stacking order of a joining chart
//! (top to bottom); outgoing slots are the left-to-right order of a splitting
//! chart, and the gap between two neighboring outgoing slots is an exit window.

mod moves;
mod thicken;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::shift::{periodic_words, EdgeGraph, PeriodicWord};

pub use moves::{slide_move, split_inverse, split_move};
pub use thicken::{thicken, BoundaryComponent, DividingCurve, ThickenedBoundary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid template: {}", join_issues(.0))]
    Invalid(Vec<TemplateIssue>),
    #[error("unknown branch line `{0}`")]
    UnknownLine(String),
    #[error("site not of the required local form: {0}")]
    BadSite(String),
}

fn join_issues(issues: &[TemplateIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// One violated invariant, with the object it concerns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateIssue {
    pub site: String,
    pub message: String,
}

impl fmt::Display for TemplateIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.site, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchLine {
    pub id: String,
    pub incoming: usize,
    pub outgoing: usize,
}

/// A slot of a branch line, addressed by line index and slot index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub line: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strip {
    pub id: String,
    /// Outgoing slot the strip leaves from.
    pub source: Slot,
    /// Incoming slot the strip feeds.
    pub target: Slot,
    pub half_twists: i64,
}

impl Strip {
    pub fn is_twisted(&self) -> bool {
        self.half_twists.rem_euclid(2) == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Joining,
    Splitting,
}

/// Elementary chart of the derived chart decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub line: String,
    pub kind: ChartKind,
    /// Slots `index` and `index + 1` meet (joining) or part (splitting) here.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    lines: Vec<BranchLine>,
    strips: Vec<Strip>,
}

/// Isomorphism-invariant key of a template with twists taken mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateKey(Vec<u32>);

impl Template {
    /// Assembles a template without checking it; see [`Template::validate`].
    pub fn new(lines: Vec<BranchLine>, strips: Vec<Strip>) -> Self {
        Self { lines, strips }
    }

    /// Builds a template from per-line slot contents. `ins[b][k]` and
    /// `outs[b][j]` are strip indices into `strips` (id, half-twists).
    pub(crate) fn from_slots(
        line_ids: Vec<String>,
        ins: &[Vec<usize>],
        outs: &[Vec<usize>],
        strips: Vec<(String, i64)>,
    ) -> Self {
        let mut source = vec![None; strips.len()];
        let mut target = vec![None; strips.len()];
        for (line, slots) in outs.iter().enumerate() {
            for (index, &s) in slots.iter().enumerate() {
                source[s] = Some(Slot { line, index });
            }
        }
        for (line, slots) in ins.iter().enumerate() {
            for (index, &s) in slots.iter().enumerate() {
                target[s] = Some(Slot { line, index });
            }
        }
        let lines = line_ids
            .into_iter()
            .enumerate()
            .map(|(b, id)| BranchLine {
                id,
                incoming: ins[b].len(),
                outgoing: outs[b].len(),
            })
            .collect();
        let strips = strips
            .into_iter()
            .enumerate()
            .map(|(s, (id, half_twists))| Strip {
                id,
                source: source[s].expect("every strip leaves a slot"),
                target: target[s].expect("every strip enters a slot"),
                half_twists,
            })
            .collect();
        Self { lines, strips }
    }

    pub fn lines(&self) -> &[BranchLine] {
        &self.lines
    }

    pub fn strips(&self) -> &[Strip] {
        &self.strips
    }

    pub fn line_index(&self, id: &str) -> Option<usize> {
        self.lines.iter().position(|l| l.id == id)
    }

    pub fn strip_index(&self, id: &str) -> Option<usize> {
        self.strips.iter().position(|s| s.id == id)
    }

    /// Strips occupying the incoming slots of `line`, in slot order.
    pub fn incoming(&self, line: usize) -> Vec<usize> {
        self.slot_contents(line, self.lines[line].incoming, |s| s.target)
    }

    /// Strips occupying the outgoing slots of `line`, in slot order.
    pub fn outgoing(&self, line: usize) -> Vec<usize> {
        self.slot_contents(line, self.lines[line].outgoing, |s| s.source)
    }

    fn slot_contents(&self, line: usize, count: usize, end: impl Fn(&Strip) -> Slot) -> Vec<usize> {
        let mut slots = vec![usize::MAX; count];
        for (i, s) in self.strips.iter().enumerate() {
            let slot = end(s);
            if slot.line == line && slot.index < count {
                slots[slot.index] = i;
            }
        }
        slots
    }

    pub(crate) fn slot_lists(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let ins = (0..self.lines.len()).map(|b| self.incoming(b)).collect();
        let outs = (0..self.lines.len()).map(|b| self.outgoing(b)).collect();
        (ins, outs)
    }

    /// Every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<TemplateIssue> {
        let mut issues = Vec::new();
        let mut issue =
            |site: String, message: String| issues.push(TemplateIssue { site, message });
        if self.lines.is_empty() {
            issue("template".into(), "no branch lines".into());
        }
        let mut seen = HashMap::new();
        for line in &self.lines {
            if seen.insert(line.id.as_str(), ()).is_some() {
                issue(format!("branchline {}", line.id), "duplicate id".into());
            }
            if line.incoming == 0 {
                issue(format!("branchline {}", line.id), "no incoming slot".into());
            }
            if line.outgoing == 0 {
                issue(format!("branchline {}", line.id), "no outgoing slot".into());
            }
        }
        let mut seen = HashMap::new();
        for s in &self.strips {
            if seen.insert(s.id.as_str(), ()).is_some() {
                issue(format!("strip {}", s.id), "duplicate id".into());
            }
        }

        let mut out_use: HashMap<Slot, Vec<&str>> = HashMap::new();
        let mut in_use: HashMap<Slot, Vec<&str>> = HashMap::new();
        for s in &self.strips {
            for (slot, outgoing) in [(s.source, true), (s.target, false)] {
                let Some(line) = self.lines.get(slot.line) else {
                    issue(
                        format!("strip {}", s.id),
                        format!("branch line #{} does not exist", slot.line),
                    );
                    continue;
                };
                let count = if outgoing {
                    line.outgoing
                } else {
                    line.incoming
                };
                if slot.index >= count {
                    let side = if outgoing { "outgoing" } else { "incoming" };
                    issue(
                        format!("strip {}", s.id),
                        format!("{side} slot {}.{} does not exist", line.id, slot.index),
                    );
                    continue;
                }
                let map = if outgoing { &mut out_use } else { &mut in_use };
                map.entry(slot).or_default().push(&s.id);
            }
        }
        for (b, line) in self.lines.iter().enumerate() {
            for (count, map, side) in [
                (line.outgoing, &out_use, "outgoing"),
                (line.incoming, &in_use, "incoming"),
            ] {
                for index in 0..count {
                    let users = map.get(&Slot { line: b, index }).map_or(0, Vec::len);
                    if users != 1 {
                        issue(
                            format!("slot {}.{index}", line.id),
                            format!("{side} slot used by {users} strips, expected 1"),
                        );
                    }
                }
            }
        }
        if issues.is_empty() && !self.is_connected() {
            issues.push(TemplateIssue {
                site: "template".into(),
                message: "underlying graph is disconnected".into(),
            });
        }
        issues
    }

    pub fn ensure_valid(&self) -> Result<(), TemplateError> {
        let issues = self.validate();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(TemplateError::Invalid(issues))
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.lines.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for s in &self.strips {
            let (a, b) = (
                find(&mut parent, s.source.line),
                find(&mut parent, s.target.line),
            );
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|x| find(&mut parent, x) == root)
    }

    /// No branch line joins or splits: the template is an annulus
    /// (possibly subdivided by several 1-in 1-out lines).
    pub fn is_degenerate(&self) -> bool {
        self.lines
            .iter()
            .all(|l| l.incoming == 1 && l.outgoing == 1)
    }

    /// Derived chart view: `incoming - 1` joining and `outgoing - 1`
    /// splitting charts per branch line.
    pub fn charts(&self) -> Vec<Chart> {
        let mut charts = Vec::new();
        for line in &self.lines {
            for index in 0..line.incoming.saturating_sub(1) {
                charts.push(Chart {
                    line: line.id.clone(),
                    kind: ChartKind::Joining,
                    index,
                });
            }
            for index in 0..line.outgoing.saturating_sub(1) {
                charts.push(Chart {
                    line: line.id.clone(),
                    kind: ChartKind::Splitting,
                    index,
                });
            }
        }
        charts
    }

    /// Collapse along the stable direction: one vertex per strip, and
    /// `s -> s'` whenever `s` feeds the branch line that `s'` leaves.
    pub fn crush(&self) -> Result<EdgeGraph, TemplateError> {
        self.ensure_valid()?;
        Ok(self.crush_unchecked())
    }

    pub(crate) fn crush_unchecked(&self) -> EdgeGraph {
        let ids = self.strips.iter().map(|s| s.id.clone()).collect();
        let mut edges = Vec::new();
        for (i, s) in self.strips.iter().enumerate() {
            for (j, t) in self.strips.iter().enumerate() {
                if s.target.line == t.source.line {
                    edges.push((i, j));
                }
            }
        }
        EdgeGraph::from_edges(ids, &edges).expect("strip ids are unique in a valid template")
    }

    /// Genus of the thickened template: strips minus branch lines plus one.
    pub fn genus(&self) -> Result<usize, TemplateError> {
        self.ensure_valid()?;
        Ok(self.strips.len() + 1 - self.lines.len())
    }

    /// Primitive periodic words of period at most `k` in the crushed graph.
    pub fn symbolic_orbits(&self, k: usize) -> Result<Vec<PeriodicWord>, TemplateError> {
        Ok(periodic_words(&self.crush()?, k))
    }

    /// Canonical numbering: for each start line, a breadth-first walk that
    /// numbers lines on discovery and strips by (outgoing slots, then
    /// incoming slots) of each visited line. The least resulting code wins.
    /// Returns the code with the line and strip orders that realize it.
    fn canonical_numbering(&self) -> (TemplateKey, Vec<usize>, Vec<usize>) {
        let (ins, outs) = self.slot_lists();
        let mut best: Option<(Vec<u32>, Vec<usize>, Vec<usize>)> = None;
        for start in 0..self.lines.len() {
            let mut line_num = vec![u32::MAX; self.lines.len()];
            let mut strip_num = vec![u32::MAX; self.strips.len()];
            let mut line_order = vec![start];
            let mut strip_order = Vec::new();
            line_num[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(b) = queue.pop_front() {
                for &s in outs[b].iter().chain(&ins[b]) {
                    if strip_num[s] != u32::MAX {
                        continue;
                    }
                    strip_num[s] = strip_order.len() as u32;
                    strip_order.push(s);
                    let strip = &self.strips[s];
                    for other in [strip.source.line, strip.target.line] {
                        if line_num[other] == u32::MAX {
                            line_num[other] = line_order.len() as u32;
                            line_order.push(other);
                            queue.push_back(other);
                        }
                    }
                }
            }
            let mut code = vec![line_order.len() as u32, strip_order.len() as u32];
            for &b in &line_order {
                code.push(self.lines[b].incoming as u32);
                code.push(self.lines[b].outgoing as u32);
            }
            for &s in &strip_order {
                let strip = &self.strips[s];
                code.extend([
                    line_num[strip.source.line],
                    strip.source.index as u32,
                    line_num[strip.target.line],
                    strip.target.index as u32,
                    u32::from(strip.is_twisted()),
                ]);
            }
            if best.as_ref().is_none_or(|(b, _, _)| code < *b) {
                best = Some((code, line_order, strip_order));
            }
        }
        let (code, lines, strips) = best.unwrap_or_default();
        (TemplateKey(code), lines, strips)
    }

    /// Invariant under renaming and reordering; twists compared mod 2.
    pub fn canonical_key(&self) -> TemplateKey {
        self.canonical_numbering().0
    }

    /// The canonical representative: lines `b0, b1, ...`, strips
    /// `s0, s1, ...` in canonical order, twists reduced mod 2.
    pub fn canonical_form(&self) -> Template {
        let (_, line_order, strip_order) = self.canonical_numbering();
        let mut line_pos = vec![0; self.lines.len()];
        for (p, &b) in line_order.iter().enumerate() {
            line_pos[b] = p;
        }
        let lines = line_order
            .iter()
            .enumerate()
            .map(|(p, &b)| BranchLine {
                id: format!("b{p}"),
                ..self.lines[b].clone()
            })
            .collect();
        let strips = strip_order
            .iter()
            .enumerate()
            .map(|(p, &s)| {
                let strip = &self.strips[s];
                Strip {
                    id: format!("s{p}"),
                    source: Slot {
                        line: line_pos[strip.source.line],
                        index: strip.source.index,
                    },
                    target: Slot {
                        line: line_pos[strip.target.line],
                        index: strip.target.index,
                    },
                    half_twists: strip.half_twists.rem_euclid(2),
                }
            })
            .collect();
        Template { lines, strips }
    }

    /// Name correspondence `self -> other` for lines and strips, when the two
    /// templates agree up to renaming, reordering and even twists.
    pub fn isomorphism(&self, other: &Template) -> Option<HashMap<String, String>> {
        let (k1, l1, s1) = self.canonical_numbering();
        let (k2, l2, s2) = other.canonical_numbering();
        if k1 != k2 {
            return None;
        }
        let mut map = HashMap::new();
        for (&a, &b) in l1.iter().zip(&l2) {
            map.insert(self.lines[a].id.clone(), other.lines[b].id.clone());
        }
        for (&a, &b) in s1.iter().zip(&s2) {
            map.insert(self.strips[a].id.clone(), other.strips[b].id.clone());
        }
        Some(map)
    }

    pub fn is_isomorphic(&self, other: &Template) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    /// TPL v1 text.
    pub fn to_tpl(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&format!(
                "branchline {} in={} out={}\n",
                line.id, line.incoming, line.outgoing
            ));
        }
        for s in &self.strips {
            out.push_str(&format!(
                "strip {} {}.{} -> {}.{} twists={}\n",
                s.id,
                self.line_name(s.source.line),
                s.source.index,
                self.line_name(s.target.line),
                s.target.index,
                s.half_twists
            ));
        }
        out
    }

    fn line_name(&self, b: usize) -> String {
        self.lines
            .get(b)
            .map_or_else(|| format!("#{b}"), |l| l.id.clone())
    }

    /// Parses TPL v1. Syntax and unknown line names are errors here;
    /// structural problems are left to [`Template::validate`].
    pub fn parse_tpl(text: &str) -> Result<Self, TemplateError> {
        let mut lines: Vec<BranchLine> = Vec::new();
        let mut strips = Vec::new();
        let mut pending = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let lineno = n + 1;
            let err = |message: String| TemplateError::Parse {
                line: lineno,
                message,
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens[0] {
                "branchline" => {
                    let [_, id, inc, outc] = tokens[..] else {
                        return Err(err("expected `branchline <id> in=<k> out=<m>`".into()));
                    };
                    if id.contains('.') {
                        return Err(err(format!("branch line id `{id}` may not contain `.`")));
                    }
                    lines.push(BranchLine {
                        id: id.to_string(),
                        incoming: keyed(inc, "in").map_err(err)?,
                        outgoing: keyed(outc, "out").map_err(err)?,
                    });
                }
                "strip" => {
                    let [_, id, from, "->", to, twists] = tokens[..] else {
                        return Err(err(
                            "expected `strip <id> <line>.<out> -> <line>.<in> twists=<int>`".into(),
                        ));
                    };
                    let half_twists = twists
                        .strip_prefix("twists=")
                        .and_then(|v| v.parse::<i64>().ok())
                        .ok_or_else(|| err(format!("bad twist count `{twists}`")))?;
                    let from = slot_ref(from).map_err(err)?;
                    let to = slot_ref(to).map_err(err)?;
                    pending.push((lineno, id.to_string(), from, to, half_twists));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        for (lineno, id, (from_line, from_index), (to_line, to_index), half_twists) in pending {
            let resolve = |name: &str| {
                lines
                    .iter()
                    .position(|l| l.id == name)
                    .ok_or_else(|| TemplateError::Parse {
                        line: lineno,
                        message: format!("unknown branch line `{name}`"),
                    })
            };
            strips.push(Strip {
                id,
                source: Slot {
                    line: resolve(&from_line)?,
                    index: from_index,
                },
                target: Slot {
                    line: resolve(&to_line)?,
                    index: to_index,
                },
                half_twists,
            });
        }
        Ok(Self { lines, strips })
    }
}

fn keyed(token: &str, key: &str) -> Result<usize, String> {
    token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("expected `{key}=<count>`, found `{token}`"))
}

fn slot_ref(token: &str) -> Result<(String, usize), String> {
    let (line, index) = token
        .rsplit_once('.')
        .ok_or_else(|| format!("expected `<line>.<index>`, found `{token}`"))?;
    let index = index
        .parse()
        .map_err(|_| format!("bad slot index in `{token}`"))?;
    Ok((line.to_string(), index))
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tpl())
    }
}

impl FromStr for Template {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_tpl(s)
    }
}

/// Templates shipped with the crate, by name.
pub mod bundled {
    use super::Template;

    pub const LORENZ_00: &str = include_str!("../../templates/lorenz00.tpl");
    pub const LORENZ_11: &str = include_str!("../../templates/lorenz11.tpl");
    pub const LORENZ_01: &str = include_str!("../../templates/lorenz01.tpl");
    pub const ANNULUS: &str = include_str!("../../templates/annulus.tpl");
    pub const THREE_STRIP: &str = include_str!("../../templates/three_strip.tpl");
    pub const LORENZ_00_SPLIT: &str = include_str!("../../templates/lorenz00_split.tpl");

    pub const ALL: [(&str, &str); 6] = [
        ("lorenz00", LORENZ_00),
        ("lorenz11", LORENZ_11),
        ("lorenz01", LORENZ_01),
        ("annulus", ANNULUS),
        ("three_strip", THREE_STRIP),
        ("lorenz00_split", LORENZ_00_SPLIT),
    ];

    pub fn load(name: &str) -> Option<Template> {
        ALL.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| text.parse().expect("bundled templates parse"))
    }

    pub fn lorenz00() -> Template {
        LORENZ_00.parse().expect("bundled")
    }

    pub fn lorenz11() -> Template {
        LORENZ_11.parse().expect("bundled")
    }

    pub fn annulus() -> Template {
        ANNULUS.parse().expect("bundled")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{isomorphic, AdjacencyMatrix};

    #[test]
    fn bundled_templates_are_valid() {
        for (name, text) in bundled::ALL {
            let t: Template = text.parse().unwrap();
            assert!(t.validate().is_empty(), "{name}: {:?}", t.validate());
            assert_eq!(t.to_tpl().parse::<Template>().unwrap(), t);
        }
    }

    #[test]
    fn lorenz_crush_is_full_two_shift() {
        let full = EdgeGraph::from_transition(
            &AdjacencyMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap(),
        )
        .unwrap();
        assert!(isomorphic(&bundled::lorenz00().crush().unwrap(), &full));
        assert!(isomorphic(&bundled::lorenz11().crush().unwrap(), &full));
        let loop_graph =
            EdgeGraph::from_transition(&AdjacencyMatrix::from_rows(&[vec![1]]).unwrap()).unwrap();
        assert!(isomorphic(
            &bundled::annulus().crush().unwrap(),
            &loop_graph
        ));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(bundled::lorenz00().genus().unwrap(), 2);
        assert_eq!(bundled::lorenz11().genus().unwrap(), 2);
        assert_eq!(bundled::annulus().genus().unwrap(), 1);
        assert!(bundled::annulus().is_degenerate());
        assert!(!bundled::lorenz00().is_degenerate());
    }

    #[test]
    fn validation_errors() {
        let missing =
            "branchline L in=2 out=2\nstrip x L.0 -> L.0 twists=0\nstrip y L.1 -> L.2 twists=0\n";
        let t: Template = missing.parse().unwrap();
        let issues = t.validate();
        assert!(issues.iter().any(|i| i.message.contains("does not exist")));
        assert!(issues
            .iter()
            .any(|i| i.message.contains("used by 0 strips")));

        let two_annuli = "branchline A in=1 out=1\nbranchline B in=1 out=1\n\
                          strip x A.0 -> A.0 twists=0\nstrip y B.0 -> B.0 twists=0\n";
        let t: Template = two_annuli.parse().unwrap();
        assert_eq!(t.validate()[0].message, "underlying graph is disconnected");
        assert!(t.genus().is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "branchline L in=1 out=1\nstrip x L.0 -> M.0 twists=0\n"
            .parse::<Template>()
            .unwrap_err();
        assert_eq!(
            err,
            TemplateError::Parse {
                line: 2,
                message: "unknown branch line `M`".into()
            }
        );
        assert!("branchline L in=x out=1".parse::<Template>().is_err());
        assert!("strip x".parse::<Template>().is_err());
        assert!("bogus".parse::<Template>().is_err());
    }

    #[test]
    fn charts_count() {
        let t = bundled::lorenz00();
        let charts = t.charts();
        assert_eq!(charts.len(), 2);
        assert_eq!(charts[0].kind, ChartKind::Joining);
        assert_eq!(charts[1].kind, ChartKind::Splitting);
    }

    #[test]
    fn canonical_form_ignores_names_and_order() {
        let t = bundled::lorenz11();
        let mut lines = t.lines().to_vec();
        lines[0].id = "Q".into();
        let mut strips = t.strips().to_vec();
        strips.reverse();
        for s in &mut strips {
            s.id = format!("{}_", s.id);
            s.half_twists += 2;
        }
        let renamed = Template::new(lines, strips);
        assert_eq!(renamed.canonical_key(), t.canonical_key());
        assert_eq!(renamed.canonical_form(), t.canonical_form());
        let map = t.isomorphism(&renamed).unwrap();
        assert_eq!(map["L"], "Q");
        assert!(!t.is_isomorphic(&bundled::lorenz00()));
    }

    #[test]
    fn lorenz_orbits() {
        let words: Vec<String> = bundled::lorenz00()
            .symbolic_orbits(3)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(words, vec!["x", "y", "xy", "xxy", "xyy"]);
        let annulus = bundled::annulus().symbolic_orbits(6).unwrap();
        assert_eq!(annulus.len(), 1);
    }
}
