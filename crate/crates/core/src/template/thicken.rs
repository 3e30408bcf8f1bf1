//! Boundary of the thickened template.
//!
//! Each branch line thickens to a ball and each strip to a band with a
//! rectangular cross-section whose corners are `TL, TR, BL, BR` (seen along
//! the flow at the strip's outgoing end). Top and bottom faces are entrance
//! set, left and right faces are exit set. On a ball the entrance cells are
//! the top, the bottom and one gap between each pair of stacked incoming
//! strips; the exit cells are the left, the right and one window between each
//! pair of neighboring outgoing strips.
//!
//! A dividing curve alternates between arcs running along a strip edge and
//! arcs crossing a ball, so the curves are the cycles of the union of two
//! perfect matchings on strip-end corners. An odd number of half-twists turns
//! the cross-section over, matching `TL` with `BR` and `TR` with `BL`.

use serde::Serialize;

use super::{Template, TemplateError};

const TL: usize = 0;
const TR: usize = 1;
const BL: usize = 2;
const BR: usize = 3;

const OUT: usize = 0;
const IN: usize = 1;

/// A connected entrance or exit surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub genus: usize,
    pub punctures: usize,
    pub euler: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DividingCurve {
    pub id: usize,
    /// Index into `entrance_components`.
    pub entrance: usize,
    /// Index into `exit_components`.
    pub exit: usize,
    /// Number of strip-edge arcs the curve runs along.
    pub strip_arcs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickenedBoundary {
    pub genus: usize,
    pub dividing_curves: usize,
    pub euler_entrance: i64,
    pub euler_exit: i64,
    pub entrance_components: Vec<BoundaryComponent>,
    pub exit_components: Vec<BoundaryComponent>,
    pub curves: Vec<DividingCurve>,
}

impl ThickenedBoundary {
    pub fn curve_ids(&self) -> Vec<usize> {
        self.curves.iter().map(|c| c.id).collect()
    }
}

fn port(strip: usize, end: usize, corner: usize) -> usize {
    (strip * 2 + end) * 4 + corner
}

/// Cell numbering: per-line cells first, then two band cells per strip.
struct Cells {
    line_base: Vec<usize>,
    band_base: usize,
    disks: usize,
}

impl Cells {
    /// `extra[b]` counts the gap (or window) cells of line `b`.
    fn new(extra: impl Iterator<Item = usize>) -> Self {
        let mut line_base = Vec::new();
        let mut next = 0;
        for e in extra {
            line_base.push(next);
            next += 2 + e;
        }
        Self {
            line_base,
            band_base: next,
            disks: next,
        }
    }

    /// Top (entrance) or Left (exit) cell of line `b`.
    fn first(&self, b: usize) -> usize {
        self.line_base[b]
    }

    /// Bottom (entrance) or Right (exit) cell of line `b`.
    fn second(&self, b: usize) -> usize {
        self.line_base[b] + 1
    }

    /// Gap (entrance) or window (exit) `k` of line `b`.
    fn between(&self, b: usize, k: usize) -> usize {
        self.line_base[b] + 2 + k
    }

    /// Band cell `side` (0 = top/left, 1 = bottom/right) of strip `s`.
    fn band(&self, s: usize, side: usize) -> usize {
        self.band_base + 2 * s + side
    }

    fn total(&self, strips: usize) -> usize {
        self.band_base + 2 * strips
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

pub fn thicken(t: &Template) -> Result<ThickenedBoundary, TemplateError> {
    t.ensure_valid()?;
    let (ins, outs) = t.slot_lists();
    let strips = t.strips();
    let nports = strips.len() * 8;

    // Strip matching.
    let mut along = vec![0; nports];
    for (s, strip) in strips.iter().enumerate() {
        for c in 0..4 {
            let d = if strip.is_twisted() { 3 - c } else { c };
            along[port(s, OUT, c)] = port(s, IN, d);
            along[port(s, IN, d)] = port(s, OUT, c);
        }
    }

    let xcells = Cells::new(ins.iter().map(|i| i.len() - 1));
    let ycells = Cells::new(outs.iter().map(|o| o.len() - 1));

    // Ball matching, with the entrance and exit cell on either side of each arc.
    let mut across = vec![0; nports];
    let mut arc_cells = vec![(0, 0); nports];
    for b in 0..ins.len() {
        let (layers, columns) = (&ins[b], &outs[b]);
        let layer = |k: usize, c: usize| port(layers[k], IN, c);
        let column = |j: usize, c: usize| port(columns[j], OUT, c);
        let (li, lo) = (layers.len() - 1, columns.len() - 1);
        let (top, bottom) = (xcells.first(b), xcells.second(b));
        let (left, right) = (ycells.first(b), ycells.second(b));
        let mut pairs = vec![
            (layer(0, TL), column(0, TL), top, left),
            (layer(li, BL), column(0, BL), bottom, left),
            (layer(0, TR), column(lo, TR), top, right),
            (layer(li, BR), column(lo, BR), bottom, right),
        ];
        for k in 0..li {
            let gap = xcells.between(b, k);
            pairs.push((layer(k, BL), layer(k + 1, TL), gap, left));
            pairs.push((layer(k, BR), layer(k + 1, TR), gap, right));
        }
        for j in 0..lo {
            let window = ycells.between(b, j);
            pairs.push((column(j, TR), column(j + 1, TL), top, window));
            pairs.push((column(j, BR), column(j + 1, BL), bottom, window));
        }
        for (p, q, x, y) in pairs {
            across[p] = q;
            across[q] = p;
            arc_cells[p] = (x, y);
            arc_cells[q] = (x, y);
        }
    }

    // Glue band cells to ball cells at both ends.
    let mut xuf = UnionFind::new(xcells.total(strips.len()));
    let mut yuf = UnionFind::new(ycells.total(strips.len()));
    for (s, strip) in strips.iter().enumerate() {
        let (a, j) = (strip.source.line, strip.source.index);
        let (b, k) = (strip.target.line, strip.target.index);
        let (top_band, bottom_band) = (xcells.band(s, 0), xcells.band(s, 1));
        let (left_band, right_band) = (ycells.band(s, 0), ycells.band(s, 1));

        xuf.union(top_band, xcells.first(a));
        xuf.union(bottom_band, xcells.second(a));
        let last_in = ins[b].len() - 1;
        let layer_top = if k == 0 {
            xcells.first(b)
        } else {
            xcells.between(b, k - 1)
        };
        let layer_bottom = if k == last_in {
            xcells.second(b)
        } else {
            xcells.between(b, k)
        };

        let last_out = outs[a].len() - 1;
        let col_left = if j == 0 {
            ycells.first(a)
        } else {
            ycells.between(a, j - 1)
        };
        let col_right = if j == last_out {
            ycells.second(a)
        } else {
            ycells.between(a, j)
        };
        yuf.union(left_band, col_left);
        yuf.union(right_band, col_right);

        if strip.is_twisted() {
            xuf.union(top_band, layer_bottom);
            xuf.union(bottom_band, layer_top);
            yuf.union(left_band, ycells.second(b));
            yuf.union(right_band, ycells.first(b));
        } else {
            xuf.union(top_band, layer_top);
            xuf.union(bottom_band, layer_bottom);
            yuf.union(left_band, ycells.first(b));
            yuf.union(right_band, ycells.second(b));
        }
    }

    let xcomp = components(&mut xuf, xcells.total(strips.len()));
    let ycomp = components(&mut yuf, ycells.total(strips.len()));
    let mut xeuler = vec![0i64; xcomp.count];
    let mut yeuler = vec![0i64; ycomp.count];
    for cell in 0..xcells.total(strips.len()) {
        xeuler[xcomp.of[cell]] += if cell < xcells.disks { 1 } else { -1 };
    }
    for cell in 0..ycells.total(strips.len()) {
        yeuler[ycomp.of[cell]] += if cell < ycells.disks { 1 } else { -1 };
    }

    // Trace the cycles: strip arc, ball arc, strip arc, ...
    let mut visited = vec![false; nports];
    let mut curves = Vec::new();
    for start in 0..nports {
        if visited[start] {
            continue;
        }
        let mut p = start;
        let mut strip_arcs = 0;
        let (x, y) = arc_cells[start];
        let (entrance, exit) = (xcomp.of[x], ycomp.of[y]);
        loop {
            let q = along[p];
            visited[p] = true;
            visited[q] = true;
            strip_arcs += 1;
            debug_assert_eq!(xcomp.of[arc_cells[q].0], entrance);
            debug_assert_eq!(ycomp.of[arc_cells[q].1], exit);
            p = across[q];
            if p == start {
                break;
            }
        }
        curves.push(DividingCurve {
            id: curves.len(),
            entrance,
            exit,
            strip_arcs,
        });
    }

    let surfaces = |euler: &[i64], side: fn(&DividingCurve) -> usize| -> Vec<BoundaryComponent> {
        euler
            .iter()
            .enumerate()
            .map(|(c, &chi)| {
                let punctures = curves.iter().filter(|d| side(d) == c).count();
                let twice_genus = 2 - chi - punctures as i64;
                debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0);
                BoundaryComponent {
                    genus: (twice_genus / 2) as usize,
                    punctures,
                    euler: chi,
                }
            })
            .collect()
    };
    let entrance_components = surfaces(&xeuler, |d| d.entrance);
    let exit_components = surfaces(&yeuler, |d| d.exit);

    Ok(ThickenedBoundary {
        genus: t.strips().len() + 1 - t.lines().len(),
        dividing_curves: curves.len(),
        euler_entrance: xeuler.iter().sum(),
        euler_exit: yeuler.iter().sum(),
        entrance_components,
        exit_components,
        curves,
    })
}

struct Components {
    of: Vec<usize>,
    count: usize,
}

/// Components numbered by their least cell.
fn components(uf: &mut UnionFind, n: usize) -> Components {
    let mut id_of_root = vec![usize::MAX; n];
    let mut count = 0;
    let of = (0..n)
        .map(|cell| {
            let r = uf.find(cell);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = count;
                count += 1;
            }
            id_of_root[r]
        })
        .collect();
    Components { of, count }
}
