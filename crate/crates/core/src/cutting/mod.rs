//! Randomized cuttings: sample curves, shoot vertical rays, and decompose
//! the viewport into pf-cells by a slab sweep.

mod svg;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::TracedCurve;
use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::intersect::{intersect_pieces, monotone_pieces, Piece, Tangent, DEFAULT_TOL};
use crate::scene::{is_vertical, FORMAT_VERSION};

pub use svg::write_svg;

pub const DEFAULT_MAX_RETRIES: usize = 32;
/// Event abscissas closer than this are one slab boundary.
const CLUSTER: f64 = 1e-9;
/// Event points closer than this are one event.
const SAME_POINT: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct CuttingParams {
    pub r: usize,
    pub seed: u64,
    pub max_retries: usize,
    /// Intersection tolerance.
    pub tol: f64,
    /// Tolerance for deciding that a point lies on a sampled curve.
    pub incidence_tol: f64,
}

impl CuttingParams {
    pub fn new(r: usize, seed: u64) -> Self {
        CuttingParams {
            r,
            seed,
            max_retries: DEFAULT_MAX_RETRIES,
            tol: DEFAULT_TOL,
            incidence_tol: crate::incidence::DEFAULT_TOL,
        }
    }
}

/// `ceil(5 r ln n)`
pub fn sample_size(r: usize, n: usize) -> usize {
    (5.0 * r as f64 * (n as f64).ln()).ceil().max(1.0) as usize
}

/// `s` uniform draws with replacement from `0..n`, duplicates collapsed.
pub fn sample_curves(n: usize, s: usize, seed: u64) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set: BTreeSet<usize> = (0..s).map(|_| rng.random_range(0..n)).collect();
    set.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Crossing,
    Tangent,
    /// A sampled arc ends inside the viewport (viewport exit or domain end).
    Clip,
}

/// A vertical segment from an event point up or down to the next sampled
/// arc or the viewport.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ray {
    pub x: f64,
    pub y_from: f64,
    pub y_to: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellArc {
    pub curve: usize,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Wall {
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PfCell {
    pub id: usize,
    /// First and last slab index.
    pub slabs: (usize, usize),
    pub left_x: f64,
    pub right_x: f64,
    /// `None` means the viewport edge.
    pub bottom: Option<CellArc>,
    pub top: Option<CellArc>,
    /// `None` when the cell pinches to a point on that side.
    pub left: Option<Wall>,
    pub right: Option<Wall>,
    pub corner_count: u8,
    pub area: f64,
    /// Ids of curves whose trace meets the cell interior.
    pub crossings: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Strand {
    pub curve: usize,
    pub piece: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Slab {
    pub x0: f64,
    pub x1: f64,
    /// Bottom to top.
    pub strands: Vec<Strand>,
    /// Cell of gap `g` (below strand `g`; the last gap is above all).
    pub gap_cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Interior(usize),
    Boundary(Vec<usize>),
}

impl Location {
    pub fn cells(&self) -> Vec<usize> {
        match self {
            Location::Interior(c) => vec![*c],
            Location::Boundary(v) => v.clone(),
        }
    }
}

/// Per-curve geometry reused across attempts.
#[derive(Debug)]
pub struct CurveGeom {
    pub pieces: Vec<Piece>,
    pub tangents: Vec<Tangent>,
}

#[derive(Debug, Clone)]
pub struct Cutting {
    pub r: usize,
    pub s: usize,
    pub seed: u64,
    pub retries_used: usize,
    pub n: usize,
    pub viewport: Rect,
    pub sample: Vec<usize>,
    pub rays: Vec<Ray>,
    pub walls: Vec<Ray>,
    pub boundaries: Vec<f64>,
    pub slabs: Vec<Slab>,
    pub cells: Vec<PfCell>,
    pub fingerprint: u64,
    pub incidence_tol: f64,
    /// Event ordinates at each interior slab boundary (index aligned with `boundaries`).
    event_ys: Vec<Vec<f64>>,
    curves: Vec<Arc<TracedCurve>>,
    geoms: Arc<Vec<CurveGeom>>,
}

/// Stable hash of the curve set used to match cuttings with scenes.
pub fn fingerprint(curves: &[Arc<TracedCurve>]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in curves {
        let spec = serde_json::to_string(&c.curve.to_spec()).expect("curve spec serializes");
        for b in spec.bytes().chain([0xff]) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

pub fn curve_geoms(curves: &[Arc<TracedCurve>]) -> Vec<CurveGeom> {
    curves
        .par_iter()
        .map(|c| {
            let (pieces, tangents) = monotone_pieces(&c.curve, &c.trace);
            let vp = c.trace.viewport;
            CurveGeom {
                pieces,
                tangents: tangents.into_iter().filter(|t| vp.contains(t.point)).collect(),
            }
        })
        .collect()
}

/// Build a certified cutting: every cell interior is crossed by at most
/// `n / r` curves. Attempt `a` uses seed `seed + a`.
pub fn build_cutting(curves: &[Arc<TracedCurve>], params: CuttingParams) -> Result<Cutting> {
    let n = curves.len();
    if params.r < 1 || (n >= 2 && params.r >= n) || n == 0 {
        return Err(Error::BadParameter(format!("need 1 <= r < n, got r = {}, n = {n}", params.r)));
    }
    if let Some(c) = curves.iter().find(|c| is_vertical(&c.trace)) {
        return Err(Error::VerticalCurve(c.id));
    }
    let viewport = curves[0].trace.viewport;
    let geoms = Arc::new(curve_geoms(curves));
    let s = sample_size(params.r, n);
    let allowed = n as f64 / params.r as f64;
    let mut best_max = usize::MAX;
    let attempts = params.max_retries.max(1);
    for attempt in 0..attempts {
        let seed = params.seed.wrapping_add(attempt as u64);
        let sample = sample_curves(n, s, seed);
        let mut cut = decompose(curves, geoms.clone(), &sample, viewport, params)?;
        cut.compute_crossings();
        let worst = cut.max_crossings();
        if worst as f64 <= allowed {
            cut.s = s;
            cut.seed = params.seed;
            cut.retries_used = attempt;
            return Ok(cut);
        }
        best_max = best_max.min(worst);
    }
    Err(Error::CuttingFailed {
        attempts,
        best_max,
        allowed,
    })
}

/// Decompose the viewport by the arcs of the curves in `sample` (no
/// certification). Crossing lists are left empty.
pub fn decompose(
    curves: &[Arc<TracedCurve>],
    geoms: Arc<Vec<CurveGeom>>,
    sample: &[usize],
    viewport: Rect,
    params: CuttingParams,
) -> Result<Cutting> {
    let scale = viewport.width().max(viewport.height()).max(1.0);
    let ctol = CLUSTER * scale;

    // Event points.
    let pairs: Vec<(usize, usize)> = sample
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| sample[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    let crossings: Vec<Point> = pairs
        .par_iter()
        .map(|&(a, b)| {
            intersect_pieces(
                (&curves[a].curve, &geoms[a].pieces),
                (&curves[b].curve, &geoms[b].pieces),
                (a, b),
                params.tol,
            )
            .map(|v| v.into_iter().map(|c| c.point).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .filter(|p| viewport.contains(*p))
        .collect();
    let mut ray_events: Vec<(Point, EventKind)> = Vec::new();
    let push_event = |list: &mut Vec<(Point, EventKind)>, p: Point, k: EventKind| {
        if !list.iter().any(|(q, _)| q.dist(p) <= SAME_POINT * scale) {
            list.push((p, k));
        }
    };
    for p in crossings {
        push_event(&mut ray_events, p, EventKind::Crossing);
    }
    for &a in sample {
        for t in &geoms[a].tangents {
            push_event(&mut ray_events, t.point, EventKind::Tangent);
        }
    }
    let mut clip_events: Vec<(Point, EventKind)> = Vec::new();
    for &a in sample {
        for pc in &geoms[a].pieces {
            for (x, y) in [(pc.xmin(), pc.y[0]), (pc.xmax(), pc.y[pc.len() - 1])] {
                if x - viewport.xmin <= ctol || viewport.xmax - x <= ctol {
                    continue;
                }
                let p = Point::new(x, y);
                if ray_events.iter().any(|(q, _)| q.dist(p) <= SAME_POINT * scale) {
                    continue;
                }
                push_event(&mut clip_events, p, EventKind::Clip);
            }
        }
    }

    // Slab boundaries.
    let mut all: Vec<Point> = ray_events.iter().chain(&clip_events).map(|e| e.0).collect();
    all.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut boundaries = vec![viewport.xmin];
    let mut event_ys: Vec<Vec<f64>> = vec![Vec::new()];
    let mut cluster: Vec<Point> = Vec::new();
    let flush = |cluster: &mut Vec<Point>, boundaries: &mut Vec<f64>, event_ys: &mut Vec<Vec<f64>>| {
        if cluster.is_empty() {
            return;
        }
        let x = cluster.iter().map(|p| p.x).sum::<f64>() / cluster.len() as f64;
        if x - viewport.xmin > ctol && viewport.xmax - x > ctol {
            boundaries.push(x);
            event_ys.push(cluster.iter().map(|p| p.y).collect());
        }
        cluster.clear();
    };
    for p in all {
        if let Some(last) = cluster.last() {
            if p.x - last.x > ctol {
                flush(&mut cluster, &mut boundaries, &mut event_ys);
            }
        }
        cluster.push(p);
    }
    flush(&mut cluster, &mut boundaries, &mut event_ys);
    boundaries.push(viewport.xmax);
    event_ys.push(Vec::new());

    let mut cut = Cutting {
        r: params.r,
        s: sample.len(),
        seed: params.seed,
        retries_used: 0,
        n: curves.len(),
        viewport,
        sample: sample.to_vec(),
        rays: Vec::new(),
        walls: Vec::new(),
        boundaries,
        slabs: Vec::new(),
        cells: Vec::new(),
        fingerprint: fingerprint(curves),
        incidence_tol: params.incidence_tol,
        event_ys,
        curves: curves.to_vec(),
        geoms,
    };

    // Slabs and their strands.
    let nslab = cut.boundaries.len() - 1;
    let slabs: Vec<Slab> = (0..nslab)
        .into_par_iter()
        .map(|j| {
            let (x0, x1) = (cut.boundaries[j], cut.boundaries[j + 1]);
            let xm = 0.5 * (x0 + x1);
            let mut strands: Vec<(f64, Strand)> = Vec::new();
            for &a in sample {
                for (k, pc) in cut.geoms[a].pieces.iter().enumerate() {
                    if pc.xmax() - pc.xmin() > ctol && pc.xmin() < xm && xm < pc.xmax() {
                        let y = pc.exact_y(&cut.curves[a].curve, xm);
                        strands.push((y, Strand { curve: a, piece: k }));
                    }
                }
            }
            strands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            Slab {
                x0,
                x1,
                strands: strands.into_iter().map(|s| s.1).collect(),
                gap_cells: Vec::new(),
            }
        })
        .collect();
    cut.slabs = slabs;

    // Cells: merge gaps across a boundary when both bounding strands continue
    // and no event point lies on the gap there.
    let mut next_cell = 0usize;
    for j in 0..nslab {
        let ng = cut.slabs[j].strands.len() + 1;
        let mut cells = vec![usize::MAX; ng];
        if j > 0 {
            let prev = &cut.slabs[j - 1];
            let mut prev_gaps: HashMap<(Option<Strand>, Option<Strand>), usize> = HashMap::new();
            for g in 0..prev.strands.len() + 1 {
                prev_gaps.insert(gap_keys(prev, g), g);
            }
            let xb = cut.boundaries[j];
            for (g, cell) in cells.iter_mut().enumerate() {
                let keys = gap_keys(&cut.slabs[j], g);
                if let Some(&pg) = prev_gaps.get(&keys) {
                    let (lo, hi) = cut.gap_span(keys, xb);
                    let eps = params.incidence_tol;
                    let blocked = cut.event_ys[j].iter().any(|&y| y >= lo - eps && y <= hi + eps);
                    if !blocked {
                        *cell = prev.gap_cells[pg];
                    }
                }
            }
        }
        for cell in cells.iter_mut() {
            if *cell == usize::MAX {
                *cell = next_cell;
                next_cell += 1;
            }
        }
        cut.slabs[j].gap_cells = cells;
    }
    cut.build_cell_records(next_cell);
    cut.build_rays(&ray_events, &clip_events);
    Ok(cut)
}

/// Minimum distance from `p` to `curve(t)` for `t` between `ta` and `tb`.
fn golden_distance(curve: &crate::curve::PfaffianCurve, ta: f64, tb: f64, p: Point) -> f64 {
    let d = |t: f64| curve.point(t).dist(p);
    let (mut a, mut b) = (ta.min(tb), ta.max(tb));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut e) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fe) = (d(c), d(e));
    for _ in 0..80 {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - r * (b - a);
            fc = d(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + r * (b - a);
            fe = d(e);
        }
    }
    fc.min(fe).min(d(ta)).min(d(tb))
}

fn gap_keys(slab: &Slab, g: usize) -> (Option<Strand>, Option<Strand>) {
    let lo = if g == 0 { None } else { Some(slab.strands[g - 1]) };
    let hi = slab.strands.get(g).copied();
    (lo, hi)
}

impl Cutting {
    pub fn curves(&self) -> &[Arc<TracedCurve>] {
        &self.curves
    }

    pub fn is_sampled(&self, curve: usize) -> bool {
        self.sample.binary_search(&curve).is_ok()
    }

    pub fn strand_y(&self, s: Strand, x: f64) -> f64 {
        self.geoms[s.curve].pieces[s.piece].exact_y(&self.curves[s.curve].curve, x)
    }

    /// Ordinate of strand `s` at `x`, exact when it is within `margin` of `y`
    /// and interpolated otherwise. The interpolated value is on the correct
    /// side of `y ± margin`.
    fn strand_y_near(&self, s: Strand, x: f64, y: f64, margin: f64) -> f64 {
        let pc = &self.geoms[s.curve].pieces[s.piece];
        let i = pc.bracket(x);
        let slack = (pc.y[i + 1] - pc.y[i]).abs() + (pc.x[i + 1] - pc.x[i]);
        let yi = pc.y_interp(x);
        if (yi - y).abs() > slack + margin {
            yi
        } else {
            pc.exact_y(&self.curves[s.curve].curve, x)
        }
    }

    /// Distance from `p` to the arc of strand `s`, searched only where the
    /// arc could be within `reach` of `p`.
    fn strand_distance(&self, s: Strand, p: Point, reach: f64) -> f64 {
        let pc = &self.geoms[s.curve].pieces[s.piece];
        let curve = &self.curves[s.curve].curve;
        if p.x < pc.xmin() - reach || p.x > pc.xmax() + reach {
            return f64::INFINITY;
        }
        let (i0, i1) = (pc.bracket(p.x - reach), pc.bracket(p.x + reach));
        let mut best = f64::INFINITY;
        for i in i0..=i1 {
            let lo = pc.y[i].min(pc.y[i + 1]);
            let hi = pc.y[i].max(pc.y[i + 1]);
            let slack = (pc.x[i + 1] - pc.x[i]) + reach;
            if p.y < lo - slack || p.y > hi + slack {
                continue;
            }
            best = best.min(golden_distance(curve, pc.t[i], pc.t[i + 1], p));
        }
        best
    }

    fn strand_t(&self, s: Strand, x: f64) -> f64 {
        self.geoms[s.curve].pieces[s.piece].exact(&self.curves[s.curve].curve, x).0
    }

    fn gap_span(&self, keys: (Option<Strand>, Option<Strand>), x: f64) -> (f64, f64) {
        let lo = keys.0.map_or(self.viewport.ymin, |s| self.strand_y(s, x));
        let hi = keys.1.map_or(self.viewport.ymax, |s| self.strand_y(s, x));
        (lo, hi)
    }

    fn build_cell_records(&mut self, count: usize) {
        let mut spans: Vec<Option<(usize, usize, usize)>> = vec![None; count];
        for (j, slab) in self.slabs.iter().enumerate() {
            for (g, &c) in slab.gap_cells.iter().enumerate() {
                spans[c] = Some(match spans[c] {
                    None => (j, j, g),
                    Some((a, _, g0)) => (a, j, g0),
                });
            }
        }
        let eps = self.incidence_tol;
        let cells: Vec<PfCell> = spans
            .into_par_iter()
            .enumerate()
            .map(|(id, span)| {
                let (j0, j1, g0) = span.expect("every cell owns a gap");
                let keys = gap_keys(&self.slabs[j0], g0);
                let (x0, x1) = (self.boundaries[j0], self.boundaries[j1 + 1]);
                let arc = |s: Option<Strand>| {
                    s.map(|s| {
                        let (ta, tb) = (self.strand_t(s, x0), self.strand_t(s, x1));
                        CellArc {
                            curve: s.curve,
                            t0: ta.min(tb),
                            t1: ta.max(tb),
                        }
                    })
                };
                let wall = |x: f64| {
                    let (lo, hi) = self.gap_span(keys, x);
                    (hi - lo > eps).then_some(Wall { x, y0: lo, y1: hi })
                };
                let left = wall(x0);
                let right = wall(x1);
                let corner_count = 2 + left.is_some() as u8 + right.is_some() as u8;
                let mut area = 0.0;
                for j in j0..=j1 {
                    let (a, b) = (self.boundaries[j], self.boundaries[j + 1]);
                    let h = |x: f64| {
                        let (lo, hi) = self.gap_span(keys, x);
                        hi - lo
                    };
                    let m = 0.5 * (a + b);
                    area += (b - a) / 6.0 * (h(a) + 4.0 * h(m) + h(b));
                }
                PfCell {
                    id,
                    slabs: (j0, j1),
                    left_x: x0,
                    right_x: x1,
                    bottom: arc(keys.0),
                    top: arc(keys.1),
                    left,
                    right,
                    corner_count,
                    area,
                    crossings: Vec::new(),
                }
            })
            .collect();
        self.cells = cells;
    }

    /// Ordinates of sampled arcs at `x`, excluding those within `eps` of `y`.
    fn next_arcs(&self, x: f64, y: f64, eps: f64) -> (f64, f64) {
        let mut below = self.viewport.ymin;
        let mut above = self.viewport.ymax;
        for &a in &self.sample {
            for pc in &self.geoms[a].pieces {
                if x < pc.xmin() - CLUSTER || x > pc.xmax() + CLUSTER {
                    continue;
                }
                let i = pc.bracket(x);
                let slack = (pc.y[i + 1] - pc.y[i]).abs() + (pc.x[i + 1] - pc.x[i]);
                let vi = pc.y_interp(x);
                if vi - slack > above || vi + slack < below {
                    continue;
                }
                let v = pc.exact_y(&self.curves[a].curve, x);
                if v > y + eps {
                    above = above.min(v);
                } else if v < y - eps {
                    below = below.max(v);
                }
            }
        }
        (below, above)
    }

    fn build_rays(&mut self, ray_events: &[(Point, EventKind)], clip_events: &[(Point, EventKind)]) {
        let eps = self.incidence_tol;
        let make = |events: &[(Point, EventKind)]| -> Vec<Ray> {
            let mut out: Vec<Ray> = events
                .par_iter()
                .flat_map_iter(|&(p, kind)| {
                    let (below, above) = self.next_arcs(p.x, p.y, eps);
                    [
                        Ray { x: p.x, y_from: p.y, y_to: above, kind },
                        Ray { x: p.x, y_from: p.y, y_to: below, kind },
                    ]
                })
                .collect();
            out.sort_by(|a, b| {
                a.x.total_cmp(&b.x)
                    .then(a.y_from.total_cmp(&b.y_from))
                    .then(a.y_to.total_cmp(&b.y_to))
            });
            out
        };
        let rays = make(ray_events);
        let walls = make(clip_events);
        self.rays = rays;
        self.walls = walls;
    }

    fn slab_of(&self, x: f64) -> usize {
        let k = self.boundaries.len();
        let i = self.boundaries[1..k - 1].partition_point(|&b| b <= x);
        i.min(self.slabs.len() - 1)
    }

    /// Gap index of `p` in slab `j` and the strands within `eps` of it.
    fn gap_in_slab(&self, j: usize, p: Point, eps: f64) -> (usize, Vec<usize>) {
        let slab = &self.slabs[j];
        let g = self.gap_index(slab, p, eps);
        let mut on = Vec::new();
        for k in [g.wrapping_sub(1), g] {
            if let Some(&s) = slab.strands.get(k) {
                let dy = (self.strand_y_near(s, p.x, p.y, eps) - p.y).abs();
                if dy <= eps || self.strand_distance(s, p, eps) <= eps {
                    on.push(k);
                }
            }
        }
        (g, on)
    }

    /// Number of strands of `slab` strictly below `p`.
    fn gap_index(&self, slab: &Slab, p: Point, eps: f64) -> usize {
        let (mut lo, mut hi) = (0usize, slab.strands.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.strand_y_near(slab.strands[mid], p.x, p.y, eps) < p.y {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// The unique cell containing `p` in its interior, or the cells sharing
    /// the boundary point `p`. `None` outside the viewport.
    pub fn locate_point(&self, p: Point) -> Option<Location> {
        if !self.viewport.contains(p) {
            return None;
        }
        let eps = self.incidence_tol;
        let j = self.slab_of(p.x);
        let mut slabs = vec![j];
        if j > 0 && p.x - self.boundaries[j] <= eps {
            slabs.push(j - 1);
        }
        if j + 1 < self.slabs.len() && self.boundaries[j + 1] - p.x <= eps {
            slabs.push(j + 1);
        }
        let mut cells = BTreeSet::new();
        for js in slabs {
            let (g, on) = self.gap_in_slab(js, p, eps);
            let gc = &self.slabs[js].gap_cells;
            if on.is_empty() {
                cells.insert(gc[g]);
            }
            for k in on {
                cells.insert(gc[k]);
                cells.insert(gc[k + 1]);
            }
        }
        let cells: Vec<usize> = cells.into_iter().collect();
        Some(if cells.len() == 1 {
            Location::Interior(cells[0])
        } else {
            Location::Boundary(cells)
        })
    }

    /// Cell containing `p` by scanning every cell (test oracle).
    pub fn locate_linear(&self, p: Point) -> Vec<usize> {
        let eps = self.incidence_tol;
        self.cells
            .iter()
            .filter(|c| {
                if p.x < c.left_x - eps || p.x > c.right_x + eps {
                    return false;
                }
                let j = self.slab_of(p.x.clamp(c.left_x, c.right_x)).clamp(c.slabs.0, c.slabs.1);
                let g = self.slabs[j].gap_cells.iter().position(|&x| x == c.id).unwrap();
                let (lo, hi) = self.gap_span(gap_keys(&self.slabs[j], g), p.x);
                p.y >= lo - eps && p.y <= hi + eps
            })
            .map(|c| c.id)
            .collect()
    }

    /// Interior cell of `p` without incidence refinement; `None` when `p` is
    /// within `eps` of a strand or off the viewport.
    fn interior_cell(&self, p: Point) -> Option<usize> {
        if !self.viewport.contains(p) {
            return None;
        }
        let eps = self.incidence_tol;
        let j = self.slab_of(p.x);
        let slab = &self.slabs[j];
        let g = self.gap_index(slab, p, eps);
        for k in [g.wrapping_sub(1), g] {
            if let Some(&s) = slab.strands.get(k) {
                if (self.strand_y_near(s, p.x, p.y, eps) - p.y).abs() <= eps {
                    return None;
                }
            }
        }
        Some(slab.gap_cells[g])
    }

    /// Fill every cell's crossing list from the traces of unsampled curves.
    pub fn compute_crossings(&mut self) {
        let hits: Vec<(usize, BTreeSet<usize>)> = (0..self.n)
            .into_par_iter()
            .filter(|&c| !self.is_sampled(c))
            .map(|c| {
                let mut set = BTreeSet::new();
                for s in self.curves[c].trace.samples() {
                    if let Some(cell) = self.interior_cell(s.point()) {
                        set.insert(cell);
                    }
                }
                // One probe per slab traversed, so thin cells are not skipped.
                for pc in &self.geoms[c].pieces {
                    let j0 = self.slab_of(pc.xmin());
                    let j1 = self.slab_of(pc.xmax());
                    for j in j0..=j1 {
                        let (a, b) = (self.slabs[j].x0.max(pc.xmin()), self.slabs[j].x1.min(pc.xmax()));
                        if b <= a {
                            continue;
                        }
                        let x = 0.5 * (a + b);
                        let p = Point::new(x, pc.exact_y(&self.curves[c].curve, x));
                        if let Some(cell) = self.interior_cell(p) {
                            set.insert(cell);
                        }
                    }
                }
                (c, set)
            })
            .collect();
        for cell in &mut self.cells {
            cell.crossings.clear();
        }
        for (c, set) in hits {
            for cell in set {
                self.cells[cell].crossings.push(c);
            }
        }
    }

    pub fn cell_crossings(&self, cell: usize) -> usize {
        self.cells[cell].crossings.len()
    }

    pub fn max_crossings(&self) -> usize {
        self.cells.iter().map(|c| c.crossings.len()).max().unwrap_or(0)
    }

    /// Number of pairwise crossings and tangents behind the rays.
    pub fn ray_event_count(&self) -> usize {
        self.rays.len() / 2
    }

    pub fn summary(&self) -> CuttingSummary<'_> {
        CuttingSummary {
            format_version: FORMAT_VERSION,
            r: self.r,
            s: self.s,
            seed: self.seed,
            retries_used: self.retries_used,
            n: self.n,
            viewport: self.viewport,
            fingerprint: format!("{:016x}", self.fingerprint),
            sample: &self.sample,
            rays: &self.rays,
            walls: &self.walls,
            cells: &self.cells,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("cutting serializes")
    }
}

/// Serializable view of a cutting.
#[derive(Debug, Serialize)]
pub struct CuttingSummary<'a> {
    pub format_version: u32,
    pub r: usize,
    pub s: usize,
    pub seed: u64,
    pub retries_used: usize,
    pub n: usize,
    pub viewport: Rect,
    pub fingerprint: String,
    pub sample: &'a [usize],
    pub rays: &'a [Ray],
    pub walls: &'a [Ray],
    pub cells: &'a [PfCell],
}
