//! Pairwise intersections and vertical tangents of traced curves.

use serde::Serialize;

use crate::curve::{CurveTrace, PfaffianCurve};
use crate::error::{Error, Result};
use crate::geom::{Point, Rect};

pub const DEFAULT_TOL: f64 = 1e-9;
const VX_TOL: f64 = 1e-10;
/// Interpolated gaps below this trigger an exact search for tangential contact.
const NEAR_GAP: f64 = 1e-3;

/// `(k1 + k2)(2k1 + k2) + k1 + 1`
pub fn pfaffian_bezout_bound(k1: u32, k2: u32) -> u64 {
    let (k1, k2) = (k1 as u64, k2 as u64);
    (k1 + k2) * (2 * k1 + k2) + k1 + 1
}

pub fn check_bezout(c1: &PfaffianCurve, c2: &PfaffianCurve, found: &[Point]) -> bool {
    found.len() as u64 <= pfaffian_bezout_bound(c1.pf_degree(), c2.pf_degree())
}

/// A point where the tangent of a trace is vertical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tangent {
    pub comp: usize,
    pub t: f64,
    pub point: Point,
}

/// A maximal x-monotone run of a trace component, stored by increasing x.
#[derive(Debug, Clone)]
pub struct Piece {
    pub comp: usize,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub bbox: Rect,
}

impl Piece {
    fn from_samples(comp: usize, mut pts: Vec<(f64, f64, f64)>) -> Option<Piece> {
        if pts.len() < 2 {
            return None;
        }
        if pts[0].1 > pts[pts.len() - 1].1 {
            pts.reverse();
        }
        // Drop samples that break strict monotonicity (rounding at tangents).
        let mut clean: Vec<(f64, f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            match clean.last() {
                Some(q) if p.1 <= q.1 => {}
                _ => clean.push(p),
            }
        }
        if clean.len() < 2 {
            return None;
        }
        let bbox = Rect::bounding(clean.iter().map(|p| Point::new(p.1, p.2))).unwrap();
        Some(Piece {
            comp,
            t: clean.iter().map(|p| p.0).collect(),
            x: clean.iter().map(|p| p.1).collect(),
            y: clean.iter().map(|p| p.2).collect(),
            bbox,
        })
    }

    pub fn xmin(&self) -> f64 {
        self.x[0]
    }

    pub fn xmax(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Index `i` with `x[i] <= x <= x[i+1]` (clamped).
    pub fn bracket(&self, x: f64) -> usize {
        let i = self.x.partition_point(|&v| v <= x);
        i.saturating_sub(1).min(self.x.len() - 2)
    }

    /// Linear interpolation of the polyline.
    pub fn y_interp(&self, x: f64) -> f64 {
        let i = self.bracket(x);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let u = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        self.y[i] + u * (self.y[i + 1] - self.y[i])
    }

    /// [`Piece::y_interp`] for nondecreasing queries, advancing `cursor`.
    fn y_at_cursor(&self, x: f64, cursor: &mut usize) -> f64 {
        let last = self.x.len() - 2;
        while *cursor < last && self.x[*cursor + 1] <= x {
            *cursor += 1;
        }
        let i = *cursor;
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let u = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        self.y[i] + u * (self.y[i + 1] - self.y[i])
    }

    /// Exact `(t, y)` on the curve at abscissa `x`.
    pub fn exact(&self, curve: &PfaffianCurve, x: f64) -> (f64, f64) {
        let i = self.bracket(x);
        if x <= self.x[i] {
            return (self.t[i], self.y[i]);
        }
        if x >= self.x[i + 1] {
            return (self.t[i + 1], self.y[i + 1]);
        }
        if curve.linear().is_identity() && curve.kind().is_graph() {
            return (x, curve.point(x).y);
        }
        let (mut ta, mut tb) = (self.t[i], self.t[i + 1]);
        for _ in 0..200 {
            let m = 0.5 * (ta + tb);
            if m == ta || m == tb {
                break;
            }
            if curve.point(m).x < x {
                ta = m;
            } else {
                tb = m;
            }
        }
        let (pa, pb) = (curve.point(ta), curve.point(tb));
        if (pa.x - x).abs() <= (pb.x - x).abs() {
            (ta, pa.y)
        } else {
            (tb, pb.y)
        }
    }

    pub fn exact_y(&self, curve: &PfaffianCurve, x: f64) -> f64 {
        self.exact(curve, x).1
    }
}

/// Split a trace into x-monotone pieces and collect its vertical tangents.
pub fn monotone_pieces(curve: &PfaffianCurve, trace: &CurveTrace) -> (Vec<Piece>, Vec<Tangent>) {
    let vx = |t: f64| {
        let p = curve.point(t);
        curve.field().vx.eval(p.x, p.y)
    };
    let refine = |mut a: f64, mut b: f64| -> f64 {
        let sa = vx(a) > 0.0;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let v = vx(m);
            if v.abs() <= VX_TOL || m == a || m == b {
                return m;
            }
            if (v > 0.0) == sa {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let sign = |v: f64| if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 };

    let mut pieces = Vec::new();
    let mut tangents = Vec::new();
    for (ci, comp) in trace.components.iter().enumerate() {
        let s = &comp.samples;
        let mut cur: Vec<(f64, f64, f64)> = vec![(s[0].t, s[0].x, s[0].y)];
        let mut prev = sign(vx(s[0].t));
        for w in s.windows(2) {
            let next = sign(vx(w[1].t));
            if prev != 0 && next != 0 && prev != next {
                let t = refine(w[0].t, w[1].t);
                let p = curve.point(t);
                tangents.push(Tangent { comp: ci, t, point: p });
                cur.push((t, p.x, p.y));
                pieces.extend(Piece::from_samples(ci, std::mem::take(&mut cur)));
                cur.push((t, p.x, p.y));
            }
            if next != 0 {
                prev = next;
            }
            cur.push((w[1].t, w[1].x, w[1].y));
        }
        pieces.extend(Piece::from_samples(ci, cur));
        if comp.closed {
            // The gap across the excluded parameter endpoint.
            let (first, last) = (s[0], s[s.len() - 1]);
            let (a, b) = (sign(vx(last.t)), sign(vx(first.t)));
            if a != 0 && b != 0 && a != b {
                let period = curve.domain().1 - curve.domain().0;
                let t = refine(last.t, first.t + period);
                tangents.push(Tangent {
                    comp: ci,
                    t,
                    point: curve.point(t),
                });
            }
        }
    }
    (pieces, tangents)
}

/// Points where the tangent of the traced curve is vertical.
pub fn vertical_tangent_points(curve: &PfaffianCurve, trace: &CurveTrace) -> Vec<Point> {
    monotone_pieces(curve, trace).1.into_iter().map(|t| t.point).collect()
}

/// An intersection with the parameter value on each curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub point: Point,
    pub t1: f64,
    pub t2: f64,
}

/// Intersections of two traced curves inside their viewport.
pub fn intersect_curves(
    c1: &PfaffianCurve,
    tr1: &CurveTrace,
    c2: &PfaffianCurve,
    tr2: &CurveTrace,
    tol: f64,
) -> Result<Vec<Point>> {
    let (p1, _) = monotone_pieces(c1, tr1);
    let (p2, _) = monotone_pieces(c2, tr2);
    Ok(intersect_pieces((c1, &p1), (c2, &p2), (0, 1), tol)?
        .into_iter()
        .map(|c| c.point)
        .collect())
}

/// Intersections of two curves given their monotone pieces; `ids` are only
/// used in error reports.
pub fn intersect_pieces(
    a: (&PfaffianCurve, &[Piece]),
    b: (&PfaffianCurve, &[Piece]),
    ids: (usize, usize),
    tol: f64,
) -> Result<Vec<Crossing>> {
    let mut found: Vec<Crossing> = Vec::new();
    for pa in a.1 {
        for pb in b.1 {
            if !pa.bbox.expand(tol).intersects(&pb.bbox) {
                continue;
            }
            pair_roots(a.0, pa, b.0, pb, ids, tol, &mut found)?;
        }
    }
    found.sort_by(|p, q| p.point.x.total_cmp(&q.point.x).then(p.point.y.total_cmp(&q.point.y)));
    let mut merged: Vec<Crossing> = Vec::new();
    for c in found {
        if merged.iter().any(|m| m.point.dist(c.point) <= 10.0 * tol) {
            continue;
        }
        merged.push(c);
    }
    Ok(merged)
}

fn pair_roots(
    ca: &PfaffianCurve,
    pa: &Piece,
    cb: &PfaffianCurve,
    pb: &Piece,
    ids: (usize, usize),
    tol: f64,
    out: &mut Vec<Crossing>,
) -> Result<()> {
    let lo = pa.xmin().max(pb.xmin());
    let hi = pa.xmax().min(pb.xmax());
    if lo > hi {
        return Ok(());
    }
    // Merged abscissa grid over the overlap.
    let mut xs: Vec<f64> = Vec::with_capacity(pa.len() + pb.len());
    xs.push(lo);
    let (ia, ib) = (pa.bracket(lo), pb.bracket(lo));
    let (mut i, mut j) = (ia + 1, ib + 1);
    loop {
        let xa = pa.x.get(i).copied().unwrap_or(f64::INFINITY);
        let xb = pb.x.get(j).copied().unwrap_or(f64::INFINITY);
        let x = xa.min(xb);
        if x >= hi {
            break;
        }
        if x > lo {
            xs.push(x);
        }
        if xa <= xb {
            i += 1;
        } else {
            j += 1;
        }
    }
    if hi > lo {
        xs.push(hi);
    }
    let (mut ca_i, mut cb_i) = (ia, ib);
    let g: Vec<f64> = xs
        .iter()
        .map(|&x| pa.y_at_cursor(x, &mut ca_i) - pb.y_at_cursor(x, &mut cb_i))
        .collect();
    let exact = |x: f64| -> (f64, f64, f64) {
        let (t1, y1) = pa.exact(ca, x);
        let (t2, y2) = pb.exact(cb, x);
        (y1 - y2, t1, t2)
    };
    let mut push = |x: f64| {
        let (t1, y1) = pa.exact(ca, x);
        let (t2, y2) = pb.exact(cb, x);
        out.push(Crossing {
            point: Point::new(x, 0.5 * (y1 + y2)),
            t1,
            t2,
        });
    };

    if xs.len() == 1 {
        if exact(lo).0.abs() <= tol {
            push(lo);
        }
        return Ok(());
    }

    // Coincident stretches mean a shared component.
    let mut run = 0;
    for (k, &v) in g.iter().enumerate() {
        if v.abs() < 1e-5 {
            run += 1;
            if run >= 8 {
                let probe = [xs[k - 7], xs[k - 4], xs[k]];
                if probe.iter().all(|&x| exact(x).0.abs() <= tol) && xs[k] - xs[k - 7] > 100.0 * tol {
                    return Err(Error::SharedComponent(ids.0, ids.1));
                }
            }
        } else {
            run = 0;
        }
    }

    let n = xs.len();
    let mut windows: Vec<(usize, usize)> = Vec::new();
    for k in 0..n - 1 {
        if g[k] == 0.0 || g[k] * g[k + 1] < 0.0 {
            windows.push((k, k + 1));
        }
    }
    for k in 0..n {
        let left = if k > 0 { g[k - 1].abs() } else { f64::INFINITY };
        let right = if k + 1 < n { g[k + 1].abs() } else { f64::INFINITY };
        let v = g[k].abs();
        if v < NEAR_GAP && v <= left && v <= right {
            windows.push((k.saturating_sub(1), (k + 1).min(n - 1)));
        }
    }
    if g[n - 1] == 0.0 {
        windows.push((n - 2, n - 1));
    }
    windows.sort_unstable();
    windows.dedup();

    for (ka, kb) in windows {
        let (a, b) = (xs[ka], xs[kb]);
        let ga = exact(a).0;
        let gb = exact(b).0;
        if ga.abs() <= tol {
            push(a);
        }
        if gb.abs() <= tol {
            push(b);
        }
        if ga * gb < 0.0 {
            if let Some(x) = bisect(&exact, a, b, ga, tol) {
                push(x);
            }
            continue;
        }
        if a == b {
            continue;
        }
        let (xm, gm) = golden_min(&exact, a, b);
        if gm * ga < 0.0 {
            if let Some(x) = bisect(&exact, a, xm, ga, tol) {
                push(x);
            }
            if let Some(x) = bisect(&exact, xm, b, gm, tol) {
                push(x);
            }
        } else if gm.abs() <= tol {
            push(xm);
        }
    }
    Ok(())
}

fn bisect(f: &impl Fn(f64) -> (f64, f64, f64), mut a: f64, mut b: f64, mut ga: f64, tol: f64) -> Option<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let gm = f(m).0;
        if gm == 0.0 || m == a || m == b {
            return Some(m);
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
        if gm.abs() <= tol * 1e-3 && b - a < 1e-14 * (1.0 + a.abs()) {
            return Some(m);
        }
    }
    let m = 0.5 * (a + b);
    (f(m).0.abs() <= tol).then_some(m)
}

/// Minimizer of `|f|` over `[a, b]`.
fn golden_min(f: &impl Fn(f64) -> (f64, f64, f64), mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c).0, f(d).0);
    for _ in 0..120 {
        if fc.abs() < fd.abs() {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d).0;
        }
        if b - a < 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    if fc.abs() < fd.abs() {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{apply_linear_transform, trace_curve};

    fn inter(c1: &PfaffianCurve, c2: &PfaffianCurve, vp: Rect) -> Vec<Point> {
        let t1 = trace_curve(c1, vp, 1e-3).unwrap();
        let t2 = trace_curve(c2, vp, 1e-3).unwrap();
        intersect_curves(c1, &t1, c2, &t2, DEFAULT_TOL).unwrap()
    }

    fn root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(m) < 0.0) == (f(a) < 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        a
    }

    #[test]
    fn bezout_formula() {
        assert_eq!(pfaffian_bezout_bound(1, 1), 8);
        assert_eq!(pfaffian_bezout_bound(0, 0), 1);
        assert_eq!(pfaffian_bezout_bound(2, 3), 38);
    }

    #[test]
    fn line_meets_exp_twice() {
        let pts = inter(&PfaffianCurve::line(1.0, 2.0), &PfaffianCurve::exp(1.0, 1.0, 0.0), Rect::square(4.0));
        assert_eq!(pts.len(), 2);
        let f = |x: f64| x.exp() - x - 2.0;
        let r1 = root(f, -3.0, 0.0);
        let r2 = root(f, 0.0, 3.0);
        assert!((pts[0].x - r1).abs() < 1e-8 && (pts[1].x - r2).abs() < 1e-8, "{pts:?}");
        assert!((r1 + 1.841406).abs() < 1e-6 && (r2 - 1.146193).abs() < 1e-6);
    }

    #[test]
    fn lines_and_circle() {
        let pts = inter(&PfaffianCurve::line(1.0, 0.0), &PfaffianCurve::line(-1.0, 0.0), Rect::square(2.0));
        assert_eq!(pts.len(), 1);
        assert!(pts[0].norm() < 1e-12);
        let pts = inter(&PfaffianCurve::circle(0.0, 0.0, 1.0), &PfaffianCurve::line(0.0, 0.9), Rect::square(3.0));
        assert_eq!(pts.len(), 2);
        let t1 = trace_curve(&PfaffianCurve::circle(0.0, 0.0, 1.0), Rect::square(3.0), 1e-3).unwrap();
        assert!(trace_curve(&PfaffianCurve::line(0.0, 2.0), Rect::square(3.0), 1e-3)
            .map(|t2| intersect_curves(&PfaffianCurve::circle(0.0, 0.0, 1.0), &t1, &PfaffianCurve::line(0.0, 2.0), &t2, 1e-9).unwrap().is_empty())
            .unwrap());
    }

    #[test]
    fn tangential_contact_reported_once() {
        let pts = inter(&PfaffianCurve::parabola(1.0, 0.0, 0.0), &PfaffianCurve::line(0.0, 0.0), Rect::square(2.0));
        assert_eq!(pts.len(), 1, "{pts:?}");
        let pts = inter(&PfaffianCurve::circle(0.0, 0.0, 1.0), &PfaffianCurve::circle(2.0, 0.0, 1.0), Rect::square(4.0));
        assert_eq!(pts.len(), 1, "{pts:?}");
        assert!(pts[0].dist(Point::new(1.0, 0.0)) < 1e-6);
    }

    #[test]
    fn tan_meets_identity_once_per_period() {
        let c = PfaffianCurve::tan(1, 0.0, 0.0);
        let pts = inter(&c, &PfaffianCurve::line(1.0, 0.0), Rect::square(6.0));
        assert_eq!(pts.len(), 1);
        let r = root(|x| x.tan() - x, std::f64::consts::PI, 1.5 * std::f64::consts::PI - 1e-9);
        assert!((pts[0].x - r).abs() < 1e-8);
        assert!(check_bezout(&c, &PfaffianCurve::line(1.0, 0.0), &pts));
    }

    #[test]
    fn shared_component_detected() {
        let c = PfaffianCurve::exp(1.0, 1.0, 0.0);
        let t = trace_curve(&c, Rect::square(2.0), 1e-3).unwrap();
        let t2 = trace_curve(&c, Rect::square(2.0), 7e-4).unwrap();
        assert!(matches!(
            intersect_curves(&c, &t, &c, &t2, 1e-9),
            Err(Error::SharedComponent(_, _))
        ));
    }

    #[test]
    fn circle_tangents() {
        let c = PfaffianCurve::circle(0.0, 0.0, 1.0);
        let t = trace_curve(&c, Rect::square(2.0), 1e-3).unwrap();
        let mut v = vertical_tangent_points(&c, &t);
        v.sort_by(|a, b| a.x.total_cmp(&b.x));
        assert_eq!(v.len(), 2);
        assert!(v[0].dist(Point::new(-1.0, 0.0)) < 1e-8);
        assert!(v[1].dist(Point::new(1.0, 0.0)) < 1e-8);

        let e = apply_linear_transform(&c, 2.0, 0.0, 0.0, 1.0).unwrap();
        let te = trace_curve(&e, Rect::square(3.0), 1e-3).unwrap();
        let mut v = vertical_tangent_points(&e, &te);
        v.sort_by(|a, b| a.x.total_cmp(&b.x));
        assert_eq!(v.len(), 2);
        assert!((v[0].x + 2.0).abs() < 1e-8 && (v[1].x - 2.0).abs() < 1e-8);

        let l = PfaffianCurve::line(2.0, 0.0);
        let tl = trace_curve(&l, Rect::square(2.0), 1e-3).unwrap();
        assert!(vertical_tangent_points(&l, &tl).is_empty());
    }
}
