//! Scene generators: integer grids with lines, their exponential images,
//! unit circles and random catalog scenes with planted incidences.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{BaseParam, CurveKind, PfaffianCurve};
use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::poly::UnivariatePolynomial;
use crate::scene::Scene;

/// Points `[0,a)×[0,2ab)` and lines `y = s x + t` for `s < b`, `t < ab`.
/// Every line meets exactly `a` grid points, so `I = a²b²`.
pub fn grid_lines(a: usize, b: usize) -> Scene {
    let mut points = Vec::with_capacity(2 * a * a * b);
    for x in 0..a {
        for y in 0..2 * a * b {
            points.push(Point::new(x as f64, y as f64));
        }
    }
    let mut curves = Vec::with_capacity(a * b * b);
    for s in 0..b {
        for t in 0..a * b {
            curves.push(PfaffianCurve::line(s as f64, t as f64));
        }
    }
    let viewport = Rect::new(-0.5, -0.5, a as f64 - 0.5, (2 * a * b) as f64 - 0.5);
    Scene::new(viewport, points, curves)
}

/// Grid dimensions for a sweep target of about `n` curves: `a ≈ n^{1/3}`,
/// `b ≈ sqrt(n / a)`.
pub fn grid_dims(n: usize) -> (usize, usize) {
    let a = ((n as f64).cbrt().round() as usize).max(1);
    let b = (((n as f64) / a as f64).sqrt().round() as usize).max(1);
    (a, b)
}

/// Map `(x, y) -> (eˣ, y)`. Lines `y = s x + t` become `y = s ln X + t`.
pub fn exp_transform(scene: &Scene) -> Result<Scene> {
    let curves = scene
        .curves
        .iter()
        .map(|c| match c.base() {
            BaseParam::Line { slope, intercept } if c.linear().is_identity() => {
                Ok(PfaffianCurve::log(*slope, *intercept))
            }
            _ => Err(Error::BadParameter(format!(
                "exp_transform needs untransformed lines, got {}",
                c.kind()
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    let points = scene.points.iter().map(|p| Point::new(p.x.exp(), p.y)).collect();
    let vp = scene.viewport;
    let viewport = Rect::new(vp.xmin.exp(), vp.ymin, vp.xmax.exp(), vp.ymax);
    Ok(Scene::new(viewport, points, curves))
}

/// Intersection points of two unit circles; one point when tangent.
pub fn unit_circle_intersections(c1: Point, c2: Point) -> Vec<Point> {
    let d = c1.dist(c2);
    if d == 0.0 || d > 2.0 + 1e-12 {
        return Vec::new();
    }
    let mid = (c1 + c2) * 0.5;
    if (d - 2.0).abs() <= 1e-12 {
        return vec![mid];
    }
    let h = (1.0 - 0.25 * d * d).sqrt();
    let u = (c2 - c1) * (1.0 / d);
    let perp = Point::new(-u.y, u.x);
    vec![mid + perp * h, mid - perp * h]
}

/// `n` unit circles with centers uniform in a square sized so neighbors
/// overlap, and `m` points of which a `planted` fraction sit on pairwise
/// intersections (or on a single circle when no pair meets).
pub fn unit_circles(m: usize, n: usize, planted: f64, seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 0.75 * (n.max(1) as f64).sqrt();
    let centers: Vec<Point> = (0..n)
        .map(|_| Point::new(rng.random_range(-half..=half), rng.random_range(-half..=half)))
        .collect();
    let viewport = Rect::square(half + 1.25);
    let mut meets: Vec<Point> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            meets.extend(unit_circle_intersections(centers[i], centers[j]));
        }
    }
    let k = planted_count(m, planted);
    let mut points = Vec::with_capacity(m);
    for _ in 0..k {
        if !meets.is_empty() {
            points.push(meets[rng.random_range(0..meets.len())]);
        } else if n > 0 {
            let c = centers[rng.random_range(0..n)];
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            points.push(Point::new(c.x + t.cos(), c.y + t.sin()));
        }
    }
    while points.len() < m {
        points.push(uniform_in(&mut rng, viewport));
    }
    let curves = centers.iter().map(|c| PfaffianCurve::circle(c.x, c.y, 1.0)).collect();
    Scene::new(viewport, points, curves)
}

fn planted_count(m: usize, planted: f64) -> usize {
    ((planted.clamp(0.0, 1.0) * m as f64).round() as usize).min(m)
}

fn uniform_in(rng: &mut ChaCha8Rng, r: Rect) -> Point {
    Point::new(rng.random_range(r.xmin..r.xmax), rng.random_range(r.ymin..r.ymax))
}

/// Viewport used by [`random_scene`].
pub const RANDOM_VIEWPORT: Rect = Rect::square(3.0);

/// Kinds drawn by [`random_scene`] when no subset is given.
pub const RANDOM_KINDS: [CurveKind; 10] = [
    CurveKind::Line,
    CurveKind::Circle,
    CurveKind::Parabola,
    CurveKind::Exp,
    CurveKind::Log,
    CurveKind::Tan,
    CurveKind::Arctan,
    CurveKind::Reciprocal,
    CurveKind::ExpOfPoly,
    CurveKind::ReciprocalRoot,
];

fn random_curve(kind: CurveKind, rng: &mut ChaCha8Rng) -> Option<PfaffianCurve> {
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
    let away = |v: f64| if v.abs() < 0.1 { 0.1f64.copysign(v) } else { v };
    Some(match kind {
        CurveKind::Line => PfaffianCurve::line(u(-2.0, 2.0), u(-1.5, 1.5)),
        CurveKind::Circle => PfaffianCurve::circle(u(-1.5, 1.5), u(-1.5, 1.5), u(0.3, 1.5)),
        CurveKind::Parabola => PfaffianCurve::parabola(u(-1.0, 1.0), u(-1.0, 1.0), u(-1.0, 1.0)),
        CurveKind::Exp => PfaffianCurve::exp(away(u(-1.0, 1.0)), away(u(-1.2, 1.2)), u(-1.0, 1.0)),
        CurveKind::Log => PfaffianCurve::log(u(-1.5, 1.5), u(-1.0, 1.0)),
        CurveKind::Tan => PfaffianCurve::tan(0, u(-1.0, 1.0), u(-1.0, 1.0)),
        CurveKind::Arctan => PfaffianCurve::arctan(u(-2.0, 2.0), u(-1.0, 1.0)),
        CurveKind::Reciprocal => {
            let branch = if u(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            PfaffianCurve::reciprocal(away(u(-1.0, 1.0)), branch, u(-1.5, 1.5), u(-1.0, 1.0))
        }
        CurveKind::ExpOfPoly => {
            PfaffianCurve::exp_of_poly(vec![u(-0.5, 0.5), u(-0.5, 0.5), u(-0.4, 0.0)])
        }
        CurveKind::ReciprocalRoot => PfaffianCurve::reciprocal_root(rng.random_range(1..=6)),
        CurveKind::Composed => {
            let outer = BaseParam::Exp { a: 1.0, b: 1.0, c: 0.0 };
            let p = UnivariatePolynomial::new(vec![u(-0.5, 0.5), 0.0, u(-0.5, -0.1)]);
            PfaffianCurve::new(BaseParam::Composed { outer: Box::new(outer), p })
        }
    })
}

/// A point on `curve` inside `viewport`, by rejection on the parameter window.
fn point_on(curve: &PfaffianCurve, viewport: Rect, rng: &mut ChaCha8Rng) -> Option<Point> {
    let (t0, t1) = curve.window(&viewport);
    if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let t = rng.random_range(t0..t1);
        if !curve.defined(t) {
            continue;
        }
        let p = curve.point(t);
        if p.x.is_finite() && p.y.is_finite() && viewport.contains(p) {
            return Some(p);
        }
    }
    None
}

/// `n` random catalog curves of the given kinds (distinct parameters, each
/// visible in the viewport) and `m` points, a `planted` fraction of them on
/// random curves.
pub fn random_scene(kinds: &[CurveKind], m: usize, n: usize, planted: f64, seed: u64) -> Result<Scene> {
    if !(0.0..=1.0).contains(&planted) {
        return Err(Error::BadParameter(format!("planted fraction {planted} outside [0, 1]")));
    }
    let kinds = if kinds.is_empty() { &RANDOM_KINDS[..] } else { kinds };
    let viewport = RANDOM_VIEWPORT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut curves = Vec::with_capacity(n);
    let mut tries = 0;
    while curves.len() < n {
        tries += 1;
        if tries > 1000 * (n + 1) {
            return Err(Error::BadParameter(format!(
                "could not draw {n} distinct curves from {} kinds",
                kinds.len()
            )));
        }
        let kind = kinds[rng.random_range(0..kinds.len())];
        let Some(c) = random_curve(kind, &mut rng) else { continue };
        if point_on(&c, viewport, &mut rng).is_none() {
            continue;
        }
        let key = serde_json::to_string(&c.to_spec()).expect("curve spec serializes");
        if seen.insert(key) {
            curves.push(c);
        }
    }
    let k = if n == 0 { 0 } else { planted_count(m, planted) };
    let mut points = Vec::with_capacity(m);
    while points.len() < k {
        let c = &curves[rng.random_range(0..n)];
        if let Some(p) = point_on(c, viewport, &mut rng) {
            points.push(p);
        }
    }
    while points.len() < m {
        points.push(uniform_in(&mut rng, viewport));
    }
    Ok(Scene::new(viewport, points, curves))
}

/// Parabola `y = a x² + b x + c` through three points with distinct `x`.
pub fn parabola_through(p: [Point; 3]) -> PfaffianCurve {
    let [p0, p1, p2] = p;
    let d01 = (p1.y - p0.y) / (p1.x - p0.x);
    let d12 = (p2.y - p1.y) / (p2.x - p1.x);
    let a = (d12 - d01) / (p2.x - p0.x);
    let b = d01 - a * (p0.x + p1.x);
    let c = p0.y - (a * p0.x + b) * p0.x;
    PfaffianCurve::parabola(a, b, c)
}

/// Four points and five curves with 13 incidences: a parabola through each
/// triple of points and a line through one of them.
pub fn witness_scene() -> Scene {
    let pts = vec![
        Point::new(-1.5, 0.2),
        Point::new(-0.4, 1.1),
        Point::new(0.6, -0.3),
        Point::new(1.7, 0.8),
    ];
    let mut curves: Vec<PfaffianCurve> = (0..4)
        .map(|skip| {
            let t: Vec<Point> = (0..4).filter(|&i| i != skip).map(|i| pts[i]).collect();
            parabola_through([t[0], t[1], t[2]])
        })
        .collect();
    curves.push(PfaffianCurve::line(0.5, pts[2].y - 0.5 * pts[2].x));
    Scene::new(Rect::square(4.0), pts, curves)
}
