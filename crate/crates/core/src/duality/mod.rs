//! Pfaffian families `f = a·m(x, y)`, the point/hyperplane dual, a generic
//! rotation and the central projection onto `z₁ = 1`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::incidence::IncidenceGraph;
use crate::poly::BivariatePolynomial;

pub const DUAL_TOL: f64 = 1e-7;
pub const GENERIC_EPS: f64 = 1e-9;
pub const ROTATION_DRAWS: usize = 100;
/// Marching-squares resolution for family-curve traces.
pub const GRID_RES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Term {
    /// `xⁱ yʲ`
    Monomial { i: u32, j: u32 },
    /// `e^{p(x, y)}`
    Exp { poly: BivariatePolynomial },
    /// `ln p(x, y)`, with `p > 0` on the family domain
    Log { poly: BivariatePolynomial },
}

impl Term {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Term::Monomial { i, j } => x.powi(*i as i32) * y.powi(*j as i32),
            Term::Exp { poly } => poly.eval(x, y).exp(),
            Term::Log { poly } => poly.eval(x, y).ln(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfaffianFamily {
    pub terms: Vec<Term>,
    #[serde(rename = "U")]
    pub domain: Rect,
}

impl PfaffianFamily {
    pub fn new(terms: Vec<Term>, domain: Rect) -> Result<Self> {
        if terms.len() < 2 {
            return Err(Error::BadParameter("a family needs at least two terms".into()));
        }
        let f = PfaffianFamily { terms, domain };
        for c in domain.corners().into_iter().chain([Point::new(
            0.5 * (domain.xmin + domain.xmax),
            0.5 * (domain.ymin + domain.ymax),
        )]) {
            if f.terms_at(c).iter().any(|v| !v.is_finite()) {
                return Err(Error::DomainViolation { x: c.x, y: c.y });
            }
        }
        Ok(f)
    }

    /// `(1, x, y)` on `[-2, 2]²`.
    pub fn lines() -> Self {
        PfaffianFamily {
            terms: vec![
                Term::Monomial { i: 0, j: 0 },
                Term::Monomial { i: 1, j: 0 },
                Term::Monomial { i: 0, j: 1 },
            ],
            domain: Rect::square(2.0),
        }
    }

    /// `(1, x, eˣ)` on `[-2, 2]²`.
    pub fn exp_x() -> Self {
        PfaffianFamily {
            terms: vec![
                Term::Monomial { i: 0, j: 0 },
                Term::Monomial { i: 1, j: 0 },
                Term::Exp { poly: BivariatePolynomial::x() },
            ],
            domain: Rect::square(2.0),
        }
    }

    /// `(1, x, y, eˣ)` on `[-2, 2]²`.
    pub fn lines_exp() -> Self {
        let mut f = PfaffianFamily::lines();
        f.terms.push(Term::Exp { poly: BivariatePolynomial::x() });
        f
    }

    /// `(1, x, y, ln(1 + x² + y²))` on `[-2, 2]²`.
    pub fn lines_log() -> Self {
        let mut f = PfaffianFamily::lines();
        let p = BivariatePolynomial::from_terms([((0, 0), 1.0), ((2, 0), 1.0), ((0, 2), 1.0)]);
        f.terms.push(Term::Log { poly: p });
        f
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn terms_at(&self, p: Point) -> Vec<f64> {
        self.terms.iter().map(|t| t.eval(p.x, p.y)).collect()
    }

    pub fn eval(&self, a: &[f64], p: Point) -> f64 {
        self.terms.iter().zip(a).map(|(t, c)| c * t.eval(p.x, p.y)).sum()
    }

    fn gradient(&self, a: &[f64], p: Point) -> Point {
        let h = 1e-6 * (1.0 + p.norm());
        let f = |q: Point| self.eval(a, q);
        Point::new(
            (f(p + Point::new(h, 0.0)) - f(p - Point::new(h, 0.0))) / (2.0 * h),
            (f(p + Point::new(0.0, h)) - f(p - Point::new(0.0, h))) / (2.0 * h),
        )
    }

    /// First-order distance `|f| / |∇f|` from `p` to the zero set of `a·m`.
    pub fn zero_distance(&self, a: &[f64], p: Point) -> f64 {
        let v = self.eval(a, p).abs();
        if v == 0.0 {
            return 0.0;
        }
        let g = self.gradient(a, p).norm();
        if g == 0.0 {
            f64::INFINITY
        } else {
            v / g
        }
    }

    fn cell_size(&self) -> Point {
        Point::new(self.domain.width() / GRID_RES as f64, self.domain.height() / GRID_RES as f64)
    }
}

/// A family member, stored with unit norm and first nonzero coordinate
/// positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCurve {
    pub coeffs: Vec<f64>,
}

impl FamilyCurve {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroCoefficients);
        }
        let lead = coeffs.iter().find(|c| **c != 0.0).copied().unwrap();
        if lead > 0.0 && (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(FamilyCurve { coeffs });
        }
        let s = lead.signum() / norm;
        Ok(FamilyCurve {
            coeffs: coeffs.iter().map(|c| c * s).collect(),
        })
    }
}

/// Normalize a list of coefficient vectors, rejecting proportional pairs.
pub fn family_curves(coeffs: Vec<Vec<f64>>) -> Result<Vec<FamilyCurve>> {
    let mut out: Vec<FamilyCurve> = Vec::with_capacity(coeffs.len());
    for (j, c) in coeffs.into_iter().enumerate() {
        let fc = FamilyCurve::new(c)?;
        if let Some(i) = out.iter().position(|o| {
            o.coeffs.iter().zip(&fc.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) <= 1e-12
        }) {
            return Err(Error::ProportionalCoefficients(i, j));
        }
        out.push(fc);
    }
    Ok(out)
}

pub fn dual_point(curve: &FamilyCurve) -> DVector<f64> {
    DVector::from_column_slice(&curve.coeffs)
}

/// Hyperplane through the origin of `ℝᵈ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginHyperplane {
    pub normal: DVector<f64>,
}

/// Hyperplane `normal·w = offset` in `ℝ^{d−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHyperplane {
    pub normal: DVector<f64>,
    pub offset: f64,
}

pub fn dual_hyperplane(family: &PfaffianFamily, p: Point) -> Result<OriginHyperplane> {
    if !family.domain.contains(p) {
        return Err(Error::DomainViolation { x: p.x, y: p.y });
    }
    let v = family.terms_at(p);
    if v.iter().all(|c| *c == 0.0) || v.iter().any(|c| !c.is_finite()) {
        return Err(Error::DegenerateDual { x: p.x, y: p.y });
    }
    Ok(OriginHyperplane {
        normal: DVector::from_vec(v),
    })
}

/// Haar-distributed orthogonal matrix from the QR factorization of a
/// Gaussian matrix, with the signs of `R`'s diagonal folded into `Q`.
pub fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

#[derive(Debug, Clone)]
pub struct Rotated {
    pub rotation: DMatrix<f64>,
    pub points: Vec<DVector<f64>>,
    pub planes: Vec<OriginHyperplane>,
    pub draws: usize,
}

fn is_generic(points: &[DVector<f64>], planes: &[OriginHyperplane]) -> bool {
    points.iter().all(|z| z[0].abs() > GENERIC_EPS)
        && planes.iter().all(|h| {
            h.normal[0].abs() > GENERIC_EPS && h.normal.rows(1, h.normal.len() - 1).norm() > GENERIC_EPS
        })
}

/// Rotate about the origin until no dual point has `z₁ = 0` and no dual
/// hyperplane is `z₁ = 0` or contains the `z₁` axis.
pub fn generic_rotation(points: &[DVector<f64>], planes: &[OriginHyperplane], seed: u64) -> Result<Rotated> {
    let d = points
        .first()
        .map(|p| p.len())
        .or_else(|| planes.first().map(|h| h.normal.len()))
        .unwrap_or(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=ROTATION_DRAWS {
        let q = random_orthogonal(d, &mut rng);
        let pts: Vec<DVector<f64>> = points.iter().map(|z| &q * z).collect();
        let pls: Vec<OriginHyperplane> = planes
            .iter()
            .map(|h| OriginHyperplane { normal: &q * &h.normal })
            .collect();
        if is_generic(&pts, &pls) {
            return Ok(Rotated {
                rotation: q,
                points: pts,
                planes: pls,
                draws: draw,
            });
        }
    }
    Err(Error::RotationFailed(ROTATION_DRAWS))
}

/// Central projection from the origin onto `z₁ = 1`, in the coordinates
/// `z₂ … z_d`.
pub fn project_to_pi(
    points: &[DVector<f64>],
    planes: &[OriginHyperplane],
) -> (Vec<DVector<f64>>, Vec<AffineHyperplane>) {
    let pts = points
        .iter()
        .map(|z| z.rows(1, z.len() - 1).into_owned() / z[0])
        .collect();
    let pls = planes
        .iter()
        .map(|h| AffineHyperplane {
            normal: h.normal.rows(1, h.normal.len() - 1).into_owned(),
            offset: -h.normal[0],
        })
        .collect();
    (pts, pls)
}

/// `|n·z| / (|n| |z|)`
fn origin_residual(n: &DVector<f64>, z: &DVector<f64>) -> f64 {
    let s = n.norm() * z.norm();
    if s == 0.0 {
        f64::INFINITY
    } else {
        n.dot(z).abs() / s
    }
}

/// Incidences between points of `ℝ^{d−1}` and affine hyperplanes, using the
/// scale-free residual `|n·w − c| / (|(c, n)| |(1, w)|)`. Edges are
/// `(point, hyperplane)`.
pub fn count_hyperplane_incidences(points: &[DVector<f64>], planes: &[AffineHyperplane], tol: f64) -> IncidenceGraph {
    let mut edges = Vec::new();
    for (i, w) in points.iter().enumerate() {
        let wn = (1.0 + w.norm_squared()).sqrt();
        for (j, h) in planes.iter().enumerate() {
            let hn = (h.offset * h.offset + h.normal.norm_squared()).sqrt();
            if (h.normal.dot(w) - h.offset).abs() <= tol * hn * wn {
                edges.push((i, j));
            }
        }
    }
    IncidenceGraph::new(points.len(), planes.len(), edges)
}

/// Incidences between points of `ℝᵈ` and hyperplanes through the origin.
pub fn count_origin_incidences(points: &[DVector<f64>], planes: &[OriginHyperplane], tol: f64) -> IncidenceGraph {
    let mut edges = Vec::new();
    for (i, z) in points.iter().enumerate() {
        for (j, h) in planes.iter().enumerate() {
            if origin_residual(&h.normal, z) <= tol {
                edges.push((i, j));
            }
        }
    }
    IncidenceGraph::new(points.len(), planes.len(), edges)
}

/// Marching-squares segments of the zero set of `a·m` over the family domain.
pub fn trace_family_curve(family: &PfaffianFamily, a: &[f64], res: usize) -> Vec<(Point, Point)> {
    let d = family.domain;
    let (hx, hy) = (d.width() / res as f64, d.height() / res as f64);
    let at = |i: usize, j: usize| Point::new(d.xmin + i as f64 * hx, d.ymin + j as f64 * hy);
    let mut row: Vec<f64> = (0..=res).map(|i| family.eval(a, at(i, 0))).collect();
    let mut segs = Vec::new();
    for j in 0..res {
        let next: Vec<f64> = (0..=res).map(|i| family.eval(a, at(i, j + 1))).collect();
        for i in 0..res {
            let corners = [(at(i, j), row[i]), (at(i + 1, j), row[i + 1]), (at(i + 1, j + 1), next[i + 1]), (at(i, j + 1), next[i])];
            let mut cuts = Vec::with_capacity(4);
            for k in 0..4 {
                let (p, fp) = corners[k];
                let (q, fq) = corners[(k + 1) % 4];
                if (fp < 0.0) != (fq < 0.0) {
                    let u = fp / (fp - fq);
                    cuts.push(p + (q - p) * u);
                }
            }
            if cuts.len() == 2 {
                segs.push((cuts[0], cuts[1]));
            } else if cuts.len() == 4 {
                segs.push((cuts[0], cuts[1]));
                segs.push((cuts[2], cuts[3]));
            }
        }
        row = next;
    }
    segs
}

/// Whether the marching-squares trace of `a·m` has a segment in the 3×3
/// block of grid cells around `p`.
fn trace_near(family: &PfaffianFamily, a: &[f64], p: Point) -> bool {
    let d = family.domain;
    let h = family.cell_size();
    let ci = (((p.x - d.xmin) / h.x).floor() as i64).clamp(0, GRID_RES as i64 - 1);
    let cj = (((p.y - d.ymin) / h.y).floor() as i64).clamp(0, GRID_RES as i64 - 1);
    let (i0, i1) = ((ci - 1).max(0), (ci + 2).min(GRID_RES as i64));
    let (j0, j1) = ((cj - 1).max(0), (cj + 2).min(GRID_RES as i64));
    let mut sign = None;
    for j in j0..=j1 {
        for i in i0..=i1 {
            let q = Point::new(d.xmin + i as f64 * h.x, d.ymin + j as f64 * h.y);
            let s = family.eval(a, q) < 0.0;
            match sign {
                None => sign = Some(s),
                Some(t) if t != s => return true,
                _ => {}
            }
        }
    }
    false
}

/// Primal incidence graph: a point is on a family curve when the curve's
/// marching-squares trace passes through its neighborhood and the
/// first-order distance to the zero set is at most `tol`.
pub fn count_family_incidences(
    family: &PfaffianFamily,
    points: &[Point],
    curves: &[FamilyCurve],
    tol: f64,
) -> IncidenceGraph {
    let mut edges = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        for (j, c) in curves.iter().enumerate() {
            if family.zero_distance(&c.coeffs, p) <= tol
                && (family.eval(&c.coeffs, p) == 0.0 || trace_near(family, &c.coeffs, p))
            {
                edges.push((i, j));
            }
        }
    }
    IncidenceGraph::new(points.len(), curves.len(), edges)
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub primal: usize,
    pub dual: usize,
    pub projected: usize,
    pub transpose_ok: bool,
    pub rotation_draws: usize,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.primal == self.dual && self.dual == self.projected && self.transpose_ok
    }
}

/// Count incidences in the plane, in the dual `ℝᵈ` and after projection to
/// `ℝ^{d−1}`, and check that all three agree and that the dual graphs are
/// the transpose of the primal one.
pub fn verify_duality_chain(
    points: &[Point],
    family: &PfaffianFamily,
    curves: &[FamilyCurve],
    seed: u64,
    tol: f64,
) -> Result<DualityReport> {
    let d = family.dim();
    if let Some(c) = curves.iter().find(|c| c.coeffs.len() != d) {
        return Err(Error::BadParameter(format!(
            "curve has {} coefficients, family has {d} terms",
            c.coeffs.len()
        )));
    }
    let primal = count_family_incidences(family, points, curves, tol);
    let dpts: Vec<DVector<f64>> = curves.iter().map(dual_point).collect();
    let dplanes = points
        .iter()
        .map(|&p| dual_hyperplane(family, p))
        .collect::<Result<Vec<_>>>()?;
    let dual = count_origin_incidences(&dpts, &dplanes, tol);
    let rot = generic_rotation(&dpts, &dplanes, seed)?;
    let (ppts, pplanes) = project_to_pi(&rot.points, &rot.planes);
    let proj = count_hyperplane_incidences(&ppts, &pplanes, tol);
    let counts = [("primal", primal.total()), ("dual", dual.total()), ("projected", proj.total())];
    for w in counts.windows(2) {
        if w[0].1 != w[1].1 {
            return Err(Error::ChainMismatch {
                first: w[0].0,
                a: w[0].1,
                second: w[1].0,
                b: w[1].1,
            });
        }
    }
    let t = primal.transpose();
    Ok(DualityReport {
        d,
        m: points.len(),
        n: curves.len(),
        primal: primal.total(),
        dual: dual.total(),
        projected: proj.total(),
        transpose_ok: dual == t && proj == t,
        rotation_draws: rot.draws,
    })
}

/// A root of `a·m` on the segment `from → to`, by scanning and bisection.
fn root_on_segment(family: &PfaffianFamily, a: &[f64], from: Point, to: Point) -> Option<Point> {
    const SCAN: usize = 256;
    let at = |u: f64| from + (to - from) * u;
    let mut prev = family.eval(a, at(0.0));
    for k in 1..=SCAN {
        let u1 = k as f64 / SCAN as f64;
        let v = family.eval(a, at(u1));
        if (prev < 0.0) != (v < 0.0) {
            let (mut lo, mut hi, mut flo) = ((k - 1) as f64 / SCAN as f64, u1, prev);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                let fm = family.eval(a, at(mid));
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return Some(at(0.5 * (lo + hi)));
        }
        prev = v;
    }
    None
}

/// `n` random family curves (Gaussian coefficients) and `m` points in the
/// family domain, a `planted` fraction of them on random curves.
pub fn family_scene(
    family: &PfaffianFamily,
    m: usize,
    n: usize,
    planted: f64,
    seed: u64,
) -> Result<(Vec<Point>, Vec<FamilyCurve>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = family.dim();
    let coeffs: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    let curves = family_curves(coeffs)?;
    let u = family.domain;
    let k = if n == 0 { 0 } else { (planted.clamp(0.0, 1.0) * m as f64).round() as usize };
    let mut points = Vec::with_capacity(m);
    let mut tries = 0;
    while points.len() < k && tries < 1000 * (k + 1) {
        tries += 1;
        let c = &curves[rng.random_range(0..n)];
        let (from, to) = if rng.random_bool(0.5) {
            let x = rng.random_range(u.xmin..u.xmax);
            (Point::new(x, u.ymin), Point::new(x, u.ymax))
        } else {
            let y = rng.random_range(u.ymin..u.ymax);
            (Point::new(u.xmin, y), Point::new(u.xmax, y))
        };
        if let Some(p) = root_on_segment(family, &c.coeffs, from, to) {
            if u.contains(p) {
                points.push(p);
            }
        }
    }
    while points.len() < m {
        points.push(Point::new(rng.random_range(u.xmin..u.xmax), rng.random_range(u.ymin..u.ymax)));
    }
    Ok((points, curves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::kst_free;
    use approx::assert_relative_eq;

    #[test]
    fn normalization() {
        let c = FamilyCurve::new(vec![0.0, 1.0, -1.0]).unwrap();
        let r = 0.5f64.sqrt();
        assert_relative_eq!(c.coeffs[1], r);
        assert_relative_eq!(c.coeffs[2], -r);
        assert_eq!(FamilyCurve::new(c.coeffs.clone()).unwrap(), c);
        assert!(matches!(FamilyCurve::new(vec![0.0, 0.0]), Err(Error::ZeroCoefficients)));
        assert!(matches!(
            family_curves(vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 0.0], vec![-2.0, -4.0, -6.0]]),
            Err(Error::ProportionalCoefficients(0, 2))
        ));
    }

    #[test]
    fn hyperplane_normals() {
        let f = PfaffianFamily::lines();
        let h = dual_hyperplane(&f, Point::new(1.0, 2.0)).unwrap();
        assert_eq!(h.normal.as_slice(), &[1.0, 1.0, 2.0]);
        let h0 = dual_hyperplane(&f, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(h0.normal.as_slice(), &[1.0, 0.0, 0.0]);
        let line = FamilyCurve::new(vec![0.0, 1.0, -1.0]).unwrap();
        let on = dual_hyperplane(&f, Point::new(0.7, 0.7)).unwrap();
        assert!(on.normal.dot(&dual_point(&line)).abs() < 1e-15);
        let g = PfaffianFamily::new(vec![Term::Monomial { i: 1, j: 0 }, Term::Monomial { i: 0, j: 1 }], Rect::square(1.0)).unwrap();
        assert!(matches!(dual_hyperplane(&g, Point::new(0.0, 0.0)), Err(Error::DegenerateDual { .. })));
    }

    #[test]
    fn projection_divides_by_first() {
        let (p, h) = project_to_pi(
            &[DVector::from_vec(vec![2.0, 4.0, 6.0])],
            &[OriginHyperplane { normal: DVector::from_vec(vec![1.0, 1.0, 0.0]) }],
        );
        assert_eq!(p[0].as_slice(), &[2.0, 3.0]);
        assert_eq!(h[0].normal.as_slice(), &[1.0, 0.0]);
        assert_eq!(h[0].offset, -1.0);
        let scaled = project_to_pi(&[DVector::from_vec(vec![6.0, 12.0, 18.0])], &[]).0;
        assert_relative_eq!(scaled[0], p[0]);
    }

    #[test]
    fn rotation_is_orthogonal_and_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = random_orthogonal(4, &mut rng);
        let e = (&q.transpose() * &q - DMatrix::<f64>::identity(4, 4)).abs().max();
        assert!(e < 1e-12);
        let pts = vec![DVector::from_vec(vec![0.0, 1.0, 0.0])];
        let planes = vec![OriginHyperplane { normal: DVector::from_vec(vec![1.0, 0.0, 0.0]) }];
        let r = generic_rotation(&pts, &planes, 3).unwrap();
        assert!(r.points[0][0].abs() > GENERIC_EPS);
        assert!(r.planes[0].normal[0].abs() > GENERIC_EPS);
    }

    #[test]
    fn chain_on_lines_and_exp() {
        for (family, seed) in [(PfaffianFamily::lines(), 1), (PfaffianFamily::exp_x(), 2), (PfaffianFamily::lines_log(), 3)] {
            let (pts, curves) = family_scene(&family, 50, 40, 0.6, seed).unwrap();
            let rep = verify_duality_chain(&pts, &family, &curves, seed, DUAL_TOL).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.primal >= 30);
        }
        let rep = verify_duality_chain(&[Point::new(0.5, 0.5)], &PfaffianFamily::lines(), &[], 0, DUAL_TOL).unwrap();
        assert_eq!((rep.primal, rep.dual, rep.projected), (0, 0, 0));
    }

    #[test]
    fn planar_projection_matches_lines() {
        let family = PfaffianFamily::lines();
        let (pts, curves) = family_scene(&family, 30, 20, 0.5, 9).unwrap();
        let primal = count_family_incidences(&family, &pts, &curves, DUAL_TOL);
        let dpts: Vec<_> = curves.iter().map(dual_point).collect();
        let dplanes: Vec<_> = pts.iter().map(|&p| dual_hyperplane(&family, p).unwrap()).collect();
        let rot = generic_rotation(&dpts, &dplanes, 5).unwrap();
        let (pp, ph) = project_to_pi(&rot.points, &rot.planes);
        let g = count_hyperplane_incidences(&pp, &ph, DUAL_TOL);
        assert_eq!(g, primal.transpose());
        assert_eq!(kst_free(&g, 2, 2).unwrap(), kst_free(&primal, 2, 2).unwrap());
    }

    #[test]
    fn marching_squares_follows_line() {
        let family = PfaffianFamily::lines();
        let segs = trace_family_curve(&family, &[0.0, 1.0, -1.0], 64);
        assert!(!segs.is_empty());
        for (a, b) in segs {
            assert!((a.x - a.y).abs() < 1e-12 && (b.x - b.y).abs() < 1e-12);
        }
    }

    #[test]
    fn family_json_round_trip() {
        let f = PfaffianFamily::lines_exp();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"U\""));
        let back: PfaffianFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
