//! Closed-form parameterizations of the curve catalog.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::poly::{BivariatePolynomial, UnivariatePolynomial};

use super::PolyVectorField;

/// Catalog tag of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Line,
    Circle,
    Parabola,
    Exp,
    Log,
    Tan,
    Arctan,
    Reciprocal,
    ExpOfPoly,
    ReciprocalRoot,
    Composed,
}

impl CurveKind {
    pub const ALL: [CurveKind; 11] = [
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
        CurveKind::Composed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Line => "line",
            CurveKind::Circle => "circle",
            CurveKind::Parabola => "parabola",
            CurveKind::Exp => "exp",
            CurveKind::Log => "log",
            CurveKind::Tan => "tan",
            CurveKind::Arctan => "arctan",
            CurveKind::Reciprocal => "reciprocal",
            CurveKind::ExpOfPoly => "exp-of-poly",
            CurveKind::ReciprocalRoot => "reciprocal-root",
            CurveKind::Composed => "composed",
        }
    }

    /// Whether the kind is a graph `y = f(x)` over its parameter.
    pub fn is_graph(self) -> bool {
        !matches!(
            self,
            CurveKind::Circle | CurveKind::Log | CurveKind::Arctan | CurveKind::ReciprocalRoot
        )
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameterization `t -> (f_x(t), f_y(t))` before any linear transform.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseParam {
    /// `y = slope·x + intercept`
    Line { slope: f64, intercept: f64 },
    /// `(cx + r cos t, cy + r sin t)` for `t ∈ (phase, phase + 2π)`
    Circle { cx: f64, cy: f64, r: f64, phase: f64 },
    /// `y = a x² + b x + c`
    Parabola { a: f64, b: f64, c: f64 },
    /// `y = a e^{b x} + c`
    Exp { a: f64, b: f64, c: f64 },
    /// `(e^t, s t + c)`, i.e. `y = s ln x + c`
    Log { s: f64, c: f64 },
    /// `y = tan(x - h) + v` on the period with index `k`
    Tan { k: i64, h: f64, v: f64 },
    /// `(tan t + h, t + c)`, i.e. `y = arctan(x - h) + c`
    Arctan { h: f64, c: f64 },
    /// `y = a / (x - h) + v` on the branch `x > h` (`branch > 0`) or `x < h`
    Reciprocal { a: f64, branch: f64, h: f64, v: f64 },
    /// `y = e^{p(x)}`
    ExpOfPoly { p: UnivariatePolynomial },
    /// `(e^t, e^{-t/k})`, i.e. `y = x^{-1/k}`
    ReciprocalRoot { k: f64 },
    /// `y = f(p(x))` for a graph `f` whose derivative is a polynomial in `f`
    Composed { outer: Box<BaseParam>, p: UnivariatePolynomial },
}

fn want(kind: CurveKind, params: &[f64], min: usize, max: usize) -> Result<()> {
    if params.len() < min || params.len() > max {
        return Err(Error::InvalidParams {
            kind: kind.name().into(),
            reason: format!("expected {min}..={max} parameters, got {}", params.len()),
        });
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParams {
            kind: kind.name().into(),
            reason: "parameters must be finite".into(),
        });
    }
    Ok(())
}

fn bad(kind: CurveKind, reason: &str) -> Error {
    Error::InvalidParams {
        kind: kind.name().into(),
        reason: reason.into(),
    }
}

fn get(params: &[f64], i: usize, default: f64) -> f64 {
    params.get(i).copied().unwrap_or(default)
}

impl BaseParam {
    /// Build from a catalog tag and its parameter list (see the README for
    /// the per-kind layout).
    pub fn from_params(
        kind: CurveKind,
        params: &[f64],
        poly: Option<&[f64]>,
        outer: Option<BaseParam>,
    ) -> Result<BaseParam> {
        use CurveKind as K;
        let need_poly = || -> Result<UnivariatePolynomial> {
            let coeffs = poly.ok_or_else(|| bad(kind, "missing `poly` coefficients"))?;
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(bad(kind, "polynomial coefficients must be finite and non-empty"));
            }
            Ok(UnivariatePolynomial::new(coeffs.to_vec()))
        };
        Ok(match kind {
            K::Line => {
                want(kind, params, 2, 2)?;
                BaseParam::Line {
                    slope: params[0],
                    intercept: params[1],
                }
            }
            K::Circle => {
                want(kind, params, 3, 4)?;
                if params[2] <= 0.0 {
                    return Err(bad(kind, "radius must be positive"));
                }
                BaseParam::Circle {
                    cx: params[0],
                    cy: params[1],
                    r: params[2],
                    phase: get(params, 3, 0.0),
                }
            }
            K::Parabola => {
                want(kind, params, 3, 3)?;
                BaseParam::Parabola {
                    a: params[0],
                    b: params[1],
                    c: params[2],
                }
            }
            K::Exp => {
                want(kind, params, 0, 3)?;
                let (a, b) = (get(params, 0, 1.0), get(params, 1, 1.0));
                if a == 0.0 || b == 0.0 {
                    return Err(bad(kind, "scale and rate must be nonzero"));
                }
                BaseParam::Exp {
                    a,
                    b,
                    c: get(params, 2, 0.0),
                }
            }
            K::Log => {
                want(kind, params, 0, 2)?;
                BaseParam::Log {
                    s: get(params, 0, 1.0),
                    c: get(params, 1, 0.0),
                }
            }
            K::Tan => {
                want(kind, params, 0, 3)?;
                let k = get(params, 0, 0.0);
                if k.fract() != 0.0 {
                    return Err(bad(kind, "period index must be an integer"));
                }
                BaseParam::Tan {
                    k: k as i64,
                    h: get(params, 1, 0.0),
                    v: get(params, 2, 0.0),
                }
            }
            K::Arctan => {
                want(kind, params, 0, 2)?;
                BaseParam::Arctan {
                    h: get(params, 0, 0.0),
                    c: get(params, 1, 0.0),
                }
            }
            K::Reciprocal => {
                want(kind, params, 0, 4)?;
                let a = get(params, 0, 1.0);
                let branch = get(params, 1, 1.0);
                if a == 0.0 || branch == 0.0 {
                    return Err(bad(kind, "scale and branch must be nonzero"));
                }
                BaseParam::Reciprocal {
                    a,
                    branch: branch.signum(),
                    h: get(params, 2, 0.0),
                    v: get(params, 3, 0.0),
                }
            }
            K::ExpOfPoly => {
                want(kind, params, 0, 0)?;
                BaseParam::ExpOfPoly { p: need_poly()? }
            }
            K::ReciprocalRoot => {
                want(kind, params, 0, 1)?;
                let k = get(params, 0, 1.0);
                if k < 1.0 || k.fract() != 0.0 {
                    return Err(bad(kind, "root index must be a positive integer"));
                }
                BaseParam::ReciprocalRoot { k }
            }
            K::Composed => {
                want(kind, params, 0, 0)?;
                let outer = outer.ok_or_else(|| bad(kind, "missing `outer` curve"))?;
                if outer.derivative_in_value().is_none() {
                    return Err(Error::NotComposable(outer.kind().name().into()));
                }
                BaseParam::Composed {
                    outer: Box::new(outer),
                    p: need_poly()?,
                }
            }
        })
    }

    pub fn kind(&self) -> CurveKind {
        match self {
            BaseParam::Line { .. } => CurveKind::Line,
            BaseParam::Circle { .. } => CurveKind::Circle,
            BaseParam::Parabola { .. } => CurveKind::Parabola,
            BaseParam::Exp { .. } => CurveKind::Exp,
            BaseParam::Log { .. } => CurveKind::Log,
            BaseParam::Tan { .. } => CurveKind::Tan,
            BaseParam::Arctan { .. } => CurveKind::Arctan,
            BaseParam::Reciprocal { .. } => CurveKind::Reciprocal,
            BaseParam::ExpOfPoly { .. } => CurveKind::ExpOfPoly,
            BaseParam::ReciprocalRoot { .. } => CurveKind::ReciprocalRoot,
            BaseParam::Composed { .. } => CurveKind::Composed,
        }
    }

    /// Inverse of [`BaseParam::from_params`]: `(params, poly, outer)`.
    pub fn to_params(&self) -> (Vec<f64>, Option<Vec<f64>>, Option<&BaseParam>) {
        match self {
            BaseParam::Line { slope, intercept } => (vec![*slope, *intercept], None, None),
            BaseParam::Circle { cx, cy, r, phase } => {
                let mut v = vec![*cx, *cy, *r];
                if *phase != 0.0 {
                    v.push(*phase);
                }
                (v, None, None)
            }
            BaseParam::Parabola { a, b, c } => (vec![*a, *b, *c], None, None),
            BaseParam::Exp { a, b, c } => (vec![*a, *b, *c], None, None),
            BaseParam::Log { s, c } => (vec![*s, *c], None, None),
            BaseParam::Tan { k, h, v } => (vec![*k as f64, *h, *v], None, None),
            BaseParam::Arctan { h, c } => (vec![*h, *c], None, None),
            BaseParam::Reciprocal { a, branch, h, v } => (vec![*a, *branch, *h, *v], None, None),
            BaseParam::ExpOfPoly { p } => (vec![], Some(p.coeffs.clone()), None),
            BaseParam::ReciprocalRoot { k } => (vec![*k], None, None),
            BaseParam::Composed { outer, p } => (vec![], Some(p.coeffs.clone()), Some(outer)),
        }
    }

    /// For a graph `y = f(u)`, the value `f(u)` (None outside its domain).
    fn graph_value(&self, u: f64) -> Option<f64> {
        let (lo, hi) = self.natural_domain();
        if !(u > lo && u < hi) {
            return None;
        }
        Some(match self {
            BaseParam::Line { slope, intercept } => slope * u + intercept,
            BaseParam::Exp { a, b, c } => a * (b * u).exp() + c,
            BaseParam::Tan { h, v, .. } => (u - h).tan() + v,
            BaseParam::Reciprocal { a, h, v, .. } => a / (u - h) + v,
            _ => return None,
        })
    }

    /// `q` with `f'(u) = q(f(u))` when the kind is a graph whose derivative
    /// is a polynomial in the function value.
    pub fn derivative_in_value(&self) -> Option<UnivariatePolynomial> {
        Some(match self {
            BaseParam::Line { slope, .. } => UnivariatePolynomial::new(vec![*slope]),
            BaseParam::Exp { b, c, .. } => UnivariatePolynomial::new(vec![-b * c, *b]),
            BaseParam::Tan { v, .. } => UnivariatePolynomial::new(vec![1.0 + v * v, -2.0 * v, 1.0]),
            BaseParam::Reciprocal { a, v, .. } => {
                UnivariatePolynomial::new(vec![-v * v / a, 2.0 * v / a, -1.0 / a])
            }
            _ => return None,
        })
    }

    /// The open parameter interval on which the parameterization is defined.
    pub fn natural_domain(&self) -> (f64, f64) {
        let inf = f64::INFINITY;
        match self {
            BaseParam::Circle { phase, .. } => (*phase, phase + TAU),
            BaseParam::Tan { k, h, .. } => {
                let mid = h + *k as f64 * PI;
                (mid - FRAC_PI_2, mid + FRAC_PI_2)
            }
            BaseParam::Arctan { .. } => (-FRAC_PI_2, FRAC_PI_2),
            BaseParam::Reciprocal { branch, h, .. } => {
                if *branch > 0.0 {
                    (*h, inf)
                } else {
                    (-inf, *h)
                }
            }
            _ => (-inf, inf),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, BaseParam::Circle { .. })
    }

    /// Point at parameter `t`; may be non-finite outside the domain.
    pub fn point(&self, t: f64) -> Point {
        match self {
            BaseParam::Line { slope, intercept } => Point::new(t, slope * t + intercept),
            BaseParam::Circle { cx, cy, r, .. } => {
                let (s, c) = t.sin_cos();
                Point::new(cx + r * c, cy + r * s)
            }
            BaseParam::Parabola { a, b, c } => Point::new(t, (a * t + b) * t + c),
            BaseParam::Exp { a, b, c } => Point::new(t, a * (b * t).exp() + c),
            BaseParam::Log { s, c } => Point::new(t.exp(), s * t + c),
            BaseParam::Tan { h, v, .. } => Point::new(t, (t - h).tan() + v),
            BaseParam::Arctan { h, c } => Point::new(t.tan() + h, t + c),
            BaseParam::Reciprocal { a, h, v, .. } => Point::new(t, a / (t - h) + v),
            BaseParam::ExpOfPoly { p } => Point::new(t, p.eval(t).exp()),
            BaseParam::ReciprocalRoot { k } => Point::new(t.exp(), (-t / k).exp()),
            BaseParam::Composed { outer, p } => {
                Point::new(t, outer.graph_value(p.eval(t)).unwrap_or(f64::NAN))
            }
        }
    }

    /// Whether `t` is a valid parameter (only compositions can have holes).
    pub fn defined(&self, t: f64) -> bool {
        match self {
            BaseParam::Composed { outer, p } => outer.graph_value(p.eval(t)).is_some(),
            _ => true,
        }
    }

    /// Polynomial vector field whose integral curve is this parameterization.
    pub fn field(&self) -> PolyVectorField {
        use BivariatePolynomial as B;
        let one = B::constant(1.0);
        let (vx, vy) = match self {
            BaseParam::Line { slope, .. } => (one, B::constant(*slope)),
            BaseParam::Circle { cx, cy, .. } => (
                B::from_terms([((0, 1), -1.0), ((0, 0), *cy)]),
                B::from_terms([((1, 0), 1.0), ((0, 0), -cx)]),
            ),
            BaseParam::Parabola { a, b, .. } => (one, B::from_terms([((1, 0), 2.0 * a), ((0, 0), *b)])),
            BaseParam::Exp { b, c, .. } => (one, B::from_terms([((0, 1), *b), ((0, 0), -b * c)])),
            BaseParam::Log { s, .. } => (B::x(), B::constant(*s)),
            BaseParam::Tan { .. } => (one, self.derivative_in_value().unwrap().in_y()),
            BaseParam::Arctan { h, .. } => (
                B::from_terms([((0, 0), 1.0 + h * h), ((1, 0), -2.0 * h), ((2, 0), 1.0)]),
                one,
            ),
            BaseParam::Reciprocal { .. } => (one, self.derivative_in_value().unwrap().in_y()),
            BaseParam::ExpOfPoly { p } => (one, &p.derivative().in_x() * &B::y()),
            BaseParam::ReciprocalRoot { k } => (B::x(), B::monomial(-1.0 / k, 0, 1)),
            BaseParam::Composed { outer, p } => {
                let q = outer.derivative_in_value().expect("checked at construction");
                (one, &p.derivative().in_x() * &q.in_y())
            }
        };
        PolyVectorField::new(vx, vy)
    }

    /// A parameter interval whose image covers the part of the curve inside
    /// `bbox` (a superset is fine; samples are clipped afterwards).
    pub fn window(&self, bbox: &Rect) -> (f64, f64) {
        let (x0, x1, y0, y1) = (bbox.xmin, bbox.xmax, bbox.ymin, bbox.ymax);
        const FAR: f64 = 40.0;
        let ordered = |a: f64, b: f64| if a <= b { (a, b) } else { (b, a) };
        let meet = |a: (f64, f64), b: (f64, f64)| (a.0.max(b.0), a.1.min(b.1));
        match self {
            BaseParam::Circle { phase, .. } => (*phase, phase + TAU),
            BaseParam::Tan { k, h, v } => {
                let mid = h + *k as f64 * PI;
                meet((x0, x1), (mid + (y0 - v).atan(), mid + (y1 - v).atan()))
            }
            BaseParam::Log { s, c } => {
                if x1 <= 0.0 {
                    return (1.0, 0.0);
                }
                let lo = if x0 > 0.0 { x0.ln() } else { -f64::INFINITY };
                let mut w = (lo, x1.ln());
                if *s != 0.0 {
                    w = meet(w, ordered((y0 - c) / s, (y1 - c) / s));
                }
                (w.0.max(-FAR), w.1)
            }
            BaseParam::Arctan { h, c } => meet(((x0 - h).atan(), (x1 - h).atan()), (y0 - c, y1 - c)),
            BaseParam::ReciprocalRoot { k } => {
                if x1 <= 0.0 || y1 <= 0.0 {
                    return (1.0, 0.0);
                }
                let mut w = (if x0 > 0.0 { x0.ln() } else { -f64::INFINITY }, x1.ln());
                let ylo = if y0 > 0.0 { -k * y0.ln() } else { f64::INFINITY };
                w = meet(w, (-k * y1.ln(), ylo));
                (w.0.max(-FAR * k), w.1.min(FAR * k))
            }
            _ => (x0, x1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric_tangent(b: &BaseParam, t: f64) -> Point {
        let h = 1e-6;
        (b.point(t + h) - b.point(t - h)) * (0.5 / h)
    }

    #[test]
    fn catalog_fields_match_parameterizations() {
        let cases = vec![
            BaseParam::Line { slope: 0.5, intercept: -1.0 },
            BaseParam::Circle { cx: 0.2, cy: -0.4, r: 1.5, phase: 0.3 },
            BaseParam::Parabola { a: 1.0, b: -0.5, c: 0.25 },
            BaseParam::Exp { a: 0.7, b: -1.3, c: 0.4 },
            BaseParam::Log { s: 2.0, c: 5.0 },
            BaseParam::Tan { k: 1, h: 0.1, v: -0.2 },
            BaseParam::Arctan { h: 0.5, c: 1.0 },
            BaseParam::Reciprocal { a: 2.0, branch: -1.0, h: 0.3, v: 0.1 },
            BaseParam::ExpOfPoly { p: UnivariatePolynomial::new(vec![3.0, -5.0, 1.0]) },
            BaseParam::ReciprocalRoot { k: 3.0 },
        ];
        for b in cases {
            let (lo, hi) = b.window(&Rect::square(2.0));
            let (lo, hi) = (lo.max(b.natural_domain().0 + 1e-3), hi.min(b.natural_domain().1 - 1e-3));
            let f = b.field();
            for i in 0..=100 {
                let t = lo + (hi - lo) * i as f64 / 100.0;
                let p = b.point(t);
                let d = numeric_tangent(&b, t);
                let v = f.eval(p);
                let rel = (d - v).norm() / v.norm().max(1.0);
                assert!(rel < 1e-5, "{:?} at t={t}: {d:?} vs {v:?}", b.kind());
            }
        }
    }

    #[test]
    fn catalog_degrees() {
        let deg = |b: BaseParam| b.field().degree();
        assert_eq!(deg(BaseParam::Line { slope: 1.0, intercept: 0.0 }), 0);
        assert_eq!(deg(BaseParam::Circle { cx: 0.0, cy: 0.0, r: 1.0, phase: 0.0 }), 1);
        assert_eq!(deg(BaseParam::Parabola { a: 1.0, b: 0.0, c: 0.0 }), 1);
        assert_eq!(deg(BaseParam::Exp { a: 1.0, b: 1.0, c: 0.0 }), 1);
        assert_eq!(deg(BaseParam::Log { s: 1.0, c: 0.0 }), 1);
        assert_eq!(deg(BaseParam::Tan { k: 0, h: 0.0, v: 0.0 }), 2);
        assert_eq!(deg(BaseParam::Arctan { h: 0.0, c: 0.0 }), 2);
        assert_eq!(deg(BaseParam::Reciprocal { a: 1.0, branch: 1.0, h: 0.0, v: 0.0 }), 2);
    }

    #[test]
    fn wrong_param_count_is_rejected() {
        assert!(BaseParam::from_params(CurveKind::Line, &[1.0], None, None).is_err());
        assert!(BaseParam::from_params(CurveKind::Circle, &[0.0, 0.0, -1.0], None, None).is_err());
        assert!(BaseParam::from_params(CurveKind::ExpOfPoly, &[], None, None).is_err());
    }
}
