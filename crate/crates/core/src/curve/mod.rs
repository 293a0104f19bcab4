//! Pfaffian curves: a closed-form parameterization together with the
//! polynomial vector field it integrates.

mod catalog;
mod separating;
mod trace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point, Rect};
use crate::poly::{BivariatePolynomial, UnivariatePolynomial};

pub use catalog::{BaseParam, CurveKind};
pub use separating::{check_field_against, check_separating_conditions, SeparatingReport};
pub use trace::{trace_curve, CurveTrace, Sample, TraceComponent, TracedCurve, DEFAULT_STEP};

/// Offset used to stay inside open parameter intervals.
pub const DOMAIN_INSET: f64 = 1e-9;

/// `V = (V_x, V_y)` with polynomial components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyVectorField {
    pub vx: BivariatePolynomial,
    pub vy: BivariatePolynomial,
}

impl PolyVectorField {
    pub fn new(vx: BivariatePolynomial, vy: BivariatePolynomial) -> Self {
        PolyVectorField { vx, vy }
    }

    pub fn degree(&self) -> u32 {
        self.vx.degree().max(self.vy.degree())
    }

    pub fn eval(&self, p: Point) -> Point {
        Point::new(self.vx.eval(p.x, p.y), self.vy.eval(p.x, p.y))
    }

    /// The field `W(p) = A·V(A⁻¹p)` carried by the image of a curve under `A`.
    pub fn push_forward(&self, a: &Mat2) -> Result<Self> {
        let inv = a.inverse()?;
        let ux = self.vx.compose_linear(&inv);
        let uy = self.vy.compose_linear(&inv);
        let mut vx = &ux.scale(a.a1) + &uy.scale(a.a2);
        let mut vy = &ux.scale(a.a3) + &uy.scale(a.a4);
        vx.prune(1e-14);
        vy.prune(1e-14);
        Ok(PolyVectorField::new(vx, vy))
    }
}

/// Evaluate a vector field at `p`.
pub fn eval_vector_field(field: &PolyVectorField, p: Point) -> Point {
    field.eval(p)
}

/// A curve `γ(t) = A·f(t)` for `t` in an open interval, with `γ' = V(γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PfaffianCurve {
    base: BaseParam,
    linear: Mat2,
    field: PolyVectorField,
    domain: (f64, f64),
}

impl PfaffianCurve {
    pub fn new(base: BaseParam) -> Self {
        let field = base.field();
        let domain = base.natural_domain();
        PfaffianCurve {
            base,
            linear: Mat2::IDENTITY,
            field,
            domain,
        }
    }

    pub fn line(slope: f64, intercept: f64) -> Self {
        Self::new(BaseParam::Line { slope, intercept })
    }

    pub fn circle(cx: f64, cy: f64, r: f64) -> Self {
        Self::new(BaseParam::Circle { cx, cy, r, phase: 0.0 })
    }

    pub fn parabola(a: f64, b: f64, c: f64) -> Self {
        Self::new(BaseParam::Parabola { a, b, c })
    }

    pub fn exp(a: f64, b: f64, c: f64) -> Self {
        Self::new(BaseParam::Exp { a, b, c })
    }

    pub fn log(s: f64, c: f64) -> Self {
        Self::new(BaseParam::Log { s, c })
    }

    pub fn tan(k: i64, h: f64, v: f64) -> Self {
        Self::new(BaseParam::Tan { k, h, v })
    }

    pub fn arctan(h: f64, c: f64) -> Self {
        Self::new(BaseParam::Arctan { h, c })
    }

    pub fn reciprocal(a: f64, branch: f64, h: f64, v: f64) -> Self {
        Self::new(BaseParam::Reciprocal {
            a,
            branch: branch.signum(),
            h,
            v,
        })
    }

    pub fn exp_of_poly(coeffs: Vec<f64>) -> Self {
        Self::new(BaseParam::ExpOfPoly {
            p: UnivariatePolynomial::new(coeffs),
        })
    }

    pub fn reciprocal_root(k: u32) -> Self {
        Self::new(BaseParam::ReciprocalRoot { k: k as f64 })
    }

    pub fn kind(&self) -> CurveKind {
        self.base.kind()
    }

    pub fn base(&self) -> &BaseParam {
        &self.base
    }

    pub fn linear(&self) -> &Mat2 {
        &self.linear
    }

    pub fn field(&self) -> &PolyVectorField {
        &self.field
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Pfaffian degree: the degree of the vector field.
    pub fn pf_degree(&self) -> u32 {
        self.field.degree()
    }

    pub fn point(&self, t: f64) -> Point {
        self.linear.apply(self.base.point(t))
    }

    pub fn defined(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1 && self.base.defined(t)
    }

    pub fn is_periodic(&self) -> bool {
        self.base.is_periodic()
            && (self.domain.1 - self.domain.0 - std::f64::consts::TAU).abs() < 1e-12
    }

    /// Restrict the parameter interval.
    pub fn with_domain(mut self, t0: f64, t1: f64) -> Result<Self> {
        let (d0, d1) = self.base.natural_domain();
        let (t0, t1) = (t0.max(d0), t1.min(d1));
        if !(t0 < t1) {
            return Err(Error::InvalidParams {
                kind: self.kind().name().into(),
                reason: "empty parameter interval".into(),
            });
        }
        self.domain = (t0, t1);
        Ok(self)
    }

    /// A parameter window whose image covers the part of the curve in `viewport`.
    pub fn window(&self, viewport: &Rect) -> (f64, f64) {
        let bbox = if self.linear.is_identity() {
            *viewport
        } else {
            let inv = self.linear.inverse().expect("stored transforms are invertible");
            Rect::bounding(viewport.corners().map(|c| inv.apply(c))).unwrap()
        };
        let (w0, w1) = self.base.window(&bbox);
        let lo = if self.domain.0.is_finite() {
            w0.max(self.domain.0 + DOMAIN_INSET)
        } else {
            w0
        };
        let hi = if self.domain.1.is_finite() {
            w1.min(self.domain.1 - DOMAIN_INSET)
        } else {
            w1
        };
        (lo, hi)
    }

    pub fn from_spec(spec: &CurveSpec) -> Result<Self> {
        let outer = match &spec.outer {
            Some(o) => Some(PfaffianCurve::from_spec(o)?),
            None => None,
        };
        let mut curve = if spec.kind == CurveKind::Composed {
            let outer = outer.ok_or_else(|| Error::InvalidParams {
                kind: "composed".into(),
                reason: "missing `outer` curve".into(),
            })?;
            let poly = spec.poly.as_deref().ok_or_else(|| Error::InvalidParams {
                kind: "composed".into(),
                reason: "missing `poly` coefficients".into(),
            })?;
            compose_with_polynomial(&outer, &UnivariatePolynomial::new(poly.to_vec()))?
        } else {
            PfaffianCurve::new(BaseParam::from_params(
                spec.kind,
                &spec.params,
                spec.poly.as_deref(),
                None,
            )?)
        };
        if let Some([t0, t1]) = spec.domain {
            curve = curve.with_domain(t0, t1)?;
        }
        if let Some(m) = spec.transform {
            curve = apply_linear_transform(&curve, m.a1, m.a2, m.a3, m.a4)?;
        }
        Ok(curve)
    }

    pub fn to_spec(&self) -> CurveSpec {
        let (params, poly, outer) = self.base.to_params();
        let natural = self.base.natural_domain();
        CurveSpec {
            kind: self.kind(),
            params,
            poly,
            outer: outer.map(|o| Box::new(PfaffianCurve::new(o.clone()).to_spec())),
            domain: (self.domain != natural).then_some([self.domain.0, self.domain.1]),
            transform: (!self.linear.is_identity()).then_some(self.linear),
        }
    }
}

/// JSON form of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub kind: CurveKind,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Box<CurveSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<Mat2>,
}

impl CurveSpec {
    pub fn new(kind: CurveKind, params: Vec<f64>) -> Self {
        CurveSpec {
            kind,
            params,
            poly: None,
            outer: None,
            domain: None,
            transform: None,
        }
    }
}

/// Image of `curve` under `p ↦ A p`, `A = [[a1, a2], [a3, a4]]`.
pub fn apply_linear_transform(
    curve: &PfaffianCurve,
    a1: f64,
    a2: f64,
    a3: f64,
    a4: f64,
) -> Result<PfaffianCurve> {
    let a = Mat2::new(a1, a2, a3, a4);
    let field = curve.field.push_forward(&a)?;
    Ok(PfaffianCurve {
        base: curve.base.clone(),
        linear: a.compose(&curve.linear),
        field,
        domain: curve.domain,
    })
}

/// The graph of `y = f(p(x))` where `y = f(x)` is `curve`.
///
/// Only untransformed graphs whose derivative is a polynomial in the
/// function value qualify (lines, exponentials, tangents, reciprocals).
pub fn compose_with_polynomial(
    curve: &PfaffianCurve,
    p: &UnivariatePolynomial,
) -> Result<PfaffianCurve> {
    let restricted = curve.domain != curve.base.natural_domain();
    if !curve.linear.is_identity()
        || restricted
        || curve.base.derivative_in_value().is_none()
        || matches!(curve.base, BaseParam::Composed { .. })
    {
        return Err(Error::NotComposable(curve.kind().name().into()));
    }
    Ok(PfaffianCurve::new(BaseParam::Composed {
        outer: Box::new(curve.base.clone()),
        p: p.clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transformed_field_is_tangent() {
        let c = PfaffianCurve::exp(1.0, 1.0, 0.0);
        let t = apply_linear_transform(&c, 1.0, 2.0, -0.5, 1.5).unwrap();
        for i in 0..50 {
            let s = -1.0 + i as f64 * 0.04;
            let h = 1e-6;
            let d = (t.point(s + h) - t.point(s - h)) * (0.5 / h);
            let v = t.field().eval(t.point(s));
            assert!((d - v).norm() < 1e-6 * v.norm().max(1.0));
        }
        assert_eq!(t.pf_degree(), 1);
    }

    #[test]
    fn singular_transform_rejected() {
        let c = PfaffianCurve::line(1.0, 0.0);
        assert!(matches!(
            apply_linear_transform(&c, 1.0, 1.0, 1.0, 1.0),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn composition_field_and_degree() {
        let e = PfaffianCurve::exp(1.0, 1.0, 0.0);
        let p = UnivariatePolynomial::new(vec![0.0, 0.0, 1.0]);
        let c = compose_with_polynomial(&e, &p).unwrap();
        assert_eq!(c.kind(), CurveKind::Composed);
        assert_eq!(c.pf_degree(), 2);
        let q = c.point(0.7);
        assert!((q.y - (0.49f64).exp()).abs() < 1e-12);
        let v = c.field().eval(q);
        assert!((v.y - 2.0 * 0.7 * q.y).abs() < 1e-12);

        let circle = PfaffianCurve::circle(0.0, 0.0, 1.0);
        assert!(matches!(
            compose_with_polynomial(&circle, &p),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn spec_round_trip() {
        let c = apply_linear_transform(&PfaffianCurve::tan(1, 0.2, 0.0), 0.0, -1.0, 1.0, 0.0).unwrap();
        let spec = c.to_spec();
        let json = serde_json::to_string(&spec).unwrap();
        let back: CurveSpec = serde_json::from_str(&json).unwrap();
        let c2 = PfaffianCurve::from_spec(&back).unwrap();
        assert_eq!(c.point(3.5), c2.point(3.5));
        assert_eq!(c.field(), c2.field());
    }
}
