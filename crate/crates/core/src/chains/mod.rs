//! Pfaffian chains and Pfaffian functions over a rectangle `U`.
//!
//! Variables are ordered `(x, y, z_1, ..., z_r)`; link `i` (1-based) has
//! derivative polynomials `gx`, `gy` in the first `2 + i` of them.

mod numeric;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::poly::MultiPoly;

pub use numeric::{derivative, integrate};

pub const QUAD_TOL: f64 = 1e-9;
const GRID_STEP: f64 = 1.0 / 16.0;

/// The analytic function carried by a chain link.
#[derive(Debug, Clone)]
pub enum LinkNode {
    /// `e^{p(x, y)}`
    ExpOfPoly(MultiPoly),
    /// `tan(x / 2)`
    TanHalf,
    /// `cos²(x / 2)`
    CosSqHalf,
    /// `1 / x`
    Reciprocal,
    /// `p(x, y)`
    Polynomial(MultiPoly),
    /// `∫_lower^x H(s, z(s)) ds` over y-independent earlier links.
    Antiderivative(Arc<Antiderivative>),
}

#[derive(Debug)]
pub struct Antiderivative {
    integrand: MultiPoly,
    lower: f64,
    prefix: Vec<ChainLink>,
    y_ref: f64,
    /// Prefix integrals at `lower + k·GRID_STEP` for `k = k0, k0 + 1, ...`.
    k0: i64,
    cache: Vec<f64>,
}

impl Antiderivative {
    fn new(integrand: MultiPoly, lower: f64, prefix: Vec<ChainLink>, domain: &Rect) -> Self {
        let mut a = Antiderivative {
            integrand,
            lower,
            prefix,
            y_ref: 0.5 * (domain.ymin + domain.ymax),
            k0: 0,
            cache: Vec::new(),
        };
        let k0 = ((domain.xmin.min(lower) - lower) / GRID_STEP).floor() as i64;
        let k1 = ((domain.xmax.max(lower) - lower) / GRID_STEP).ceil() as i64;
        let mut cache = vec![0.0; (k1 - k0 + 1) as usize];
        let zero = (-k0) as usize;
        for k in zero + 1..cache.len() {
            let (s0, s1) = (a.node_x(k0 + k as i64 - 1), a.node_x(k0 + k as i64));
            cache[k] = cache[k - 1] + a.integral(s0, s1);
        }
        for k in (0..zero).rev() {
            let (s0, s1) = (a.node_x(k0 + k as i64), a.node_x(k0 + k as i64 + 1));
            cache[k] = cache[k + 1] - a.integral(s0, s1);
        }
        a.k0 = k0;
        a.cache = cache;
        a
    }

    fn node_x(&self, k: i64) -> f64 {
        self.lower + k as f64 * GRID_STEP
    }

    fn integrand_at(&self, s: f64) -> f64 {
        let mut vals = vec![s, self.y_ref];
        vals.extend(self.prefix.iter().map(|l| l.node.eval(s, self.y_ref)));
        self.integrand.eval(&vals)
    }

    fn integral(&self, a: f64, b: f64) -> f64 {
        integrate(&|s| self.integrand_at(s), a, b, QUAD_TOL * 1e-2)
    }

    fn eval(&self, x: f64) -> f64 {
        let k = ((x - self.lower) / GRID_STEP).round() as i64;
        let k = k.clamp(self.k0, self.k0 + self.cache.len() as i64 - 1);
        self.cache[(k - self.k0) as usize] + self.integral(self.node_x(k), x)
    }
}

impl LinkNode {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            LinkNode::ExpOfPoly(p) => p.eval(&[x, y]).exp(),
            LinkNode::TanHalf => (0.5 * x).tan(),
            LinkNode::CosSqHalf => (0.5 * x).cos().powi(2),
            LinkNode::Reciprocal => 1.0 / x,
            LinkNode::Polynomial(p) => p.eval(&[x, y]),
            LinkNode::Antiderivative(a) => a.eval(x),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            LinkNode::ExpOfPoly(_) => "exp-of-poly",
            LinkNode::TanHalf => "tan-half",
            LinkNode::CosSqHalf => "cos-sq-half",
            LinkNode::Reciprocal => "reciprocal",
            LinkNode::Polynomial(_) => "polynomial",
            LinkNode::Antiderivative(_) => "antiderivative",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainLink {
    pub node: LinkNode,
    pub gx: MultiPoly,
    pub gy: MultiPoly,
}

impl ChainLink {
    /// Degree of the link: `max(deg gx, deg gy)`.
    pub fn degree(&self) -> u32 {
        self.gx.degree().max(self.gy.degree())
    }

    /// `e^{p}` with its exact partials `p_x·z`, `p_y·z`; `index` is 1-based.
    pub fn exp_of_poly(p: MultiPoly, index: usize) -> Self {
        let n = 2 + index;
        let p2 = p.widen(2);
        let z = MultiPoly::var(n - 1, n);
        ChainLink {
            gx: &p2.partial(0).widen(n) * &z,
            gy: &p2.partial(1).widen(n) * &z,
            node: LinkNode::ExpOfPoly(p2),
        }
    }

    /// `1 / x` with `∂/∂x = -z²`.
    pub fn reciprocal(index: usize) -> Self {
        let n = 2 + index;
        let z = MultiPoly::var(n - 1, n);
        ChainLink {
            node: LinkNode::Reciprocal,
            gx: -&(&z * &z),
            gy: MultiPoly::zero(n),
        }
    }

    pub fn polynomial(p: MultiPoly, index: usize) -> Self {
        let n = 2 + index;
        let p2 = p.widen(2);
        ChainLink {
            gx: p2.partial(0).widen(n),
            gy: p2.partial(1).widen(n),
            node: LinkNode::Polynomial(p2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PfaffianChain {
    pub links: Vec<ChainLink>,
    pub domain: Rect,
}

impl PfaffianChain {
    pub fn new(links: Vec<ChainLink>, domain: Rect) -> Self {
        PfaffianChain { links, domain }
    }

    pub fn order(&self) -> usize {
        self.links.len()
    }

    pub fn degree(&self) -> u32 {
        self.links.iter().map(ChainLink::degree).max().unwrap_or(0)
    }

    /// `(x, y, f_1(x, y), ..., f_r(x, y))`
    pub fn values(&self, x: f64, y: f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 + self.links.len());
        v.push(x);
        v.push(y);
        v.extend(self.links.iter().map(|l| l.node.eval(x, y)));
        v
    }

    /// `[tan(x/2), cos²(x/2)]` on `(-π, π) × (ylo, yhi)`.
    pub fn half_angle(ylo: f64, yhi: f64) -> Self {
        let n1 = 3;
        let z1 = MultiPoly::var(2, n1);
        let g1x = (&MultiPoly::constant(0.5, n1) + &(&z1 * &z1).scale(0.5)).widen(n1);
        let n2 = 4;
        let z1 = MultiPoly::var(2, n2);
        let z2 = MultiPoly::var(3, n2);
        let g2x = -&(&z1 * &z2);
        let pi = std::f64::consts::PI;
        PfaffianChain::new(
            vec![
                ChainLink {
                    node: LinkNode::TanHalf,
                    gx: g1x,
                    gy: MultiPoly::zero(n1),
                },
                ChainLink {
                    node: LinkNode::CosSqHalf,
                    gx: g2x,
                    gy: MultiPoly::zero(n2),
                },
            ],
            Rect::new(-pi, ylo, pi, yhi),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkReport {
    pub kind: &'static str,
    pub max_err_x: f64,
    pub max_err_y: f64,
    pub worst: Point,
}

impl LinkReport {
    pub fn max_err(&self) -> f64 {
        self.max_err_x.max(self.max_err_y)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub links: Vec<LinkReport>,
    pub samples: usize,
    pub tol: f64,
    pub passed: bool,
}

impl ChainReport {
    pub fn max_err(&self) -> f64 {
        self.links.iter().map(LinkReport::max_err).fold(0.0, f64::max)
    }
}

/// Compare numeric partials of every link against its `gx`, `gy` at
/// `samples` seeded uniform points of the open domain.
pub fn verify_chain(chain: &PfaffianChain, samples: usize, tol: f64, seed: u64) -> Result<ChainReport> {
    if samples == 0 {
        return Err(Error::BadParameter("samples must be at least 1".into()));
    }
    let d = chain.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..samples)
        .map(|_| {
            Point::new(
                rng.random_range(d.xmin..d.xmax),
                rng.random_range(d.ymin..d.ymax),
            )
        })
        .filter(|p| d.contains_open(*p))
        .collect();
    verify_chain_at(chain, &pts, tol)
}

/// As [`verify_chain`] at caller-chosen points of the open domain.
pub fn verify_chain_at(chain: &PfaffianChain, points: &[Point], tol: f64) -> Result<ChainReport> {
    let d = chain.domain;
    if let Some(p) = points.iter().find(|p| !d.contains_open(**p)) {
        return Err(Error::DomainViolation { x: p.x, y: p.y });
    }
    let per_point: Vec<Vec<(f64, f64)>> = points
        .par_iter()
        .map(|&p| {
            let vals = chain.values(p.x, p.y);
            let hx = 0.05f64.min(0.5 * (p.x - d.xmin).min(d.xmax - p.x));
            let hy = 0.05f64.min(0.5 * (p.y - d.ymin).min(d.ymax - p.y));
            chain
                .links
                .iter()
                .enumerate()
                .map(|(i, link)| {
                    let args = &vals[..3 + i];
                    let nx = derivative(&|s| link.node.eval(s, p.y), p.x, hx);
                    let ny = derivative(&|s| link.node.eval(p.x, s), p.y, hy);
                    let ex = (nx - link.gx.eval(args)).abs() / nx.abs().max(1.0);
                    let ey = (ny - link.gy.eval(args)).abs() / ny.abs().max(1.0);
                    (ex, ey)
                })
                .collect()
        })
        .collect();
    let mut links: Vec<LinkReport> = chain
        .links
        .iter()
        .map(|l| LinkReport {
            kind: l.node.kind_name(),
            max_err_x: 0.0,
            max_err_y: 0.0,
            worst: Point::new(f64::NAN, f64::NAN),
        })
        .collect();
    for (p, errs) in points.iter().zip(&per_point) {
        for (r, &(ex, ey)) in links.iter_mut().zip(errs) {
            if ex.max(ey) > r.max_err() || r.worst.x.is_nan() {
                r.worst = *p;
            }
            r.max_err_x = r.max_err_x.max(ex);
            r.max_err_y = r.max_err_y.max(ey);
        }
    }
    let passed = links.iter().all(|l| l.max_err() <= tol);
    Ok(ChainReport {
        links,
        samples: points.len(),
        tol,
        passed,
    })
}

/// `f(x, y) = g(x, y, f_1, ..., f_r)`
#[derive(Debug, Clone)]
pub struct PfaffianFunction {
    pub chain: PfaffianChain,
    pub g: MultiPoly,
}

impl PfaffianFunction {
    pub fn new(chain: PfaffianChain, g: MultiPoly) -> Self {
        let n = 2 + chain.links.len();
        let g = if g.nvars() < n { g.widen(n) } else { g };
        PfaffianFunction { chain, g }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.g.eval(&self.chain.values(x, y))
    }

    /// `x·y⁵ − e^{x² + 3x}` on the given domain.
    pub fn worked_example(domain: Rect) -> Self {
        let p = MultiPoly::from_terms(2, [(1.0, vec![2, 0]), (3.0, vec![1, 0])]);
        let chain = PfaffianChain::new(vec![ChainLink::exp_of_poly(p, 1)], domain);
        let g = MultiPoly::from_terms(3, [(1.0, vec![1, 5, 0]), (-1.0, vec![0, 0, 1])]);
        PfaffianFunction::new(chain, g)
    }

    /// `y − cos x` through the half-angle chain (`cos x = 2cos²(x/2) − 1`).
    pub fn y_minus_cos(ylo: f64, yhi: f64) -> Self {
        let g = MultiPoly::from_terms(4, [(1.0, vec![0, 1]), (-2.0, vec![0, 0, 0, 1]), (1.0, vec![])]);
        PfaffianFunction::new(PfaffianChain::half_angle(ylo, yhi), g)
    }

    /// `cos x = 2 z_2 − 1` through the half-angle chain.
    pub fn cos(ylo: f64, yhi: f64) -> Self {
        let g = MultiPoly::from_terms(4, [(2.0, vec![0, 0, 0, 1]), (-1.0, vec![])]);
        PfaffianFunction::new(PfaffianChain::half_angle(ylo, yhi), g)
    }

    /// `y − h(x)` where `h` is the given polynomial in `(x, z_1, ..., z_r)`.
    pub fn y_minus(chain: PfaffianChain, h: MultiPoly) -> Self {
        let n = 2 + chain.links.len();
        let g = &MultiPoly::var(1, n) - &h.widen(n);
        PfaffianFunction::new(chain, g)
    }
}

/// `(order, (chain degree, degree of g))`
pub fn order_and_degree(pf: &PfaffianFunction) -> (usize, (u32, u32)) {
    (pf.chain.order(), (pf.chain.degree(), pf.g.degree()))
}

/// Given `y − h(x)`, append `∫_c^x h` as a new link and return
/// `y − ∫_c^x h(t) dt`.
pub fn extend_with_integral(pf: &PfaffianFunction, c: f64) -> Result<PfaffianFunction> {
    let n = 2 + pf.chain.links.len();
    let y = MultiPoly::var(1, n);
    let h = &y - &pf.g;
    let y_free_links = pf
        .chain
        .links
        .iter()
        .all(|l| l.gy.is_zero() && !l.gx.depends_on(1) && !matches!(&l.node, LinkNode::ExpOfPoly(p) | LinkNode::Polynomial(p) if p.depends_on(1)));
    if h.depends_on(1) || !y_free_links || !c.is_finite() {
        return Err(Error::NotUnivariateForm);
    }
    let anti = Antiderivative::new(h.clone(), c, pf.chain.links.clone(), &pf.chain.domain);
    let m = n + 1;
    let link = ChainLink {
        node: LinkNode::Antiderivative(Arc::new(anti)),
        gx: h.widen(m),
        gy: MultiPoly::zero(m),
    };
    let mut links = pf.chain.links.clone();
    links.push(link);
    let g = &MultiPoly::var(1, m) - &MultiPoly::var(m - 1, m);
    Ok(PfaffianFunction::new(
        PfaffianChain::new(links, pf.chain.domain),
        g,
    ))
}

// ---- JSON ----

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrand: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSpec {
    pub node_kind: String,
    #[serde(default)]
    pub params: LinkParams,
    pub gx: BTreeMap<String, f64>,
    pub gy: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub chain: Vec<LinkSpec>,
    pub g: BTreeMap<String, f64>,
    pub domain: Rect,
}

impl PfaffianChain {
    pub fn from_specs(specs: &[LinkSpec], domain: Rect) -> Result<Self> {
        let mut links: Vec<ChainLink> = Vec::new();
        for (i, s) in specs.iter().enumerate() {
            let n = 3 + i;
            let poly = |m: &Option<BTreeMap<String, f64>>| -> Result<MultiPoly> {
                let m = m.as_ref().ok_or_else(|| Error::BadParameter(format!("link {} needs a polynomial", i + 1)))?;
                MultiPoly::from_map(2, m)
            };
            let node = match s.node_kind.as_str() {
                "exp-of-poly" => LinkNode::ExpOfPoly(poly(&s.params.poly)?),
                "tan-half" => LinkNode::TanHalf,
                "cos-sq-half" => LinkNode::CosSqHalf,
                "reciprocal" => LinkNode::Reciprocal,
                "polynomial" => LinkNode::Polynomial(poly(&s.params.poly)?),
                "antiderivative" => {
                    let m = s.params.integrand.as_ref().ok_or_else(|| {
                        Error::BadParameter(format!("link {} needs an integrand", i + 1))
                    })?;
                    let integrand = MultiPoly::from_map(n - 1, m)?;
                    let lower = s.params.lower.unwrap_or(0.0);
                    LinkNode::Antiderivative(Arc::new(Antiderivative::new(
                        integrand,
                        lower,
                        links.clone(),
                        &domain,
                    )))
                }
                other => return Err(Error::BadParameter(format!("unknown node kind `{other}`"))),
            };
            links.push(ChainLink {
                node,
                gx: MultiPoly::from_map(n, &s.gx)?,
                gy: MultiPoly::from_map(n, &s.gy)?,
            });
        }
        Ok(PfaffianChain::new(links, domain))
    }

    pub fn to_specs(&self) -> Vec<LinkSpec> {
        self.links
            .iter()
            .map(|l| {
                let params = match &l.node {
                    LinkNode::ExpOfPoly(p) | LinkNode::Polynomial(p) => LinkParams {
                        poly: Some(p.to_map()),
                        ..Default::default()
                    },
                    LinkNode::Antiderivative(a) => LinkParams {
                        integrand: Some(a.integrand.to_map()),
                        lower: Some(a.lower),
                        ..Default::default()
                    },
                    _ => LinkParams::default(),
                };
                LinkSpec {
                    node_kind: l.node.kind_name().into(),
                    params,
                    gx: l.gx.to_map(),
                    gy: l.gy.to_map(),
                }
            })
            .collect()
    }
}

impl PfaffianFunction {
    pub fn from_spec(spec: &FunctionSpec) -> Result<Self> {
        let chain = PfaffianChain::from_specs(&spec.chain, spec.domain)?;
        let g = MultiPoly::from_map(2 + chain.links.len(), &spec.g)?;
        Ok(PfaffianFunction::new(chain, g))
    }

    pub fn to_spec(&self) -> FunctionSpec {
        FunctionSpec {
            chain: self.chain.to_specs(),
            g: self.g.to_map(),
            domain: self.chain.domain,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn worked_example_order_degree() {
        let pf = PfaffianFunction::worked_example(Rect::new(-2.0, -2.0, 2.0, 2.0));
        assert_eq!(order_and_degree(&pf), (1, (2, 6)));
        let r = verify_chain(&pf.chain, 1000, 1e-6, 1).unwrap();
        assert!(r.passed, "{r:?}");
        let (x, y): (f64, f64) = (0.3, -1.1);
        assert!((pf.eval(x, y) - (x * y.powi(5) - (x * x + 3.0 * x).exp())).abs() < 1e-12);
    }

    #[test]
    fn polynomial_has_order_zero() {
        let g = MultiPoly::from_terms(2, [(1.0, vec![3, 1]), (2.0, vec![0, 0])]);
        let pf = PfaffianFunction::new(PfaffianChain::new(vec![], Rect::square(1.0)), g);
        assert_eq!(order_and_degree(&pf), (0, (0, 4)));
    }

    #[test]
    fn half_angle_chain() {
        let mut ch = PfaffianChain::half_angle(-1.0, 1.0);
        ch.domain = Rect::new(-PI + 0.01, -1.0, PI - 0.01, 1.0);
        let r = verify_chain(&ch, 1000, 1e-6, 7).unwrap();
        assert!(r.passed, "{r:?}");
        let f = PfaffianFunction::cos(-1.0, 1.0);
        assert_eq!(order_and_degree(&f).0, 2);
        assert!((f.eval(1.2, 0.0) - 1.2f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn wrong_derivative_fails() {
        let p = MultiPoly::var(0, 2);
        let mut link = ChainLink::exp_of_poly(p, 1);
        link.gx = MultiPoly::var(2, 3).scale(2.0);
        let ch = PfaffianChain::new(vec![link], Rect::new(0.0, 0.0, 1.0, 1.0));
        let r = verify_chain(&ch, 200, 1e-6, 3).unwrap();
        assert!(!r.passed);
        assert!((r.max_err() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn domain_violation() {
        let ch = PfaffianChain::half_angle(-1.0, 1.0);
        assert!(matches!(
            verify_chain_at(&ch, &[Point::new(4.0, 0.0)], 1e-6),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn integral_of_exp() {
        let dom = Rect::new(-1.0, -1.0, 2.0, 1.0);
        let chain = PfaffianChain::new(vec![ChainLink::exp_of_poly(MultiPoly::var(0, 2), 1)], dom);
        let pf = PfaffianFunction::y_minus(chain, MultiPoly::var(2, 3));
        let ext = extend_with_integral(&pf, 0.0).unwrap();
        assert_eq!(order_and_degree(&ext).0, 2);
        for x in [-0.9, -0.3, 0.0, 0.4, 1.7] {
            let z = ext.chain.values(x, 0.0)[3];
            assert!((z - (f64::exp(x) - 1.0)).abs() < 1e-8);
        }
        assert!(verify_chain(&ext.chain, 200, 1e-6, 5).unwrap().passed);
    }

    #[test]
    fn integral_of_exp_over_t() {
        let dom = Rect::new(0.1, -1.0, 3.0, 1.0);
        let chain = PfaffianChain::new(
            vec![
                ChainLink::exp_of_poly(MultiPoly::var(0, 2), 1),
                ChainLink::reciprocal(2),
            ],
            dom,
        );
        let h = &MultiPoly::var(2, 4) * &MultiPoly::var(3, 4);
        let ext = extend_with_integral(&PfaffianFunction::y_minus(chain, h), 0.1).unwrap();
        let r = verify_chain(&ext.chain, 300, 1e-4, 11).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn integral_of_constant() {
        let dom = Rect::new(-1.0, -1.0, 1.0, 1.0);
        let pf = PfaffianFunction::y_minus(PfaffianChain::new(vec![], dom), MultiPoly::constant(1.0, 2));
        let ext = extend_with_integral(&pf, 0.0).unwrap();
        assert_eq!(order_and_degree(&ext).0, 1);
        assert!((ext.eval(0.37, 0.5) - (0.5 - 0.37)).abs() < 1e-12);
    }

    #[test]
    fn not_univariate_rejected() {
        let pf = PfaffianFunction::worked_example(Rect::square(1.0));
        assert!(matches!(extend_with_integral(&pf, 0.0), Err(Error::NotUnivariateForm)));
    }

    #[test]
    fn json_round_trip() {
        let pf = PfaffianFunction::worked_example(Rect::square(1.0));
        let json = serde_json::to_string(&pf.to_spec()).unwrap();
        let back = PfaffianFunction::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(order_and_degree(&back), (1, (2, 6)));
        assert_eq!(back.eval(0.2, 0.3), pf.eval(0.2, 0.3));
    }
}
