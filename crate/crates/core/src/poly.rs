//! Polynomials: bivariate (vector fields), univariate (compositions) and
//! multivariate in `(x, y, z1, ..., zr)` (Pfaffian chains).
//!
//! Polynomials serialize as JSON objects mapping a comma separated exponent
//! tuple to its coefficient, e.g. `{"1,0": 2.0, "0,2": -1.0}` for `2x - y²`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::Mat2;

fn parse_key(key: &str) -> Result<Vec<u32>> {
    key.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Error::PolyKey(key.to_string())))
        .collect()
}

fn format_key(exps: &[u32]) -> String {
    exps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

/// Polynomial in `(x, y)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), f64>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: f64, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1.0, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1.0, 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), f64)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(c, i, j);
        }
        p
    }

    pub fn add_term(&mut self, c: f64, i: u32, j: u32) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| c * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, &c)| (k, c * s)))
    }

    fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `P(m.a1·x + m.a2·y, m.a3·x + m.a4·y)`.
    pub fn compose_linear(&self, m: &Mat2) -> Self {
        let u = Self::from_terms([((1, 0), m.a1), ((0, 1), m.a2)]);
        let v = Self::from_terms([((1, 0), m.a3), ((0, 1), m.a4)]);
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            out = &out + &(&u.pow(i) * &v.pow(j)).scale(c);
        }
        out.prune(1e-14);
        out
    }

    /// Drop coefficients that are rounding residue relative to the largest one.
    pub fn prune(&mut self, rel: f64) {
        let max = self.terms.values().fold(0.0f64, |a, c| a.max(c.abs()));
        self.terms.retain(|_, c| c.abs() > rel * max);
    }

    /// Embed into the multivariate ring `(x, y, z1..)` with `nvars` variables.
    pub fn to_multi(&self, nvars: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for (&(i, j), &c) in &self.terms {
            let mut e = vec![0; nvars];
            e[0] = i;
            e[1] = j;
            p.add_term(c, e);
        }
        p
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(i, j), &c) in &o.terms {
            out.add_term(c, i, j);
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        self + &o.scale(-1.0)
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, o: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &o.terms {
                out.add_term(c1 * c2, i1 + i2, j1 + j2);
            }
        }
        out
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), &c)| {
                let mut s = format!("{c}");
                if i > 0 {
                    s.push_str(&if i == 1 { "x".into() } else { format!("x^{i}") });
                }
                if j > 0 {
                    s.push_str(&if j == 1 { "y".into() } else { format!("y^{j}") });
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for BivariatePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, f64> = self
            .terms
            .iter()
            .map(|(&(i, j), &c)| (format_key(&[i, j]), c))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariatePolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, f64>::deserialize(d)?;
        let mut p = BivariatePolynomial::zero();
        for (k, c) in map {
            let e = parse_key(&k).map_err(serde::de::Error::custom)?;
            if e.len() != 2 {
                return Err(serde::de::Error::custom(format!("expected 2 exponents in `{k}`")));
            }
            p.add_term(c, e[0], e[1]);
        }
        Ok(p)
    }
}

/// Univariate polynomial, coefficients from the constant term upward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnivariatePolynomial {
    pub coeffs: Vec<f64>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        UnivariatePolynomial { coeffs }
    }

    /// The identity polynomial `p(x) = x`.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn in_x(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(
            self.coeffs.iter().enumerate().map(|(k, &c)| ((k as u32, 0), c)),
        )
    }

    pub fn in_y(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms(
            self.coeffs.iter().enumerate().map(|(k, &c)| ((0, k as u32), c)),
        )
    }
}

/// Polynomial over a fixed number of variables. Variable 0 is `x`, 1 is `y`,
/// `2 + i` is the chain variable `z_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: f64, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(c, vec![0; nvars]);
        p
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(1.0, e);
        p
    }

    /// Build from `(coefficient, exponents)` pairs; exponent vectors shorter
    /// than `nvars` are padded with zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (f64, Vec<u32>)>) -> Self {
        let mut p = Self::zero(nvars);
        for (c, mut e) in terms {
            e.resize(nvars, 0);
            p.add_term(c, e);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, c: f64, exps: Vec<u32>) {
        assert_eq!(exps.len(), self.nvars, "exponent arity");
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Whether some monomial has a positive power of variable `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e.get(i).copied().unwrap_or(0) > 0)
    }

    pub fn eval(&self, vals: &[f64]) -> f64 {
        debug_assert!(vals.len() >= self.nvars);
        self.terms
            .iter()
            .map(|(e, &c)| {
                e.iter()
                    .zip(vals)
                    .fold(c, |acc, (&k, &v)| if k == 0 { acc } else { acc * v.powi(k as i32) })
            })
            .sum()
    }

    /// Same polynomial viewed in a ring with more variables.
    pub fn widen(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut p = Self::zero(nvars);
        for (e, &c) in &self.terms {
            let mut e = e.clone();
            e.resize(nvars, 0);
            p.add_term(c, e);
        }
        p
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, &c)| (c * s, e.clone())))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e = e.clone();
            e[i] -= 1;
            p.add_term(c * k as f64, e);
        }
        p
    }

    /// Coefficient of the monomial with exponent vector `e`.
    pub fn coeff(&self, e: &[u32]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    /// Parse from the JSON map representation.
    pub fn from_map(nvars: usize, map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (k, &c) in map {
            let mut e = parse_key(k)?;
            if e.len() > nvars {
                return Err(Error::PolyKey(k.clone()));
            }
            e.resize(nvars, 0);
            p.add_term(c, e);
        }
        Ok(p)
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.terms.iter().map(|(e, &c)| (format_key(e), c)).collect()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let n = self.nvars.max(o.nvars);
        let mut out = self.widen(n);
        for (e, &c) in &o.terms {
            let mut e = e.clone();
            e.resize(n, 0);
            out.add_term(c, e);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(-1.0)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let n = self.nvars.max(o.nvars);
        let mut out = MultiPoly::zero(n);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let mut e = vec![0; n];
                for (k, slot) in e.iter_mut().enumerate() {
                    *slot = e1.get(k).copied().unwrap_or(0) + e2.get(k).copied().unwrap_or(0);
                }
                out.add_term(c1 * c2, e);
            }
        }
        out
    }
}
