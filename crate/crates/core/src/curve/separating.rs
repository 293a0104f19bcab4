//! Numeric checks of the three separating-solution conditions.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::geom::Point;

use super::{CurveTrace, PfaffianCurve, PolyVectorField};

const H: f64 = 1e-6;
const TANGENT_TOL: f64 = 1e-5;
const GRID: usize = 128;

#[derive(Debug, Clone, Serialize)]
pub struct SeparatingReport {
    /// (i) sampled tangent matches the field.
    pub tangent_ok: bool,
    pub tangent_max_err: f64,
    /// Parameter of the worst tangent mismatch.
    pub tangent_worst_t: f64,
    /// (ii) the field does not vanish on the trace.
    pub nonvanishing_ok: bool,
    pub min_speed: f64,
    /// (iii) heuristic side consistency; `None` when no probe was usable.
    pub side_consistent: Option<bool>,
    /// Connected regions of the viewport grid once the trace is removed.
    pub regions: usize,
}

impl SeparatingReport {
    pub fn passes_local(&self) -> bool {
        self.tangent_ok && self.nonvanishing_ok
    }
}

pub fn check_separating_conditions(curve: &PfaffianCurve, trace: &CurveTrace) -> SeparatingReport {
    check_field_against(curve, curve.field(), trace)
}

/// Same checks with an arbitrary field, e.g. to confirm a wrong field fails.
pub fn check_field_against(
    curve: &PfaffianCurve,
    field: &PolyVectorField,
    trace: &CurveTrace,
) -> SeparatingReport {
    let mut max_err: f64 = 0.0;
    let mut worst_t = f64::NAN;
    let mut min_speed = f64::INFINITY;
    for comp in &trace.components {
        let n = comp.samples.len();
        for (i, s) in comp.samples.iter().enumerate() {
            let v = field.eval(s.point());
            min_speed = min_speed.min(v.norm());
            if i == 0 || i + 1 == n || !curve.defined(s.t - H) || !curve.defined(s.t + H) {
                continue;
            }
            let d = (curve.point(s.t + H) - curve.point(s.t - H)) * (0.5 / H);
            let err = (d - v).norm() / v.norm().max(1.0);
            if err > max_err {
                max_err = err;
                worst_t = s.t;
            }
        }
    }
    let (side_consistent, regions) = side_heuristic(field, trace);
    SeparatingReport {
        tangent_ok: max_err <= TANGENT_TOL,
        tangent_max_err: max_err,
        tangent_worst_t: worst_t,
        nonvanishing_ok: min_speed > 0.0,
        min_speed,
        side_consistent,
        regions,
    }
}

fn side_heuristic(field: &PolyVectorField, trace: &CurveTrace) -> (Option<bool>, usize) {
    let vp = trace.viewport;
    let (cw, ch) = (vp.width() / GRID as f64, vp.height() / GRID as f64);
    let cell_of = |p: Point| -> Option<usize> {
        if !vp.contains(p) {
            return None;
        }
        let i = (((p.x - vp.xmin) / cw) as usize).min(GRID - 1);
        let j = (((p.y - vp.ymin) / ch) as usize).min(GRID - 1);
        Some(j * GRID + i)
    };
    let mut barrier = vec![false; GRID * GRID];
    let sub = 0.25 * cw.min(ch);
    for comp in &trace.components {
        for w in comp.samples.windows(2) {
            let (a, b) = (w[0].point(), w[1].point());
            let k = ((a.dist(b) / sub).ceil() as usize).max(1);
            for q in 0..=k {
                let p = a + (b - a) * (q as f64 / k as f64);
                if let Some(c) = cell_of(p) {
                    barrier[c] = true;
                }
            }
        }
    }
    let mut label = vec![usize::MAX; GRID * GRID];
    let mut regions = 0;
    for start in 0..GRID * GRID {
        if barrier[start] || label[start] != usize::MAX {
            continue;
        }
        label[start] = regions;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let (i, j) = (c % GRID, c / GRID);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(c - 1);
            }
            if i + 1 < GRID {
                nb.push(c + 1);
            }
            if j > 0 {
                nb.push(c - GRID);
            }
            if j + 1 < GRID {
                nb.push(c + GRID);
            }
            for d in nb {
                if !barrier[d] && label[d] == usize::MAX {
                    label[d] = regions;
                    queue.push_back(d);
                }
            }
        }
        regions += 1;
    }

    let delta = 2.0 * cw.hypot(ch);
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for comp in &trace.components {
        let stride = (comp.samples.len() / 64).max(1);
        for s in comp.samples.iter().step_by(stride) {
            let v = field.eval(s.point());
            let len = v.norm();
            if len == 0.0 {
                continue;
            }
            let nrm = Point::new(-v.y / len, v.x / len);
            for (sign, set) in [(1.0, &mut left), (-1.0, &mut right)] {
                if let Some(c) = cell_of(s.point() + nrm * (sign * delta)) {
                    if !barrier[c] {
                        set.insert(label[c]);
                    }
                }
            }
        }
    }
    if left.is_empty() && right.is_empty() {
        return (None, regions);
    }
    (Some(left.is_disjoint(&right)), regions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::trace_curve;
    use crate::geom::Rect;
    use crate::poly::BivariatePolynomial;

    #[test]
    fn parabola_passes_and_wrong_field_fails() {
        let c = PfaffianCurve::parabola(1.0, 0.0, 0.0);
        let tr = trace_curve(&c, Rect::square(2.0), 1e-3).unwrap();
        let rep = check_separating_conditions(&c, &tr);
        assert!(rep.passes_local(), "{rep:?}");
        assert_eq!(rep.side_consistent, Some(true));

        let wrong = PolyVectorField::new(
            BivariatePolynomial::constant(1.0),
            BivariatePolynomial::monomial(3.0, 1, 0),
        );
        let rep = check_field_against(&c, &wrong, &tr);
        assert!(!rep.tangent_ok);
    }

    #[test]
    fn circle_speed_is_one() {
        let c = PfaffianCurve::circle(0.0, 0.0, 1.0);
        let tr = trace_curve(&c, Rect::square(2.0), 1e-3).unwrap();
        let rep = check_separating_conditions(&c, &tr);
        assert!(rep.nonvanishing_ok);
        assert!((rep.min_speed - 1.0).abs() < 1e-12);
        assert_eq!(rep.regions, 2);
        assert_eq!(rep.side_consistent, Some(true));
    }
}
