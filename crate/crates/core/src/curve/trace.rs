//! Sampling a curve inside a viewport.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{segment_distance, Point, Rect};

use super::PfaffianCurve;

pub const DEFAULT_STEP: f64 = 1e-3;
const MAX_SAMPLES: f64 = 2e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl Sample {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// One connected run of the curve inside the viewport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceComponent {
    pub samples: Vec<Sample>,
    pub closed: bool,
}

impl TraceComponent {
    pub fn t_range(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub viewport: Rect,
    pub step: f64,
    pub components: Vec<TraceComponent>,
}

impl CurveTrace {
    pub fn samples(&self) -> impl Iterator<Item = &Sample> {
        self.components.iter().flat_map(|c| c.samples.iter())
    }

    pub fn len(&self) -> usize {
        self.components.iter().map(|c| c.samples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn extent(&self) -> Rect {
        Rect::bounding(self.samples().map(Sample::point)).unwrap_or(self.viewport)
    }
}

/// Sample `curve` with parameter step at most `step` and keep the runs that
/// lie in `viewport`. Run ends are pulled onto the viewport boundary.
pub fn trace_curve(curve: &PfaffianCurve, viewport: Rect, step: f64) -> Result<CurveTrace> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::BadParameter(format!("trace step {step}")));
    }
    let (t0, t1) = curve.window(&viewport);
    if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::EmptyTrace);
    }
    let count = ((t1 - t0) / step).ceil();
    if count > MAX_SAMPLES {
        return Err(Error::BadParameter(format!(
            "trace would need {count:e} samples; raise the step"
        )));
    }
    let n = count.max(1.0) as usize;
    let h = (t1 - t0) / n as f64;
    let inside = |t: f64| -> Option<Point> {
        if !curve.base().defined(t) {
            return None;
        }
        let p = curve.point(t);
        (p.x.is_finite() && p.y.is_finite() && viewport.contains(p)).then_some(p)
    };
    // Bisect between an outside parameter and an inside one.
    let refine = |t_out: f64, t_in: f64| -> Sample {
        let (mut a, mut b) = (t_out, t_in);
        for _ in 0..64 {
            let m = 0.5 * (a + b);
            if inside(m).is_some() {
                b = m;
            } else {
                a = m;
            }
            if (b - a).abs() < 1e-15 * (1.0 + b.abs()) {
                break;
            }
        }
        let p = viewport.clamp(curve.point(b));
        Sample { t: b, x: p.x, y: p.y }
    };

    let mut components = Vec::new();
    let mut run: Vec<Sample> = Vec::new();
    let mut prev_t = f64::NAN;
    for i in 0..=n {
        let t = if i == n { t1 } else { t0 + h * i as f64 };
        match inside(t) {
            Some(p) => {
                if run.is_empty() && i > 0 {
                    let s = refine(prev_t, t);
                    if s.t < t {
                        run.push(s);
                    }
                }
                run.push(Sample { t, x: p.x, y: p.y });
            }
            None => {
                if !run.is_empty() {
                    let last = run[run.len() - 1].t;
                    let s = refine(t, last);
                    if s.t > last {
                        run.push(s);
                    }
                    components.push(std::mem::take(&mut run));
                }
            }
        }
        prev_t = t;
    }
    if !run.is_empty() {
        components.push(run);
    }
    let covers_all = components.len() == 1
        && components[0].len() == n + 1
        && curve.is_periodic();
    let components: Vec<TraceComponent> = components
        .into_iter()
        .filter(|s| s.len() >= 2)
        .map(|samples| TraceComponent {
            samples,
            closed: covers_all,
        })
        .collect();
    if components.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(CurveTrace {
        viewport,
        step,
        components,
    })
}

/// A curve together with its trace and a spatial index over trace segments.
#[derive(Debug, Clone)]
pub struct TracedCurve {
    pub id: usize,
    pub curve: PfaffianCurve,
    pub trace: CurveTrace,
    extent: Rect,
    cell: f64,
    max_seg: f64,
    index: HashMap<(i64, i64), Vec<(u32, u32)>>,
}

impl TracedCurve {
    pub fn new(id: usize, curve: PfaffianCurve, viewport: Rect, step: f64) -> Result<Self> {
        let trace = trace_curve(&curve, viewport, step)?;
        Ok(Self::from_trace(id, curve, trace))
    }

    pub fn from_trace(id: usize, curve: PfaffianCurve, trace: CurveTrace) -> Self {
        let extent = trace.extent();
        let mut max_seg: f64 = 0.0;
        for c in &trace.components {
            for w in c.samples.windows(2) {
                max_seg = max_seg.max(w[0].point().dist(w[1].point()));
            }
        }
        let cell = (4.0 * max_seg).max(extent.width().max(extent.height()) / 512.0).max(1e-9);
        let mut index: HashMap<(i64, i64), Vec<(u32, u32)>> = HashMap::new();
        for (ci, c) in trace.components.iter().enumerate() {
            for (si, w) in c.samples.windows(2).enumerate() {
                let (a, b) = (w[0].point(), w[1].point());
                let (i0, j0) = key(a.x.min(b.x), a.y.min(b.y), cell);
                let (i1, j1) = key(a.x.max(b.x), a.y.max(b.y), cell);
                for i in i0..=i1 {
                    for j in j0..=j1 {
                        index.entry((i, j)).or_default().push((ci as u32, si as u32));
                    }
                }
            }
        }
        TracedCurve {
            id,
            curve,
            trace,
            extent,
            cell,
            max_seg,
            index,
        }
    }

    pub fn extent(&self) -> Rect {
        self.extent
    }

    /// Exact distance from `p` to the curve when it is below `radius` plus
    /// the chord error; `None` when the curve is clearly farther.
    pub fn distance(&self, p: Point, radius: f64) -> Option<f64> {
        let reach = radius + self.max_seg;
        if !self.extent.expand(reach).contains(p) {
            return None;
        }
        let (i0, j0) = key(p.x - reach, p.y - reach, self.cell);
        let (i1, j1) = key(p.x + reach, p.y + reach, self.cell);
        let mut hits: Vec<(u32, u32)> = Vec::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                if let Some(v) = self.index.get(&(i, j)) {
                    for &(c, s) in v {
                        let smp = &self.trace.components[c as usize].samples;
                        let d = segment_distance(
                            p,
                            smp[s as usize].point(),
                            smp[s as usize + 1].point(),
                        );
                        if d <= reach {
                            hits.push((c, s));
                        }
                    }
                }
            }
        }
        if hits.is_empty() {
            return None;
        }
        hits.sort_unstable();
        hits.dedup();
        let mut best = f64::INFINITY;
        let mut k = 0;
        while k < hits.len() {
            // Group consecutive segments of one component into one range.
            let (c, s0) = hits[k];
            let mut s1 = s0;
            while k + 1 < hits.len() && hits[k + 1].0 == c && hits[k + 1].1 <= s1 + 2 {
                k += 1;
                s1 = hits[k].1;
            }
            k += 1;
            let smp = &self.trace.components[c as usize].samples;
            let lo = s0.saturating_sub(1) as usize;
            let hi = (s1 as usize + 2).min(smp.len() - 1);
            best = best.min(self.refine_distance(p, smp, lo, hi));
        }
        Some(best)
    }

    fn refine_distance(&self, p: Point, smp: &[Sample], lo: usize, hi: usize) -> f64 {
        let d2 = |t: f64| {
            let q = self.curve.point(t);
            let d = q - p;
            d.dot(d)
        };
        // Start from the best sample, then golden-section on its neighborhood.
        let mut ib = lo;
        for i in lo..=hi {
            if smp[i].point().dist(p) < smp[ib].point().dist(p) {
                ib = i;
            }
        }
        let a0 = smp[ib.saturating_sub(1).max(lo)].t;
        let b0 = smp[(ib + 1).min(hi)].t;
        let (mut a, mut b) = (a0, b0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (d2(c), d2(d));
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = d2(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = d2(d);
            }
            if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
                break;
            }
        }
        let mut best = fc.min(fd).min(d2(a0)).min(d2(b0));
        for i in lo..=hi {
            let q = smp[i].point() - p;
            best = best.min(q.dot(q));
        }
        best.sqrt()
    }

    pub fn is_incident(&self, p: Point, tol: f64) -> bool {
        self.distance(p, 100.0 * tol).is_some_and(|d| d <= tol)
    }
}

fn key(x: f64, y: f64, cell: f64) -> (i64, i64) {
    ((x / cell).floor() as i64, (y / cell).floor() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_trace_is_closed() {
        let c = PfaffianCurve::circle(0.0, 0.0, 1.0);
        let tr = trace_curve(&c, Rect::square(2.0), 1e-3).unwrap();
        assert_eq!(tr.components.len(), 1);
        assert!(tr.components[0].closed);
    }

    #[test]
    fn clipped_circle_splits() {
        // The open parameter interval cuts the right arc at (1, 0) as well.
        let c = PfaffianCurve::circle(0.0, 0.0, 1.0);
        let tr = trace_curve(&c, Rect::new(-2.0, -0.5, 2.0, 0.5), 1e-3).unwrap();
        assert_eq!(tr.components.len(), 3);
        let mut on_edge = 0;
        for comp in &tr.components {
            assert!(!comp.closed);
            for s in [comp.samples[0], *comp.samples.last().unwrap()] {
                if (s.y.abs() - 0.5).abs() < 1e-12 {
                    on_edge += 1;
                } else {
                    assert!((s.x - 1.0).abs() < 1e-8 && s.y.abs() < 1e-8, "{s:?}");
                }
            }
        }
        assert_eq!(on_edge, 4);
    }

    #[test]
    fn consecutive_samples_are_close() {
        let c = PfaffianCurve::tan(0, 0.0, 0.0);
        let step = 1e-3;
        let tr = trace_curve(&c, Rect::square(3.0), step).unwrap();
        for comp in &tr.components {
            for w in comp.samples.windows(2) {
                let vmax = c.field().eval(w[0].point()).norm().max(c.field().eval(w[1].point()).norm());
                assert!(w[0].point().dist(w[1].point()) <= 2.0 * step * vmax + 1e-12);
            }
        }
    }

    #[test]
    fn missing_viewport_is_empty() {
        let c = PfaffianCurve::circle(10.0, 10.0, 1.0);
        assert!(matches!(
            trace_curve(&c, Rect::square(1.0), 1e-3),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn incidence_is_exact() {
        let c = PfaffianCurve::exp(1.0, 1.0, 0.0);
        let t = TracedCurve::new(0, c, Rect::square(2.0), 1e-3).unwrap();
        let x: f64 = 0.123_456_7;
        assert!(t.is_incident(Point::new(x, x.exp()), 1e-9));
        assert!(!t.is_incident(Point::new(x, x.exp() + 1e-6), 1e-7));
        let d = t.distance(Point::new(0.0, 1.0 + 1e-4), 1e-2).unwrap();
        assert!((d - 1e-4 / 2f64.sqrt()).abs() < 1e-8);
    }
}
