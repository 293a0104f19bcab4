//! Scenes: a viewport, a point set and a curve set, with JSON I/O.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{
    apply_linear_transform, trace_curve, CurveSpec, CurveTrace, PfaffianCurve, TracedCurve,
    DEFAULT_STEP,
};
use crate::error::{Error, Result};
use crate::geom::{Mat2, Point, Rect};

pub const FORMAT_VERSION: u32 = 1;
const ROTATION_RETRIES: usize = 100;
const VERTICAL_SPREAD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub format_version: u32,
    pub viewport: Rect,
    #[serde(default)]
    pub points: Vec<Point>,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub viewport: Rect,
    pub points: Vec<Point>,
    pub curves: Vec<PfaffianCurve>,
}

impl Scene {
    pub fn new(viewport: Rect, points: Vec<Point>, curves: Vec<PfaffianCurve>) -> Self {
        Scene {
            viewport,
            points,
            curves,
        }
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }

    pub fn to_file(&self) -> SceneFile {
        SceneFile {
            format_version: FORMAT_VERSION,
            viewport: self.viewport,
            points: self.points.clone(),
            curves: self.curves.iter().map(PfaffianCurve::to_spec).collect(),
        }
    }

    pub fn from_file(file: &SceneFile) -> Result<Self> {
        let curves = file
            .curves
            .iter()
            .map(PfaffianCurve::from_spec)
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene::new(file.viewport, file.points.clone(), curves))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scene serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Scene::from_file(&serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Scene::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Trace every curve; curves that miss the viewport get an empty trace.
    pub fn trace(&self, step: f64) -> Result<Vec<Arc<TracedCurve>>> {
        self.curves
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let trace = match trace_curve(c, self.viewport, step) {
                    Ok(t) => t,
                    Err(Error::EmptyTrace) => CurveTrace {
                        viewport: self.viewport,
                        step,
                        components: Vec::new(),
                    },
                    Err(e) => return Err(e),
                };
                Ok(Arc::new(TracedCurve::from_trace(i, c.clone(), trace)))
            })
            .collect()
    }

    pub fn trace_default(&self) -> Result<Vec<Arc<TracedCurve>>> {
        self.trace(DEFAULT_STEP)
    }

    /// Rotate the whole scene by `theta` about the origin. The new viewport
    /// is the bounding box of the rotated old one.
    pub fn rotated(&self, theta: f64) -> Result<Scene> {
        let m = Mat2::rotation(theta);
        let curves = self
            .curves
            .iter()
            .map(|c| apply_linear_transform(c, m.a1, m.a2, m.a3, m.a4))
            .collect::<Result<Vec<_>>>()?;
        let viewport = Rect::bounding(self.viewport.corners().map(|c| m.apply(c))).unwrap();
        Ok(Scene::new(
            viewport,
            self.points.iter().map(|&p| m.apply(p)).collect(),
            curves,
        ))
    }

    /// Rotate by a seed-determined angle chosen so that no traced curve is a
    /// vertical segment. Returns the rotated scene and the angle.
    pub fn prerotate(&self, seed: u64) -> Result<(Scene, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_0F_A11);
        for _ in 0..ROTATION_RETRIES {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let s = self.rotated(theta)?;
            let coarse = s.trace(1e-2)?;
            if coarse.iter().all(|t| !is_vertical(&t.trace)) {
                return Ok((s, theta));
            }
        }
        Err(Error::RotationFailed(ROTATION_RETRIES))
    }
}

/// Whether every sample of the trace has the same abscissa.
pub fn is_vertical(trace: &CurveTrace) -> bool {
    let mut it = trace.samples();
    let Some(first) = it.next() else {
        return false;
    };
    let (mut lo, mut hi) = (first.x, first.x);
    for s in it {
        lo = lo.min(s.x);
        hi = hi.max(s.x);
    }
    hi - lo < VERTICAL_SPREAD
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = Scene::new(
            Rect::square(2.0),
            vec![Point::new(0.0, 1.0)],
            vec![PfaffianCurve::exp(1.0, 1.0, 0.0), PfaffianCurve::circle(0.0, 0.0, 1.0)],
        );
        let back = Scene::from_json(&s.to_json()).unwrap();
        assert_eq!(back.points, s.points);
        assert_eq!(back.curves, s.curves);
    }

    #[test]
    fn rotation_fixes_vertical_line() {
        let vertical = apply_linear_transform(&PfaffianCurve::line(0.0, 0.0), 0.0, -1.0, 1.0, 0.0).unwrap();
        let s = Scene::new(Rect::square(2.0), vec![], vec![vertical]);
        let tr = s.trace(1e-3).unwrap();
        assert!(is_vertical(&tr[0].trace));
        let (r, theta) = s.prerotate(3).unwrap();
        let tr = r.trace(1e-3).unwrap();
        assert!(!is_vertical(&tr[0].trace));
        assert!(theta.is_finite());
    }

    #[test]
    fn rotation_preserves_incidence() {
        let x: f64 = 0.4;
        let s = Scene::new(
            Rect::square(2.0),
            vec![Point::new(x, x.exp())],
            vec![PfaffianCurve::exp(1.0, 1.0, 0.0)],
        );
        let (r, _) = s.prerotate(9).unwrap();
        let tr = r.trace(1e-3).unwrap();
        assert!(tr[0].is_incident(r.points[0], 1e-9));
    }
}
