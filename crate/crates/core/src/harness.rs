//! Experiment plumbing: grid sweeps with exponent fitting and bound checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{grid_dims, grid_lines};
use crate::incidence::{
    bound_hyperplanes, bound_kst, bound_kst_dual, bound_pach_sharir, bound_pfaffian_curves,
    bound_pfaffian_family, count_incidences, kst_free, optimal_r, IncidenceGraph, Regime,
};
use crate::scene::Scene;

/// Constant for [`BoundKind::PfaffianCurves`], fitted once over the
/// acceptance corpus and frozen. The largest measured ratio is 0.287, from
/// the 8-point, 2-line grid.
pub const C_FIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub size: usize,
    pub a: usize,
    pub b: usize,
    pub m: usize,
    pub n: usize,
    pub incidences: usize,
}

/// Brute-force incidence counts of `grid_lines` scenes sized by `sizes`.
pub fn sweep_grid(sizes: &[usize], tol: f64) -> Result<Vec<SweepRow>> {
    sizes
        .iter()
        .map(|&size| {
            let (a, b) = grid_dims(size);
            let scene = grid_lines(a, b);
            let traced = scene.trace_default()?;
            let g = count_incidences(&scene.points, &traced, tol);
            Ok(SweepRow {
                size,
                a,
                b,
                m: scene.m(),
                n: scene.n(),
                incidences: g.total(),
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_slope(samples: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::BadParameter("need two positive samples to fit a slope".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::BadParameter("all sizes are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Which bound a scene is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Kst,
    KstDual,
    PachSharir,
    PfaffianCurves,
    PfaffianFamily { d: u32, eps: f64 },
    Hyperplanes { d: u32, eps: f64 },
}

impl BoundKind {
    pub fn eval(self, m: usize, n: usize, s: u32, t: u32, c: f64) -> f64 {
        match self {
            BoundKind::Kst => bound_kst(m, n, s, c),
            BoundKind::KstDual => bound_kst_dual(m, n, t, c),
            BoundKind::PachSharir => bound_pach_sharir(m, n, s, c),
            BoundKind::PfaffianCurves => bound_pfaffian_curves(m, n, s, c),
            BoundKind::PfaffianFamily { d, eps } => bound_pfaffian_family(m, n, d, eps, c),
            BoundKind::Hyperplanes { d, eps } => bound_hyperplanes(m, n, d, s, eps, c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Kst => "kst",
            BoundKind::KstDual => "kst-dual",
            BoundKind::PachSharir => "pach-sharir",
            BoundKind::PfaffianCurves => "pfaffian-curves",
            BoundKind::PfaffianFamily { .. } => "pfaffian-family",
            BoundKind::Hyperplanes { .. } => "hyperplanes",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The graph contains `K_{s,t}`, so the bound does not apply.
    NotApplicable,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub m: usize,
    pub n: usize,
    pub s: u32,
    pub t: u32,
    pub incidences: usize,
    pub kst_free: bool,
    pub bound: f64,
    pub c: f64,
    pub regime: Regime,
    pub verdict: Verdict,
}

impl BoundCheck {
    pub const CSV_HEADER: &'static str = "m,n,s,t,I,bound,C_fit,regime";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{},{}",
            self.m,
            self.n,
            self.s,
            self.t,
            self.incidences,
            self.bound,
            self.c,
            self.regime.name()
        )
    }
}

/// Check a counted graph against `kind` with constant `c`.
pub fn check_graph(graph: &IncidenceGraph, kind: BoundKind, s: u32, t: u32, c: f64) -> Result<BoundCheck> {
    let free = kst_free(graph, s, t)?;
    let bound = kind.eval(graph.m, graph.n, s, t, c);
    let i = graph.total();
    let verdict = if !free {
        Verdict::NotApplicable
    } else if i as f64 <= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(BoundCheck {
        m: graph.m,
        n: graph.n,
        s,
        t,
        incidences: i,
        kst_free: free,
        bound,
        c,
        regime: optimal_r(graph.m, graph.n.max(2), s).regime,
        verdict,
    })
}

pub fn verify_bound(scene: &Scene, kind: BoundKind, s: u32, t: u32, c: f64, tol: f64) -> Result<BoundCheck> {
    let traced = scene.trace_default()?;
    let g = count_incidences(&scene.points, &traced, tol);
    check_graph(&g, kind, s, t, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::DEFAULT_TOL;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.5))).collect();
        assert!((fit_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert!(fit_slope(&pts[..1]).is_err());
    }

    #[test]
    fn small_sweep_counts() {
        let rows = sweep_grid(&[8, 64], DEFAULT_TOL).unwrap();
        assert_eq!(rows[0].incidences, rows[0].a * rows[0].a * rows[0].b * rows[0].b);
        assert_eq!(rows[1].incidences, 256);
    }

    #[test]
    fn grid_passes_frozen_bound() {
        let chk = verify_bound(&grid_lines(3, 3), BoundKind::PfaffianCurves, 2, 2, C_FIT, DEFAULT_TOL).unwrap();
        assert!(chk.kst_free);
        assert_eq!(chk.verdict, Verdict::Pass);
        assert_eq!(chk.csv_row().split(',').count(), BoundCheck::CSV_HEADER.split(',').count());
    }
}
