//! Point-curve incidence counting, K_{s,t} detection and bound formulas.

mod bounds;

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::TracedCurve;
use crate::cutting::{fingerprint, Cutting, Location};
use crate::error::{Error, Result};
use crate::geom::Point;

pub use bounds::{
    bound_hyperplanes, bound_kst, bound_kst_dual, bound_pach_sharir, bound_pfaffian_curves,
    bound_pfaffian_family, fit_constant, optimal_r, OptimalR, Regime,
};

pub const DEFAULT_TOL: f64 = 1e-7;
const KST_GUARD: f64 = 1e8;
const KST_MAX_SIDE: u32 = 4;

/// Bipartite incidence graph. Edges are `(point, curve)` sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceGraph {
    pub m: usize,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn new(m: usize, n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        IncidenceGraph { m, n, edges }
    }

    pub fn total(&self) -> usize {
        self.edges.len()
    }

    pub fn transpose(&self) -> IncidenceGraph {
        IncidenceGraph::new(self.n, self.m, self.edges.iter().map(|&(p, c)| (c, p)).collect())
    }

    /// Curves through each point.
    pub fn point_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for &(p, c) in &self.edges {
            out[p].push(c);
        }
        out
    }

    /// Points on each curve.
    pub fn curve_neighbors(&self) -> Vec<Vec<usize>> {
        self.transpose().point_neighbors()
    }
}

/// Test every point against every curve.
pub fn count_incidences(points: &[Point], curves: &[Arc<TracedCurve>], tol: f64) -> IncidenceGraph {
    let edges: Vec<(usize, usize)> = points
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &p)| {
            curves
                .iter()
                .enumerate()
                .filter(move |(_, c)| c.is_incident(p, tol))
                .map(move |(j, _)| (i, j))
        })
        .collect();
    IncidenceGraph::new(points.len(), curves.len(), edges)
}

fn binomial(n: usize, k: u32) -> f64 {
    (0..k as usize).fold(1.0, |acc, i| acc * (n.saturating_sub(i)) as f64 / (i + 1) as f64)
}

/// Whether the graph has no `s` points sharing `t` common curves. Subsets
/// are enumerated on whichever side keeps the subset size at most 4.
pub fn kst_free(graph: &IncidenceGraph, s: u32, t: u32) -> Result<bool> {
    if s == 0 || t == 0 {
        return Ok(graph.m < s as usize || graph.n < t as usize);
    }
    let use_points = match (s <= KST_MAX_SIDE, t <= KST_MAX_SIDE) {
        (true, true) => binomial(graph.m, s) <= binomial(graph.n, t),
        (true, false) => true,
        (false, true) => false,
        (false, false) => {
            return Err(Error::BadParameter(format!("K_{{{s},{t}}} needs s or t at most {KST_MAX_SIDE}")))
        }
    };
    let (g, k, need) = if use_points { (graph.clone(), s, t) } else { (graph.transpose(), t, s) };
    let combos = binomial(g.m, k);
    if combos > KST_GUARD {
        return Err(Error::ComplexityGuard(combos));
    }
    let adj: Vec<BTreeSet<usize>> = g.point_neighbors().into_iter().map(|v| v.into_iter().collect()).collect();
    let by_curve = g.curve_neighbors();
    // Backtrack over increasing point ids; later points must share a curve
    // with the current common neighborhood, which keeps the search sparse.
    fn extend(
        chosen: &mut Vec<usize>,
        common: &BTreeSet<usize>,
        k: u32,
        need: usize,
        adj: &[BTreeSet<usize>],
        by_curve: &[Vec<usize>],
    ) -> bool {
        if common.len() < need {
            return false;
        }
        if chosen.len() == k as usize {
            return true;
        }
        let last = *chosen.last().unwrap();
        let candidates: BTreeSet<usize> = common
            .iter()
            .flat_map(|&c| by_curve[c].iter().copied())
            .filter(|&p| p > last)
            .collect();
        for p in candidates {
            let next: BTreeSet<usize> = common.intersection(&adj[p]).copied().collect();
            chosen.push(p);
            if extend(chosen, &next, k, need, adj, by_curve) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let need = need as usize;
    let found = (0..g.m).into_par_iter().any(|p| {
        let mut chosen = vec![p];
        extend(&mut chosen, &adj[p], k, need, &adj, &by_curve)
    });
    Ok(!found)
}

/// Incidences split by a cutting: points interior to cells against the
/// curves crossing that cell, and points on cell boundaries against the
/// unsampled and sampled curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncidenceBreakdown {
    pub per_cell: Vec<usize>,
    pub on_boundary_vs_nonsample: usize,
    pub on_boundary_vs_sample: usize,
    pub total: usize,
    /// Number of interior points on the boundary.
    pub boundary_points: usize,
    /// Curves added to a cell's crossing list because they pass through one
    /// of its interior points but were missed by the trace walk.
    pub witnessed: usize,
    pub graph: IncidenceGraph,
}

impl IncidenceBreakdown {
    pub fn per_cell_total(&self) -> usize {
        self.per_cell.iter().sum()
    }
}

pub fn count_via_cutting(
    points: &[Point],
    curves: &[Arc<TracedCurve>],
    cutting: &Cutting,
    tol: f64,
) -> Result<IncidenceBreakdown> {
    if cutting.n != curves.len() || cutting.fingerprint != fingerprint(curves) {
        return Err(Error::InconsistentScene);
    }
    let sampled: Vec<bool> = (0..curves.len()).map(|c| cutting.is_sampled(c)).collect();
    enum Hit {
        Cell { cell: usize, curves: Vec<usize>, witnessed: usize },
        Boundary { sample: Vec<usize>, other: Vec<usize> },
    }
    let hits: Vec<Hit> = points
        .par_iter()
        .map(|&p| match cutting.locate_point(p) {
            Some(Location::Interior(cell)) => {
                let gamma = &cutting.cells[cell].crossings;
                let mut found: Vec<usize> = gamma.iter().copied().filter(|&c| curves[c].is_incident(p, tol)).collect();
                let mut witnessed = 0;
                for (c, tc) in curves.iter().enumerate() {
                    if gamma.binary_search(&c).is_err() && tc.is_incident(p, tol) {
                        found.push(c);
                        witnessed += 1;
                    }
                }
                found.sort_unstable();
                Hit::Cell { cell, curves: found, witnessed }
            }
            _ => {
                let (sample, other): (Vec<usize>, Vec<usize>) = (0..curves.len())
                    .filter(|&c| curves[c].is_incident(p, tol))
                    .partition(|&c| sampled[c]);
                Hit::Boundary { sample, other }
            }
        })
        .collect();
    let mut per_cell = vec![0; cutting.cells.len()];
    let (mut vs_other, mut vs_sample, mut boundary_points, mut witnessed) = (0, 0, 0, 0);
    let mut edges = Vec::new();
    for (i, h) in hits.into_iter().enumerate() {
        match h {
            Hit::Cell { cell, curves, witnessed: w } => {
                per_cell[cell] += curves.len();
                witnessed += w;
                edges.extend(curves.into_iter().map(|c| (i, c)));
            }
            Hit::Boundary { sample, other } => {
                boundary_points += 1;
                vs_sample += sample.len();
                vs_other += other.len();
                edges.extend(sample.into_iter().chain(other).map(|c| (i, c)));
            }
        }
    }
    let total = per_cell.iter().sum::<usize>() + vs_other + vs_sample;
    Ok(IncidenceBreakdown {
        per_cell,
        on_boundary_vs_nonsample: vs_other,
        on_boundary_vs_sample: vs_sample,
        total,
        boundary_points,
        witnessed,
        graph: IncidenceGraph::new(points.len(), curves.len(), edges),
    })
}
