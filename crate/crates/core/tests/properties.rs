use std::collections::BTreeSet;

use proptest::prelude::*;

use pfaffinc::curve::{trace_curve, PfaffianCurve, TracedCurve};
use pfaffinc::cutting::{build_cutting, CuttingParams, Location};
use pfaffinc::duality::{family_scene, verify_duality_chain, FamilyCurve, PfaffianFamily, DUAL_TOL};
use pfaffinc::generators::{exp_transform, grid_lines, random_scene};
use pfaffinc::incidence::{
    bound_kst, bound_pfaffian_curves, count_incidences, count_via_cutting, kst_free, optimal_r, IncidenceGraph,
    Regime, DEFAULT_TOL,
};
use pfaffinc::intersect::{intersect_curves, pfaffian_bezout_bound, DEFAULT_TOL as ISECT_TOL};
use pfaffinc::scene::Scene;
use pfaffinc::{Point, Rect};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn simple_curve() -> impl Strategy<Value = PfaffianCurve> {
    prop_oneof![
        (-2.0..2.0f64, -1.0..1.0f64).prop_map(|(a, b)| PfaffianCurve::line(a, b)),
        (-1.0..1.0f64, -1.0..1.0f64, 0.3..1.5f64).prop_map(|(x, y, r)| PfaffianCurve::circle(x, y, r)),
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| PfaffianCurve::parabola(a, b, c)),
        (0.2..1.0f64, -1.5..1.5f64, -1.0..1.0f64).prop_map(|(a, b, c)| PfaffianCurve::exp(a, b, c)),
        (-0.5..0.5f64, -1.0..1.0f64).prop_map(|(h, v)| PfaffianCurve::tan(0, h, v)),
    ]
}

/// Brute-force `K_{s,t}` search over every `s`-subset of points.
fn has_kst(g: &IncidenceGraph, s: usize, t: usize) -> bool {
    let nbrs: Vec<BTreeSet<usize>> = g.point_neighbors().into_iter().map(|v| v.into_iter().collect()).collect();
    fn rec(nbrs: &[BTreeSet<usize>], start: usize, left: usize, common: Option<BTreeSet<usize>>, t: usize) -> bool {
        if left == 0 {
            return common.is_some_and(|c| c.len() >= t);
        }
        (start..nbrs.len()).any(|i| {
            let next = match &common {
                None => nbrs[i].clone(),
                Some(c) => c.intersection(&nbrs[i]).copied().collect(),
            };
            next.len() >= t && rec(nbrs, i + 1, left - 1, Some(next), t)
        })
    }
    rec(&nbrs, 0, s, None, t)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn intersections_symmetric_and_bounded(a in simple_curve(), b in simple_curve()) {
        let view = Rect::square(3.0);
        let (Ok(ta), Ok(tb)) = (trace_curve(&a, view, 1e-3), trace_curve(&b, view, 1e-3)) else {
            return Ok(());
        };
        let ab = intersect_curves(&a, &ta, &b, &tb, ISECT_TOL).unwrap();
        let ba = intersect_curves(&b, &tb, &a, &ta, ISECT_TOL).unwrap();
        prop_assert_eq!(ab.len(), ba.len());
        prop_assert!(ab.len() as u64 <= pfaffian_bezout_bound(a.pf_degree(), b.pf_degree()));
        let (ca, cb) = (TracedCurve::from_trace(0, a.clone(), ta), TracedCurve::from_trace(1, b.clone(), tb));
        for p in &ab {
            prop_assert!(ca.is_incident(*p, 1e-6) && cb.is_incident(*p, 1e-6));
        }
    }

    #[test]
    fn kst_free_matches_subset_search(
        m in 1usize..7,
        n in 1usize..7,
        bits in prop::collection::vec(any::<bool>(), 36),
        s in 1u32..4,
        t in 1u32..4,
    ) {
        let edges = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| bits[i * 6 + j])
            .collect();
        let g = IncidenceGraph::new(m, n, edges);
        prop_assert_eq!(kst_free(&g, s, t).unwrap(), !has_kst(&g, s as usize, t as usize));
    }

    #[test]
    fn bounds_monotone(m in 2usize..5000, n in 2usize..5000, dm in 0usize..1000, dn in 0usize..1000) {
        prop_assert!(bound_kst(m + dm, n, 2, 1.0) >= bound_kst(m, n, 2, 1.0));
        prop_assert!(bound_kst(m, n + dn, 2, 1.0) >= bound_kst(m, n, 2, 1.0));
        prop_assert!(bound_pfaffian_curves(m + dm, n, 2, 1.0) >= bound_pfaffian_curves(m, n, 2, 1.0));
        prop_assert!(bound_pfaffian_curves(m, n + dn, 2, 1.0) >= bound_pfaffian_curves(m, n, 2, 1.0) - 1e-9);
    }

    #[test]
    fn optimal_r_regime_matches_raw(m in 1usize..1_000_000, n in 2usize..2000, s in 2u32..4) {
        let o = optimal_r(m, n, s);
        prop_assert!(o.r >= 1 && o.r <= (n - 1).max(1));
        match o.regime {
            Regime::FewPoints => prop_assert!(o.raw < 1.0),
            Regime::ManyPoints => prop_assert!(o.raw >= n as f64),
            Regime::Balanced => prop_assert!(o.raw >= 1.0 && o.raw < n as f64),
        }
    }

    #[test]
    fn ceiling_formula(k1 in 1u32..20, k2 in 1u32..20) {
        let (a, b) = (k1 as u64, k2 as u64);
        prop_assert_eq!(pfaffian_bezout_bound(k1, k2), (a + b) * (2 * a + b) + a + 1);
    }

    #[test]
    fn family_curve_is_projective(c in prop::collection::vec(-3.0..3.0f64, 3..5), k in prop::sample::select(vec![-7.5, -1.0, 0.01, 2.0, 40.0])) {
        prop_assume!(c.iter().any(|v| v.abs() > 1e-3));
        let a = FamilyCurve::new(c.clone()).unwrap();
        let b = FamilyCurve::new(c.iter().map(|v| v * k).collect()).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn split_total_equals_brute_force(seed in 0u64..10_000, n in 5usize..30, m in 0usize..120, r in 2usize..5) {
        let scene = random_scene(&[], m, n, 0.5, seed).unwrap();
        let traced = scene.trace_default().unwrap();
        let brute = count_incidences(&scene.points, &traced, DEFAULT_TOL);
        let cut = build_cutting(&traced, CuttingParams::new(r, seed)).unwrap();
        let split = count_via_cutting(&scene.points, &traced, &cut, DEFAULT_TOL).unwrap();
        prop_assert_eq!(split.total, brute.total());
        prop_assert_eq!(
            split.per_cell_total() + split.on_boundary_vs_nonsample + split.on_boundary_vs_sample,
            split.total
        );
    }

    #[test]
    fn cutting_partitions_viewport(seed in 0u64..10_000, n in 3usize..25, r in 2usize..4) {
        prop_assume!(r < n);
        let scene = random_scene(&[], 0, n, 0.0, seed).unwrap();
        let traced = scene.trace_default().unwrap();
        let cut = build_cutting(&traced, CuttingParams::new(r, seed)).unwrap();
        let area: f64 = cut.cells.iter().map(|c| c.area).sum();
        prop_assert!((area - scene.viewport.area()).abs() <= 1e-6 * scene.viewport.area());
        prop_assert!(cut.max_crossings() as f64 <= n as f64 / r as f64);
    }

    #[test]
    fn point_location_agrees_with_scan(seed in 0u64..10_000, n in 3usize..20, probes in prop::collection::vec((-2.95..2.95f64, -2.95..2.95f64), 40)) {
        let scene = random_scene(&[], 0, n, 0.0, seed).unwrap();
        let traced = scene.trace_default().unwrap();
        let cut = build_cutting(&traced, CuttingParams::new(2, seed)).unwrap();
        for (x, y) in probes {
            let p = Point::new(x, y);
            let near_curve = cut.sample.iter().any(|&i| traced[i].distance(p, 1e-3).is_some_and(|d| d < 1e-3));
            let near_wall = cut.boundaries.iter().any(|b| (b - x).abs() < 1e-3);
            if near_curve || near_wall {
                continue;
            }
            let Some(Location::Interior(c)) = cut.locate_point(p) else {
                return Err(TestCaseError::fail(format!("{p:?} not interior")));
            };
            prop_assert_eq!(cut.locate_linear(p), vec![c]);
        }
    }

    #[test]
    fn exp_image_keeps_count(a in 1usize..4, b in 1usize..4) {
        let g = grid_lines(a, b);
        let e = exp_transform(&g).unwrap();
        let c1 = count_incidences(&g.points, &g.trace_default().unwrap(), DEFAULT_TOL).total();
        let c2 = count_incidences(&e.points, &e.trace_default().unwrap(), DEFAULT_TOL).total();
        prop_assert_eq!(c1, a * a * b * b);
        prop_assert_eq!(c1, c2);
    }

    #[test]
    fn scene_json_round_trip(seed in 0u64..10_000, m in 0usize..30, n in 0usize..12) {
        let s = random_scene(&[], m, n, 0.5, seed).unwrap();
        let back = Scene::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(&back.points, &s.points);
        prop_assert_eq!(&back.curves, &s.curves);
        prop_assert_eq!(back.viewport, s.viewport);
    }

    #[test]
    fn duality_counts_agree(seed in 0u64..10_000, which in 0usize..4) {
        let family = [
            PfaffianFamily::lines(),
            PfaffianFamily::exp_x(),
            PfaffianFamily::lines_exp(),
            PfaffianFamily::lines_log(),
        ][which].clone();
        let (points, curves) = family_scene(&family, 20, 12, 0.6, seed).unwrap();
        let r = verify_duality_chain(&points, &family, &curves, seed, DUAL_TOL).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }
}
