// Pairwise intersections of catalog curves against the Pfaffian ceiling,
// plus vertical tangent points.
use pfaffinc::curve::{trace_curve, PfaffianCurve};
use pfaffinc::intersect::{intersect_curves, pfaffian_bezout_bound, vertical_tangent_points, DEFAULT_TOL};
use pfaffinc::Rect;

fn main() {
    let view = Rect::square(3.0);
    let curves = [
        ("line", PfaffianCurve::line(0.5, 0.2)),
        ("circle", PfaffianCurve::circle(0.0, 0.0, 1.0)),
        ("exp", PfaffianCurve::exp(1.0, 1.0, -1.5)),
        ("tan", PfaffianCurve::tan(0, 0.0, 0.0)),
    ];
    let traces: Vec<_> = curves.iter().map(|(_, c)| trace_curve(c, view, 1e-3).unwrap()).collect();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let pts = intersect_curves(&curves[i].1, &traces[i], &curves[j].1, &traces[j], DEFAULT_TOL).unwrap();
            let ceiling = pfaffian_bezout_bound(curves[i].1.pf_degree(), curves[j].1.pf_degree());
            println!("{:>6} x {:<6} {} points (ceiling {ceiling})", curves[i].0, curves[j].0, pts.len());
            for p in &pts {
                println!("    ({:+.9}, {:+.9})", p.x, p.y);
            }
            assert!(pts.len() as u64 <= ceiling);
        }
    }
    let tangents = vertical_tangent_points(&curves[1].1, &traces[1]);
    println!("circle vertical tangents: {tangents:?}");
    assert_eq!(tangents.len(), 2);
}
