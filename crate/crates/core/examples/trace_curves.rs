// Trace a few catalog curves, apply a linear map and check the separating
// conditions against each curve's vector field.
use pfaffinc::curve::{
    apply_linear_transform, check_separating_conditions, compose_with_polynomial, trace_curve, PfaffianCurve,
};
use pfaffinc::poly::UnivariatePolynomial;
use pfaffinc::Rect;

fn main() {
    let view = Rect::square(3.0);
    let curves = vec![
        PfaffianCurve::circle(0.0, 0.0, 1.0),
        PfaffianCurve::exp(1.0, 1.0, -1.0),
        PfaffianCurve::log(1.0, 0.0),
        PfaffianCurve::tan(0, 0.0, 0.0),
        PfaffianCurve::reciprocal_root(2),
        apply_linear_transform(&PfaffianCurve::parabola(1.0, 0.0, 0.0), 0.6, -0.8, 0.8, 0.6).unwrap(),
        compose_with_polynomial(&PfaffianCurve::exp(1.0, 1.0, 0.0), &UnivariatePolynomial::new(vec![0.0, 0.0, -1.0]))
            .unwrap(),
    ];
    for c in &curves {
        let tr = trace_curve(c, view, 1e-3).unwrap();
        let rep = check_separating_conditions(c, &tr);
        println!(
            "{:<16} degree {}  components {}  samples {:>5}  tangent err {:.1e}  ok {}",
            c.kind().name(),
            c.pf_degree(),
            tr.components.len(),
            tr.len(),
            rep.tangent_max_err,
            rep.passes_local()
        );
        assert!(rep.passes_local());
    }
}
