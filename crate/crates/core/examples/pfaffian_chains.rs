// Build Pfaffian chains, verify their partial derivatives numerically and
// extend a chain by an antiderivative.
use pfaffinc::chains::{
    extend_with_integral, order_and_degree, verify_chain, ChainLink, PfaffianChain, PfaffianFunction,
};
use pfaffinc::poly::MultiPoly;
use pfaffinc::Rect;

fn main() {
    let worked = PfaffianFunction::worked_example(Rect::square(1.5));
    println!("x y^5 - exp(x^2 + 3x): order/degree {:?}", order_and_degree(&worked));
    println!("  value at (0.5, 1.2) = {:.6}", worked.eval(0.5, 1.2));

    let d = std::f64::consts::PI - 0.01;
    let cos = PfaffianFunction::y_minus_cos(-d, d);
    let rep = verify_chain(&cos.chain, 1000, 1e-6, 7).unwrap();
    println!("half-angle chain: max err {:.2e} passed {}", rep.max_err(), rep.passed);
    assert!(rep.passed);

    let dom = Rect::new(-1.0, -1.0, 2.0, 1.0);
    let chain = PfaffianChain::new(vec![ChainLink::exp_of_poly(MultiPoly::var(0, 2), 1)], dom);
    let h = PfaffianFunction::y_minus(chain, MultiPoly::var(2, 3));
    let ext = extend_with_integral(&h, 0.0).unwrap();
    for x in [-0.5, 0.0, 0.7, 1.5] {
        let integral = ext.chain.values(x, 0.0)[3];
        println!("  int_0^{x:<4} e^t dt = {integral:.10} (exact {:.10})", f64::exp(x) - 1.0);
    }
}
