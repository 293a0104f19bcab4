// Map a family scene to its dual and to the projection on z1 = 1, and
// compare the three incidence counts.
use pfaffinc::duality::{family_scene, verify_duality_chain, PfaffianFamily, DUAL_TOL};

fn main() {
    for (name, family) in [
        ("1, x, y", PfaffianFamily::lines()),
        ("1, x, e^x", PfaffianFamily::exp_x()),
        ("1, x, y, e^x", PfaffianFamily::lines_exp()),
        ("1, x, y, ln(1+x^2+y^2)", PfaffianFamily::lines_log()),
    ] {
        let (points, curves) = family_scene(&family, 50, 40, 0.6, 3).unwrap();
        let r = verify_duality_chain(&points, &family, &curves, 3, DUAL_TOL).unwrap();
        println!(
            "({name}): primal {} dual {} projected {} transpose {} rotation draws {}",
            r.primal, r.dual, r.projected, r.transpose_ok, r.rotation_draws
        );
        assert!(r.passed());
    }
}
