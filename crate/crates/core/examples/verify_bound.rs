// Check scenes against the Pfaffian-curve bound with the frozen constant.
use pfaffinc::generators::{grid_lines, unit_circles};
use pfaffinc::harness::{verify_bound, BoundCheck, BoundKind, C_FIT};
use pfaffinc::incidence::DEFAULT_TOL;

fn main() {
    println!("{}", BoundCheck::CSV_HEADER);
    for scene in [grid_lines(3, 3), grid_lines(4, 2), unit_circles(60, 20, 0.6, 1)] {
        let chk = verify_bound(&scene, BoundKind::PfaffianCurves, 2, 2, C_FIT, DEFAULT_TOL).unwrap();
        println!("{}  {}", chk.csv_row(), chk.verdict.name());
    }
}
