// Grow the grid construction and fit the exponent of I against N.
use pfaffinc::harness::{fit_slope, sweep_grid};
use pfaffinc::incidence::DEFAULT_TOL;

fn main() {
    let rows = sweep_grid(&[8, 16, 32, 64], DEFAULT_TOL).unwrap();
    for r in &rows {
        println!("N {:>4}  a {} b {}  m {:>4} n {:>4}  I {:>5}", r.size, r.a, r.b, r.m, r.n, r.incidences);
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.size as f64, r.incidences as f64)).collect();
    println!("slope {:.4}", fit_slope(&pts).unwrap());
}
