// Extremal grids, their exponential images and a scene round trip through JSON.
use pfaffinc::generators::{exp_transform, grid_lines, random_scene};
use pfaffinc::incidence::{count_incidences, DEFAULT_TOL};
use pfaffinc::scene::Scene;

fn count(s: &Scene) -> usize {
    count_incidences(&s.points, &s.trace_default().unwrap(), DEFAULT_TOL).total()
}

fn main() {
    for (a, b) in [(2, 2), (3, 3), (4, 4)] {
        let g = grid_lines(a, b);
        let e = exp_transform(&g).unwrap();
        println!("grid({a},{b}): m {} n {} I {}  exp image I {}", g.m(), g.n(), count(&g), count(&e));
    }
    let s = random_scene(&[], 20, 8, 0.5, 42).unwrap();
    let back = Scene::from_json(&s.to_json()).unwrap();
    println!("random scene round trip: {} curves, {} incidences", back.n(), count(&back));
}
