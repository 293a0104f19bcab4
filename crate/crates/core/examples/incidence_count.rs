// Count incidences by brute force and through a cutting, and check the
// graph for forbidden bipartite subgraphs.
use pfaffinc::cutting::{build_cutting, CuttingParams};
use pfaffinc::generators::{random_scene, unit_circles, witness_scene};
use pfaffinc::incidence::{count_incidences, count_via_cutting, kst_free, DEFAULT_TOL};

fn main() {
    let w = witness_scene();
    let g = count_incidences(&w.points, &w.trace_default().unwrap(), DEFAULT_TOL);
    println!("witness: {} points, {} curves, {} incidences", w.m(), w.n(), g.total());

    let scene = random_scene(&[], 200, 40, 0.5, 5).unwrap();
    let traced = scene.trace_default().unwrap();
    let brute = count_incidences(&scene.points, &traced, DEFAULT_TOL);
    let cut = build_cutting(&traced, CuttingParams::new(3, 5)).unwrap();
    let split = count_via_cutting(&scene.points, &traced, &cut, DEFAULT_TOL).unwrap();
    println!(
        "random: brute {}  cells {}  interior {}  boundary/unsampled {}  boundary/sampled {}",
        brute.total(),
        split.per_cell.iter().filter(|&&c| c > 0).count(),
        split.per_cell_total(),
        split.on_boundary_vs_nonsample,
        split.on_boundary_vs_sample
    );
    assert_eq!(brute.total(), split.total);

    let circles = unit_circles(80, 25, 0.6, 2);
    let g = count_incidences(&circles.points, &circles.trace_default().unwrap(), DEFAULT_TOL);
    println!("unit circles: {} incidences, K_2,3-free {}", g.total(), kst_free(&g, 2, 3).unwrap());
}
