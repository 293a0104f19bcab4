// Build a certified 1/r-cutting of a random scene and write it as SVG.
use pfaffinc::cutting::{build_cutting, write_svg, CuttingParams};
use pfaffinc::generators::random_scene;

fn main() {
    let scene = random_scene(&[], 0, 30, 0.0, 11).unwrap();
    let traced = scene.trace_default().unwrap();
    let cut = build_cutting(&traced, CuttingParams::new(3, 11)).unwrap();
    println!(
        "n {}  r {}  sampled {}  rays {}  cells {}  max crossings {} (allowed {:.1})  retries {}",
        cut.n,
        cut.r,
        cut.sample.len(),
        cut.rays.len(),
        cut.cells.len(),
        cut.max_crossings(),
        cut.n as f64 / cut.r as f64,
        cut.retries_used
    );
    let area: f64 = cut.cells.iter().map(|c| c.area).sum();
    println!("cell area sum {area:.6} viewport {:.6}", scene.viewport.area());
    let path = std::env::temp_dir().join("pfaffinc_cutting.svg");
    write_svg(&cut, &path).unwrap();
    println!("wrote {}", path.display());
}
