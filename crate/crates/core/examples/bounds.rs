// Evaluate the incidence bounds and the balancing cutting parameter.
use pfaffinc::incidence::{
    bound_hyperplanes, bound_kst, bound_pach_sharir, bound_pfaffian_curves, bound_pfaffian_family, optimal_r,
};
use pfaffinc::intersect::pfaffian_bezout_bound;

fn main() {
    println!("kst(100, 100, s=2)              = {}", bound_kst(100, 100, 2, 1.0));
    println!("pach-sharir(1e6, 1e3, s=2)      = {}", bound_pach_sharir(1_000_000, 1000, 2, 1.0));
    println!("pfaffian curves(1e3, 1e2, s=2)  = {:.3}", bound_pfaffian_curves(1000, 100, 2, 1.0));
    println!("pfaffian family(1e3, 1e2, d=3)  = {:.3}", bound_pfaffian_family(1000, 100, 3, 0.0, 1.0));
    println!("hyperplanes(1e3, 1e2, d=3, s=2) = {:.3}", bound_hyperplanes(1000, 100, 3, 2, 0.0, 1.0));
    for (k1, k2) in [(1, 1), (1, 2), (2, 3)] {
        println!("intersection ceiling ({k1}, {k2}) = {}", pfaffian_bezout_bound(k1, k2));
    }
    for (m, n) in [(10_000, 100), (5, 1000), (100_000_000, 10)] {
        let o = optimal_r(m, n, 2);
        println!("optimal r for m={m} n={n}: raw {:.3} -> {} ({})", o.raw, o.r, o.regime.name());
    }
}
