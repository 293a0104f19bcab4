//! Closed-form incidence bounds.

use serde::Serialize;

/// `C·(m·n^{1−1/s} + n)`
pub fn bound_kst(m: usize, n: usize, s: u32, c: f64) -> f64 {
    let (m, n, s) = (m as f64, n as f64, s as f64);
    c * (m * n.powf(1.0 - 1.0 / s) + n)
}

/// `C·(m^{1−1/t}·n + m)`
pub fn bound_kst_dual(m: usize, n: usize, t: u32, c: f64) -> f64 {
    let (m, n, t) = (m as f64, n as f64, t as f64);
    c * (m.powf(1.0 - 1.0 / t) * n + m)
}

/// `C·(m^{s/(2s−1)}·n^{(2s−2)/(2s−1)} + n + m)`
pub fn bound_pach_sharir(m: usize, n: usize, s: u32, c: f64) -> f64 {
    let (m, n, s) = (m as f64, n as f64, s as f64);
    let d = 2.0 * s - 1.0;
    c * (m.powf(s / d) * n.powf((2.0 * s - 2.0) / d) + n + m)
}

/// `C·(m^{s/(2s−1)}·n^{(2s−2)/(2s−1)}·ln^{(2s−2)/(2s−1)} n + n ln² n + m)`
pub fn bound_pfaffian_curves(m: usize, n: usize, s: u32, c: f64) -> f64 {
    let (m, n, s) = (m as f64, n as f64, s as f64);
    let d = 2.0 * s - 1.0;
    let e = (2.0 * s - 2.0) / d;
    let l = n.max(1.0).ln();
    c * (m.powf(s / d) * n.powf(e) * l.powf(e) + n * l * l + m)
}

/// `C·(n^{(2d−4)/(2d−3)+ε}·m^{(d−1)/(2d−3)} + m + n)`
pub fn bound_pfaffian_family(m: usize, n: usize, d: u32, eps: f64, c: f64) -> f64 {
    let (m, n, d) = (m as f64, n as f64, d as f64);
    let q = 2.0 * d - 3.0;
    c * (n.powf((2.0 * d - 4.0) / q + eps) * m.powf((d - 1.0) / q) + m + n)
}

/// `C·(m^{(sd−s)/(sd−1)+ε}·n^{(sd−d)/(sd−1)} + m + n)`
pub fn bound_hyperplanes(m: usize, n: usize, d: u32, s: u32, eps: f64, c: f64) -> f64 {
    let (m, n, d, s) = (m as f64, n as f64, d as f64, s as f64);
    let q = s * d - 1.0;
    c * (m.powf((s * d - s) / q + eps) * n.powf((s * d - d) / q) + m + n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Balanced,
    /// `r* < 1`: few points, the bound reduces to `n log² n`.
    FewPoints,
    /// `r* ≥ n`: many points, the bound reduces to `m`.
    ManyPoints,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Balanced => "balanced",
            Regime::FewPoints => "few-points",
            Regime::ManyPoints => "many-points",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalR {
    pub raw: f64,
    pub r: usize,
    pub regime: Regime,
}

/// The cutting parameter that balances the two terms of the divide and
/// conquer bound, rounded and clamped to `[1, n−1]`.
pub fn optimal_r(m: usize, n: usize, s: u32) -> OptimalR {
    let (mf, nf, sf) = (m as f64, n as f64, s as f64);
    let d = 2.0 * sf - 1.0;
    let raw = mf.powf(sf / d) / (nf.powf(1.0 / d) * nf.ln().powf(2.0 * sf / d));
    let hi = n.saturating_sub(1).max(1);
    let (r, regime) = if raw < 1.0 {
        (1, Regime::FewPoints)
    } else if raw >= nf {
        (hi, Regime::ManyPoints)
    } else {
        ((raw.round() as usize).clamp(1, hi), Regime::Balanced)
    };
    OptimalR { raw, r, regime }
}

/// Smallest `C` with `I ≤ bound(m, n, C)` for every sample. All bounds here
/// are linear in `C`.
pub fn fit_constant(samples: &[(usize, usize, usize)], bound_at_one: impl Fn(usize, usize) -> f64) -> f64 {
    samples
        .iter()
        .map(|&(m, n, i)| {
            let b = bound_at_one(m, n);
            if b > 0.0 {
                i as f64 / b
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kst_values() {
        assert_relative_eq!(bound_kst(100, 100, 2, 1.0), 1100.0);
        assert_relative_eq!(bound_kst(0, 7, 2, 3.0), 21.0);
        assert_relative_eq!(bound_kst(100, 64, 3, 1.0), 1664.0, max_relative = 1e-12);
        assert_relative_eq!(bound_kst_dual(100, 100, 2, 1.0), 1100.0);
    }

    #[test]
    fn pach_sharir_values() {
        assert_relative_eq!(bound_pach_sharir(1, 1, 2, 2.0), 6.0);
        assert_relative_eq!(bound_pach_sharir(1_000_000, 1000, 2, 1.0), 2.001e6, max_relative = 1e-12);
    }

    #[test]
    fn pfaffian_values() {
        let l = 100f64.ln();
        let want = 1e2 * 1e2f64.powf(2.0 / 3.0) * l.powf(2.0 / 3.0) + 100.0 * l * l + 1000.0;
        assert_relative_eq!(bound_pfaffian_curves(1000, 100, 2, 1.0), want, max_relative = 1e-12);
        assert_relative_eq!(bound_pfaffian_curves(0, 50, 2, 1.0), 50.0 * 50f64.ln().powi(2), max_relative = 1e-12);
        assert_relative_eq!(bound_pfaffian_family(1, 1, 3, 0.0, 1.5), 4.5);
        assert_relative_eq!(bound_pfaffian_family(8, 27, 3, 0.0, 1.0), 9.0 * 4.0 + 35.0, max_relative = 1e-12);
        assert_relative_eq!(bound_hyperplanes(0, 9, 3, 2, 0.1, 2.0), 18.0);
        assert_relative_eq!(bound_hyperplanes(8, 8, 2, 2, 0.0, 1.0), 16.0 + 16.0, max_relative = 1e-12);
    }

    #[test]
    fn optimal_r_regimes() {
        let o = optimal_r(10_000, 100, 2);
        let want = 1e4f64.powf(2.0 / 3.0) / (100f64.powf(1.0 / 3.0) * 100f64.ln().powf(4.0 / 3.0));
        assert_relative_eq!(o.raw, want, max_relative = 1e-12);
        assert_eq!(o.regime, Regime::Balanced);
        assert_eq!(o.r, want.round() as usize);
        let few = optimal_r(3, 1000, 2);
        assert_eq!((few.r, few.regime), (1, Regime::FewPoints));
        let many = optimal_r(100_000_000, 10, 2);
        assert_eq!((many.r, many.regime), (9, Regime::ManyPoints));
    }

    #[test]
    fn fit_is_tight() {
        let c = fit_constant(&[(10, 10, 50), (100, 10, 30)], |m, n| bound_pach_sharir(m, n, 2, 1.0));
        assert!(c * bound_pach_sharir(10, 10, 2, 1.0) >= 50.0 - 1e-9);
    }
}
