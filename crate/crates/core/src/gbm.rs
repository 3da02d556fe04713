//! Closed-form first-passage functionals of geometric Brownian motion.
//!
//! With `tau_b` the first time demand reaches `b` from `z`,
//! `E[exp(-r tau_b)] = (z / b)^gamma` for upward hits and `(z / b)^beta` for
//! downward hits. Two-boundary functionals solve the same ODE in the
//! `(z^gamma, z^beta)` basis with 0/1 boundary data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CharRoots, MarketParams};

/// `E[exp(-r tau_target) | Z_0 = z]`.
pub fn discount_at_hit(z: f64, target: f64, roots: &CharRoots) -> f64 {
    if z == target {
        1.0
    } else if z < target {
        (z / target).powf(roots.gamma)
    } else {
        (z / target).powf(roots.beta)
    }
}

/// Which two-boundary hitting probability to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HitVariant {
    /// Scale function with exponent `2|alpha|/sigma^2`: the drift of demand
    /// itself, without the `-sigma^2/2` correction of `ln Z`.
    AbsDrift,
    /// Scale function of `ln Z`, whose drift is `alpha - sigma^2/2`.
    #[default]
    LogDrift,
}

fn check_order(z: f64, lower: f64, upper: f64) -> Result<()> {
    if !(lower > 0.0 && lower < z && z < upper && upper.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < lower < z < upper < inf, got lower={lower}, z={z}, upper={upper}"
        )));
    }
    Ok(())
}

/// Probability that demand started at `z` reaches `upper` before `lower`.
pub fn hit_upper_first_prob(z: f64, lower: f64, upper: f64, market: &MarketParams, variant: HitVariant) -> Result<f64> {
    check_order(z, lower, upper)?;
    let s2 = market.sigma * market.sigma;
    let kappa = match variant {
        HitVariant::AbsDrift => 2.0 * market.alpha.abs() / s2,
        HitVariant::LogDrift => -2.0 * market.log_drift() / s2,
    };
    // s(x) = (x/z)^kappa, or ln(x/z) when kappa vanishes.
    let scale = |x: f64| {
        let l = (x / z).ln();
        if (kappa * l).abs() < 1e-8 {
            l * (1.0 + 0.5 * kappa * l)
        } else {
            (kappa * l).exp_m1() / kappa
        }
    };
    let (s_lo, s_up) = (scale(lower), scale(upper));
    Ok(-s_lo / (s_up - s_lo))
}

/// Discounted two-boundary exit functionals from `z` in `(lower, upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSidedFunctionals {
    /// Undiscounted probability of leaving through `upper`.
    pub p_upper_first: f64,
    /// `E[exp(-r tau); exit at lower]`.
    pub disc_lower: f64,
    /// `E[exp(-r tau); exit at upper]`.
    pub disc_upper: f64,
}

/// Coefficients `(p, q)` with `p (z/m)^gamma + q (z/m)^beta` equal to 0 at
/// `zero_at` and 1 at `one_at`, where `m = min(zero_at, one_at)`.
pub fn harmonic_interpolant(zero_at: f64, one_at: f64, roots: &CharRoots) -> (f64, f64) {
    let (g, b) = (roots.gamma, roots.beta);
    if zero_at < one_at {
        // (x^g - x^b) / (t^g - t^b) with x = z/zero_at, t = one_at/zero_at.
        let t = one_at / zero_at;
        let den = t.powf(g) - t.powf(b);
        (1.0 / den, -1.0 / den)
    } else {
        // (x^b - s x^g) / (1 - s) with x = z/one_at, s = (one_at/zero_at)^(g-b).
        let s = (one_at / zero_at).powf(g - b);
        (-s / (1.0 - s), 1.0 / (1.0 - s))
    }
}

pub fn two_sided_functionals(
    z: f64,
    lower: f64,
    upper: f64,
    market: &MarketParams,
    roots: &CharRoots,
) -> Result<TwoSidedFunctionals> {
    check_order(z, lower, upper)?;
    let x = z / lower;
    let eval = |(p, q): (f64, f64)| p * x.powf(roots.gamma) + q * x.powf(roots.beta);
    let disc_upper = eval(harmonic_interpolant(lower, upper, roots));
    let disc_lower = eval(harmonic_interpolant(upper, lower, roots));
    Ok(TwoSidedFunctionals {
        p_upper_first: hit_upper_first_prob(z, lower, upper, market, HitVariant::LogDrift)?,
        disc_lower,
        disc_upper,
    })
}

/// Relative residual of `0.5 sigma^2 z^2 V'' + alpha z V' - r V + flow_slope z`
/// at `z`, with central differences of step `1e-4 z`.
///
/// Normalized by the sum of the magnitudes of the individual terms, so a
/// value below `1e-4` means the terms cancel to four digits.
pub fn generator_residual<F: Fn(f64) -> f64>(v: F, z: f64, market: &MarketParams, flow_slope: f64) -> f64 {
    let h = 1e-4 * z;
    let (vm, v0, vp) = (v(z - h), v(z), v(z + h));
    let d1 = (vp - vm) / (2.0 * h);
    let d2 = (vp - 2.0 * v0 + vm) / (h * h);
    let terms = [
        0.5 * market.sigma * market.sigma * z * z * d2,
        market.alpha * z * d1,
        -market.r * v0,
        flow_slope * z,
    ];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    let sum: f64 = terms.iter().sum();
    if scale == 0.0 {
        0.0
    } else {
        sum.abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::char_roots;

    #[test]
    fn generator_kills_harmonic_basis() {
        let m = market();
        let roots = char_roots(&m);
        for z in [0.5, 3.0, 40.0] {
            assert!(generator_residual(|x| x.powf(roots.gamma), z, &m, 0.0) < 1e-6);
            assert!(generator_residual(|x| 2.0 * x.powf(roots.beta), z, &m, 0.0) < 1e-6);
            // Perpetual flow value z/(r - alpha) solves the inhomogeneous equation.
            assert!(generator_residual(|x| x / m.cap_rate(), z, &m, 1.0) < 1e-8);
            assert!(generator_residual(|x| x / m.cap_rate(), z, &m, 0.0) > 0.1);
        }
    }

    fn market() -> MarketParams {
        MarketParams::new(0.02, 0.2, 0.1).unwrap()
    }

    #[test]
    fn discount_at_target_is_one() {
        let roots = char_roots(&market());
        assert_eq!(discount_at_hit(7.0, 7.0, &roots), 1.0);
    }

    #[test]
    fn discount_unit_roots() {
        let roots = CharRoots { gamma: 2.0, beta: -1.0 };
        assert!((discount_at_hit(5.0, 10.0, &roots) - 0.25).abs() < 1e-15);
        assert!((discount_at_hit(20.0, 10.0, &roots) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn discount_matches_log_space_form() {
        // exp(nu a - |a| sqrt(nu^2 + 2r)) with nu = alpha/sigma - sigma/2,
        // a = ln(target/z)/sigma.
        let m = market();
        let roots = char_roots(&m);
        let nu = m.alpha / m.sigma - m.sigma / 2.0;
        for (z, target) in [(3.0f64, 10.0f64), (9.9, 10.0), (15.0, 10.0), (40.0, 2.0)] {
            let a = (target / z).ln() / m.sigma;
            let expect = (nu * a - a.abs() * (nu * nu + 2.0 * m.r).sqrt()).exp();
            let got = discount_at_hit(z, target, &roots);
            assert!((got - expect).abs() < 1e-12 * expect, "{z} {target}: {got} vs {expect}");
        }
    }

    #[test]
    fn probability_boundaries() {
        let m = market();
        for v in [HitVariant::AbsDrift, HitVariant::LogDrift] {
            let near_up = hit_upper_first_prob(14.0 - 1e-9, 8.0, 14.0, &m, v).unwrap();
            let near_lo = hit_upper_first_prob(8.0 + 1e-9, 8.0, 14.0, &m, v).unwrap();
            assert!((near_up - 1.0).abs() < 1e-6);
            assert!(near_lo.abs() < 1e-6);
        }
        assert!(hit_upper_first_prob(8.0, 8.0, 14.0, &m, HitVariant::LogDrift).is_err());
        assert!(hit_upper_first_prob(15.0, 8.0, 14.0, &m, HitVariant::AbsDrift).is_err());
    }

    #[test]
    fn zero_log_drift_is_log_scale() {
        // alpha = sigma^2/2 makes ln Z driftless.
        let m = MarketParams::new(0.02, 0.2, 0.1).unwrap();
        let p = hit_upper_first_prob(10.0, 8.0, 14.0, &m, HitVariant::LogDrift).unwrap();
        let expect = (10.0f64 / 8.0).ln() / (14.0f64 / 8.0).ln();
        assert!((p - expect).abs() < 1e-12);
    }

    #[test]
    fn abs_drift_formula() {
        let m = MarketParams::new(0.05, 0.3, 0.1).unwrap();
        let at = 2.0 * 0.05 / 0.09;
        let (z, lo, up) = (10.0f64, 8.0f64, 14.0f64);
        let expect = (1.0 - (lo / z).powf(at)) / ((up / z).powf(at) - (lo / z).powf(at));
        let got = hit_upper_first_prob(z, lo, up, &m, HitVariant::AbsDrift).unwrap();
        assert!((got - expect).abs() < 1e-13);
    }

    #[test]
    fn two_sided_limits() {
        let m = market();
        let roots = char_roots(&m);
        let f = two_sided_functionals(14.0 - 1e-9, 8.0, 14.0, &m, &roots).unwrap();
        assert!((f.disc_upper - 1.0).abs() < 1e-7 && f.disc_lower.abs() < 1e-7);
        let f = two_sided_functionals(10.0, 8.0, 14.0, &m, &roots).unwrap();
        assert!(f.disc_lower + f.disc_upper < 1.0);
        assert!(f.disc_lower > 0.0 && f.disc_upper > 0.0);
        // Heavy discounting kills both.
        let fast = MarketParams::new(0.02, 0.2, 500.0).unwrap();
        let rf = char_roots(&fast);
        let f = two_sided_functionals(10.0, 8.0, 14.0, &fast, &rf).unwrap();
        assert!(f.disc_lower < 1e-6 && f.disc_upper < 1e-6);
    }

    #[test]
    fn interpolant_boundary_values() {
        let roots = char_roots(&market());
        let (p, q) = harmonic_interpolant(8.0, 14.0, &roots);
        let v = |z: f64| p * (z / 8.0).powf(roots.gamma) + q * (z / 8.0).powf(roots.beta);
        assert!(v(8.0).abs() < 1e-13);
        assert!((v(14.0) - 1.0).abs() < 1e-13);
        let f = two_sided_functionals(11.0, 8.0, 14.0, &market(), &roots).unwrap();
        assert!((v(11.0) - f.disc_upper).abs() < 1e-13);
        let (p, q) = harmonic_interpolant(14.0, 8.0, &roots);
        let w = |z: f64| p * (z / 8.0).powf(roots.gamma) + q * (z / 8.0).powf(roots.beta);
        assert!((w(8.0) - 1.0).abs() < 1e-13 && w(14.0).abs() < 1e-13);
        assert!((w(11.0) - f.disc_lower).abs() < 1e-13);
        // Both stay finite with an extreme negative root.
        let steep = CharRoots {
            gamma: 2.7,
            beta: -233.0,
        };
        let g = two_sided_functionals(40.0, 30.0, 60.0, &market(), &steep).unwrap();
        assert!(g.disc_lower.is_finite() && g.disc_upper.is_finite());
        assert!(g.disc_lower > 0.0 && g.disc_lower < 1e-20);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn discount_monotone(z in 0.1f64..9.9, dz in 0.001f64..0.1) {
                let roots = char_roots(&market());
                let t = 10.0;
                let a = discount_at_hit(z, t, &roots);
                let b = discount_at_hit((z + dz).min(t), t, &roots);
                prop_assert!(a > 0.0 && a <= 1.0);
                prop_assert!(b >= a);
                let above = discount_at_hit(t + z, t, &roots);
                let further = discount_at_hit(t + z + dz, t, &roots);
                prop_assert!(further < above && above <= 1.0);
            }

            #[test]
            fn probability_monotone(z in 8.01f64..13.9, dz in 0.001f64..0.09) {
                let m = market();
                for v in [HitVariant::AbsDrift, HitVariant::LogDrift] {
                    let a = hit_upper_first_prob(z, 8.0, 14.0, &m, v).unwrap();
                    let b = hit_upper_first_prob(z + dz, 8.0, 14.0, &m, v).unwrap();
                    prop_assert!(b > a);
                }
            }

            #[test]
            fn discounted_sum_below_one(z in 8.01f64..13.99) {
                let m = market();
                let f = two_sided_functionals(z, 8.0, 14.0, &m, &char_roots(&m)).unwrap();
                prop_assert!(f.disc_lower + f.disc_upper < 1.0);
                prop_assert!(f.p_upper_first >= f.disc_upper);
            }
        }
    }
}
