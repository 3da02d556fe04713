//! Structural properties of the payoff functions and the investment sets.

use duopoly_core::equilibrium::{build_profile, compute_b_sets_on_grid, find_intervals, region_sups, vacuum_report};
use duopoly_core::gbm::discount_at_hit;
use duopoly_core::numerics::geomspace;
use duopoly_core::payoffs::GameValues;
use duopoly_core::{EconParams, MarketParams};
use proptest::prelude::*;

fn reference() -> GameValues {
    let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
    let e = EconParams::new(1.0, 1.8, 30.0, 10.0, 0.6).unwrap();
    GameValues::solve(&m, &e).unwrap()
}

fn model() -> impl Strategy<Value = (MarketParams, EconParams)> {
    (
        (0.0f64..0.3, 0.05f64..2.5, 0.01f64..2.0),
        (0.2f64..3.0, 0.01f64..3.0, 0.5f64..50.0, 0.01f64..0.99),
    )
        .prop_map(|((alpha, sigma, excess), (pl, dp, inv, theta))| {
            (
                MarketParams::new(alpha, sigma, alpha + excess).unwrap(),
                EconParams::new(pl, pl + dp, 0.0, inv, theta).unwrap(),
            )
        })
}

fn with_xi(e: &EconParams, xi: f64) -> EconParams {
    EconParams::new(e.pi_low, e.pi_high, xi, e.inv_cost, e.theta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leading_without_benefit_never_pays((m, e) in model()) {
        let v = GameValues::solve(&m, &e).unwrap();
        let top = 3.0 * v.follower.low.z3.max(v.follower.high.z_h);
        for z in geomspace(top * 1e-4, top, 400) {
            let (l, f) = (v.leader(z), v.follower(z));
            prop_assert!(l <= f + 1e-9 * (1.0 + f.abs()), "z={}: L={} F={}", z, l, f);
        }
    }

    #[test]
    fn leader_value_is_affine_in_benefit((m, e) in model(), xi in 0.1f64..60.0) {
        let v0 = GameValues::solve(&m, &e).unwrap();
        let v1 = GameValues::solve(&m, &with_xi(&e, xi)).unwrap();
        let v2 = GameValues::solve(&m, &with_xi(&e, 2.0 * xi)).unwrap();
        let top = 3.0 * v0.follower.low.z3;
        for z in geomspace(top * 1e-3, top, 50) {
            let (a, b, c) = (v0.leader(z), v1.leader(z), v2.leader(z));
            prop_assert!(((c - a) - 2.0 * (b - a)).abs() < 1e-9 * (1.0 + c.abs()), "z={}", z);
            prop_assert_eq!(v0.follower(z), v2.follower(z));
        }
    }
}

#[test]
fn b_set_kernel_is_the_discount_factor() {
    let v = reference();
    let iv = find_intervals(&v, None).unwrap();
    let bound = 10.0 * iv.a2_hi;
    let sups = region_sups(&v, &iv, bound);
    let regions = [(iv.a1_hi, iv.a2_lo), (iv.a2_hi, bound)];
    for (sup, &(lo, hi)) in sups[1..].iter().zip(&regions) {
        let zs = geomspace(lo, hi, 20_000);
        for y in geomspace(lo, hi, 37) {
            let s = sup.sup_at(y);
            let grid_max = zs
                .iter()
                .map(|&z| discount_at_hit(y, z, &v.roots) * v.leader(z))
                .fold(v.leader(y), f64::max);
            assert!(s >= grid_max - 1e-9 * (1.0 + s.abs()), "y={y}: sup {s} < {grid_max}");
            if hi < bound {
                assert!(s - grid_max <= 1e-6 * (1.0 + s.abs()), "y={y}: sup {s} vs {grid_max}");
            }
        }
    }
}

#[test]
fn investment_sets_are_stable_under_refinement() {
    let v = reference();
    let iv = find_intervals(&v, None).unwrap();
    let coarse = compute_b_sets_on_grid(&v, &iv, None, 4001).unwrap();
    let fine = compute_b_sets_on_grid(&v, &iv, None, 8001).unwrap();
    for (a, b) in [(&coarse.b1, &fine.b1), (&coarse.b2, &fine.b2), (&coarse.b3, &fine.b3)] {
        assert_eq!(a.intervals().len(), b.intervals().len(), "{a:?} vs {b:?}");
        for (&(l1, h1), &(l2, h2)) in a.intervals().iter().zip(b.intervals()) {
            assert!((l1 - l2).abs() <= 1e-6 * l2, "{l1} vs {l2}");
            assert!((h1 - h2).abs() <= 1e-6 * h2.abs().max(1.0) || h1 == h2, "{h1} vs {h2}");
        }
    }
    let rc = vacuum_report(&build_profile(&iv, &coarse));
    let rf = vacuum_report(&build_profile(&iv, &fine));
    assert_eq!(rc.vacuum, rf.vacuum);
}
