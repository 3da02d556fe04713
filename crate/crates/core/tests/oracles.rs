//! Monte Carlo oracles against closed forms.

use duopoly_core::equilibrium::{build_profile, compute_b_sets, find_intervals, ProfileReading};
use duopoly_core::game::{resolve_subgame, simulate_subgame};
use duopoly_core::gbm::{discount_at_hit, hit_upper_first_prob, HitVariant};
use duopoly_core::mc::{mc_policy_value, mc_upper_first_prob, simulate_paths, SimConfig};
use duopoly_core::payoffs::GameValues;
use duopoly_core::{intervals::IntervalSet, EconParams, MarketParams};

fn reference() -> GameValues {
    let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
    let e = EconParams::new(1.0, 1.8, 30.0, 10.0, 0.6).unwrap();
    GameValues::solve(&m, &e).unwrap()
}

fn sim(n_paths: usize, seed: u64) -> SimConfig {
    SimConfig {
        n_paths,
        dt: 1e-3,
        horizon: 20.0,
        seed,
    }
}

#[test]
fn start_below_first_interval_is_discounted_entry_value() {
    let v = reference();
    let iv = find_intervals(&v, None).unwrap();
    let profile = build_profile(&iv, &compute_b_sets(&v, &iv, None).unwrap());
    let z0 = 0.6 * iv.a1_lo;
    let (si, sj) = profile.strategies_from(z0, ProfileReading::RunningMax);
    let g = resolve_subgame(z0, &si, &sj, &v).unwrap();
    assert!(g.immediate.is_none());
    assert!((g.hi - iv.a1_lo).abs() < 1e-12, "first action at {}", g.hi);
    let d = discount_at_hit(z0, g.hi, &v.roots);
    let out = simulate_subgame(z0, &si, &sj, &v, &sim(40_000, 3)).unwrap();
    assert!(
        out.v_i.agrees_with(d * g.at_hi.0, 4.0),
        "{:?} vs {}",
        out.v_i,
        d * g.at_hi.0
    );
    assert!(
        out.v_j.agrees_with(d * g.at_hi.1, 4.0),
        "{:?} vs {}",
        out.v_j,
        d * g.at_hi.1
    );
}

#[test]
fn one_sided_discount_factor() {
    let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
    let roots = duopoly_core::params::char_roots(&m);
    for (z0, target) in [(2.0, 3.0), (3.0, 2.0)] {
        let est = mc_policy_value(z0, &IntervalSet::single(target, target), |_| 1.0, &sim(40_000, 5), &m).unwrap();
        let exact = discount_at_hit(z0, target, &roots);
        assert!(est.agrees_with(exact, 4.0), "{z0}->{target}: {est:?} vs {exact}");
    }
}

#[test]
fn two_sided_hitting_probability() {
    let m = MarketParams::new(0.02, 0.2, 0.05).unwrap();
    let cfg = SimConfig {
        n_paths: 40_000,
        dt: 1e-2,
        horizon: 60.0,
        seed: 9,
    };
    for z in [9.0, 11.0, 13.0] {
        let est = mc_upper_first_prob(z, 8.0, 14.0, &cfg, &m).unwrap();
        let p = hit_upper_first_prob(z, 8.0, 14.0, &m, HitVariant::LogDrift).unwrap();
        assert!(est.agrees_with(p, 4.0), "z={z}: {est:?} vs {p}");
    }
}

#[test]
fn terminal_mean_grows_at_drift() {
    let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
    let cfg = SimConfig {
        n_paths: 100_000,
        dt: 0.05,
        horizon: 1.0,
        seed: 1,
    };
    let paths = simulate_paths(2.0, &cfg, &m).unwrap();
    let xs: Vec<f64> = paths.terminal_values().collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let exact = 2.0 * (0.1f64).exp();
    assert!((mean - exact).abs() < 3.0 * (var / n).sqrt(), "{mean} vs {exact}");
}

#[test]
fn doubling_paths_shrinks_standard_error() {
    let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
    let region = IntervalSet::at_or_above(4.0);
    let a = mc_policy_value(2.0, &region, |z| z, &sim(10_000, 2), &m).unwrap();
    let b = mc_policy_value(2.0, &region, |z| z, &sim(20_000, 2), &m).unwrap();
    let ratio = b.stderr / a.stderr;
    assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
    let region = IntervalSet::single(1.0, 1.0).union(&IntervalSet::at_or_above(4.0));
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_policy_value(2.0, &region, |z| z, &sim(30_000, 4), &m).unwrap())
    };
    assert_eq!(run(1), run(4));
}
