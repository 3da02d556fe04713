//! Monte Carlo path engine used as the independent oracle for every closed form.
//!
//! Paths use the exact GBM step `Z' = Z exp((alpha - sigma^2/2) dt + sigma sqrt(dt) N)`.
//! All paths are simulated from `Z_0 = 1`; by scale invariance a query from
//! `z0` against level `b` is a query from 1 against `b / z0`, so one ensemble
//! serves every starting demand level.
//!
//! Instead of storing whole paths, each path keeps the records of its running
//! maximum and minimum of `ln Z` (with time and accumulated discounted demand
//! at each record). First-passage queries are then binary searches. Within a
//! step the extremes are drawn from the exact Brownian-bridge law, so level
//! crossings between grid points are not missed; `dt` only controls the time
//! resolution of the recorded hits.
//!
//! Paths are generated in fixed-size chunks. Chunk `c` draws from a ChaCha8
//! stream seeded by the master seed with stream id `c`, and chunk results are
//! merged in chunk order, so results do not depend on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::params::MarketParams;

const CHUNK: usize = 2048;
/// Bridge extremes more than this many step deviations beyond the endpoints
/// have probability below exp(-72) and are not sampled.
const BRIDGE_SKIP_SDS: f64 = 6.0;

/// Simulation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_paths: usize,
    /// Time step; an accuracy knob for hit times and path integrals.
    pub dt: f64,
    /// Paths are truncated here; unresolved stopping problems count as capped.
    pub horizon: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            dt: 1e-3,
            horizon: 12.0,
            seed: 20_240_917,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::InvalidArgument("n_paths must be >= 1".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.horizon > self.dt && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "horizon must exceed dt, got {}",
                self.horizon
            )));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }

    pub fn with_paths(mut self, n_paths: usize) -> Self {
        self.n_paths = n_paths;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n_paths: usize,
    /// Fraction of paths whose stopping time was not reached by the horizon.
    pub cap_fraction: f64,
}

impl Estimate {
    pub fn exact(value: f64, n_paths: usize) -> Self {
        Self {
            estimate: value,
            stderr: 0.0,
            n_paths,
            cap_fraction: 0.0,
        }
    }

    /// More than 1% of paths hit the horizon cap.
    pub fn cap_warning(&self) -> bool {
        self.cap_fraction > 0.01
    }

    /// `|estimate - reference|` in standard errors (infinite if SE is 0 and they differ).
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.estimate - reference).abs();
        if d == 0.0 {
            0.0
        } else if self.stderr == 0.0 {
            f64::INFINITY
        } else {
            d / self.stderr
        }
    }

    /// Agreement within `k` standard errors, with an absolute floor for
    /// quantities that are exact on every path.
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        (self.estimate - reference).abs() <= k * self.stderr + 1e-12 * (1.0 + reference.abs())
    }
}

/// Streaming mean/variance (Welford) with Chan's merge.
#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Stats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Stats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64) * (other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// A new running extreme of `ln Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    /// New extreme of `ln(Z / Z_0)`.
    pub level: f64,
    /// Time at which it was reached.
    pub time: f64,
    /// `int_0^time (Z_s / Z_0) e^{-r s} ds` at that time.
    pub integral: f64,
}

/// First exit of a path from a log-level window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exit {
    pub time: f64,
    pub upper: bool,
    pub integral: f64,
}

/// Running-extreme summary of one normalized path.
#[derive(Debug, Clone, Default)]
pub struct PathRecord {
    ups: Vec<Record>,
    downs: Vec<Record>,
    /// Time at which simulation stopped (the horizon unless stopped early).
    pub end_time: f64,
    /// `ln(Z / Z_0)` at `end_time`.
    pub end_log: f64,
    /// Discounted demand integral up to `end_time`.
    pub end_integral: f64,
    /// True if the path was simulated all the way to the horizon.
    pub reached_horizon: bool,
}

impl PathRecord {
    fn clear(&mut self) {
        self.ups.clear();
        self.downs.clear();
    }

    /// First time `ln(Z/Z_0) >= level`.
    pub fn first_up(&self, level: f64) -> Option<Record> {
        if level <= 0.0 {
            return Some(Record {
                level: 0.0,
                time: 0.0,
                integral: 0.0,
            });
        }
        let k = self.ups.partition_point(|r| r.level < level);
        self.ups.get(k).copied()
    }

    /// First time `ln(Z/Z_0) <= level`.
    pub fn first_down(&self, level: f64) -> Option<Record> {
        if level >= 0.0 {
            return Some(Record {
                level: 0.0,
                time: 0.0,
                integral: 0.0,
            });
        }
        let k = self.downs.partition_point(|r| r.level > level);
        self.downs.get(k).copied()
    }

    /// First exit from `(lo, hi)` in log-levels; infinite bounds are never hit.
    pub fn first_exit(&self, lo: f64, hi: f64) -> Option<Exit> {
        let up = if hi.is_finite() { self.first_up(hi) } else { None };
        let down = if lo.is_finite() { self.first_down(lo) } else { None };
        match (up, down) {
            (Some(u), Some(d)) if d.time < u.time => Some(Exit {
                time: d.time,
                upper: false,
                integral: d.integral,
            }),
            (Some(u), _) => Some(Exit {
                time: u.time,
                upper: true,
                integral: u.integral,
            }),
            (None, Some(d)) => Some(Exit {
                time: d.time,
                upper: false,
                integral: d.integral,
            }),
            (None, None) => None,
        }
    }

    /// First exit from the demand interval `(lo, hi)` for a path started at `z0`.
    pub fn first_exit_demand(&self, z0: f64, lo: f64, hi: f64) -> Option<Exit> {
        let lo_log = if lo > 0.0 { (lo / z0).ln() } else { f64::NEG_INFINITY };
        let hi_log = if hi.is_finite() { (hi / z0).ln() } else { f64::INFINITY };
        self.first_exit(lo_log, hi_log)
    }
}

/// What to track while simulating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    /// Accumulate `int Z e^{-rs} ds` (one `exp` per step).
    pub integral: bool,
    /// Sample within-step extremes from the Brownian bridge.
    pub bridge: bool,
    /// Stop a path once its running min is `<= lo` or its running max `>= hi` (log-levels).
    pub stop_window: Option<(f64, f64)>,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            integral: false,
            bridge: true,
            stop_window: None,
        }
    }
}

struct Stepper {
    mu_dt: f64,
    sd: f64,
    var: f64,
    r: f64,
    dt: f64,
    n_steps: usize,
}

impl Stepper {
    fn new(config: &SimConfig, market: &MarketParams) -> Self {
        Self {
            mu_dt: market.log_drift() * config.dt,
            sd: market.sigma * config.dt.sqrt(),
            var: market.sigma * market.sigma * config.dt,
            r: market.r,
            dt: config.dt,
            n_steps: config.n_steps(),
        }
    }

    fn run(&self, rng: &mut ChaCha8Rng, opts: &TrackOptions, rec: &mut PathRecord) {
        rec.clear();
        let (mut x, mut t, mut integ, mut f_prev) = (0.0f64, 0.0f64, 0.0f64, 1.0f64);
        let (mut run_max, mut run_min) = (0.0f64, 0.0f64);
        let skip = BRIDGE_SKIP_SDS * self.sd;
        let mut stopped_early = false;
        for k in 0..self.n_steps {
            let n: f64 = rng.sample(StandardNormal);
            let x_new = x + self.mu_dt + self.sd * n;
            let t_new = (k + 1) as f64 * self.dt;
            let integ_new = if opts.integral {
                let f_new = (x_new - self.r * t_new).exp();
                let v = integ + 0.5 * self.dt * (f_prev + f_new);
                f_prev = f_new;
                v
            } else {
                0.0
            };
            if opts.bridge {
                let dx2 = (x_new - x) * (x_new - x);
                if x.max(x_new) + skip > run_max {
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    let m = 0.5 * (x + x_new + (dx2 - 2.0 * self.var * u.ln()).sqrt());
                    if m > run_max {
                        run_max = m;
                        rec.ups.push(Record {
                            level: m,
                            time: t + 0.5 * self.dt,
                            integral: 0.5 * (integ + integ_new),
                        });
                    }
                }
                if x.min(x_new) - skip < run_min {
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    let m = 0.5 * (x + x_new - (dx2 - 2.0 * self.var * u.ln()).sqrt());
                    if m < run_min {
                        run_min = m;
                        rec.downs.push(Record {
                            level: m,
                            time: t + 0.5 * self.dt,
                            integral: 0.5 * (integ + integ_new),
                        });
                    }
                }
            } else {
                if x_new > run_max {
                    run_max = x_new;
                    rec.ups.push(Record {
                        level: x_new,
                        time: t_new,
                        integral: integ_new,
                    });
                }
                if x_new < run_min {
                    run_min = x_new;
                    rec.downs.push(Record {
                        level: x_new,
                        time: t_new,
                        integral: integ_new,
                    });
                }
            }
            x = x_new;
            t = t_new;
            integ = integ_new;
            if let Some((lo, hi)) = opts.stop_window {
                if run_min <= lo || run_max >= hi {
                    stopped_early = k + 1 < self.n_steps;
                    break;
                }
            }
        }
        rec.end_time = t;
        rec.end_log = x;
        rec.end_integral = integ;
        rec.reached_horizon = !stopped_early;
    }
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn chunk_sizes(n_paths: usize) -> Vec<(usize, usize)> {
    (0..n_paths.div_ceil(CHUNK))
        .map(|c| (c, CHUNK.min(n_paths - c * CHUNK)))
        .collect()
}

/// Per-output statistics plus horizon-cap counts.
#[derive(Debug, Clone)]
pub struct MultiStats {
    stats: Vec<Stats>,
    caps: Vec<usize>,
}

impl MultiStats {
    pub fn new(n: usize) -> Self {
        Self {
            stats: vec![Stats::default(); n],
            caps: vec![0; n],
        }
    }

    fn merge(&mut self, other: &MultiStats) {
        for (a, b) in self.stats.iter_mut().zip(&other.stats) {
            a.merge(b);
        }
        for (a, b) in self.caps.iter_mut().zip(&other.caps) {
            *a += b;
        }
    }

    pub fn estimates(&self) -> Vec<Estimate> {
        self.stats
            .iter()
            .zip(&self.caps)
            .map(|(s, &c)| Estimate {
                estimate: s.mean(),
                stderr: s.stderr(),
                n_paths: s.count(),
                cap_fraction: if s.count() == 0 {
                    0.0
                } else {
                    c as f64 / s.count() as f64
                },
            })
            .collect()
    }
}

/// Simulates `config.n_paths` normalized paths and averages `n_out` path
/// functionals. `f` writes one sample per output and flags outputs whose
/// stopping time was not reached by the horizon.
pub fn expectations<F>(
    config: &SimConfig,
    market: &MarketParams,
    opts: TrackOptions,
    n_out: usize,
    f: F,
) -> Result<Vec<Estimate>>
where
    F: Fn(&PathRecord, &mut [f64], &mut [bool]) + Sync,
{
    config.validate()?;
    market.validate()?;
    let stepper = Stepper::new(config, market);
    let parts: Vec<MultiStats> = chunk_sizes(config.n_paths)
        .into_par_iter()
        .map(|(c, size)| {
            let mut rng = chunk_rng(config.seed, c);
            let mut rec = PathRecord::default();
            let mut acc = MultiStats::new(n_out);
            let mut out = vec![0.0; n_out];
            let mut capped = vec![false; n_out];
            for _ in 0..size {
                stepper.run(&mut rng, &opts, &mut rec);
                out.iter_mut().for_each(|v| *v = 0.0);
                capped.iter_mut().for_each(|v| *v = false);
                f(&rec, &mut out, &mut capped);
                for k in 0..n_out {
                    acc.stats[k].push(out[k]);
                    acc.caps[k] += capped[k] as usize;
                }
            }
            acc
        })
        .collect();
    let mut total = MultiStats::new(n_out);
    for p in &parts {
        total.merge(p);
    }
    Ok(total.estimates())
}

/// Full grid paths, for small ensembles and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub dt: f64,
    /// `paths[i][k]` is demand on path `i` at time `k dt`.
    pub paths: Vec<Vec<f64>>,
}

impl PathEnsemble {
    pub fn terminal_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.paths.iter().filter_map(|p| p.last().copied())
    }
}

/// Exact-scheme GBM paths on the time grid `0, dt, ..., horizon`.
pub fn simulate_paths(z0: f64, config: &SimConfig, market: &MarketParams) -> Result<PathEnsemble> {
    config.validate()?;
    if !(z0 > 0.0) {
        return Err(Error::InvalidArgument(format!("z0 must be positive, got {z0}")));
    }
    let n_steps = config.n_steps();
    let mu_dt = market.log_drift() * config.dt;
    let sd = market.sigma * config.dt.sqrt();
    let chunks: Vec<Vec<Vec<f64>>> = chunk_sizes(config.n_paths)
        .into_par_iter()
        .map(|(c, size)| {
            let mut rng = chunk_rng(config.seed, c);
            (0..size)
                .map(|_| {
                    let mut path = Vec::with_capacity(n_steps + 1);
                    let mut x = z0.ln();
                    path.push(z0);
                    for _ in 0..n_steps {
                        let n: f64 = rng.sample(StandardNormal);
                        x += mu_dt + sd * n;
                        path.push(x.exp());
                    }
                    path
                })
                .collect()
        })
        .collect();
    Ok(PathEnsemble {
        dt: config.dt,
        paths: chunks.into_iter().flatten().collect(),
    })
}

/// `E[exp(-r tau) reward(Z_tau)]` with `tau` the first entry of demand into
/// `region`, started from `z0`.
pub fn mc_policy_value<R>(
    z0: f64,
    region: &IntervalSet,
    reward: R,
    config: &SimConfig,
    market: &MarketParams,
) -> Result<Estimate>
where
    R: Fn(f64) -> f64 + Sync,
{
    if region.is_empty() {
        return Err(Error::InvalidArgument("stopping region is empty".into()));
    }
    let Some((lo, hi)) = region.gap_around(z0) else {
        return Ok(Estimate::exact(reward(z0), config.n_paths));
    };
    let lo_log = if lo > 0.0 { (lo / z0).ln() } else { f64::NEG_INFINITY };
    let hi_log = if hi.is_finite() { (hi / z0).ln() } else { f64::INFINITY };
    let opts = TrackOptions {
        stop_window: Some((lo_log, hi_log)),
        ..TrackOptions::default()
    };
    let r = market.r;
    let est = expectations(config, market, opts, 1, |path, out, capped| {
        match path.first_exit(lo_log, hi_log) {
            Some(e) => {
                let level = if e.upper { hi } else { lo };
                out[0] = (-r * e.time).exp() * reward(level);
            }
            None => capped[0] = true,
        }
    })?;
    Ok(est[0])
}

/// Probability that demand started at `z0` reaches `upper` before `lower`.
pub fn mc_upper_first_prob(
    z0: f64,
    lower: f64,
    upper: f64,
    config: &SimConfig,
    market: &MarketParams,
) -> Result<Estimate> {
    if !(0.0 < lower && lower < z0 && z0 < upper && upper.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < lower < z0 < upper < inf, got {lower}, {z0}, {upper}"
        )));
    }
    let (lo_log, hi_log) = ((lower / z0).ln(), (upper / z0).ln());
    let opts = TrackOptions {
        stop_window: Some((lo_log, hi_log)),
        ..TrackOptions::default()
    };
    let est = expectations(config, market, opts, 1, |path, out, capped| {
        match path.first_exit(lo_log, hi_log) {
            Some(e) => out[0] = e.upper as u8 as f64,
            None => capped[0] = true,
        }
    })?;
    Ok(est[0])
}

/// Per-path sample of
/// `int_0^tau rate_before Z e^{-rs} ds + int_tau^inf rate_after Z e^{-rs} ds`,
/// where `tau` is the first entry into `region` (a gap `(lo, hi)` around `z0`).
/// The tail beyond the simulated horizon is closed with
/// `E[int_H^inf Z e^{-rs} ds | Z_H] = e^{-rH} Z_H / (r - alpha)`.
pub fn flow_sample(
    path: &PathRecord,
    z0: f64,
    gap: Option<(f64, f64)>,
    rate_before: f64,
    rate_after: f64,
    market: &MarketParams,
) -> (f64, bool) {
    debug_assert!(path.reached_horizon, "flow functionals need full paths");
    let tail = (path.end_log - market.r * path.end_time).exp() / market.cap_rate();
    let total = path.end_integral + tail;
    let (before, capped) = match gap {
        None => (0.0, false),
        Some((lo, hi)) => match path.first_exit_demand(z0, lo, hi) {
            Some(e) => (e.integral, false),
            None => (total, true),
        },
    };
    (z0 * (rate_before * before + rate_after * (total - before)), capped)
}

/// Monte Carlo estimate of the flow functional in [`flow_sample`].
pub fn mc_flow_value(
    z0: f64,
    region: &IntervalSet,
    rate_before: f64,
    rate_after: f64,
    config: &SimConfig,
    market: &MarketParams,
) -> Result<Estimate> {
    let gap = region.gap_around(z0);
    let opts = TrackOptions {
        integral: true,
        ..TrackOptions::default()
    };
    let est = expectations(config, market, opts, 1, |path, out, capped| {
        let (v, c) = flow_sample(path, z0, gap, rate_before, rate_after, market);
        out[0] = v;
        capped[0] = c;
    })?;
    Ok(est[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbm::discount_at_hit;
    use crate::params::char_roots;

    #[test]
    fn stats_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut all = Stats::default();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = Stats::default();
        let mut b = Stats::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean() - all.mean()).abs() < 1e-12);
        assert!((a.stderr() - all.stderr()).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let c = SimConfig::default();
        assert!(c.validate().is_ok());
        assert!(c.with_paths(0).validate().is_err());
        assert!(c.with_dt(0.0).validate().is_err());
        assert!(c.with_horizon(1e-4).validate().is_err());
    }

    #[test]
    fn same_seed_same_paths() {
        let m = MarketParams::new(0.05, 0.3, 0.1).unwrap();
        let cfg = SimConfig {
            n_paths: 3000,
            dt: 0.01,
            horizon: 1.0,
            seed: 7,
        };
        let a = simulate_paths(2.0, &cfg, &m).unwrap();
        let b = simulate_paths(2.0, &cfg, &m).unwrap();
        assert_eq!(a, b);
        let c = simulate_paths(2.0, &cfg.with_seed(8), &m).unwrap();
        assert_ne!(a, c);
        assert_eq!(a.paths.len(), 3000);
        assert_eq!(a.paths[0].len(), 101);
    }

    #[test]
    fn drift_identity_small_sigma() {
        let m = MarketParams::new(0.05, 1e-6, 0.1).unwrap();
        let cfg = SimConfig {
            n_paths: 2000,
            dt: 0.01,
            horizon: 2.0,
            seed: 1,
        };
        let ens = simulate_paths(3.0, &cfg, &m).unwrap();
        let mut s = Stats::default();
        ens.terminal_values().for_each(|v| s.push(v));
        let expect = 3.0 * (0.05f64 * 2.0).exp();
        assert!(
            (s.mean() - expect).abs() <= 3.0 * s.stderr() + 1e-9,
            "{} vs {expect}",
            s.mean()
        );
    }

    #[test]
    fn immediate_stop_is_exact() {
        let m = MarketParams::new(0.05, 0.3, 0.1).unwrap();
        let cfg = SimConfig::default().with_paths(10);
        let est = mc_policy_value(5.0, &IntervalSet::at_or_above(4.0), |z| 2.0 * z, &cfg, &m).unwrap();
        assert_eq!(est.estimate, 10.0);
        assert_eq!(est.stderr, 0.0);
        assert!(mc_policy_value(5.0, &IntervalSet::empty(), |z| z, &cfg, &m).is_err());
    }

    #[test]
    fn discount_at_hit_oracle() {
        // gamma = 2 for alpha = 0, sigma = 1, r = 1: E[e^{-r tau}] = (5/10)^2.
        let m = MarketParams::new(0.0, 1.0, 1.0).unwrap();
        let roots = char_roots(&m);
        let cfg = SimConfig {
            n_paths: 100_000,
            dt: 2e-3,
            horizon: 15.0,
            seed: 11,
        };
        let est = mc_policy_value(5.0, &IntervalSet::at_or_above(10.0), |_| 1.0, &cfg, &m).unwrap();
        let exact = discount_at_hit(5.0, 10.0, &roots);
        assert!((exact - 0.25).abs() < 1e-15);
        assert!(est.agrees_with(exact, 3.0), "{est:?}");
    }

    #[test]
    fn records_are_monotone() {
        let m = MarketParams::new(0.05, 0.5, 0.2).unwrap();
        let cfg = SimConfig {
            n_paths: 50,
            dt: 1e-2,
            horizon: 5.0,
            seed: 3,
        };
        let opts = TrackOptions {
            integral: true,
            ..TrackOptions::default()
        };
        expectations(&cfg, &m, opts, 1, |p, out, _| {
            assert!(p
                .ups
                .windows(2)
                .all(|w| w[0].level < w[1].level && w[0].time <= w[1].time));
            assert!(p
                .downs
                .windows(2)
                .all(|w| w[0].level > w[1].level && w[0].time <= w[1].time));
            assert!(p.end_integral > 0.0);
            out[0] = 1.0;
        })
        .unwrap();
    }
}
