//! Preemption intervals, the investment sets of the eager firm, and the
//! asymmetric equilibrium profile built from them.
//!
//! `A1` and `A2` are the two maximal intervals where `L >= F`. Outside them
//! the eager firm invests on `B1`, `B2`, `B3`: the demand levels `y` at
//! which `L(y)` is at least the discounted leader value of waiting for any
//! other level `z` of the same region. With `d(y, z) = E[exp(-r T)]` for the
//! first passage from `y` to `z`, membership reads `L(y) >= d(y, z) L(z)`.
//! Since `d(y, z) = (y/z)^gamma` above `y` and `(y/z)^beta` below, this is
//! equivalent to `y` maximizing `z^-gamma L(z)` over the region above `y`
//! and `z^-beta L(z)` over the region below `y`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::follower::FollowerRegime;
use crate::game::{AlphaRule, StrategySpec};
use crate::gbm::discount_at_hit;
use crate::intervals::IntervalSet;
use crate::numerics::{bisect, geomspace, golden_min};
use crate::params::{EconParams, MarketParams};
use crate::payoffs::GameValues;

const SCAN_POINTS: usize = 4096;
/// Default grid size per region for the B-set computation.
pub const BSET_POINTS: usize = 4001;

/// Outcome of checking the two high-monopoly-benefit conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub xi: f64,
    /// Largest `L - F` found below `z1`, and where.
    pub max_gap_below_z1: f64,
    pub argmax_below_z1: f64,
    /// Largest `L - F` found on `(z2, z3)`, and where.
    pub max_gap_inner: f64,
    pub argmax_inner: f64,
    pub below_z1_holds: bool,
    pub inner_holds: bool,
}

impl ScenarioReport {
    pub fn holds(&self) -> bool {
        self.below_z1_holds && self.inner_holds
    }
}

/// Maximum of `f` over the open interval `(lo, hi)` by grid plus golden section.
fn max_on(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let grid = geomspace(lo, hi, n);
    let inner = &grid[1..n - 1];
    let k = (0..inner.len())
        .max_by(|&a, &b| f(inner[a]).total_cmp(&f(inner[b])))
        .expect("grid has interior points");
    let a = grid[k];
    let b = grid[k + 2];
    let (x, neg) = golden_min(|z| -f(z), a, b, 1e-13);
    if -neg > f(inner[k]) {
        (x, -neg)
    } else {
        (inner[k], f(inner[k]))
    }
}

pub fn check_scenario(values: &GameValues) -> Result<ScenarioReport> {
    let low = &values.follower.low;
    let (Some(z1), Some(z2)) = (low.z1, low.z2) else {
        return Err(Error::RegimeMismatch(
            "the two-interval scenario needs the split continuation region".into(),
        ));
    };
    debug_assert_eq!(low.regime, FollowerRegime::InnerWait);
    let gap = |z: f64| values.lead_gap(z);
    let (zb, gb) = max_on(gap, z1 * 1e-6, z1, SCAN_POINTS);
    let (zi, gi) = max_on(gap, z2, low.z3, SCAN_POINTS);
    Ok(ScenarioReport {
        xi: values.econ.xi,
        max_gap_below_z1: gb,
        argmax_below_z1: zb,
        max_gap_inner: gi,
        argmax_inner: zi,
        below_z1_holds: gb > 0.0,
        inner_holds: gi > 0.0,
    })
}

/// Smallest monopoly benefit at which both scenario conditions hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XiSweep {
    /// Bracket `[xi_fail, xi_min]` of width below `1e-6` relative.
    pub xi_fail: f64,
    pub xi_min: f64,
    pub report: ScenarioReport,
}

/// Increases `xi` from zero until both conditions hold, then bisects.
pub fn sweep_xi(market: &MarketParams, econ: &EconParams) -> Result<XiSweep> {
    let check = |xi: f64| -> Result<ScenarioReport> { check_scenario(&GameValues::solve(market, &econ.with_xi(xi)?)?) };
    let at_zero = check(0.0)?;
    if at_zero.holds() {
        return Ok(XiSweep {
            xi_fail: 0.0,
            xi_min: 0.0,
            report: at_zero,
        });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while !check(hi)?.holds() {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::ScenarioShape(
                "no monopoly benefit up to 1e12 separates L from F".into(),
            ));
        }
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if check(mid)?.holds() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(XiSweep {
        xi_fail: lo,
        xi_min: hi,
        report: check(hi)?,
    })
}

/// The two maximal intervals where `L >= F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreemptionIntervals {
    pub a1_lo: f64,
    pub a1_hi: f64,
    pub a2_lo: f64,
    pub a2_hi: f64,
}

impl PreemptionIntervals {
    pub fn a1(&self) -> IntervalSet {
        IntervalSet::single(self.a1_lo, self.a1_hi)
    }

    pub fn a2(&self) -> IntervalSet {
        IntervalSet::single(self.a2_lo, self.a2_hi)
    }

    pub fn union(&self) -> IntervalSet {
        self.a1().union(&self.a2())
    }

    pub fn endpoints(&self) -> [f64; 4] {
        [self.a1_lo, self.a1_hi, self.a2_lo, self.a2_hi]
    }
}

/// Locates `A1` and `A2` by a sign scan of `L - F` refined by bisection.
///
/// The scan starts at `z_h / 10` and moves down until `L < F`; it ends at
/// `z_max_search` (default `4 z3`).
pub fn find_intervals(values: &GameValues, z_max_search: Option<f64>) -> Result<PreemptionIntervals> {
    let gap = |z: f64| values.lead_gap(z);
    let mut lo = values.follower.high.z_h / 10.0;
    for _ in 0..200 {
        if gap(lo) < 0.0 {
            break;
        }
        lo *= 0.5;
    }
    let hi = z_max_search.unwrap_or(4.0 * values.follower.low.z3);
    if !(hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "search bound {hi} below scan start {lo}"
        )));
    }
    let grid = geomspace(lo, hi, SCAN_POINTS);
    let signs: Vec<bool> = grid.iter().map(|&z| gap(z) >= 0.0).collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < grid.len() {
        if signs[k] {
            let start = k;
            while k + 1 < grid.len() && signs[k + 1] {
                k += 1;
            }
            runs.push((start, k));
        }
        k += 1;
    }
    let touches_edge = runs.iter().any(|&(a, b)| a == 0 || b == grid.len() - 1);
    if runs.len() != 2 || touches_edge {
        let dump: Vec<String> = runs
            .iter()
            .map(|&(a, b)| format!("[{:.6}, {:.6}]", grid[a], grid[b]))
            .collect();
        return Err(Error::ScenarioShape(format!(
            "expected two intervals with L >= F on [{lo:.6}, {hi:.6}] ({} points), found {}: {}",
            grid.len(),
            runs.len(),
            dump.join(", ")
        )));
    }
    let edge = |a: usize, b: usize| bisect(gap, grid[a], grid[b], 1e-15);
    let (r1, r2) = (runs[0], runs[1]);
    Ok(PreemptionIntervals {
        a1_lo: edge(r1.0 - 1, r1.0),
        a1_hi: edge(r1.1, r1.1 + 1),
        a2_lo: edge(r2.0 - 1, r2.0),
        a2_hi: edge(r2.1, r2.1 + 1),
    })
}

/// Preemption intensity `(L - F) / (L - C)`.
///
/// Values within `1e-12` outside `[0, 1]` are clamped; anything further out
/// means the payoff geometry is broken.
pub fn alpha_ratio(l: f64, f: f64, c: f64) -> Result<f64> {
    if !(l > c) {
        return Err(Error::InconsistentGeometry(format!(
            "leader value {l} does not exceed the Cournot value {c}"
        )));
    }
    let a = (l - f) / (l - c);
    if !(-1e-12..=1.0 + 1e-12).contains(&a) {
        return Err(Error::InconsistentGeometry(format!(
            "preemption ratio {a} outside [0, 1]"
        )));
    }
    Ok(a.clamp(0.0, 1.0))
}

pub fn alpha_at(z: f64, values: &GameValues) -> Result<f64> {
    let (l, f, c) = values.triple(z);
    alpha_ratio(l, f, c)
}

/// `sup_z d(y, z) L(z)` over one closed region, for any `y` in it.
pub struct RegionSup<'a> {
    values: &'a GameValues,
    grid: Vec<f64>,
    /// `argmax_{j >= k} (z_j/z_0)^-gamma L(z_j)`.
    suffix: Vec<usize>,
    /// `argmax_{j <= k} (z_j/z_n)^-beta L(z_j)`.
    prefix: Vec<usize>,
    /// Region points below the grid contribute at most zero.
    below: bool,
    /// Maximizer of `z^-gamma L(z)` over region points above the grid.
    above: Option<f64>,
}

impl<'a> RegionSup<'a> {
    fn new(values: &'a GameValues, lo: f64, hi: f64, n: usize, below: bool, above: Option<f64>) -> Self {
        let grid = geomspace(lo, hi, n);
        let mut out = Self {
            values,
            grid,
            suffix: Vec::new(),
            prefix: Vec::new(),
            below,
            above,
        };
        let (g, b) = (values.roots.gamma, values.roots.beta);
        let u: Vec<f64> = out.grid.iter().map(|&z| out.scaled(z, g)).collect();
        let w: Vec<f64> = out.grid.iter().map(|&z| out.scaled(z, b)).collect();
        let mut suffix = vec![n - 1; n];
        for k in (0..n - 1).rev() {
            suffix[k] = if u[k] >= u[suffix[k + 1]] { k } else { suffix[k + 1] };
        }
        let mut prefix = vec![0; n];
        for k in 1..n {
            prefix[k] = if w[k] >= w[prefix[k - 1]] { k } else { prefix[k - 1] };
        }
        out.suffix = suffix;
        out.prefix = prefix;
        out
    }

    /// `(z/p)^-e L(z)`, with the pivot `p` at the grid end that keeps the
    /// power at most one.
    fn scaled(&self, z: f64, e: f64) -> f64 {
        let pivot = if e > 0.0 {
            self.grid[0]
        } else {
            self.grid[self.grid.len() - 1]
        };
        (z / pivot).powf(-e) * self.values.leader(z)
    }

    /// Maximizer of `(z/p)^-e L(z)` on `[a, b]`.
    fn refine_argmax(&self, e: f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return a;
        }
        let (z, _) = golden_min(|z| -self.scaled(z, e), a, b, 1e-14);
        [z, a, b]
            .into_iter()
            .max_by(|x, y| self.scaled(*x, e).total_cmp(&self.scaled(*y, e)))
            .unwrap_or(a)
    }

    /// `sup_z d(y, z) L(z)` over the region, including `z = y`.
    pub fn sup_at(&self, y: f64) -> f64 {
        let (g, b) = (self.values.roots.gamma, self.values.roots.beta);
        let n = self.grid.len();
        let mut cands = vec![y];
        // Waiting for higher demand.
        let k = self.grid.partition_point(|&z| z < y);
        if k < n {
            cands.push(self.refine_argmax(g, y, self.grid[k]));
            let m = self.suffix[k];
            let a = if m > k { self.grid[m - 1] } else { y };
            cands.push(self.refine_argmax(g, a, self.grid[(m + 1).min(n - 1)]));
        }
        cands.extend(self.above);
        // Waiting for lower demand.
        let j = self.grid.partition_point(|&z| z <= y);
        if j > 0 {
            cands.push(self.refine_argmax(b, self.grid[j - 1], y));
            let m = self.prefix[j - 1];
            let hi = if m + 1 < j { self.grid[m + 1] } else { y };
            cands.push(self.refine_argmax(b, self.grid[m.saturating_sub(1)], hi));
        }
        let sup = cands
            .into_iter()
            .map(|z| discount_at_hit(y, z, &self.values.roots) * self.values.leader(z))
            .fold(f64::NEG_INFINITY, f64::max);
        if self.below {
            sup.max(0.0)
        } else {
            sup
        }
    }

    /// Membership `L(y) >= sup_z d(y, z) L(z)` with a round-off allowance.
    pub fn is_member(&self, y: f64) -> bool {
        let ly = self.values.leader(y);
        ly >= self.sup_at(y) - 1e-11 * (1.0 + ly.abs())
    }

    /// Members among `ys`, as intervals with bisection-refined edges.
    fn extract(&self, ys: &[f64]) -> IntervalSet {
        let member: Vec<bool> = ys.iter().map(|&y| self.is_member(y)).collect();
        let edge = |inside: f64, outside: f64| {
            let (mut a, mut b) = (inside, outside);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if self.is_member(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            a
        };
        let mut raw = Vec::new();
        let mut k = 0;
        while k < ys.len() {
            if member[k] {
                let start = k;
                while k + 1 < ys.len() && member[k + 1] {
                    k += 1;
                }
                let lo = if start == 0 {
                    ys[0]
                } else {
                    edge(ys[start], ys[start - 1])
                };
                let hi = if k + 1 == ys.len() {
                    ys[k]
                } else {
                    edge(ys[k], ys[k + 1])
                };
                raw.push((lo, hi));
            }
            k += 1;
        }
        IntervalSet::from_intervals(raw)
    }
}

/// Investment sets of the eager firm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BSets {
    pub b1: IntervalSet,
    pub b2: IntervalSet,
    /// `B3` on `[a2_hi, z_max_bound]`.
    pub b3: IntervalSet,
    pub z_max_bound: f64,
    /// Beyond the bound `L` is affine; true if every level above it is in `B3`.
    pub b3_tail: bool,
    /// Lowest level of the affine tail where waiting stops paying.
    pub tail_threshold: f64,
}

impl BSets {
    /// `B3` including the analytic tail.
    pub fn b3_full(&self) -> IntervalSet {
        if self.b3_tail {
            self.b3.union(&IntervalSet::at_or_above(self.z_max_bound))
        } else {
            self.b3.clone()
        }
    }

    pub fn all(&self) -> IntervalSet {
        self.b1.union(&self.b2).union(&self.b3_full())
    }
}

/// Grid start for region 1; `L` must be negative there so the `z -> 0`
/// limit of `z^-beta L(z)` (zero) bounds the unexplored part.
fn region1_start(values: &GameValues, a1_lo: f64) -> f64 {
    let mut lo = a1_lo / 1000.0;
    while values.leader(lo) >= 0.0 && lo > 1e-300 {
        lo *= 0.1;
    }
    lo
}

/// The three region-wise supremum evaluators used for the B-sets.
pub fn region_sups<'a>(
    values: &'a GameValues,
    intervals: &PreemptionIntervals,
    z_max_bound: f64,
) -> [RegionSup<'a>; 3] {
    region_sups_on_grid(values, intervals, z_max_bound, BSET_POINTS)
}

fn region_sups_on_grid<'a>(
    values: &'a GameValues,
    intervals: &PreemptionIntervals,
    z_max_bound: f64,
    n: usize,
) -> [RegionSup<'a>; 3] {
    let c = values.econ.expected_pi() / values.market.cap_rate();
    let g = values.roots.gamma;
    let tail_threshold = g / (g - 1.0) * values.econ.inv_cost / c;
    let zt = tail_threshold.max(z_max_bound);
    [
        RegionSup::new(
            values,
            region1_start(values, intervals.a1_lo),
            intervals.a1_lo,
            n,
            true,
            None,
        ),
        RegionSup::new(values, intervals.a1_hi, intervals.a2_lo, n, false, None),
        RegionSup::new(values, intervals.a2_hi, z_max_bound, n, false, Some(zt)),
    ]
}

/// Computes `B1`, `B2`, `B3`. The unbounded region is truncated at
/// `z_max_bound` (default `max(10 a2_hi, 2 z3)`), past which the leader value
/// is the Cournot line and is handled analytically.
pub fn compute_b_sets(values: &GameValues, intervals: &PreemptionIntervals, z_max_bound: Option<f64>) -> Result<BSets> {
    compute_b_sets_on_grid(values, intervals, z_max_bound, BSET_POINTS)
}

/// As [`compute_b_sets`] with `points` grid points per region.
pub fn compute_b_sets_on_grid(
    values: &GameValues,
    intervals: &PreemptionIntervals,
    z_max_bound: Option<f64>,
    points: usize,
) -> Result<BSets> {
    if points < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 grid points, got {points}"
        )));
    }
    let z3 = values.follower.low.z3.max(values.follower.high.z_h);
    let bound = z_max_bound.unwrap_or((10.0 * intervals.a2_hi).max(2.0 * z3));
    if bound < z3 || bound <= intervals.a2_hi {
        return Err(Error::InvalidArgument(format!(
            "z_max_bound {bound} must exceed both a2_hi and the last follower threshold {z3}"
        )));
    }
    let sups = region_sups_on_grid(values, intervals, bound, points);
    let ys = |s: &RegionSup, drop_last: bool| -> Vec<f64> {
        let n = s.grid.len() - drop_last as usize;
        s.grid[..n].to_vec()
    };
    let b1 = sups[0].extract(&ys(&sups[0], true));
    let b2 = sups[1].extract(&ys(&sups[1], true));
    let b3 = sups[2].extract(&ys(&sups[2], false));
    let c = values.econ.expected_pi() / values.market.cap_rate();
    let g = values.roots.gamma;
    let tail_threshold = g / (g - 1.0) * values.econ.inv_cost / c;
    let b3_tail = bound >= tail_threshold && b3.contains(bound);
    Ok(BSets {
        b1,
        b2,
        b3,
        z_max_bound: bound,
        b3_tail,
        tail_threshold,
    })
}

/// The asymmetric equilibrium profile: eager firm `i`, patient firm `j`.
///
/// `eager` and `patient` are the intensities as functions of the current
/// demand level, used for display. Subgames use [`EquilibriumProfile::strategies_from`],
/// which accounts for the running-maximum phases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumProfile {
    pub intervals: PreemptionIntervals,
    pub bsets: BSets,
    pub eager: StrategySpec,
    pub patient: StrategySpec,
}

pub fn build_profile(intervals: &PreemptionIntervals, bsets: &BSets) -> EquilibriumProfile {
    let iv = intervals;
    let regions = [
        IntervalSet::single(0.0, iv.a1_lo),
        IntervalSet::single(iv.a1_hi, iv.a2_lo),
        IntervalSet::at_or_above(iv.a2_hi),
    ];
    let sets = [bsets.b1.clone(), bsets.b2.clone(), bsets.b3_full()];
    let mut eager = StrategySpec::new()
        .with(iv.a1(), AlphaRule::Ratio)
        .with(iv.a2(), AlphaRule::Ratio);
    for (region, set) in regions.iter().zip(sets) {
        eager = eager.with(region.clone(), AlphaRule::Indicator(set));
    }
    let patient = StrategySpec::new()
        .with(iv.a1(), AlphaRule::Ratio)
        .with(iv.a2(), AlphaRule::Ratio);
    EquilibriumProfile {
        intervals: *intervals,
        bsets: bsets.clone(),
        eager,
        patient,
    }
}

/// How the profile's time regions are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ProfileReading {
    /// As stated: the phase is fixed by the first times demand reaches the
    /// interval endpoints, i.e. by its running maximum since the subgame began.
    #[default]
    RunningMax,
    /// The rule of whichever region the current demand level lies in.
    CurrentLevel,
}

impl EquilibriumProfile {
    /// The strategy pair in force in the subgame that starts at `z0`.
    ///
    /// Under [`ProfileReading::RunningMax`] each phase change enters `A1` or
    /// `A2` from below, where the firm playing the preemption ratio stops the
    /// game at once. A subgame therefore only plays the phase of its starting
    /// level, and the state-based pair returned here reproduces it up to the
    /// stopping time, also against any unilateral deviation.
    pub fn strategies_from(&self, z0: f64, reading: ProfileReading) -> (StrategySpec, StrategySpec) {
        if reading == ProfileReading::CurrentLevel {
            return (self.eager.clone(), self.patient.clone());
        }
        let iv = &self.intervals;
        let b = &self.bsets;
        if z0 < iv.a1_lo {
            (
                StrategySpec::new()
                    .with(IntervalSet::single(0.0, iv.a1_lo), AlphaRule::Indicator(b.b1.clone()))
                    .with(iv.a1(), AlphaRule::Ratio),
                StrategySpec::new().with(iv.a1(), AlphaRule::Ratio),
            )
        } else if z0 < iv.a1_hi {
            let s = StrategySpec::new().with(iv.a1(), AlphaRule::Ratio);
            (s.clone(), s)
        } else if z0 < iv.a2_lo {
            (
                StrategySpec::new()
                    .with(IntervalSet::single(0.0, iv.a2_lo), AlphaRule::Indicator(b.b2.clone()))
                    .with(iv.a2(), AlphaRule::Ratio),
                StrategySpec::new().with(iv.a2(), AlphaRule::Ratio),
            )
        } else if z0 < iv.a2_hi {
            let s = StrategySpec::new().with(iv.a2(), AlphaRule::Ratio);
            (s.clone(), s)
        } else {
            (StrategySpec::invest_on(b.b3_full()), StrategySpec::never())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandRegion {
    NoInvest,
    PreemptA1,
    Vacuum,
    PreemptA2,
    InvestB,
    InvestB3,
}

impl DemandRegion {
    pub fn label(&self) -> &'static str {
        match self {
            Self::NoInvest => "no_invest",
            Self::PreemptA1 => "preempt_A1",
            Self::Vacuum => "vacuum",
            Self::PreemptA2 => "preempt_A2",
            Self::InvestB => "invest_B",
            Self::InvestB3 => "invest_B3",
        }
    }
}

pub fn classify_demand(z: f64, profile: &EquilibriumProfile) -> DemandRegion {
    let iv = &profile.intervals;
    let b = &profile.bsets;
    if z < iv.a1_lo {
        if b.b1.contains(z) {
            DemandRegion::InvestB
        } else {
            DemandRegion::NoInvest
        }
    } else if z <= iv.a1_hi {
        DemandRegion::PreemptA1
    } else if z < iv.a2_lo {
        if b.b2.contains(z) {
            DemandRegion::InvestB
        } else {
            DemandRegion::Vacuum
        }
    } else if z <= iv.a2_hi {
        DemandRegion::PreemptA2
    } else if b.b3_full().contains(z) {
        DemandRegion::InvestB3
    } else {
        DemandRegion::NoInvest
    }
}

/// Whether investment stops somewhere between the two preemption intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VacuumReport {
    /// `B2` is a proper subset of `[a1_hi, a2_lo)`.
    pub vacuum: bool,
    /// `(a1_hi, a2_lo)` minus `B2`.
    pub vacuum_set: IntervalSet,
    /// Demand below `A1` where nobody invests.
    pub low_no_invest: IntervalSet,
    pub a1: (f64, f64),
    pub a2: (f64, f64),
    pub b2: IntervalSet,
}

fn complement_within(set: &IntervalSet, lo: f64, hi: f64) -> IntervalSet {
    let mut raw = Vec::new();
    let mut cursor = lo;
    for &(a, b) in set.clip(lo, hi).intervals() {
        if a > cursor {
            raw.push((cursor, a));
        }
        cursor = cursor.max(b);
    }
    if cursor < hi {
        raw.push((cursor, hi));
    }
    IntervalSet::from_intervals(raw)
}

pub fn vacuum_report(profile: &EquilibriumProfile) -> VacuumReport {
    let iv = &profile.intervals;
    let b2 = profile.bsets.b2.clone();
    let vacuum_set = complement_within(&b2, iv.a1_hi, iv.a2_lo);
    // Measure-zero leftovers (single points) are not a vacuum.
    let vacuum = vacuum_set.measure() > 1e-9 * iv.a2_lo;
    VacuumReport {
        vacuum,
        vacuum_set,
        low_no_invest: complement_within(&profile.bsets.b1, 0.0, iv.a1_lo),
        a1: (iv.a1_lo, iv.a1_hi),
        a2: (iv.a2_lo, iv.a2_hi),
        b2,
    }
}
