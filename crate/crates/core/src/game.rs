//! Subgames under region-based strategies.
//!
//! A strategy assigns an investment intensity `alpha in [0, 1]` to each demand
//! level. The game stops at the first time demand enters the closure of
//! `{alpha_i > 0} ∪ {alpha_j > 0}`; the stopping payoffs follow the
//! role-assignment rule in [`w_payoff`]. Mixed outcomes are paid in
//! expectation, so only the stopping time and stopping level are random.

use serde::Serialize;

use crate::equilibrium::{alpha_ratio, EquilibriumProfile, ProfileReading};
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::mc::{expectations, Estimate, PathRecord, SimConfig, TrackOptions};
use crate::numerics::{geomspace, golden_min};
use crate::payoffs::GameValues;

/// How a strategy sets `alpha` on one region.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    Zero,
    One,
    /// 1 on the set, 0 elsewhere.
    Indicator(IntervalSet),
    /// The preemption intensity `(L - F) / (L - C)`; meant for regions where `L >= F`.
    Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Piece {
    pub region: IntervalSet,
    pub rule: AlphaRule,
}

/// Ordered list of region rules; the first region containing `z` decides,
/// and levels outside every region get `alpha = 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StrategySpec {
    pub pieces: Vec<Piece>,
}

impl StrategySpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, region: IntervalSet, rule: AlphaRule) -> Self {
        self.pieces.push(Piece { region, rule });
        self
    }

    pub fn never() -> Self {
        Self::new()
    }

    /// Invest as soon as demand is at least `c`.
    pub fn invest_at_or_above(c: f64) -> Self {
        Self::new().with(IntervalSet::at_or_above(c), AlphaRule::One)
    }

    /// Invest as soon as demand is at most `c`.
    pub fn invest_at_or_below(c: f64) -> Self {
        Self::new().with(IntervalSet::single(0.0, c), AlphaRule::One)
    }

    /// Invest on `set`.
    pub fn invest_on(set: IntervalSet) -> Self {
        Self::new().with(set, AlphaRule::One)
    }

    fn piece_at(&self, z: f64) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.region.contains(z))
    }

    pub fn alpha(&self, z: f64, values: &GameValues) -> Result<f64> {
        Ok(match self.piece_at(z).map(|p| &p.rule) {
            None | Some(AlphaRule::Zero) => 0.0,
            Some(AlphaRule::One) => 1.0,
            Some(AlphaRule::Indicator(s)) => s.contains(z) as u8 as f64,
            Some(AlphaRule::Ratio) => {
                let (l, f, c) = values.triple(z);
                alpha_ratio(l, f, c)?
            }
        })
    }

    /// One-sided slope of `alpha` at `z` in direction `dir` (+1 or -1).
    pub fn slope(&self, z: f64, dir: f64, values: &GameValues) -> Result<f64> {
        let h = 1e-7 * z;
        Ok(((self.alpha(z + dir * h, values)? - self.alpha(z, values)?) / h).max(0.0))
    }

    /// Closure of `{alpha > 0}`.
    pub fn action_set(&self) -> IntervalSet {
        self.pieces.iter().fold(IntervalSet::empty(), |acc, p| {
            let add = match &p.rule {
                AlphaRule::Zero => IntervalSet::empty(),
                AlphaRule::One | AlphaRule::Ratio => p.region.clone(),
                AlphaRule::Indicator(s) => s.intersect(&p.region),
            };
            acc.union(&add)
        })
    }
}

/// Stopping payoffs `(W_i, W_j)` given both intensities.
///
/// Both at 1 gives the Cournot value to each. Otherwise, with a positive
/// sum, firm `i` leads with probability `a_i (1 - a_j) / (a_i + a_j - a_i a_j)`,
/// follows with `a_j (1 - a_i) / (...)` and invests jointly with
/// `a_i a_j / (...)`. When both are 0 the roles are split in proportion to
/// the right derivatives of the intensities.
pub fn w_payoff(
    alpha_i: f64,
    alpha_j: f64,
    dalpha_i: f64,
    dalpha_j: f64,
    l: f64,
    f: f64,
    c: f64,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha_i) || !(0.0..=1.0).contains(&alpha_j) {
        return Err(Error::InvalidArgument(format!(
            "intensities must lie in [0, 1], got ({alpha_i}, {alpha_j})"
        )));
    }
    if alpha_i == 1.0 && alpha_j == 1.0 {
        return Ok((c, c));
    }
    if alpha_i + alpha_j > 0.0 {
        let den = alpha_i + alpha_j - alpha_i * alpha_j;
        let joint = alpha_i * alpha_j * c;
        let lead_i = alpha_i * (1.0 - alpha_j);
        let lead_j = alpha_j * (1.0 - alpha_i);
        return Ok((
            (lead_i * l + lead_j * f + joint) / den,
            (lead_j * l + lead_i * f + joint) / den,
        ));
    }
    if !(dalpha_i >= 0.0 && dalpha_j >= 0.0 && dalpha_i + dalpha_j > 0.0) {
        return Err(Error::UndefinedPayoff(format!(
            "both intensities are zero and the right derivatives ({dalpha_i}, {dalpha_j}) do not break the tie"
        )));
    }
    let s = dalpha_i + dalpha_j;
    Ok(((dalpha_i * l + dalpha_j * f) / s, (dalpha_j * l + dalpha_i * f) / s))
}

/// Payoffs at a stopping level `b`, reached while moving in direction `dir`.
fn stop_payoffs(b: f64, dir: f64, si: &StrategySpec, sj: &StrategySpec, values: &GameValues) -> Result<(f64, f64)> {
    let (l, f, c) = values.triple(b);
    let (ai, aj) = (si.alpha(b, values)?, sj.alpha(b, values)?);
    if ai > 0.0 || aj > 0.0 {
        return w_payoff(ai, aj, 0.0, 0.0, l, f, c);
    }
    let (di, dj) = (si.slope(b, dir, values)?, sj.slope(b, dir, values)?);
    if di + dj > 0.0 {
        return w_payoff(0.0, 0.0, di, dj, l, f, c);
    }
    // Starting on the edge of an action set: look the other way.
    let (di, dj) = (si.slope(b, -dir, values)?, sj.slope(b, -dir, values)?);
    w_payoff(0.0, 0.0, di, dj, l, f, c)
}

/// A subgame reduced to its exit geometry: stop now, or at the edges of the
/// gap `(lo, hi)` around `z0` in the joint action set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedSubgame {
    pub z0: f64,
    pub immediate: Option<(f64, f64)>,
    pub lo: f64,
    pub hi: f64,
    pub at_lo: (f64, f64),
    pub at_hi: (f64, f64),
    /// Neither firm ever invests.
    pub never: bool,
}

pub fn resolve_subgame(z0: f64, si: &StrategySpec, sj: &StrategySpec, values: &GameValues) -> Result<ResolvedSubgame> {
    if !(z0 > 0.0) {
        return Err(Error::InvalidArgument(format!("z0 must be positive, got {z0}")));
    }
    let set = si.action_set().union(&sj.action_set());
    let mut out = ResolvedSubgame {
        z0,
        immediate: None,
        lo: 0.0,
        hi: f64::INFINITY,
        at_lo: (0.0, 0.0),
        at_hi: (0.0, 0.0),
        never: set.is_empty(),
    };
    match set.gap_around(z0) {
        None => out.immediate = Some(stop_payoffs(z0, 1.0, si, sj, values)?),
        Some((lo, hi)) => {
            out.lo = lo;
            out.hi = hi;
            if lo > 0.0 {
                out.at_lo = stop_payoffs(lo, -1.0, si, sj, values)?;
            }
            if hi.is_finite() {
                out.at_hi = stop_payoffs(hi, 1.0, si, sj, values)?;
            }
        }
    }
    Ok(out)
}

impl ResolvedSubgame {
    /// Discounted payoffs on one normalized path; `None` if the horizon came first.
    pub fn sample(&self, path: &PathRecord, r: f64) -> Option<(f64, f64)> {
        if let Some(w) = self.immediate {
            return Some(w);
        }
        if self.never {
            return Some((0.0, 0.0));
        }
        let e = path.first_exit_demand(self.z0, self.lo, self.hi)?;
        let w = if e.upper { self.at_hi } else { self.at_lo };
        let d = (-r * e.time).exp();
        Some((d * w.0, d * w.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Firm {
    /// Firm `i` in the profile.
    Eager,
    /// Firm `j` in the profile.
    Patient,
}

fn pick(w: (f64, f64), firm: Firm) -> f64 {
    match firm {
        Firm::Eager => w.0,
        Firm::Patient => w.1,
    }
}

/// A Monte Carlo output over a list of resolved subgames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubgameOutput {
    Value {
        game: usize,
        firm: Firm,
    },
    /// `V(game a) - V(game b)` on common paths.
    Difference {
        a: usize,
        b: usize,
        firm: Firm,
    },
}

/// Estimates the requested outputs on one shared ensemble.
pub fn estimate_subgames(
    games: &[ResolvedSubgame],
    outputs: &[SubgameOutput],
    values: &GameValues,
    config: &SimConfig,
) -> Result<Vec<Estimate>> {
    let r = values.market.r;
    let opts = TrackOptions::default();
    expectations(config, &values.market, opts, outputs.len(), |path, out, capped| {
        let samples: Vec<Option<(f64, f64)>> = games.iter().map(|g| g.sample(path, r)).collect();
        for (k, o) in outputs.iter().enumerate() {
            match *o {
                SubgameOutput::Value { game, firm } => match samples[game] {
                    Some(w) => out[k] = pick(w, firm),
                    None => capped[k] = true,
                },
                SubgameOutput::Difference { a, b, firm } => {
                    let (wa, wb) = (samples[a], samples[b]);
                    out[k] = wa.map_or(0.0, |w| pick(w, firm)) - wb.map_or(0.0, |w| pick(w, firm));
                    capped[k] = wa.is_none() || wb.is_none();
                }
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgameEstimate {
    pub v_i: Estimate,
    pub v_j: Estimate,
    pub resolved: ResolvedSubgame,
    pub warning: Option<String>,
}

/// `V_i`, `V_j` of the subgame started at demand `z0`.
pub fn simulate_subgame(
    z0: f64,
    si: &StrategySpec,
    sj: &StrategySpec,
    values: &GameValues,
    config: &SimConfig,
) -> Result<SubgameEstimate> {
    let g = resolve_subgame(z0, si, sj, values)?;
    let est = estimate_subgames(
        std::slice::from_ref(&g),
        &[
            SubgameOutput::Value {
                game: 0,
                firm: Firm::Eager,
            },
            SubgameOutput::Value {
                game: 0,
                firm: Firm::Patient,
            },
        ],
        values,
        config,
    )?;
    let warning = est[0].cap_warning().then(|| {
        format!(
            "{:.2}% of paths reached the horizon before either firm invested",
            100.0 * est[0].cap_fraction
        )
    });
    Ok(SubgameEstimate {
        v_i: est[0],
        v_j: est[1],
        resolved: g,
        warning,
    })
}

/// 50 threshold deviations: invest once demand is at or above `c`, or at or
/// below `c`, for 25 geometrically spaced `c` each.
pub fn threshold_family(c_lo: f64, c_hi: f64) -> Vec<StrategySpec> {
    let cs = geomspace(c_lo, c_hi, 25);
    cs.iter()
        .map(|&c| StrategySpec::invest_at_or_above(c))
        .chain(cs.iter().map(|&c| StrategySpec::invest_at_or_below(c)))
        .collect()
}

/// Largest deviation gain found from one starting level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationResult {
    pub z0: f64,
    pub firm: Firm,
    pub profile_value: Estimate,
    /// Gain of the best deviation, estimated on common paths.
    pub max_improvement: Estimate,
    pub best_deviation: usize,
    /// Gain at most `3 SE` plus an absolute floor of `1e-8`.
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub results: Vec<DeviationResult>,
    pub passes: bool,
}

/// Unilateral deviations by `firm` from the profile, at every `z0`.
pub fn deviation_test(
    profile: &EquilibriumProfile,
    reading: ProfileReading,
    firm: Firm,
    family: &[StrategySpec],
    z0s: &[f64],
    values: &GameValues,
    config: &SimConfig,
) -> Result<DeviationReport> {
    deviation_tests(profile, reading, &[firm], family, z0s, values, config)
}

/// As [`deviation_test`] for several firms on one shared ensemble.
pub fn deviation_tests(
    profile: &EquilibriumProfile,
    reading: ProfileReading,
    firms: &[Firm],
    family: &[StrategySpec],
    z0s: &[f64],
    values: &GameValues,
    config: &SimConfig,
) -> Result<DeviationReport> {
    let mut games = Vec::new();
    let mut outputs = Vec::new();
    let mut layout = Vec::new();
    for &z0 in z0s {
        let base = games.len();
        let (eager, patient) = profile.strategies_from(z0, reading);
        games.push(resolve_subgame(z0, &eager, &patient, values)?);
        for &firm in firms {
            let first_out = outputs.len();
            outputs.push(SubgameOutput::Value { game: base, firm });
            for dev in family {
                let g = match firm {
                    Firm::Eager => resolve_subgame(z0, dev, &patient, values)?,
                    Firm::Patient => resolve_subgame(z0, &eager, dev, values)?,
                };
                games.push(g);
                outputs.push(SubgameOutput::Difference {
                    a: games.len() - 1,
                    b: base,
                    firm,
                });
            }
            layout.push((z0, firm, first_out));
        }
    }
    let est = estimate_subgames(&games, &outputs, values, config)?;
    let results: Vec<DeviationResult> = layout
        .into_iter()
        .map(|(z0, firm, k)| {
            let diffs = &est[k + 1..k + 1 + family.len()];
            let (best, gain) = diffs
                .iter()
                .enumerate()
                .max_by(|a, b| (a.1.estimate - 3.0 * a.1.stderr).total_cmp(&(b.1.estimate - 3.0 * b.1.stderr)))
                .map(|(i, e)| (i, *e))
                .unwrap_or((0, Estimate::exact(0.0, config.n_paths)));
            let passes = diffs.iter().all(|d| d.estimate <= 3.0 * d.stderr + 1e-8);
            DeviationResult {
                z0,
                firm,
                profile_value: est[k],
                max_improvement: gain,
                best_deviation: best,
                passes,
            }
        })
        .collect();
    let passes = results.iter().all(|r| r.passes);
    Ok(DeviationReport { results, passes })
}

/// One symmetric candidate and the deviation that beats it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateResult {
    pub name: String,
    pub candidate_value: Estimate,
    pub deviation_value: Estimate,
    pub gain: Estimate,
    /// Gain above `3 SE`, or exactly positive when both values are exact.
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub z0: f64,
    pub sup_leader: f64,
    pub cournot_z0: f64,
    pub candidates: Vec<CandidateResult>,
    pub passes: bool,
}

/// Supremum of `L` on `(0, z_max]`.
pub fn sup_leader(values: &GameValues, z_max: f64) -> f64 {
    let grid = geomspace(z_max * 1e-6, z_max, 8192);
    let (k, _) = grid
        .iter()
        .enumerate()
        .max_by(|a, b| values.leader(*a.1).total_cmp(&values.leader(*b.1)))
        .expect("non-empty grid");
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(grid.len() - 1)];
    let (_, neg) = golden_min(|z| -values.leader(z), a, b, 1e-14);
    (-neg).max(values.leader(grid[k]))
}

/// First level on a 1% geometric scan up from `a2_hi` with `C(z) > sup L` on `(0, a2_hi]`.
pub fn counterexample_level(values: &GameValues, a2_hi: f64, search_to: f64) -> Option<(f64, f64)> {
    let s = sup_leader(values, a2_hi);
    let mut z = a2_hi;
    while z <= search_to {
        if values.cournot(z) > s {
            return Some((z, s));
        }
        z *= 1.01;
    }
    None
}

/// The three symmetric candidate classes at `z0` and their profitable deviations.
///
/// * never invest: deviate by investing now;
/// * invest jointly at a level where `F > L` (here `1.5 z0`): deviate by
///   never investing there;
/// * invest jointly on `A2`, where `F <= L`: deviate by investing now.
pub fn symmetric_counterexample(
    z0: f64,
    profile: &EquilibriumProfile,
    values: &GameValues,
    config: &SimConfig,
) -> Result<CounterexampleReport> {
    let a2_hi = profile.intervals.a2_hi;
    let sup_l = sup_leader(values, a2_hi);
    if !(values.cournot(z0) > sup_l) {
        return Err(Error::InvalidArgument(format!(
            "C({z0}) = {} does not exceed sup L = {sup_l} on (0, a2_hi]",
            values.cournot(z0)
        )));
    }
    let never = StrategySpec::never();
    let now = StrategySpec::invest_at_or_above(z0);
    let c_joint = 1.5 * z0;
    let joint_high = StrategySpec::invest_at_or_above(c_joint);
    let joint_a2 = StrategySpec::invest_on(profile.intervals.a2());
    let games = vec![
        resolve_subgame(z0, &never, &never, values)?,
        resolve_subgame(z0, &now, &never, values)?,
        resolve_subgame(z0, &joint_high, &joint_high, values)?,
        resolve_subgame(z0, &never, &joint_high, values)?,
        resolve_subgame(z0, &joint_a2, &joint_a2, values)?,
        resolve_subgame(z0, &now, &joint_a2, values)?,
    ];
    let firm = Firm::Eager;
    let mut outputs = Vec::new();
    for k in 0..3 {
        let (cand, dev) = (2 * k, 2 * k + 1);
        outputs.push(SubgameOutput::Value { game: cand, firm });
        outputs.push(SubgameOutput::Value { game: dev, firm });
        outputs.push(SubgameOutput::Difference { a: dev, b: cand, firm });
    }
    let est = estimate_subgames(&games, &outputs, values, config)?;
    let names = [
        "never invest; deviation: invest now",
        "joint investment where F > L; deviation: never invest there",
        "joint investment on A2 where F <= L; deviation: invest now",
    ];
    let candidates: Vec<CandidateResult> = names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let gain = est[3 * k + 2];
            CandidateResult {
                name: name.to_string(),
                candidate_value: est[3 * k],
                deviation_value: est[3 * k + 1],
                gain,
                passes: gain.estimate > 3.0 * gain.stderr && gain.estimate > 0.0,
            }
        })
        .collect();
    let passes = candidates.iter().all(|c| c.passes);
    Ok(CounterexampleReport {
        z0,
        sup_leader: sup_l,
        cournot_z0: values.cournot(z0),
        candidates,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payoff_rule_examples() {
        assert_eq!(w_payoff(1.0, 1.0, 0.0, 0.0, 4.0, 2.0, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(w_payoff(1.0, 0.0, 0.0, 0.0, 4.0, 2.0, 1.0).unwrap(), (4.0, 2.0));
        let (wi, wj) = w_payoff(0.5, 0.5, 0.0, 0.0, 4.0, 2.0, 0.0).unwrap();
        assert!((wi - 2.0).abs() < 1e-15 && (wj - 2.0).abs() < 1e-15);
        let (wi, wj) = w_payoff(0.0, 0.0, 3.0, 1.0, 4.0, 2.0, 0.0).unwrap();
        assert!((wi - 3.5).abs() < 1e-15 && (wj - 2.5).abs() < 1e-15);
        assert!(matches!(
            w_payoff(0.0, 0.0, 0.0, 0.0, 4.0, 2.0, 0.0),
            Err(Error::UndefinedPayoff(_))
        ));
        assert!(w_payoff(1.2, 0.0, 0.0, 0.0, 4.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn payoff_rule_symmetry() {
        for &(ai, aj) in &[(0.3, 0.7), (1.0, 0.2), (0.0, 0.9), (0.5, 0.5)] {
            let (l, f, c) = (5.0, 3.0, -1.0);
            let (wi, wj) = w_payoff(ai, aj, 0.0, 0.0, l, f, c).unwrap();
            let (vi, vj) = w_payoff(aj, ai, 0.0, 0.0, l, f, c).unwrap();
            assert!((wi - vj).abs() < 1e-14 && (wj - vi).abs() < 1e-14);
        }
        for a in [0.1, 0.5, 0.9, 1.0] {
            let (l, f, c) = (5.0, 3.0, -1.0);
            let (wi, wj) = w_payoff(a, a, 0.0, 0.0, l, f, c).unwrap();
            let expect = ((1.0 - a) * (l + f) + a * c) / (2.0 - a);
            assert!((wi - wj).abs() < 1e-14 && (wi - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn unilateral_indifference_in_preemption_band() {
        let (l, f, c) = (6.0, 2.5, -3.0);
        let aj = (l - f) / (l - c);
        for k in 0..=20 {
            let ai = k as f64 / 20.0;
            let (wi, _) = w_payoff(ai, aj, 0.0, 0.0, l, f, c).unwrap();
            assert!((wi - f).abs() < 1e-12, "alpha_i={ai}: {wi}");
        }
    }

    #[test]
    fn strategy_specs() {
        let s = StrategySpec::invest_at_or_above(3.0);
        assert_eq!(s.action_set(), IntervalSet::at_or_above(3.0));
        let t = StrategySpec::new()
            .with(IntervalSet::single(1.0, 2.0), AlphaRule::Zero)
            .with(
                IntervalSet::single(0.0, 5.0),
                AlphaRule::Indicator(IntervalSet::single(1.5, 4.0)),
            );
        assert_eq!(t.action_set(), IntervalSet::single(1.5, 4.0));
        assert!(StrategySpec::never().action_set().is_empty());
        assert_eq!(threshold_family(1.0, 10.0).len(), 50);
    }

    fn reference() -> GameValues {
        let m = crate::params::MarketParams::new(0.1, 1.2, 1.0).unwrap();
        let e = crate::params::EconParams::new(1.0, 1.8, 30.0, 10.0, 0.6).unwrap();
        GameValues::solve(&m, &e).unwrap()
    }

    fn small_sim() -> SimConfig {
        SimConfig {
            n_paths: 20_000,
            dt: 2e-3,
            horizon: 20.0,
            seed: 11,
        }
    }

    #[test]
    fn preemption_band_start_is_symmetric() {
        use crate::equilibrium::{build_profile, compute_b_sets, find_intervals};
        let v = reference();
        let iv = find_intervals(&v, None).unwrap();
        let profile = build_profile(&iv, &compute_b_sets(&v, &iv, None).unwrap());
        let z0 = 0.5 * (iv.a2_lo + iv.a2_hi);
        let (si, sj) = profile.strategies_from(z0, ProfileReading::RunningMax);
        let out = simulate_subgame(z0, &si, &sj, &v, &small_sim()).unwrap();
        assert_eq!(out.v_i.estimate, out.v_j.estimate);
        assert!((out.v_i.estimate - v.follower(z0)).abs() < 1e-10);
    }

    #[test]
    fn threshold_start_matches_discounted_boundary() {
        let v = reference();
        let (z0, c) = (2.0, 4.0);
        let gamma = v.roots.gamma;
        let out = simulate_subgame(
            z0,
            &StrategySpec::invest_at_or_above(c),
            &StrategySpec::never(),
            &v,
            &small_sim(),
        )
        .unwrap();
        let d = (z0 / c).powf(gamma);
        assert!(out.v_i.agrees_with(d * v.leader(c), 4.0), "{:?}", out.v_i);
        assert!(out.v_j.agrees_with(d * v.follower(c), 4.0), "{:?}", out.v_j);
    }

    #[test]
    fn deviation_to_the_profile_gains_nothing() {
        use crate::equilibrium::{build_profile, compute_b_sets, find_intervals};
        let v = reference();
        let iv = find_intervals(&v, None).unwrap();
        let profile = build_profile(&iv, &compute_b_sets(&v, &iv, None).unwrap());
        let z0 = 20.0;
        let (eager, _) = profile.strategies_from(z0, ProfileReading::RunningMax);
        let rep = deviation_test(
            &profile,
            ProfileReading::RunningMax,
            Firm::Eager,
            &[eager],
            &[z0],
            &v,
            &small_sim().with_paths(2_000),
        )
        .unwrap();
        assert_eq!(rep.results[0].max_improvement.estimate, 0.0);
        assert!(rep.passes);
    }

    #[test]
    fn investing_now_against_waiters_gains_the_leader_value() {
        let v = reference();
        let z0 = 3.0;
        let wait = resolve_subgame(z0, &StrategySpec::never(), &StrategySpec::never(), &v).unwrap();
        let now = resolve_subgame(
            z0,
            &StrategySpec::invest_at_or_above(z0 / 2.0),
            &StrategySpec::never(),
            &v,
        )
        .unwrap();
        let gain = estimate_subgames(
            &[now, wait],
            &[SubgameOutput::Difference {
                a: 0,
                b: 1,
                firm: Firm::Eager,
            }],
            &v,
            &small_sim().with_paths(1_000),
        )
        .unwrap();
        assert!((gain[0].estimate - v.leader(z0)).abs() < 1e-12);
    }
}
