//! The follower's optimal-stopping problem once the leader has invested.
//!
//! After the leader's technology reveals its profit rate the follower either
//! copies it at cost `K1 = (1 - theta) I` or buys the untested technology at
//! cost `K2 = I`. With a high-profit leader copying always wins and the
//! problem has a single threshold `z_h`. With a low-profit leader the two
//! stopped rewards `a1 z - K1` and `a2 z - K2` cross at the kink `z_hat`, and
//! the continuation region either splits in two (copy on `[z1, z2]`,
//! innovate on `[z3, inf)`) or collapses to a single innovation threshold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::numerics::{bisect, geomspace, grid_min};
use crate::params::{char_roots, CharRoots, DerivedCoeffs, EconParams, MarketParams};
use crate::piecewise::{Junction, PiecewiseValue, Segment};

const TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FollowerRegime {
    /// Copy on `[z1, z2]`, innovate on `[z3, inf)`, wait elsewhere.
    InnerWait,
    /// Innovate on `[z3, inf)`, wait below.
    AlwaysInnovate,
}

/// `(a2/a1)^{gamma/(gamma-1)}`, the quantity that selects the regime.
pub fn regime_ratio(market: &MarketParams, econ: &EconParams) -> f64 {
    let roots = char_roots(market);
    let d = DerivedCoeffs::new(market, econ);
    (d.a2 / d.a1).powf(roots.gamma / (roots.gamma - 1.0))
}

pub fn classify_regime(market: &MarketParams, econ: &EconParams) -> FollowerRegime {
    let d = DerivedCoeffs::new(market, econ);
    if regime_ratio(market, econ) >= d.k2 / d.k1 {
        FollowerRegime::AlwaysInnovate
    } else {
        FollowerRegime::InnerWait
    }
}

/// Solution of the low-profit follower problem.
///
/// In the `AlwaysInnovate` regime only `z3` and `b0` are populated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FollowerLowSolution {
    pub regime: FollowerRegime,
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    pub z3: f64,
    pub a0: Option<f64>,
    pub b0: f64,
    /// Coefficient in `b0 z^gamma - c0 z^beta` on `(z2, z3)`. The raw
    /// coefficients can overflow when `|beta|` is large; `value` is stored
    /// relative to the thresholds and stays finite.
    pub c0: Option<f64>,
    /// Newton iterations used (0 for closed forms).
    pub iterations: usize,
    pub value: PiecewiseValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FollowerHighSolution {
    pub z_h: f64,
    pub value: PiecewiseValue,
}

struct LowProblem {
    roots: CharRoots,
    d: DerivedCoeffs,
}

impl LowProblem {
    /// `(B, C)` in `B (z/z2)^gamma - C (z/z2)^beta` from value matching at
    /// `z2` (copy line) and `z3` (innovate line).
    fn coefficients(&self, z2: f64, z3: f64) -> (f64, f64) {
        let (g, b) = (self.roots.gamma, self.roots.beta);
        let t = z3 / z2;
        let (r2, r3) = (self.d.a1 * z2 - self.d.k1, self.d.a2 * z3 - self.d.k2);
        let (tg, tb) = (t.powf(g), t.powf(b));
        let c = (r3 - r2 * tg) / (tg - tb);
        (c + r2, c)
    }

    fn slope(&self, bc: (f64, f64), z2: f64, z: f64) -> f64 {
        let (g, b) = (self.roots.gamma, self.roots.beta);
        let x = z / z2;
        (g * bc.0 * x.powf(g) - b * bc.1 * x.powf(b)) / z
    }

    /// Relative smooth-pasting residuals at `(z2, z3)`.
    fn residuals(&self, z2: f64, z3: f64) -> [f64; 2] {
        let bc = self.coefficients(z2, z3);
        [
            (self.slope(bc, z2, z2) - self.d.a1) / self.d.a1,
            (self.slope(bc, z2, z3) - self.d.a2) / self.d.a2,
        ]
    }

    /// Newton on `(ln z2, ln z3)` with a forward-difference Jacobian and backtracking.
    fn newton(&self, z2: f64, z3: f64) -> Option<(f64, f64, usize)> {
        let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
        let mut x = [z2.ln(), z3.ln()];
        let mut r = self.residuals(z2, z3);
        for it in 0..MAX_ITER {
            if !(norm(r) >= TOL) {
                return norm(r).is_finite().then(|| (x[0].exp(), x[1].exp(), it));
            }
            let h = 1e-7;
            let r0 = self.residuals((x[0] + h).exp(), x[1].exp());
            let r1 = self.residuals(x[0].exp(), (x[1] + h).exp());
            let j = [
                [(r0[0] - r[0]) / h, (r1[0] - r[0]) / h],
                [(r0[1] - r[1]) / h, (r1[1] - r[1]) / h],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if !(det.abs() > 0.0) || !det.is_finite() {
                return None;
            }
            let dx = [
                -(j[1][1] * r[0] - j[0][1] * r[1]) / det,
                -(-j[1][0] * r[0] + j[0][0] * r[1]) / det,
            ];
            let mut lam = 1.0;
            loop {
                let cand = [x[0] + lam * dx[0], x[1] + lam * dx[1]];
                let rc = self.residuals(cand[0].exp(), cand[1].exp());
                if cand[0] < cand[1] && norm(rc) < norm(r) {
                    x = cand;
                    r = rc;
                    break;
                }
                lam *= 0.5;
                if lam < 1e-10 {
                    // No descent left: accept if already at round-off level.
                    return (norm(r) < 1e3 * TOL).then(|| (x[0].exp(), x[1].exp(), it));
                }
            }
        }
        (norm(r) < TOL).then(|| (x[0].exp(), x[1].exp(), MAX_ITER))
    }

    /// The function `B (z/z2)^gamma - C (z/z2)^beta` tangent to the copy line at `z2`.
    fn tangent_at(&self, z2: f64) -> (f64, f64) {
        let (g, b) = (self.roots.gamma, self.roots.beta);
        let (v, s) = (self.d.a1 * z2 - self.d.k1, self.d.a1 * z2);
        ((s - b * v) / (g - b), (s - g * v) / (g - b))
    }

    /// Lowest gap between the copy-tangent function and the innovate line
    /// above `z2`, with its location.
    fn tangent_gap(&self, z2: f64, z_top: f64) -> (f64, f64) {
        let (bb, cc) = self.tangent_at(z2);
        let (g, b) = (self.roots.gamma, self.roots.beta);
        let f = |z: f64| {
            let x = z / z2;
            bb * x.powf(g) - cc * x.powf(b) - self.d.a2 * z + self.d.k2
        };
        let (z, v) = grid_min(f, &geomspace(z2, z_top.max(2.0 * z2), 600));
        (v, z)
    }

    /// Bracketing fallback: the copy-tangent family touches the innovate line
    /// exactly at the solution.
    fn bracket(&self, z1: f64) -> Result<(f64, f64)> {
        let kink = self.d.kink();
        let z_top = 50.0 * self.roots.gamma / (self.roots.gamma - 1.0) * self.d.k2 / self.d.a2;
        if !(self.tangent_gap(z1, z_top).0 > 0.0 && self.tangent_gap(kink, z_top).0 < 0.0) {
            return Err(Error::SolverFailure(
                "smooth-pasting system has no bracketed solution on (z1, kink)".into(),
            ));
        }
        let z2 = bisect(|z| self.tangent_gap(z, z_top).0, z1, kink, 1e-15);
        Ok((z2, self.tangent_gap(z2, z_top).1))
    }
}

/// Solves the low-profit follower problem.
pub fn solve_low(market: &MarketParams, econ: &EconParams) -> Result<FollowerLowSolution> {
    market.validate()?;
    econ.validate()?;
    econ.require_symmetric()?;
    let roots = char_roots(market);
    let d = DerivedCoeffs::new(market, econ);
    let g = roots.gamma;
    let z3_innovate = g / (g - 1.0) * d.k2 / d.a2;

    if classify_regime(market, econ) == FollowerRegime::AlwaysInnovate {
        let at_z3 = d.k2 / (g - 1.0);
        let b0 = at_z3 * z3_innovate.powf(-g);
        let value = PiecewiseValue::new(
            roots,
            vec![z3_innovate],
            vec![
                Segment::new(at_z3, 0.0, 0.0, 0.0).at_pivot(z3_innovate),
                Segment::affine(d.a2, -d.k2),
            ],
        )?;
        return Ok(FollowerLowSolution {
            regime: FollowerRegime::AlwaysInnovate,
            z1: None,
            z2: None,
            z3: z3_innovate,
            a0: None,
            b0,
            c0: None,
            iterations: 0,
            value,
        });
    }

    let z1 = g / (g - 1.0) * d.k1 / d.a1;
    let at_z1 = d.k1 / (g - 1.0);
    let a0 = at_z1 * z1.powf(-g);
    let problem = LowProblem { roots, d };
    let ordered = |s: &(f64, f64, usize)| z1 <= s.0 && s.0 <= s.1;
    let (z2, z3, iterations) = match problem.newton(1.5 * z1, z3_innovate).filter(ordered) {
        Some(s) => s,
        None => {
            let (z2, z3) = problem.bracket(z1)?;
            problem.newton(z2, z3).unwrap_or((z2, z3, MAX_ITER))
        }
    };
    if !(z1 <= z2 && z2 <= z3) {
        return Err(Error::InconsistentParameters(format!(
            "thresholds out of order: z1={z1}, z2={z2}, z3={z3}"
        )));
    }
    let res = problem.residuals(z2, z3);
    if res.iter().any(|r| !(r.abs() < 1e-10)) {
        return Err(Error::SolverFailure(format!(
            "smooth-pasting residuals {res:?} after {iterations} iterations"
        )));
    }
    let (bp, cp) = problem.coefficients(z2, z3);
    let (b0, c0) = (bp * z2.powf(-g), cp * z2.powf(-roots.beta));
    let value = PiecewiseValue::new(
        roots,
        vec![z1, z2, z3],
        vec![
            Segment::new(at_z1, 0.0, 0.0, 0.0).at_pivot(z1),
            Segment::affine(d.a1, -d.k1),
            Segment::new(bp, -cp, 0.0, 0.0).at_pivot(z2),
            Segment::affine(d.a2, -d.k2),
        ],
    )?;
    Ok(FollowerLowSolution {
        regime: FollowerRegime::InnerWait,
        z1: Some(z1),
        z2: Some(z2),
        z3,
        a0: Some(a0),
        b0,
        c0: Some(c0),
        iterations,
        value,
    })
}

impl FollowerLowSolution {
    pub fn eval(&self, z: f64) -> Result<f64> {
        self.value.eval(z)
    }

    /// Demand levels at which the follower acts.
    pub fn stopping_region(&self) -> IntervalSet {
        match (self.z1, self.z2) {
            (Some(z1), Some(z2)) => IntervalSet::from_intervals(vec![(z1, z2), (self.z3, f64::INFINITY)]),
            _ => IntervalSet::at_or_above(self.z3),
        }
    }

    /// Payoff collected when stopping at `z`.
    pub fn stopped_reward(&self, z: f64, d: &DerivedCoeffs) -> f64 {
        match (self.z1, self.z2) {
            (Some(z1), Some(z2)) if z1 <= z && z <= z2 => d.a1 * z - d.k1,
            _ => d.a2 * z - d.k2,
        }
    }

    pub fn junctions(&self) -> Vec<Junction> {
        (0..self.value.breakpoints().len())
            .map(|k| self.value.junction(k))
            .collect()
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.value.breakpoints().to_vec()
    }
}

pub fn eval_low(z: f64, sol: &FollowerLowSolution) -> Result<f64> {
    sol.eval(z)
}

pub fn solve_high(market: &MarketParams, econ: &EconParams) -> Result<FollowerHighSolution> {
    market.validate()?;
    econ.validate()?;
    let roots = char_roots(market);
    let g = roots.gamma;
    let k1 = econ.copy_cost();
    let slope = econ.pi_high / market.cap_rate();
    let z_h = g / (g - 1.0) * k1 / slope;
    let value = PiecewiseValue::new(
        roots,
        vec![z_h],
        vec![
            Segment::new(k1 / (g - 1.0), 0.0, 0.0, 0.0).at_pivot(z_h),
            Segment::affine(slope, -k1),
        ],
    )?;
    Ok(FollowerHighSolution { z_h, value })
}

impl FollowerHighSolution {
    pub fn eval(&self, z: f64) -> Result<f64> {
        self.value.eval(z)
    }

    pub fn stopping_region(&self) -> IntervalSet {
        IntervalSet::at_or_above(self.z_h)
    }

    pub fn junction(&self) -> Junction {
        self.value.junction(0)
    }
}

pub fn eval_high(z: f64, sol: &FollowerHighSolution) -> Result<f64> {
    sol.eval(z)
}

/// Both follower solutions and their equal-weight combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FollowerSolution {
    pub low: FollowerLowSolution,
    pub high: FollowerHighSolution,
    pub combined: PiecewiseValue,
}

impl FollowerSolution {
    pub fn solve(market: &MarketParams, econ: &EconParams) -> Result<Self> {
        let low = solve_low(market, econ)?;
        let high = solve_high(market, econ)?;
        let combined = PiecewiseValue::linear_combination(&[(0.5, &high.value), (0.5, &low.value)])?;
        Ok(Self { low, high, combined })
    }
}

/// Ex-ante follower value `F = (F_H + F_L) / 2`.
pub fn follower_value(
    z: f64,
    low: &FollowerLowSolution,
    high: &FollowerHighSolution,
    econ: &EconParams,
) -> Result<f64> {
    econ.require_symmetric()?;
    Ok(0.5 * high.eval(z)? + 0.5 * low.eval(z)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    High,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FollowerAction {
    Wait,
    Copy,
    Innovate,
}

pub fn follower_policy(z: f64, outcome: Outcome, sol: &FollowerSolution) -> FollowerAction {
    match outcome {
        Outcome::High if z >= sol.high.z_h => FollowerAction::Copy,
        Outcome::High => FollowerAction::Wait,
        Outcome::Low => match (sol.low.z1, sol.low.z2) {
            (Some(z1), Some(z2)) if z1 <= z && z <= z2 => FollowerAction::Copy,
            _ if z >= sol.low.z3 => FollowerAction::Innovate,
            _ => FollowerAction::Wait,
        },
    }
}
