//! Leader values.
//!
//! The leader earns `pi z` forever plus the monopoly benefit `xi z` until the
//! follower moves. Both the direct formulas and a [`PiecewiseValue`] form
//! are provided; tests check that they agree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::follower::{FollowerHighSolution, FollowerLowSolution, FollowerRegime, FollowerSolution};
use crate::gbm::{harmonic_interpolant, two_sided_functionals};
use crate::params::{char_roots, CharRoots, EconParams, MarketParams};
use crate::piecewise::{PiecewiseValue, Segment};

/// Discounted monopoly benefit collected while demand stays in `(z_lo, z_hi)`.
pub fn monopoly_term(
    z: f64,
    z_lo: f64,
    z_hi: f64,
    market: &MarketParams,
    econ: &EconParams,
    roots: &CharRoots,
) -> Result<f64> {
    let f = two_sided_functionals(z, z_lo, z_hi, market, roots)?;
    Ok(econ.xi / market.cap_rate() * (z - z_lo * f.disc_lower - z_hi * f.disc_upper))
}

/// Monopoly benefit collected until demand first rises to `z_star`.
fn benefit_below(z: f64, z_star: f64, roots: &CharRoots, k: f64) -> f64 {
    k * z * (1.0 - (z / z_star).powf(roots.gamma - 1.0))
}

fn below_segment(slope: f64, z_star: f64, k: f64, cost: f64) -> Segment {
    Segment::new(-k * z_star, 0.0, slope + k, -cost).at_pivot(z_star)
}

/// `L_L(z)` from the direct formulas.
pub fn leader_low(z: f64, follower_low: &FollowerLowSolution, market: &MarketParams, econ: &EconParams) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!("demand must be positive, got {z}")));
    }
    let roots = char_roots(market);
    let cap = market.cap_rate();
    let k = econ.xi / cap;
    let base = econ.pi_low * z / cap - econ.inv_cost;
    Ok(match (follower_low.z1, follower_low.z2) {
        (Some(z1), Some(z2)) => {
            let z3 = follower_low.z3;
            if z < z1 {
                base + benefit_below(z, z1, &roots, k)
            } else if z > z2 && z < z3 {
                base + monopoly_term(z, z2, z3, market, econ, &roots)?
            } else {
                base
            }
        }
        _ if z < follower_low.z3 => base + benefit_below(z, follower_low.z3, &roots, k),
        _ => base,
    })
}

/// `L_H(z)` from the direct formula.
pub fn leader_high(
    z: f64,
    follower_high: &FollowerHighSolution,
    market: &MarketParams,
    econ: &EconParams,
) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!("demand must be positive, got {z}")));
    }
    let roots = char_roots(market);
    let cap = market.cap_rate();
    let base = econ.pi_high * z / cap - econ.inv_cost;
    Ok(if z < follower_high.z_h {
        base + benefit_below(z, follower_high.z_h, &roots, econ.xi / cap)
    } else {
        base
    })
}

/// Leader values in both outcomes and their equal-weight combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderSolution {
    pub low_value: PiecewiseValue,
    pub high_value: PiecewiseValue,
    pub combined: PiecewiseValue,
    /// The monopoly term on the follower's inner continuation band, if any.
    pub monopoly: Option<PiecewiseValue>,
}

impl LeaderSolution {
    pub fn new(follower: &FollowerSolution, market: &MarketParams, econ: &EconParams) -> Result<Self> {
        econ.require_symmetric()?;
        let roots = char_roots(market);
        let cap = market.cap_rate();
        let k = econ.xi / cap;
        let (a1, cost) = (econ.pi_low / cap, econ.inv_cost);
        let low = &follower.low;
        let (low_value, monopoly) = match (low.regime, low.z1, low.z2) {
            (FollowerRegime::InnerWait, Some(z1), Some(z2)) => {
                let z3 = low.z3;
                let (pu, qu) = harmonic_interpolant(z2, z3, &roots);
                let (pl, ql) = harmonic_interpolant(z3, z2, &roots);
                let m = Segment::new(-k * (z2 * pl + z3 * pu), -k * (z2 * ql + z3 * qu), k, 0.0).at_pivot(z2);
                let line = Segment::affine(a1, -cost);
                let value = PiecewiseValue::new(
                    roots,
                    vec![z1, z2, z3],
                    vec![below_segment(a1, z1, k, cost), line, line.plus(&m), line],
                )?;
                let mono = PiecewiseValue::new(roots, vec![z2, z3], vec![Segment::default(), m, Segment::default()])?;
                (value, Some(mono))
            }
            _ => (
                PiecewiseValue::new(
                    roots,
                    vec![low.z3],
                    vec![below_segment(a1, low.z3, k, cost), Segment::affine(a1, -cost)],
                )?,
                None,
            ),
        };
        let ah = econ.pi_high / cap;
        let z_h = follower.high.z_h;
        let high_value = PiecewiseValue::new(
            roots,
            vec![z_h],
            vec![below_segment(ah, z_h, k, cost), Segment::affine(ah, -cost)],
        )?;
        let combined = PiecewiseValue::linear_combination(&[(0.5, &high_value), (0.5, &low_value)])?;
        Ok(Self {
            low_value,
            high_value,
            combined,
            monopoly,
        })
    }
}

/// Ex-ante leader value `L = (L_H + L_L) / 2`.
pub fn leader_value(z: f64, sol: &LeaderSolution, econ: &EconParams) -> Result<f64> {
    econ.require_symmetric()?;
    Ok(0.5 * sol.high_value.eval(z)? + 0.5 * sol.low_value.eval(z)?)
}
