//! Ex-ante leader, follower and Cournot payoffs bundled for one parameter set.

use serde::Serialize;

use crate::error::Result;
use crate::follower::FollowerSolution;
use crate::leader::LeaderSolution;
use crate::params::{char_roots, cournot_value, CharRoots, DerivedCoeffs, EconParams, MarketParams};

/// Solved payoff functions `L`, `F` and `C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameValues {
    pub market: MarketParams,
    pub econ: EconParams,
    pub roots: CharRoots,
    pub coeffs: DerivedCoeffs,
    pub follower: FollowerSolution,
    pub leader: LeaderSolution,
}

impl GameValues {
    pub fn solve(market: &MarketParams, econ: &EconParams) -> Result<Self> {
        market.validate()?;
        econ.validate()?;
        econ.require_symmetric()?;
        let follower = FollowerSolution::solve(market, econ)?;
        let leader = LeaderSolution::new(&follower, market, econ)?;
        Ok(Self {
            market: *market,
            econ: *econ,
            roots: char_roots(market),
            coeffs: DerivedCoeffs::new(market, econ),
            follower,
            leader,
        })
    }

    /// `L(z)`; `z` must be positive.
    pub fn leader(&self, z: f64) -> f64 {
        self.leader.combined.value(z)
    }

    /// `F(z)`; `z` must be positive.
    pub fn follower(&self, z: f64) -> f64 {
        self.follower.combined.value(z)
    }

    pub fn cournot(&self, z: f64) -> f64 {
        cournot_value(z, &self.market, &self.econ)
    }

    /// `L(z) - F(z)`.
    pub fn lead_gap(&self, z: f64) -> f64 {
        self.leader(z) - self.follower(z)
    }

    /// `(L, F, C)` at `z`.
    pub fn triple(&self, z: f64) -> (f64, f64, f64) {
        (self.leader(z), self.follower(z), self.cournot(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::geomspace;

    #[test]
    fn shape_facts_at_reference() {
        let m = MarketParams::new(0.1, 1.2, 1.0).unwrap();
        let e = EconParams::new(1.0, 1.8, 30.0, 10.0, 0.6).unwrap();
        let v = GameValues::solve(&m, &e).unwrap();
        let low = &v.follower.low;
        let (z1, z2, z3) = (low.z1.unwrap(), low.z2.unwrap(), low.z3);
        // On the copy band the leader trails the follower by exactly theta I.
        for z in geomspace(z1, z2, 7) {
            assert!((v.lead_gap(z) + e.theta * e.inv_cost).abs() < 1e-9);
        }
        // Past z3 the leader value is the Cournot line and the follower is ahead.
        for z in geomspace(z3, 10.0 * z3, 9) {
            assert!((v.leader(z) - v.cournot(z)).abs() < 1e-9 * (1.0 + v.cournot(z)));
            assert!(v.lead_gap(z) < 0.0);
        }
        // F dominates C everywhere.
        for z in geomspace(1e-3, 100.0, 200) {
            assert!(v.follower(z) > v.cournot(z));
        }
    }
}
