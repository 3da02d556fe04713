//! Model primitives: the demand process, the economic parameters, the
//! characteristic roots of the discounted GBM generator and the Cournot value.
//!
//! Demand follows `dZ = alpha Z dt + sigma Z dB`. All money and time units
//! are abstract.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Demand process and discounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    /// Demand drift rate.
    pub alpha: f64,
    /// Demand volatility.
    pub sigma: f64,
    /// Discount rate.
    pub r: f64,
}

impl MarketParams {
    pub fn new(alpha: f64, sigma: f64, r: f64) -> Result<Self> {
        let m = Self { alpha, sigma, r };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma <= 0.0 {
            return Err(invalid("sigma", format!("must be > 0, got {}", self.sigma)));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(invalid("alpha", format!("must be >= 0, got {}", self.alpha)));
        }
        if !self.r.is_finite() || self.r <= self.alpha {
            return Err(invalid(
                "r",
                format!("must exceed alpha = {}, got {}", self.alpha, self.r),
            ));
        }
        Ok(())
    }

    /// `r - alpha`, the capitalisation rate of a perpetual demand-linear flow.
    pub fn cap_rate(&self) -> f64 {
        self.r - self.alpha
    }

    /// Drift of `ln Z`.
    pub fn log_drift(&self) -> f64 {
        self.alpha - 0.5 * self.sigma * self.sigma
    }
}

/// Profit rates, monopoly benefit and investment cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconParams {
    pub pi_low: f64,
    pub pi_high: f64,
    /// Extra profit rate the leader earns until the follower invests.
    pub xi: f64,
    pub inv_cost: f64,
    /// Fraction of the investment cost saved by copying the leader.
    pub theta: f64,
    /// Probability that the leader's technology turns out high-profit.
    pub p_high: f64,
}

impl EconParams {
    pub const DEFAULT_P_HIGH: f64 = 0.5;

    pub fn new(pi_low: f64, pi_high: f64, xi: f64, inv_cost: f64, theta: f64) -> Result<Self> {
        let e = Self {
            pi_low,
            pi_high,
            xi,
            inv_cost,
            theta,
            p_high: Self::DEFAULT_P_HIGH,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn with_p_high(mut self, p_high: f64) -> Result<Self> {
        self.p_high = p_high;
        self.validate()?;
        Ok(self)
    }

    pub fn with_xi(mut self, xi: f64) -> Result<Self> {
        self.xi = xi;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pi_low.is_finite() && self.pi_low > 0.0) {
            return Err(invalid("pi_low", format!("must be > 0, got {}", self.pi_low)));
        }
        if !(self.pi_high.is_finite() && self.pi_high > self.pi_low) {
            return Err(invalid(
                "pi_high",
                format!("must exceed pi_low = {}, got {}", self.pi_low, self.pi_high),
            ));
        }
        if !(self.xi.is_finite() && self.xi >= 0.0) {
            return Err(invalid("xi", format!("must be >= 0, got {}", self.xi)));
        }
        if !(self.inv_cost.is_finite() && self.inv_cost > 0.0) {
            return Err(invalid("inv_cost", format!("must be > 0, got {}", self.inv_cost)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(invalid("theta", format!("must lie in (0, 1), got {}", self.theta)));
        }
        if !(self.p_high > 0.0 && self.p_high < 1.0) {
            return Err(invalid("p_high", format!("must lie in (0, 1), got {}", self.p_high)));
        }
        Ok(())
    }

    /// Expected profit rate of an untested technology.
    pub fn expected_pi(&self) -> f64 {
        self.p_high * self.pi_high + (1.0 - self.p_high) * self.pi_low
    }

    /// Cost of copying the leader's technology.
    pub fn copy_cost(&self) -> f64 {
        (1.0 - self.theta) * self.inv_cost
    }

    /// The leader/follower closed forms are only valid for equally likely outcomes.
    pub fn require_symmetric(&self) -> Result<()> {
        if (self.p_high - 0.5).abs() > 1e-15 {
            return Err(Error::UnsupportedProbability(self.p_high));
        }
        Ok(())
    }
}

/// Roots of `0.5 sigma^2 x (x - 1) + alpha x - r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharRoots {
    pub gamma: f64,
    pub beta: f64,
}

impl CharRoots {
    /// `0.5 sigma^2 x (x - 1) + alpha x - r`.
    pub fn quadratic(market: &MarketParams, x: f64) -> f64 {
        0.5 * market.sigma * market.sigma * x * (x - 1.0) + market.alpha * x - market.r
    }

    /// Residual of the quadratic at `x` relative to the magnitude of its terms.
    pub fn relative_residual(market: &MarketParams, x: f64) -> f64 {
        let s2 = market.sigma * market.sigma;
        let scale = (0.5 * s2 * x * x).abs() + (0.5 * s2 * x).abs() + (market.alpha * x).abs() + market.r;
        Self::quadratic(market, x).abs() / scale
    }
}

pub fn char_roots(market: &MarketParams) -> CharRoots {
    let s2 = market.sigma * market.sigma;
    let b = market.alpha / s2 - 0.5;
    let disc = (b * b + 2.0 * market.r / s2).sqrt();
    // Product of roots is -2r/sigma^2; recover the small root from it to
    // avoid cancellation.
    let gamma = -b + disc;
    let beta = -2.0 * market.r / (s2 * gamma);
    CharRoots { gamma, beta }
}

/// Capitalised profit slopes and investment costs of the follower's two options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCoeffs {
    /// Slope of the copy payoff, `pi_low / (r - alpha)`.
    pub a1: f64,
    /// Slope of the innovate payoff, `E[pi] / (r - alpha)`.
    pub a2: f64,
    /// Copy cost.
    pub k1: f64,
    /// Innovation cost.
    pub k2: f64,
}

impl DerivedCoeffs {
    pub fn new(market: &MarketParams, econ: &EconParams) -> Self {
        let cap = market.cap_rate();
        Self {
            a1: econ.pi_low / cap,
            a2: econ.expected_pi() / cap,
            k1: econ.copy_cost(),
            k2: econ.inv_cost,
        }
    }

    /// Demand level where copying and innovating pay the same.
    pub fn kink(&self) -> f64 {
        (self.k2 - self.k1) / (self.a2 - self.a1)
    }
}

/// Value of a simultaneous (Cournot) investment at demand `z`.
pub fn cournot_value(z: f64, market: &MarketParams, econ: &EconParams) -> f64 {
    debug_assert!(z >= 0.0, "demand must be non-negative");
    econ.expected_pi() * z / market.cap_rate() - econ.inv_cost
}
