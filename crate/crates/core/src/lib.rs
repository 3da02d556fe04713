//! Two-firm irreversible investment timing game under geometric Brownian
//! motion demand: closed-form follower and leader values, preemption
//! intervals, the asymmetric equilibrium profile, and Monte Carlo oracles
//! for all of them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod equilibrium;
pub mod error;
pub mod follower;
pub mod game;
pub mod gbm;
pub mod intervals;
pub mod leader;
pub mod mc;
pub mod numerics;
pub mod params;
pub mod payoffs;
pub mod piecewise;
pub mod verify;

pub use error::{Error, Result};
pub use params::{char_roots, cournot_value, CharRoots, DerivedCoeffs, EconParams, MarketParams};
pub use piecewise::{PiecewiseValue, Segment};
