//! Piecewise value functions over demand.
//!
//! Every closed-form value in the model is, on each interval between two
//! thresholds, a combination `c_gamma z^gamma + c_beta z^beta + c_lin z + c_const`.
//! [`PiecewiseValue`] stores the ordered thresholds and one coefficient set
//! per interval, so a single evaluator (and a single continuity check) serves
//! the follower, leader and combined payoffs alike.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::CharRoots;

/// Coefficients of `c_gamma (z/p)^gamma + c_beta (z/p)^beta + c_lin z + c_const`
/// with pivot `p`.
///
/// With a pivot at the segment's lower end the power terms stay finite even
/// when `|beta|` is large.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub c_gamma: f64,
    pub c_beta: f64,
    pub c_lin: f64,
    pub c_const: f64,
    pub pivot: f64,
}

impl Default for Segment {
    fn default() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }
}

impl Segment {
    pub const fn new(c_gamma: f64, c_beta: f64, c_lin: f64, c_const: f64) -> Self {
        Self {
            c_gamma,
            c_beta,
            c_lin,
            c_const,
            pivot: 1.0,
        }
    }

    pub const fn affine(c_lin: f64, c_const: f64) -> Self {
        Self::new(0.0, 0.0, c_lin, c_const)
    }

    /// The same coefficients read relative to `pivot`.
    pub const fn at_pivot(mut self, pivot: f64) -> Self {
        self.pivot = pivot;
        self
    }

    fn has_powers(&self) -> bool {
        self.c_gamma != 0.0 || self.c_beta != 0.0
    }

    /// The same function expressed with a different pivot.
    pub fn rebased(&self, pivot: f64, roots: &CharRoots) -> Self {
        if !self.has_powers() || pivot == self.pivot {
            return self.at_pivot(pivot);
        }
        let ratio = pivot / self.pivot;
        let mut out = self.at_pivot(pivot);
        if self.c_gamma != 0.0 {
            out.c_gamma *= ratio.powf(roots.gamma);
        }
        if self.c_beta != 0.0 {
            out.c_beta *= ratio.powf(roots.beta);
        }
        out
    }

    pub fn eval(&self, z: f64, roots: &CharRoots) -> f64 {
        let mut v = self.c_lin * z + self.c_const;
        let x = z / self.pivot;
        if self.c_gamma != 0.0 {
            v += self.c_gamma * x.powf(roots.gamma);
        }
        if self.c_beta != 0.0 {
            v += self.c_beta * x.powf(roots.beta);
        }
        v
    }

    pub fn derivative(&self, z: f64, roots: &CharRoots) -> f64 {
        let mut d = self.c_lin;
        let x = z / self.pivot;
        if self.c_gamma != 0.0 {
            d += self.c_gamma * roots.gamma * x.powf(roots.gamma) / z;
        }
        if self.c_beta != 0.0 {
            d += self.c_beta * roots.beta * x.powf(roots.beta) / z;
        }
        d
    }

    pub fn second_derivative(&self, z: f64, roots: &CharRoots) -> f64 {
        let (g, b) = (roots.gamma, roots.beta);
        let x = z / self.pivot;
        let mut d = 0.0;
        if self.c_gamma != 0.0 {
            d += self.c_gamma * g * (g - 1.0) * x.powf(g) / (z * z);
        }
        if self.c_beta != 0.0 {
            d += self.c_beta * b * (b - 1.0) * x.powf(b) / (z * z);
        }
        d
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self::new(w * self.c_gamma, w * self.c_beta, w * self.c_lin, w * self.c_const).at_pivot(self.pivot)
    }

    /// Sum of two segments; power terms must share a pivot unless one side has none.
    pub fn plus(&self, other: &Segment) -> Self {
        let pivot = if self.has_powers() { self.pivot } else { other.pivot };
        debug_assert!(
            !(self.has_powers() && other.has_powers()) || self.pivot == other.pivot,
            "adding segments with different pivots"
        );
        Self::new(
            self.c_gamma + other.c_gamma,
            self.c_beta + other.c_beta,
            self.c_lin + other.c_lin,
            self.c_const + other.c_const,
        )
        .at_pivot(pivot)
    }
}

/// Fit of two adjacent segments at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Junction {
    pub z: f64,
    pub value_gap: f64,
    pub slope_gap: f64,
}

/// A value function on `(0, inf)` made of [`Segment`]s between ascending breakpoints.
///
/// Segment `k` covers `[breakpoints[k-1], breakpoints[k])`, with the first
/// segment starting at 0 and the last running to infinity. A demand level
/// sitting exactly on a breakpoint is evaluated by the segment to its right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseValue {
    roots: CharRoots,
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl PiecewiseValue {
    pub fn new(roots: CharRoots, breakpoints: Vec<f64>, segments: Vec<Segment>) -> Result<Self> {
        if segments.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} segments, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                segments.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite() || *b <= 0.0) {
            return Err(Error::InvalidArgument("breakpoints must be finite and positive".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("breakpoints must be strictly ascending".into()));
        }
        Ok(Self {
            roots,
            breakpoints,
            segments,
        })
    }

    pub fn single(roots: CharRoots, segment: Segment) -> Self {
        Self {
            roots,
            breakpoints: Vec::new(),
            segments: vec![segment],
        }
    }

    pub fn roots(&self) -> &CharRoots {
        &self.roots
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Index of the segment used at `z` (right segment on a breakpoint).
    pub fn segment_index(&self, z: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= z)
    }

    /// `(lo, hi)` bounds of segment `k`; `lo = 0` for the first, `hi = inf` for the last.
    pub fn segment_bounds(&self, k: usize) -> (f64, f64) {
        let lo = if k == 0 { 0.0 } else { self.breakpoints[k - 1] };
        let hi = self.breakpoints.get(k).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    /// Checked evaluation; demand must be strictly positive.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "demand must be positive and finite, got {z}"
            )));
        }
        Ok(self.value(z))
    }

    /// Unchecked evaluation for callers that already guarantee `z > 0`.
    pub fn value(&self, z: f64) -> f64 {
        self.segments[self.segment_index(z)].eval(z, &self.roots)
    }

    /// Right derivative at `z`.
    pub fn derivative(&self, z: f64) -> f64 {
        self.segments[self.segment_index(z)].derivative(z, &self.roots)
    }

    /// Left derivative at `z` (differs from [`Self::derivative`] only at kinks).
    pub fn left_derivative(&self, z: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b < z);
        self.segments[k].derivative(z, &self.roots)
    }

    pub fn second_derivative(&self, z: f64) -> f64 {
        self.segments[self.segment_index(z)].second_derivative(z, &self.roots)
    }

    /// Values of the two segments adjacent to breakpoint `k` at that breakpoint.
    pub fn one_sided_values(&self, k: usize) -> (f64, f64) {
        let b = self.breakpoints[k];
        (
            self.segments[k].eval(b, &self.roots),
            self.segments[k + 1].eval(b, &self.roots),
        )
    }

    /// Relative value and slope mismatch of the two segments meeting at breakpoint `k`.
    pub fn junction(&self, k: usize) -> Junction {
        let z = self.breakpoints[k];
        let (l, r) = self.one_sided_values(k);
        let dl = self.segments[k].derivative(z, &self.roots);
        let dr = self.segments[k + 1].derivative(z, &self.roots);
        Junction {
            z,
            value_gap: (l - r).abs() / (1.0 + l.abs().max(r.abs())),
            slope_gap: (dl - dr).abs() / (1.0 + dl.abs().max(dr.abs())),
        }
    }

    /// Largest relative jump across any breakpoint.
    pub fn max_relative_jump(&self) -> f64 {
        (0..self.breakpoints.len())
            .map(|k| {
                let (l, r) = self.one_sided_values(k);
                (l - r).abs() / (1.0 + l.abs().max(r.abs()))
            })
            .fold(0.0, f64::max)
    }

    /// `sum_k w_k v_k` over a shared set of roots; breakpoints are merged.
    pub fn linear_combination(terms: &[(f64, &PiecewiseValue)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let roots = first.1.roots;
        if terms.iter().any(|(_, v)| v.roots != roots) {
            return Err(Error::InvalidArgument(
                "cannot combine values built on different roots".into(),
            ));
        }
        let mut bps: Vec<f64> = terms.iter().flat_map(|(_, v)| v.breakpoints.iter().copied()).collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        let mut segments = Vec::with_capacity(bps.len() + 1);
        for k in 0..=bps.len() {
            // Any point inside the merged segment selects the right pieces.
            let probe = match (k, bps.len()) {
                (_, 0) => 1.0,
                (0, _) => 0.5 * bps[0],
                (k, n) if k == n => 2.0 * bps[n - 1],
                (k, _) => 0.5 * (bps[k - 1] + bps[k]),
            };
            let pivot = match k {
                0 => bps.first().copied().unwrap_or(1.0),
                k => bps[k - 1],
            };
            let seg = terms.iter().fold(Segment::default().at_pivot(pivot), |acc, (w, v)| {
                acc.plus(&v.segments[v.segment_index(probe)].rebased(pivot, &roots).scaled(*w))
            });
            segments.push(seg);
        }
        Self::new(roots, bps, segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots2() -> CharRoots {
        CharRoots { gamma: 2.0, beta: -1.0 }
    }

    #[test]
    fn identity_segment() {
        let v = PiecewiseValue::single(roots2(), Segment::affine(1.0, 0.0));
        assert_eq!(v.eval(3.0).unwrap(), 3.0);
    }

    #[test]
    fn power_segment() {
        let v = PiecewiseValue::single(roots2(), Segment::new(0.05, 0.0, 0.0, 0.0));
        assert!((v.eval(10.0).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_demand() {
        let v = PiecewiseValue::single(roots2(), Segment::affine(1.0, 0.0));
        assert!(v.eval(0.0).is_err());
        assert!(v.eval(-1.0).is_err());
        assert!(v.eval(f64::NAN).is_err());
    }

    #[test]
    fn breakpoint_uses_right_segment() {
        // 0.05 z^2 below 10, z - 5 above: continuous at 10 (5 = 5).
        let v = PiecewiseValue::new(
            roots2(),
            vec![10.0],
            vec![Segment::new(0.05, 0.0, 0.0, 0.0), Segment::affine(1.0, -5.0)],
        )
        .unwrap();
        assert_eq!(v.segment_index(10.0), 1);
        assert_eq!(v.derivative(10.0), 1.0);
        assert!((v.left_derivative(10.0) - 1.0).abs() < 1e-14);
        assert!(v.max_relative_jump() < 1e-15);
        assert_eq!(v.segment_bounds(0), (0.0, 10.0));
        assert_eq!(v.segment_bounds(1), (10.0, f64::INFINITY));
    }

    #[test]
    fn validates_shape() {
        let s = Segment::default();
        assert!(PiecewiseValue::new(roots2(), vec![1.0], vec![s]).is_err());
        assert!(PiecewiseValue::new(roots2(), vec![2.0, 1.0], vec![s, s, s]).is_err());
        assert!(PiecewiseValue::new(roots2(), vec![0.0], vec![s, s]).is_err());
    }

    #[test]
    fn combination_merges_breakpoints() {
        let a = PiecewiseValue::new(
            roots2(),
            vec![1.0],
            vec![Segment::affine(1.0, 0.0), Segment::affine(2.0, -1.0)],
        )
        .unwrap();
        let b = PiecewiseValue::new(
            roots2(),
            vec![3.0],
            vec![Segment::new(1.0, 0.0, 0.0, 0.0), Segment::affine(0.0, 9.0)],
        )
        .unwrap();
        let c = PiecewiseValue::linear_combination(&[(0.5, &a), (0.5, &b)]).unwrap();
        assert_eq!(c.breakpoints(), &[1.0, 3.0]);
        for z in [0.3, 1.0, 2.2, 3.0, 7.5] {
            let expect = 0.5 * a.value(z) + 0.5 * b.value(z);
            assert!((c.value(z) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn pivot_rebase_preserves_values() {
        let roots = CharRoots {
            gamma: 2.5,
            beta: -300.0,
        };
        let seg = Segment::new(0.7, -0.2, 1.0, -3.0).at_pivot(30.0);
        let moved = seg.rebased(40.0, &roots);
        for z in [30.0, 35.0, 60.0] {
            let (a, b) = (seg.eval(z, &roots), moved.eval(z, &roots));
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
            let (da, db) = (seg.derivative(z, &roots), moved.derivative(z, &roots));
            assert!((da - db).abs() < 1e-12 * (1.0 + da.abs()), "{da} vs {db}");
        }
        assert!(seg.eval(45.0, &roots).is_finite());
    }
}
