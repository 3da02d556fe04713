//! Finite unions of closed demand intervals.

use serde::Serialize;

/// Sorted, disjoint closed intervals `[lo, hi]` on `(0, inf]`; `hi` may be infinite.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary intervals, merging overlaps.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(lo, hi)| lo <= hi);
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    pub fn single(lo: f64, hi: f64) -> Self {
        Self::from_intervals(vec![(lo, hi)])
    }

    /// `[lo, inf)`.
    pub fn at_or_above(lo: f64) -> Self {
        Self::single(lo, f64::INFINITY)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, z: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= z && z <= hi)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut raw = self.intervals.clone();
        raw.extend_from_slice(&other.intervals);
        Self::from_intervals(raw)
    }

    /// Intersection with `[lo, hi]`.
    pub fn clip(&self, lo: f64, hi: f64) -> IntervalSet {
        Self::from_intervals(self.intervals.iter().map(|&(a, b)| (a.max(lo), b.min(hi))).collect())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut raw = Vec::new();
        for &(a, b) in &self.intervals {
            for &(c, d) in &other.intervals {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo <= hi {
                    raw.push((lo, hi));
                }
            }
        }
        Self::from_intervals(raw)
    }

    /// Lowest point of the set.
    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.0)
    }

    /// The open gap `(lo, hi)` of the complement that contains `z`, or `None`
    /// if `z` is in the set. `lo = 0` when nothing lies below, `hi = inf` when
    /// nothing lies above.
    pub fn gap_around(&self, z: f64) -> Option<(f64, f64)> {
        if self.contains(z) {
            return None;
        }
        let lo = self
            .intervals
            .iter()
            .filter(|iv| iv.1 < z)
            .map(|iv| iv.1)
            .fold(0.0, f64::max);
        let hi = self
            .intervals
            .iter()
            .filter(|iv| iv.0 > z)
            .map(|iv| iv.0)
            .fold(f64::INFINITY, f64::min);
        Some((lo, hi))
    }

    /// Total length of the finite part.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_queries() {
        let s = IntervalSet::from_intervals(vec![(5.0, 7.0), (1.0, 2.0), (6.0, 9.0)]);
        assert_eq!(s.intervals(), &[(1.0, 2.0), (5.0, 9.0)]);
        assert!(s.contains(2.0) && s.contains(5.0) && !s.contains(3.0));
        assert_eq!(s.gap_around(3.0), Some((2.0, 5.0)));
        assert_eq!(s.gap_around(0.5), Some((0.0, 1.0)));
        assert_eq!(s.gap_around(10.0), Some((9.0, f64::INFINITY)));
        assert_eq!(s.gap_around(6.0), None);
    }

    #[test]
    fn clip_and_union() {
        let s = IntervalSet::at_or_above(4.0).union(&IntervalSet::single(1.0, 2.0));
        assert_eq!(s.clip(1.5, 10.0).intervals(), &[(1.5, 2.0), (4.0, 10.0)]);
        assert!(IntervalSet::empty().gap_around(1.0) == Some((0.0, f64::INFINITY)));
        let t = s.intersect(&IntervalSet::single(1.5, 5.0));
        assert_eq!(t.intervals(), &[(1.5, 2.0), (4.0, 5.0)]);
        assert_eq!(t.min(), Some(1.5));
    }
}
