//! Range statistics over the sum-of-squares augmentation.
//!
//! With counts, sums, and squared sums all stored per node, the mean,
//! population variance, and standard deviation of any contiguous range
//! come out of a single finger walk: both payloads travel the same path,
//! so the node visits stay logarithmic in the range length.
//!
//! Variance uses the one-pass identity `E[a^2] - E[a]^2` with the
//! population denominator and is clamped at zero before the square root,
//! since the identity can dip slightly negative in floating point.

use crate::error::{Error, Result};
use crate::summation::{QueryStats, SumResult, WalkSums};
use crate::tree::SumSequence;
use crate::value::Value;

/// Coherent statistics for one range, produced by a single traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeStats<V: Value> {
    /// Number of elements in the range.
    pub count: usize,
    pub sum: V,
    /// Sum of squared values, in the wide representation.
    pub sum_sq: V::Sq,
    pub mean: f64,
    /// Population variance (divides by `count`), clamped at zero.
    pub variance: f64,
    pub stddev: f64,
    pub stats: QueryStats,
}

impl<V: Value> SumSequence<V> {
    fn require_squares(&self) -> Result<()> {
        if self.config.track_squares() {
            Ok(())
        } else {
            Err(Error::SquaresDisabled)
        }
    }

    fn nonempty_bounds(&self, from: usize, to: usize) -> Result<usize> {
        if from > to || to > self.size {
            return Err(Error::BoundsOutOfRange {
                from,
                to,
                len: self.size,
            });
        }
        if from == to {
            return Err(Error::EmptyRange);
        }
        Ok(to - from)
    }

    /// Runs the finger walk over `[from, to)` accumulating the requested
    /// payloads. The range must be nonempty.
    fn walk_stats(&self, from: usize, to: usize, want_squares: bool) -> Result<(WalkSums<V>, QueryStats)> {
        let (left, lv) = self.descend_to_rank(from);
        let (right, rv) = self.descend_to_rank(to - 1);
        let mut acc = WalkSums::new(want_squares);
        let mut stats = self.walk_span(left, right, &mut acc)?;
        stats.nodes_visited += lv + rv;
        Ok((acc, stats))
    }

    /// Number of elements in `[from, to)`; O(1).
    pub fn range_count(&self, from: usize, to: usize) -> Result<usize> {
        if from > to || to > self.size {
            return Err(Error::BoundsOutOfRange {
                from,
                to,
                len: self.size,
            });
        }
        Ok(to - from)
    }

    /// Mean of the elements at ranks `[from, to)` (nonempty).
    pub fn range_mean(&self, from: usize, to: usize) -> Result<SumResult<f64>> {
        let count = self.nonempty_bounds(from, to)?;
        let (acc, stats) = self.walk_stats(from, to, false)?;
        Ok(SumResult {
            value: V::agg_to_f64(acc.sum) / count as f64,
            stats,
        })
    }

    /// Sum of squared values at ranks `[from, to)`, over the identical
    /// finger path as [`range_sum`](Self::range_sum). Requires the
    /// squares augmentation.
    pub fn range_sum_sq(&self, from: usize, to: usize) -> Result<SumResult<V::Sq>> {
        self.require_squares()?;
        if from > to || to > self.size {
            return Err(Error::BoundsOutOfRange {
                from,
                to,
                len: self.size,
            });
        }
        if from == to {
            return Ok(SumResult {
                value: V::sq_zero(),
                stats: QueryStats::default(),
            });
        }
        let (acc, stats) = self.walk_stats(from, to, true)?;
        Ok(SumResult {
            value: acc.sum_sq,
            stats,
        })
    }

    /// Population variance of the elements at ranks `[from, to)`.
    pub fn range_variance(&self, from: usize, to: usize) -> Result<SumResult<f64>> {
        let report = self.stats_report(from, to)?;
        Ok(SumResult {
            value: report.variance,
            stats: report.stats,
        })
    }

    /// Population standard deviation of the elements at ranks `[from, to)`.
    pub fn range_stddev(&self, from: usize, to: usize) -> Result<SumResult<f64>> {
        let report = self.stats_report(from, to)?;
        Ok(SumResult {
            value: report.stddev,
            stats: report.stats,
        })
    }

    /// Count, sum, squared sum, mean, variance, and standard deviation
    /// of `[from, to)`, all from one traversal snapshot.
    pub fn stats_report(&self, from: usize, to: usize) -> Result<RangeStats<V>> {
        self.require_squares()?;
        let count = self.nonempty_bounds(from, to)?;
        let (acc, stats) = self.walk_stats(from, to, true)?;
        let n = count as f64;
        let mean = V::agg_to_f64(acc.sum) / n;
        let variance = (V::sq_to_f64(acc.sum_sq) / n - mean * mean).max(0.0);
        Ok(RangeStats {
            count,
            sum: V::agg_to_value(acc.sum).ok_or(Error::Overflow)?,
            sum_sq: acc.sum_sq,
            mean,
            variance,
            stddev: variance.sqrt(),
            stats,
        })
    }
}
