//! Independent reference implementations used by tests and benchmarks.
//!
//! Nothing here touches the tree: `naive_sum` is the ground-truth
//! left-to-right loop every summation claim is stated against,
//! `pairwise_sum` is a desk-scale simulation of the parallel pairwise
//! schedule (rounds model time steps, not wall-clock parallelism), and
//! `naive_stats` is the numerically stable two-pass mean/variance
//! reference.

use crate::error::{Error, Result};
use crate::value::Value;

/// Outcome of the simulated pairwise reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseResult<V: Value> {
    pub total: V,
    /// Parallel time steps: `ceil(log2(len))` for `len >= 2`, else 0.
    pub rounds: u32,
    /// Always `len - 1` for nonempty input.
    pub additions: u64,
}

/// Two-pass reference statistics for a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveStats<V: Value> {
    pub count: usize,
    pub sum: V,
    pub sum_sq: V::Sq,
    pub mean: f64,
    /// Second pass over squared deviations, divided by `count`.
    pub variance: f64,
}

/// Left-to-right loop sum over ranks `[from, to)`.
pub fn naive_sum<V: Value>(values: &[V], from: usize, to: usize) -> Result<V> {
    if from > to || to > values.len() {
        return Err(Error::BoundsOutOfRange {
            from,
            to,
            len: values.len(),
        });
    }
    let mut acc = V::agg_zero();
    for &v in &values[from..to] {
        acc = V::agg_add(acc, v.to_agg());
    }
    V::agg_to_value(acc).ok_or(Error::Overflow)
}

/// Repeatedly replaces the list by sums of adjacent pairs until one
/// element remains; an unpaired trailing element is carried to the next
/// round without an addition.
pub fn pairwise_sum<V: Value>(values: &[V]) -> Result<PairwiseResult<V>> {
    let mut rounds = 0u32;
    let mut additions = 0u64;
    let mut layer: Vec<V::Agg> = values.iter().map(|v| v.to_agg()).collect();
    while layer.len() > 1 {
        rounds += 1;
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        let mut chunks = layer.chunks_exact(2);
        for pair in &mut chunks {
            next.push(V::agg_add(pair[0], pair[1]));
            additions += 1;
        }
        if let [odd] = chunks.remainder() {
            next.push(*odd);
        }
        layer = next;
    }
    let total = layer.first().copied().unwrap_or_else(V::agg_zero);
    Ok(PairwiseResult {
        total: V::agg_to_value(total).ok_or(Error::Overflow)?,
        rounds,
        additions,
    })
}

/// Two-pass count/sum/sum-of-squares/mean/variance over ranks
/// `[from, to)`; the range must be nonempty.
pub fn naive_stats<V: Value>(values: &[V], from: usize, to: usize) -> Result<NaiveStats<V>> {
    if from > to || to > values.len() {
        return Err(Error::BoundsOutOfRange {
            from,
            to,
            len: values.len(),
        });
    }
    if from == to {
        return Err(Error::EmptyRange);
    }
    let slice = &values[from..to];
    let count = slice.len();

    let mut sum = V::agg_zero();
    let mut sum_sq = V::sq_zero();
    for &v in slice {
        sum = V::agg_add(sum, v.to_agg());
        sum_sq = V::sq_add(sum_sq, v.to_sq());
    }
    let mean = V::agg_to_f64(sum) / count as f64;

    // Second pass: squared deviations from the mean.
    let mut m2 = 0.0f64;
    for &v in slice {
        let d = V::agg_to_f64(v.to_agg()) - mean;
        m2 += d * d;
    }

    Ok(NaiveStats {
        count,
        sum: V::agg_to_value(sum).ok_or(Error::Overflow)?,
        sum_sq,
        mean,
        variance: m2 / count as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIGITS: [i64; 8] = [3, 1, 4, 1, 5, 9, 2, 6];

    #[test]
    fn naive_sum_empty_and_prefix() {
        assert_eq!(naive_sum::<i64>(&[], 0, 0).unwrap(), 0);
        assert_eq!(naive_sum(&DIGITS, 0, 4).unwrap(), 9);
        assert!(naive_sum(&DIGITS, 0, 9).is_err());
    }

    #[test]
    fn naive_sum_splits_associatively() {
        for k in 0..=DIGITS.len() {
            let whole = naive_sum(&DIGITS, 0, DIGITS.len()).unwrap();
            let left = naive_sum(&DIGITS, 0, k).unwrap();
            let right = naive_sum(&DIGITS, k, DIGITS.len()).unwrap();
            assert_eq!(whole, left + right);
        }
    }

    #[test]
    fn pairwise_sixteen_elements() {
        // Sixteen elements reduce in 4 time steps with 15 additions.
        let ones = [1i64; 16];
        let r = pairwise_sum(&ones).unwrap();
        assert_eq!(r.total, 16);
        assert_eq!(r.rounds, 4);
        assert_eq!(r.additions, 15);
    }

    #[test]
    fn pairwise_degenerate_inputs() {
        let single = pairwise_sum(&[42i64]).unwrap();
        assert_eq!(single.total, 42);
        assert_eq!(single.rounds, 0);
        assert_eq!(single.additions, 0);
        let empty = pairwise_sum::<i64>(&[]).unwrap();
        assert_eq!(empty.total, 0);
        assert_eq!(empty.rounds, 0);
    }

    #[test]
    fn pairwise_matches_naive_on_random_data() {
        let values: Vec<i64> = (0..1000).map(|i| (i * 48271 % 20011) - 10000).collect();
        let r = pairwise_sum(&values).unwrap();
        assert_eq!(r.total, naive_sum(&values, 0, values.len()).unwrap());
        assert_eq!(r.additions, values.len() as u64 - 1);
        assert_eq!(r.rounds, 10); // ceil(log2(1000))
    }

    #[test]
    fn pairwise_cost_accounting() {
        for n in 1..=70usize {
            let values: Vec<i64> = (0..n as i64).collect();
            let r = pairwise_sum(&values).unwrap();
            assert_eq!(r.additions, n as u64 - 1, "n={n}");
            let expected_rounds = if n >= 2 {
                (n as f64).log2().ceil() as u32
            } else {
                0
            };
            assert_eq!(r.rounds, expected_rounds, "n={n}");
        }
    }

    #[test]
    fn naive_stats_constant_range() {
        let values = [5.0f64; 10];
        let s = naive_stats(&values, 2, 9).unwrap();
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.mean, 5.0);
    }

    #[test]
    fn naive_stats_digit_slice() {
        let s = naive_stats(&DIGITS, 2, 5).unwrap();
        assert_eq!(s.count, 3);
        assert_eq!(s.sum, 10);
        assert_eq!(s.sum_sq, 42);
        assert!((s.mean - 10.0 / 3.0).abs() < 1e-12);
        assert!((s.variance - 26.0 / 9.0).abs() < 1e-12);
        assert!(naive_stats(&DIGITS, 3, 3).is_err());
    }
}
