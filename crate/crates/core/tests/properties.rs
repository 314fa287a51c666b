//! Property tests: the container against a shadow dynamic array, plus
//! the numeric and cost invariants of the query algorithms.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumseq::{oracle, SumSequence, TreeConfig};

fn cfg(max_group: usize) -> TreeConfig {
    TreeConfig::new(max_group).unwrap()
}

#[derive(Debug, Clone)]
enum Op {
    Insert(usize, i64),
    Remove(usize),
    Set(usize, i64),
}

fn op_strategy() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (any::<usize>(), -1_000i64..1_000).prop_map(|(r, v)| Op::Insert(r, v)),
        2 => any::<usize>().prop_map(Op::Remove),
        1 => (any::<usize>(), -1_000i64..1_000).prop_map(|(r, v)| Op::Set(r, v)),
    ]
}

/// Applies one op to both the tree and the shadow array; returns false
/// if the op was a no-op on an empty sequence.
fn apply(seq: &mut SumSequence<i64>, shadow: &mut Vec<i64>, op: &Op) {
    match *op {
        Op::Insert(r, v) => {
            let rank = r % (shadow.len() + 1);
            seq.insert(rank, v).unwrap();
            shadow.insert(rank, v);
        }
        Op::Remove(r) => {
            if !shadow.is_empty() {
                let rank = r % shadow.len();
                assert_eq!(seq.remove(rank).unwrap(), shadow.remove(rank));
            }
        }
        Op::Set(r, v) => {
            if !shadow.is_empty() {
                let rank = r % shadow.len();
                let old = std::mem::replace(&mut shadow[rank], v);
                assert_eq!(seq.set_value(rank, v).unwrap(), old);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_script_matches_shadow(
        initial in prop::collection::vec(-1_000i64..1_000, 0..64),
        ops in prop::collection::vec(op_strategy(), 0..128),
        max_group in 3usize..10,
    ) {
        let mut seq = SumSequence::build(&initial, cfg(max_group)).unwrap();
        let mut shadow = initial;
        for op in &ops {
            apply(&mut seq, &mut shadow, op);
            let report = seq.validate();
            prop_assert!(report.ok, "after {op:?}: {:?}", report.violations);
            prop_assert_eq!(seq.len(), shadow.len());
        }
        prop_assert_eq!(seq.values().collect::<Vec<_>>(), shadow);
    }

    #[test]
    fn build_linearity_node_budget(
        len in 0usize..3_000,
        max_group in 3usize..12,
    ) {
        let values: Vec<i64> = (0..len as i64).collect();
        let seq = SumSequence::build(&values, cfg(max_group)).unwrap();
        prop_assert!(seq.nodes_created() <= 2 * len.max(1) as u64);
        prop_assert!(seq.validate().ok);
    }

    #[test]
    fn rank_select_round_trip(
        values in prop::collection::vec(-1_000i64..1_000, 1..300),
        max_group in 3usize..10,
    ) {
        let seq = SumSequence::build(&values, cfg(max_group)).unwrap();
        for (r, &expected) in values.iter().enumerate() {
            let c = seq.select(r).unwrap();
            prop_assert_eq!(seq.rank_of(c).unwrap(), r);
            prop_assert_eq!(seq.cursor_value(c).unwrap(), expected);
        }
    }

    #[test]
    fn integer_sums_match_oracle(
        values in prop::collection::vec(-10_000i64..10_000, 0..200),
        max_group in 3usize..10,
        queries in prop::collection::vec((any::<usize>(), any::<usize>()), 1..32),
    ) {
        let seq = SumSequence::build(&values, cfg(max_group)).unwrap();
        let total = seq.total_sum().unwrap().value;
        prop_assert_eq!(total, seq.prefix_sum(values.len()).unwrap().value);
        prop_assert_eq!(total, seq.range_sum(0, values.len()).unwrap().value);
        for &(a, b) in &queries {
            let (from, to) = if values.is_empty() {
                (0, 0)
            } else {
                let x = a % (values.len() + 1);
                let y = b % (values.len() + 1);
                (x.min(y), x.max(y))
            };
            let expected = oracle::naive_sum(&values, from, to).unwrap();
            prop_assert_eq!(seq.range_sum(from, to).unwrap().value, expected);
            prop_assert_eq!(seq.range_sum_diff(from, to).unwrap().value, expected);
            if from < to {
                let ca = seq.select(from).unwrap();
                let cb = seq.select(to - 1).unwrap();
                prop_assert_eq!(seq.range_sum_between(ca, cb).unwrap().value, expected);
            }
        }
    }

    #[test]
    fn float_range_sum_within_tolerance(
        values in prop::collection::vec(-1.0f64..1.0, 1..300),
        bounds in (any::<usize>(), any::<usize>()),
    ) {
        let seq = SumSequence::build(&values, TreeConfig::default()).unwrap();
        let x = bounds.0 % (values.len() + 1);
        let y = bounds.1 % (values.len() + 1);
        let (from, to) = (x.min(y), x.max(y));
        let got = seq.range_sum(from, to).unwrap().value;
        let expected = oracle::naive_sum(&values, from, to).unwrap();
        let budget: f64 = values[from..to].iter().map(|v| v.abs()).sum();
        prop_assert!((got - expected).abs() <= 1e-9 * budget.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn variance_identity_matches_two_pass(
        values in prop::collection::vec(-1_000.0f64..1_000.0, 1..300),
        bounds in (any::<usize>(), any::<usize>()),
    ) {
        let seq = SumSequence::build(&values, TreeConfig::default()).unwrap();
        let x = bounds.0 % values.len();
        let y = bounds.1 % values.len();
        let (from, to) = (x.min(y), x.max(y) + 1);
        let report = seq.stats_report(from, to).unwrap();
        let naive = oracle::naive_stats(&values, from, to).unwrap();
        prop_assert!(report.variance >= 0.0);
        prop_assert!(report.stddev >= 0.0);
        prop_assert!(
            (report.mean - naive.mean).abs() <= 1e-9 * naive.mean.abs().max(1.0),
            "mean {} vs {}", report.mean, naive.mean
        );
        prop_assert!(
            (report.variance - naive.variance).abs() <= 1e-9 * naive.variance.max(1.0),
            "variance {} vs {}", report.variance, naive.variance
        );
    }

    #[test]
    fn prefix_additions_and_span_levels_bounded(
        exp in 6u32..13,
        seed in any::<u64>(),
    ) {
        let n = 1usize << exp;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<i64> = (0..n).map(|_| rng.random_range(-100..100)).collect();
        let seq = SumSequence::build(&values, TreeConfig::default()).unwrap();
        let min = seq.config().min_group();
        for _ in 0..32 {
            let len = rng.random_range(1..=n);
            let r = seq.prefix_sum(len).unwrap();
            prop_assert!(r.stats.additions <= r.stats.nodes_visited);

            let from = rng.random_range(0..n);
            let to = rng.random_range(from..=n);
            if from < to {
                let r = seq.range_sum(from, to).unwrap();
                let mut bound = 2u64;
                let mut reach = 1usize;
                while reach < (to - from).max(2) {
                    reach *= min;
                    bound += 1;
                }
                prop_assert!(
                    r.stats.levels_touched <= bound,
                    "[{from},{to}): levels {} > {bound}", r.stats.levels_touched
                );
            }
        }
    }
}

/// Random interleaving of inserts and removes, validated in blocks, per
/// the update-soundness contract at unit scale.
#[test]
fn seeded_interleaving_ten_thousand_ops() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBAD5EED);
    let mut seq = SumSequence::<i64>::new(cfg(4));
    let mut shadow: Vec<i64> = Vec::new();
    for step in 0..10_000usize {
        let grow = shadow.is_empty() || rng.random_bool(0.55);
        if grow {
            let rank = rng.random_range(0..=shadow.len());
            let v = rng.random_range(-1_000_000..1_000_000);
            seq.insert(rank, v).unwrap();
            shadow.insert(rank, v);
        } else {
            let rank = rng.random_range(0..shadow.len());
            assert_eq!(seq.remove(rank).unwrap(), shadow.remove(rank));
        }
        if step % 100 == 99 {
            let report = seq.validate();
            assert!(report.ok, "step {step}: {:?}", report.violations);
            assert_eq!(seq.values().collect::<Vec<_>>(), shadow, "step {step}");
        }
    }
    assert!(seq.validate().ok);
}

/// Select stays within `levels * max_group` node visits for every rank,
/// checked exhaustively on a large sequence.
#[test]
fn select_cost_exhaustive_large() {
    let n = 1usize << 20;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let values: Vec<i64> = (0..n).map(|_| rng.random_range(-50..50)).collect();
    let seq = SumSequence::build(&values, TreeConfig::default()).unwrap();
    let bound = (seq.level_count() * seq.config().max_group()) as u64;
    for r in 0..n {
        let (_, stats) = seq.select_with_stats(r).unwrap();
        assert!(
            stats.nodes_visited <= bound,
            "rank {r}: {} > {bound}",
            stats.nodes_visited
        );
    }
}

/// Iteration over the deepest level equals the shadow array after a
/// float mutation script; aggregates stay within validation tolerance.
#[test]
fn float_mutation_script_stays_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut seq = SumSequence::<f64>::new(TreeConfig::default());
    let mut shadow: Vec<f64> = Vec::new();
    for _ in 0..4_000usize {
        match rng.random_range(0..10) {
            0..=5 => {
                let rank = rng.random_range(0..=shadow.len());
                let v = rng.random_range(-1e6..1e6);
                seq.insert(rank, v).unwrap();
                shadow.insert(rank, v);
            }
            6..=7 if !shadow.is_empty() => {
                let rank = rng.random_range(0..shadow.len());
                assert_eq!(seq.remove(rank).unwrap(), shadow.remove(rank));
            }
            _ if !shadow.is_empty() => {
                let rank = rng.random_range(0..shadow.len());
                let v = rng.random_range(-1e6..1e6);
                shadow[rank] = v;
                seq.set_value(rank, v).unwrap();
            }
            _ => {}
        }
    }
    let report = seq.validate();
    assert!(report.ok, "{:?}", report.violations);
    let got: Vec<f64> = seq.values().collect();
    assert_eq!(got, shadow);
}
