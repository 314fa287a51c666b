//! An indexed sequence of numbers with fast range aggregates.
//!
//! [`SumSequence`] stores elements in rank order inside a level-linked
//! B+ tree whose internal nodes carry element counts, sums, and
//! (optionally) sums of squares. The count payload turns positional
//! access into a top-down search; the sum payloads turn range sums and
//! range statistics into walks over a handful of nodes:
//!
//! - [`select`](SumSequence::select) / [`value_at`](SumSequence::value_at):
//!   O(log n) access by rank, plus O(1) cursor steps to neighbors.
//! - [`prefix_sum`](SumSequence::prefix_sum): sum of the first `n`
//!   elements by a single top-down walk.
//! - [`range_sum`](SumSequence::range_sum) /
//!   [`range_sum_between`](SumSequence::range_sum_between): sum of any
//!   contiguous range by a finger walk whose cost is logarithmic in the
//!   range length, not the container size, using additions only.
//! - [`stats_report`](SumSequence::stats_report): count, mean, variance,
//!   and standard deviation of a range from one traversal.
//! - [`insert`](SumSequence::insert) / [`remove`](SumSequence::remove) /
//!   [`set_value`](SumSequence::set_value): O(log n) updates that keep
//!   every aggregate sound, checkable at any time with
//!   [`validate`](SumSequence::validate).
//!
//! Elements are `i64` (overflow-checked results) or `f64` (finite values
//! only). Every query returns a [`QueryStats`] with the traversal's
//! observed operation counts, so the logarithmic cost claims are
//! directly measurable; the [`oracle`] module holds the independent
//! reference implementations those claims are tested against.
//!
//! ```
//! use sumseq::{SumSequence, TreeConfig};
//!
//! let seq = SumSequence::build(&[3_i64, 1, 4, 1, 5, 9, 2, 6], TreeConfig::default()).unwrap();
//! assert_eq!(seq.range_sum(2, 5).unwrap().value, 10);
//! assert_eq!(seq.value_at(5).unwrap(), 9);
//! let stats = seq.stats_report(2, 5).unwrap();
//! assert!((stats.mean - 10.0 / 3.0).abs() < 1e-12);
//! ```
//!
//! Concurrency contract: mutations need exclusive access (`&mut self`);
//! any number of queries may run concurrently on a shared reference, and
//! the container moves freely between threads.

mod config;
mod cursor;
mod error;
mod node;
mod statistics;
mod summation;
mod tree;
mod update;
mod validate;
mod value;

pub mod oracle;

pub use config::{TreeConfig, ValueMode};
pub use cursor::Cursor;
pub use error::{Error, Result};
pub use statistics::RangeStats;
pub use summation::{QueryStats, SumResult};
pub use tree::SumSequence;
pub use validate::{ValidationReport, Violation};
pub use value::Value;
