//! Fast sequential summation.
//!
//! Two traversal families produce range sums without touching the
//! elements themselves:
//!
//! - **Prefix walk** (`prefix_sum`): a top-down descent guided by the
//!   count payload. Every rightward step across a level adds the stored
//!   sum of the node it leaves; descending a level adds nothing. The
//!   walk stops once the accumulated count reaches the requested prefix
//!   length, visiting at most `max_group` nodes per level.
//!
//! - **Finger walk** (`range_sum`, `range_sum_between`): starts at the
//!   two boundary leaves and maintains a per-level window `[left, right]`
//!   of nodes whose subtrees cover exactly the still-unsummed remainder.
//!   Each level consumes the window's flanks inside their groups and
//!   ascends to the flanking parents, so the number of levels climbed is
//!   logarithmic in the queried distance rather than in the sequence
//!   size. Only additions are performed, which keeps the result as
//!   accurate as a plain left-to-right loop over the range.
//!
//! `range_sum_diff` is the subtraction-based alternative — two prefix
//! walks and one subtraction. It is provided for comparison: it costs
//! more and loses accuracy when the prefix below the range dwarfs the
//! range's own sum.
//!
//! Every query carries a [`QueryStats`] with observed operation counts.

use crate::cursor::Cursor;
use crate::error::{Error, Result};
use crate::node::NodeId;
use crate::tree::SumSequence;
use crate::value::Value;

/// Per-query instrumentation: how much work a traversal actually did.
///
/// `additions`/`subtractions` count operations on element sums only;
/// count bookkeeping is not included. `levels_touched` counts the levels
/// entered by the summation walk itself (for `range_sum`, the locate
/// phase is excluded so the count reflects the queried distance).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub nodes_visited: u64,
    pub additions: u64,
    pub subtractions: u64,
    pub levels_touched: u64,
}

impl QueryStats {
    pub(crate) fn absorb(&mut self, other: QueryStats) {
        self.nodes_visited += other.nodes_visited;
        self.additions += other.additions;
        self.subtractions += other.subtractions;
        self.levels_touched += other.levels_touched;
    }
}

/// A query result together with the stats of the traversal that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult<T> {
    pub value: T,
    pub stats: QueryStats,
}

/// What a walk accumulates at each visited node.
pub(crate) struct WalkSums<V: Value> {
    pub sum: V::Agg,
    pub sum_sq: V::Sq,
    pub want_squares: bool,
}

impl<V: Value> WalkSums<V> {
    pub(crate) fn new(want_squares: bool) -> Self {
        Self {
            sum: V::agg_zero(),
            sum_sq: V::sq_zero(),
            want_squares,
        }
    }

    #[inline]
    fn take(&mut self, seq: &SumSequence<V>, id: NodeId, stats: &mut QueryStats) {
        let node = seq.node(id);
        self.sum = V::agg_add(self.sum, node.sum);
        stats.additions += 1;
        if self.want_squares {
            self.sum_sq = V::sq_add(
                self.sum_sq,
                node.sum_sq.expect("squares tracked on every node"),
            );
            stats.additions += 1;
        }
    }
}

impl<V: Value> SumSequence<V> {
    fn check_bounds(&self, from: usize, to: usize) -> Result<()> {
        if from > to || to > self.size {
            return Err(Error::BoundsOutOfRange {
                from,
                to,
                len: self.size,
            });
        }
        Ok(())
    }

    fn narrow(agg: V::Agg) -> Result<V> {
        V::agg_to_value(agg).ok_or(Error::Overflow)
    }

    // ------------------------------------------------------------------
    // Prefix walk
    // ------------------------------------------------------------------

    /// Accumulates payloads over the top-down walk covering the first
    /// `n` elements. `n` must be in `1..=size`.
    pub(crate) fn walk_prefix(&self, n: usize, acc: &mut WalkSums<V>) -> QueryStats {
        debug_assert!(n >= 1 && n <= self.size);
        let mut stats = QueryStats::default();
        let mut covered = 0usize;
        let mut cur = self
            .levels
            .last()
            .expect("levels never empty")
            .head
            .expect("nonempty sequence has a top node");
        loop {
            stats.levels_touched += 1;
            loop {
                stats.nodes_visited += 1;
                let node = self.node(cur);
                if covered + node.count <= n {
                    // Rightward step: take the whole subtree's payload.
                    acc.take(self, cur, &mut stats);
                    covered += node.count;
                    if covered == n {
                        return stats;
                    }
                    cur = node
                        .next
                        .expect("prefix below total count stays within the level");
                } else {
                    // Descend; vertical moves contribute nothing.
                    cur = node
                        .down
                        .expect("leaf subtree of count 1 is never overshot");
                    break;
                }
            }
        }
    }

    /// Sum of the first `n` elements.
    pub fn prefix_sum(&self, n: usize) -> Result<SumResult<V>> {
        if n > self.size {
            return Err(Error::BoundsOutOfRange {
                from: 0,
                to: n,
                len: self.size,
            });
        }
        if n == 0 {
            return Ok(SumResult {
                value: V::zero(),
                stats: QueryStats::default(),
            });
        }
        let mut acc = WalkSums::new(false);
        let stats = self.walk_prefix(n, &mut acc);
        Ok(SumResult {
            value: Self::narrow(acc.sum)?,
            stats,
        })
    }

    /// Sum of all elements, read off the top level directly.
    pub fn total_sum(&self) -> Result<SumResult<V>> {
        let mut stats = QueryStats::default();
        let mut sum = V::agg_zero();
        let mut cur = self.levels.last().expect("levels never empty").head;
        if cur.is_some() {
            stats.levels_touched = 1;
        }
        while let Some(id) = cur {
            stats.nodes_visited += 1;
            stats.additions += 1;
            sum = V::agg_add(sum, self.node(id).sum);
            cur = self.node(id).next;
        }
        Ok(SumResult {
            value: Self::narrow(sum)?,
            stats,
        })
    }

    // ------------------------------------------------------------------
    // Finger walk
    // ------------------------------------------------------------------

    /// Accumulates payloads over the node span `left..=right` (same
    /// level, `left` not after `right`), ascending level by level so the
    /// cost is logarithmic in the span's element distance.
    pub(crate) fn walk_span(
        &self,
        left: NodeId,
        right: NodeId,
        acc: &mut WalkSums<V>,
    ) -> Result<QueryStats> {
        let mut stats = QueryStats::default();
        let mut left = left;
        let mut right = right;
        loop {
            stats.levels_touched += 1;

            // Left flank: take nodes from `left` rightward. Either the
            // walk meets `right` (range complete) or it stops at the end
            // of `left`'s group.
            let mut cur = left;
            let left_boundary = loop {
                stats.nodes_visited += 1;
                acc.take(self, cur, &mut stats);
                if cur == right {
                    return Ok(stats);
                }
                match self.node(cur).next {
                    Some(next) if !self.node(next).group_head => cur = next,
                    Some(next) => break next,
                    // Ran off the level without meeting `right`: the
                    // endpoints are out of order.
                    None => return Err(Error::CursorOrder),
                }
            };

            // Right flank: take nodes from `right` leftward through its
            // group head.
            let mut cur = right;
            loop {
                stats.nodes_visited += 1;
                acc.take(self, cur, &mut stats);
                if self.node(cur).group_head {
                    break;
                }
                cur = self
                    .node(cur)
                    .prev
                    .expect("non-head node has a left neighbor");
            }
            let right_head = cur;

            // Adjacent groups: both flanks together covered everything.
            if left_boundary == right_head {
                return Ok(stats);
            }

            // Ascend both sides: the remaining full groups between the
            // flanks are exactly the children of the parent span.
            left = self
                .node(left_boundary)
                .up
                .ok_or(Error::CursorOrder)?;
            let before_right_group = self.node(right_head).prev.ok_or(Error::CursorOrder)?;
            let mut head = before_right_group;
            while !self.node(head).group_head {
                stats.nodes_visited += 1;
                head = self
                    .node(head)
                    .prev
                    .expect("non-head node has a left neighbor");
            }
            right = self.node(head).up.ok_or(Error::CursorOrder)?;
        }
    }

    /// Sum of the elements at ranks `[from, to)`, computed by locating
    /// the boundary leaves top-down and then walking the finger path.
    pub fn range_sum(&self, from: usize, to: usize) -> Result<SumResult<V>> {
        self.check_bounds(from, to)?;
        if from == to {
            return Ok(SumResult {
                value: V::zero(),
                stats: QueryStats::default(),
            });
        }
        let (left, lv) = self.descend_to_rank(from);
        let (right, rv) = self.descend_to_rank(to - 1);
        let mut acc = WalkSums::new(false);
        let mut stats = self.walk_span(left, right, &mut acc)?;
        stats.nodes_visited += lv + rv;
        Ok(SumResult {
            value: Self::narrow(acc.sum)?,
            stats,
        })
    }

    /// Sum of the elements from cursor `a` through cursor `b`,
    /// **inclusive** on both ends, via the pure finger path. The cost is
    /// logarithmic in the distance between the cursors, independent of
    /// the sequence size.
    ///
    /// `a` must not be after `b`.
    pub fn range_sum_between(&self, a: Cursor, b: Cursor) -> Result<SumResult<V>> {
        let left = self.check_cursor(a)?;
        let right = self.check_cursor(b)?;
        let mut acc = WalkSums::new(false);
        let stats = self.walk_span(left, right, &mut acc)?;
        Ok(SumResult {
            value: Self::narrow(acc.sum)?,
            stats,
        })
    }

    /// Sum of the elements at ranks `[from, to)` as the difference of
    /// two prefix sums.
    ///
    /// Costs two full prefix walks and, in float mode, inherits the
    /// cancellation error of subtracting two large prefixes; prefer
    /// [`range_sum`](Self::range_sum). Provided for comparison.
    pub fn range_sum_diff(&self, from: usize, to: usize) -> Result<SumResult<V>> {
        self.check_bounds(from, to)?;
        let upper = self.prefix_sum(to)?;
        let lower = self.prefix_sum(from)?;
        let mut stats = upper.stats;
        stats.absorb(lower.stats);
        stats.subtractions += 1;
        let diff = V::agg_sub(upper.value.to_agg(), lower.value.to_agg());
        Ok(SumResult {
            value: Self::narrow(diff)?,
            stats,
        })
    }
}
