//! The level-linked B+ tree behind [`SumSequence`].
//!
//! Structure:
//!
//! - The deepest level is a doubly linked list holding every element in
//!   rank order; each leaf stores its value plus `count = 1`, the value
//!   as its own sum, and optionally the squared value.
//! - Each internal level is a doubly linked list of parent nodes. A
//!   parent covers a contiguous group of `min_group..=max_group` child
//!   nodes and stores the group's total count, sum, and (optionally)
//!   sum of squares.
//! - Links between levels are sparse: a parent points `down` to its
//!   first child only, and only that first child (the group head) points
//!   `up`. Ascending from an arbitrary node walks left to its group head
//!   first.
//! - The top level holds fewer nodes than the growth threshold; a new
//!   level is built above it once it fills up, and a single-node top
//!   level is collapsed away.
//!
//! Construction is bottom-up and linear: each level is grouped
//! left-to-right into full groups, and an undersized final group is
//! redistributed with its left neighbor.

use crate::config::TreeConfig;
use crate::error::{Error, Result};
use crate::node::{Node, NodeId};
use crate::value::Value;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_SEQ_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_seq_id() -> u64 {
    NEXT_SEQ_ID.fetch_add(1, Ordering::Relaxed)
}

/// One horizontal level: its leftmost node and its node count.
#[derive(Debug, Clone)]
pub(crate) struct Level {
    pub head: Option<NodeId>,
    pub len: usize,
}

/// An indexed sequence of numeric values with O(log n) rank access,
/// prefix sums, finger-search range sums, and range statistics.
///
/// Elements are addressed by 0-based rank. All range arguments are
/// half-open `[from, to)`.
#[derive(Debug)]
pub struct SumSequence<V: Value> {
    pub(crate) config: TreeConfig,
    pub(crate) nodes: Vec<Node<V>>,
    pub(crate) free: Vec<NodeId>,
    /// Levels from deepest (index 0) to top. Never empty: an empty
    /// sequence keeps one empty deepest level.
    pub(crate) levels: Vec<Level>,
    pub(crate) size: usize,
    pub(crate) first: Option<NodeId>,
    pub(crate) last: Option<NodeId>,
    pub(crate) seq_id: u64,
    /// Bumped by every mutation; cursors carry the epoch they were
    /// created under and become stale when it changes.
    pub(crate) epoch: u64,
    /// Total node allocations over the sequence's lifetime.
    pub(crate) created: u64,
}

impl<V: Value> SumSequence<V> {
    /// Creates an empty sequence.
    pub fn new(config: TreeConfig) -> Self {
        Self {
            config,
            nodes: Vec::new(),
            free: Vec::new(),
            levels: vec![Level { head: None, len: 0 }],
            size: 0,
            first: None,
            last: None,
            seq_id: fresh_seq_id(),
            epoch: 0,
            created: 0,
        }
    }

    /// Builds a sequence containing `values` in order, bottom-up in
    /// linear time.
    pub fn build(values: &[V], config: TreeConfig) -> Result<Self> {
        let mut seq = Self::new(config);
        seq.rebuild_from(values)?;
        Ok(seq)
    }

    /// Replaces the entire contents with `values`, reusing the existing
    /// node allocation where possible. Equivalent to building a fresh
    /// sequence with the same configuration.
    pub fn assign(&mut self, values: &[V]) -> Result<()> {
        self.rebuild_from(values)
    }

    /// Number of elements.
    #[inline]
    pub fn len(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    /// Total nodes allocated over the sequence's lifetime, including
    /// nodes later freed. Directly after `build` this is the number of
    /// nodes the construction created.
    #[inline]
    pub fn nodes_created(&self) -> u64 {
        self.created
    }

    /// Number of levels, including the deepest one.
    #[inline]
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Discards the structure and rebuilds it from the current contents.
    /// This is the remedy for accumulated float aggregation drift.
    pub fn rebuild(&mut self) {
        let values: Vec<V> = self.values().collect();
        // Values came out of the structure, so they are storable.
        self.rebuild_from(&values)
            .expect("rebuilding from existing contents cannot fail");
    }

    /// Iterates over all element values in rank order.
    pub fn values(&self) -> impl Iterator<Item = V> + '_ {
        let mut cur = self.first;
        std::iter::from_fn(move || {
            let id = cur?;
            let node = self.node(id);
            cur = node.next;
            node.value
        })
    }

    // ------------------------------------------------------------------
    // Arena
    // ------------------------------------------------------------------

    #[inline]
    pub(crate) fn node(&self, id: NodeId) -> &Node<V> {
        &self.nodes[id.idx()]
    }

    #[inline]
    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut Node<V> {
        &mut self.nodes[id.idx()]
    }

    pub(crate) fn alloc(&mut self, node: Node<V>) -> NodeId {
        self.created += 1;
        if let Some(id) = self.free.pop() {
            self.nodes[id.idx()] = node;
            return id;
        }
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node arena exceeds u32 range"));
        self.nodes.push(node);
        id
    }

    pub(crate) fn release(&mut self, id: NodeId) {
        self.free.push(id);
    }

    // ------------------------------------------------------------------
    // Navigation helpers
    // ------------------------------------------------------------------

    /// Walks left from `id` to the head of its group.
    pub(crate) fn group_head_of(&self, id: NodeId) -> NodeId {
        let mut cur = id;
        while !self.node(cur).group_head {
            cur = self
                .node(cur)
                .prev
                .expect("non-head node must have a left neighbor");
        }
        cur
    }

    /// Parent of `id`'s group, or `None` at the top level.
    pub(crate) fn parent_of(&self, id: NodeId) -> Option<NodeId> {
        self.node(self.group_head_of(id)).up
    }

    /// Number of children in the group under `parent`.
    pub(crate) fn child_count(&self, parent: NodeId) -> usize {
        let mut n = 0;
        let mut cur = self.node(parent).down;
        let mut seen_head = false;
        while let Some(id) = cur {
            let node = self.node(id);
            if node.group_head {
                if seen_head {
                    break;
                }
                seen_head = true;
            }
            n += 1;
            cur = node.next;
        }
        n
    }

    /// Recomputes `parent`'s aggregates from its current children.
    pub(crate) fn recompute(&mut self, parent: NodeId) {
        let track = self.config.track_squares();
        let mut count = 0usize;
        let mut sum = V::agg_zero();
        let mut sum_sq = V::sq_zero();
        let mut cur = self.node(parent).down;
        let mut seen_head = false;
        while let Some(id) = cur {
            let node = self.node(id);
            if node.group_head {
                if seen_head {
                    break;
                }
                seen_head = true;
            }
            count += node.count;
            sum = V::agg_add(sum, node.sum);
            if track {
                sum_sq = V::sq_add(sum_sq, node.sum_sq.expect("squares tracked on every node"));
            }
            cur = node.next;
        }
        let node = self.node_mut(parent);
        node.count = count;
        node.sum = sum;
        node.sum_sq = track.then_some(sum_sq);
    }

    /// Recomputes aggregates along the ancestor chain starting at
    /// `parent` (inclusive) up to the top level.
    pub(crate) fn refresh_chain(&mut self, parent: NodeId) {
        let mut cur = Some(parent);
        while let Some(id) = cur {
            self.recompute(id);
            cur = self.parent_of(id);
        }
    }

    /// Top-down descent to the leaf of the given rank. Returns the leaf
    /// and the number of nodes visited.
    pub(crate) fn descend_to_rank(&self, rank: usize) -> (NodeId, u64) {
        debug_assert!(rank < self.size);
        let mut visited = 0u64;
        let mut acc = 0usize;
        let mut cur = self
            .levels
            .last()
            .expect("levels never empty")
            .head
            .expect("nonempty sequence has a top node");
        loop {
            visited += 1;
            let node = self.node(cur);
            if acc + node.count <= rank {
                acc += node.count;
                cur = node
                    .next
                    .expect("rank below total count stays within the level");
            } else if let Some(child) = node.down {
                cur = child;
            } else {
                debug_assert_eq!(acc, rank);
                return (cur, visited);
            }
        }
    }

    // ------------------------------------------------------------------
    // Construction
    // ------------------------------------------------------------------

    pub(crate) fn rebuild_from(&mut self, values: &[V]) -> Result<()> {
        for &v in values {
            v.check_storable()?;
        }
        self.epoch += 1;
        self.nodes.clear();
        self.free.clear();
        self.levels.clear();
        self.first = None;
        self.last = None;
        self.size = values.len();

        // Levels decay geometrically by at least min_group, so the whole
        // arena fits in one allocation.
        let estimate = values.len() + values.len() / (self.config.min_group() - 1) + 16;
        self.nodes.reserve(estimate);

        let track = self.config.track_squares();

        // Deepest level: the doubly linked list of elements.
        let mut prev: Option<NodeId> = None;
        let mut head: Option<NodeId> = None;
        for &v in values {
            let id = self.alloc(Node::leaf(v, track));
            if let Some(p) = prev {
                self.node_mut(p).next = Some(id);
                self.node_mut(id).prev = Some(p);
            } else {
                head = Some(id);
                self.node_mut(id).group_head = true;
            }
            prev = Some(id);
        }
        self.first = head;
        self.last = prev;
        self.levels.push(Level {
            head,
            len: values.len(),
        });

        while self.levels.last().unwrap().len >= self.config.growth_threshold() {
            self.build_level_above();
        }
        Ok(())
    }

    /// Left-to-right group sizes for a level of `n` nodes.
    ///
    /// Groups are filled to `max_group`; an undersized final group is
    /// redistributed with its left neighbor, and a level that would form
    /// a single full group is split in half so the level above never has
    /// a single node.
    pub(crate) fn plan_groups(&self, n: usize) -> Vec<usize> {
        let max = self.config.max_group();
        let min = self.config.min_group();
        debug_assert!(n >= self.config.growth_threshold());
        if n <= max {
            // Only reachable for even max_group (n == max == 2 * min).
            return vec![n.div_ceil(2), n / 2];
        }
        let mut sizes = vec![max; n / max];
        let rem = n % max;
        if rem >= min {
            sizes.push(rem);
        } else if rem > 0 {
            let total = max + rem;
            let last = sizes.len() - 1;
            sizes[last] = total.div_ceil(2);
            sizes.push(total / 2);
        }
        debug_assert!(sizes.iter().all(|&s| s >= min && s <= max));
        sizes
    }

    /// Builds one parent level above the current top.
    pub(crate) fn build_level_above(&mut self) {
        let track = self.config.track_squares();
        let top = self.levels.last().unwrap();
        let sizes = self.plan_groups(top.len);
        let mut child = top.head;

        // First pass: mark group heads and wire parents. Aggregates are
        // recomputed afterwards, once every head flag is in place, so the
        // child scans stop at the right boundaries.
        let mut parents = Vec::with_capacity(sizes.len());
        for group_size in sizes {
            let head = child.expect("group plan matches level length");
            let parent = self.alloc(Node::internal(head, track));
            {
                let h = self.node_mut(head);
                h.group_head = true;
                h.up = Some(parent);
            }
            for i in 0..group_size {
                let id = child.expect("group plan matches level length");
                if i > 0 {
                    let n = self.node_mut(id);
                    n.group_head = false;
                    n.up = None;
                }
                child = self.node(id).next;
            }
            if let Some(&p) = parents.last() {
                self.node_mut(p).next = Some(parent);
                self.node_mut(parent).prev = Some(p);
            } else {
                self.node_mut(parent).group_head = true;
            }
            parents.push(parent);
        }
        debug_assert!(child.is_none());
        for &parent in &parents {
            self.recompute(parent);
        }
        self.levels.push(Level {
            head: parents.first().copied(),
            len: parents.len(),
        });
    }

    // ------------------------------------------------------------------
    // Point update
    // ------------------------------------------------------------------

    /// Replaces the value at `rank`, returning the previous value. The
    /// structure shape is untouched; sums along the ancestor chain are
    /// recomputed.
    pub fn set_value(&mut self, rank: usize, value: V) -> Result<V> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange {
                rank,
                len: self.size,
            });
        }
        value.check_storable()?;
        let (leaf, _) = self.descend_to_rank(rank);
        self.epoch += 1;
        let track = self.config.track_squares();
        let node = self.node_mut(leaf);
        let previous = node.value.expect("deepest-level node stores a value");
        node.value = Some(value);
        node.sum = value.to_agg();
        node.sum_sq = track.then(|| value.to_sq());
        if let Some(parent) = self.parent_of(leaf) {
            self.refresh_chain(parent);
        }
        Ok(previous)
    }

    /// Test-support hook: corrupts the first internal node's sum and
    /// returns `true` if the sequence has an internal node. Exists so
    /// fault-injection tests can exercise `validate`.
    #[doc(hidden)]
    pub fn corrupt_internal_sum_for_tests(&mut self) -> bool {
        if self.levels.len() < 2 {
            return false;
        }
        let head = self.levels[1].head.expect("internal level has nodes");
        // 2x + 1 changes the sum by more than any validation tolerance
        // regardless of its magnitude.
        let sum = self.node(head).sum;
        let one = V::parse_token("1").expect("1 parses in every mode");
        let bumped = V::agg_add(V::agg_add(sum, sum), V::to_agg(one));
        self.node_mut(head).sum = bumped;
        true
    }
}

impl<V: Value> Clone for SumSequence<V> {
    /// Clones the structure. The clone is a distinct container: it gets
    /// a fresh identity, so cursors from the original do not transfer.
    fn clone(&self) -> Self {
        Self {
            config: self.config,
            nodes: self.nodes.clone(),
            free: self.free.clone(),
            levels: self.levels.clone(),
            size: self.size,
            first: self.first,
            last: self.last,
            seq_id: fresh_seq_id(),
            epoch: 0,
            created: self.created,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(max_group: usize) -> TreeConfig {
        TreeConfig::new(max_group).unwrap()
    }

    #[test]
    fn build_empty() {
        let seq = SumSequence::<i64>::build(&[], cfg(3)).unwrap();
        assert_eq!(seq.len(), 0);
        assert_eq!(seq.level_count(), 1);
        assert!(seq.validate().ok);
    }

    #[test]
    fn build_twelve_ones_fanout_three() {
        let values = vec![1i64; 12];
        let seq = SumSequence::build(&values, cfg(3)).unwrap();
        assert_eq!(seq.len(), 12);
        assert!(seq.validate().ok);
        // Top level stays below the maximum group size.
        assert!(seq.levels.last().unwrap().len < 3);
        // Every internal node's count equals its child-group size (all
        // leaves store 1, and counts aggregate structurally).
        for level in &seq.levels[1..] {
            let mut cur = level.head;
            while let Some(id) = cur {
                assert_eq!(seq.node(id).count as i128, seq.node(id).sum);
                assert_eq!(seq.child_count(id), {
                    let mut direct = 0usize;
                    let mut child = seq.node(id).down;
                    let mut seen_head = false;
                    while let Some(c) = child {
                        if seq.node(c).group_head {
                            if seen_head {
                                break;
                            }
                            seen_head = true;
                        }
                        direct += 1;
                        child = seq.node(c).next;
                    }
                    direct
                });
                cur = seq.node(id).next;
            }
        }
    }

    #[test]
    fn build_digits_fanout_three() {
        let seq = SumSequence::build(&[3i64, 1, 4, 1, 5, 9, 2, 6], cfg(3)).unwrap();
        assert_eq!(seq.len(), 8);
        assert!(seq.validate().ok);
        // Root-level total: oracle is a single accumulation loop.
        let expected: i128 = [3, 1, 4, 1, 5, 9, 2, 6].iter().sum::<i128>();
        let mut total = 0i128;
        let mut cur = seq.levels.last().unwrap().head;
        while let Some(id) = cur {
            total += seq.node(id).sum;
            cur = seq.node(id).next;
        }
        assert_eq!(total, expected);
        assert_eq!(total, 31);
    }

    #[test]
    fn build_node_budget() {
        for n in [0usize, 1, 5, 64, 1000] {
            let values: Vec<i64> = (0..n as i64).collect();
            let seq = SumSequence::build(&values, cfg(3)).unwrap();
            assert!(
                seq.nodes_created() <= 2 * n.max(1) as u64,
                "n={n} created={}",
                seq.nodes_created()
            );
        }
    }

    #[test]
    fn build_single_full_group_splits_evenly() {
        // Eight leaves at fanout 8 must not produce a one-node top level.
        let values: Vec<i64> = (0..8).collect();
        let seq = SumSequence::build(&values, cfg(8)).unwrap();
        assert_eq!(seq.level_count(), 2);
        assert_eq!(seq.levels[1].len, 2);
        assert!(seq.validate().ok);
    }

    #[test]
    fn odd_fanout_boundary_keeps_full_top() {
        // Three leaves at fanout 3 cannot be regrouped into two legal
        // groups; the leaf level stays the top.
        let seq = SumSequence::build(&[1i64, 2, 3], cfg(3)).unwrap();
        assert_eq!(seq.level_count(), 1);
        assert!(seq.validate().ok);
    }

    #[test]
    fn set_value_adjusts_sums() {
        let mut seq = SumSequence::build(&[3i64, 1, 4], cfg(3)).unwrap();
        let old = seq.set_value(1, 7).unwrap();
        assert_eq!(old, 1);
        assert_eq!(seq.prefix_sum(3).unwrap().value, 14);
        assert!(seq.validate().ok);
    }

    #[test]
    fn set_value_identity_keeps_queries() {
        let mut seq = SumSequence::build(&[3i64, 1, 4, 1, 5], cfg(3)).unwrap();
        let before: Vec<i64> = seq.values().collect();
        let v = seq.value_at(2).unwrap();
        seq.set_value(2, v).unwrap();
        assert_eq!(seq.values().collect::<Vec<_>>(), before);
        assert!(seq.validate().ok);
        assert_eq!(seq.total_sum().unwrap().value, 14);
    }

    #[test]
    fn set_value_out_of_range() {
        let mut seq = SumSequence::build(&[3i64, 1, 4], cfg(3)).unwrap();
        assert_eq!(
            seq.set_value(3, 9),
            Err(Error::RankOutOfRange { rank: 3, len: 3 })
        );
    }

    #[test]
    fn clone_is_independent() {
        let seq = SumSequence::build(&[1i64, 2, 3, 4, 5], cfg(3)).unwrap();
        let mut copy = seq.clone();
        copy.set_value(0, 9).unwrap();
        assert_eq!(seq.value_at(0).unwrap(), 1);
        assert_eq!(copy.value_at(0).unwrap(), 9);
        assert!(seq.validate().ok && copy.validate().ok);
    }

    #[test]
    fn rebuild_preserves_contents() {
        let values: Vec<i64> = (0..100).collect();
        let mut seq = SumSequence::build(&values, cfg(4)).unwrap();
        seq.rebuild();
        assert_eq!(seq.values().collect::<Vec<_>>(), values);
        assert!(seq.validate().ok);
    }

    #[test]
    fn build_rejects_non_finite() {
        let err = SumSequence::<f64>::build(&[1.0, f64::NAN], cfg(3));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn sequence_is_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<SumSequence<i64>>();
        assert_send_sync::<SumSequence<f64>>();
    }
}
