//! Rank-based access and cursors.
//!
//! A [`Cursor`] is a stable reference to one element (one deepest-level
//! node). It is the "finger" for local queries: constant-time steps to
//! neighbors and distance-logarithmic range sums. Any mutation of the
//! owning sequence invalidates all of its cursors, tracked through a
//! mutation epoch.

use crate::error::{Error, Result};
use crate::node::NodeId;
use crate::summation::QueryStats;
use crate::tree::SumSequence;
use crate::value::Value;

/// A reference to one element of a [`SumSequence`].
///
/// Cursors are cheap to copy and carry the identity and mutation epoch
/// of their owner; using a cursor after any mutation, or against a
/// different sequence, is reported as an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cursor {
    pub(crate) node: NodeId,
    pub(crate) owner: u64,
    pub(crate) epoch: u64,
}

impl<V: Value> SumSequence<V> {
    pub(crate) fn check_cursor(&self, cursor: Cursor) -> Result<NodeId> {
        if cursor.owner != self.seq_id {
            return Err(Error::CursorOwner);
        }
        if cursor.epoch != self.epoch {
            return Err(Error::StaleCursor);
        }
        Ok(cursor.node)
    }

    fn make_cursor(&self, node: NodeId) -> Cursor {
        Cursor {
            node,
            owner: self.seq_id,
            epoch: self.epoch,
        }
    }

    /// Cursor to the element of the given rank, found by the top-down
    /// count-guided search.
    pub fn select(&self, rank: usize) -> Result<Cursor> {
        Ok(self.select_with_stats(rank)?.0)
    }

    /// Like [`select`](Self::select), additionally reporting the nodes
    /// visited by the descent.
    pub fn select_with_stats(&self, rank: usize) -> Result<(Cursor, QueryStats)> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange {
                rank,
                len: self.size,
            });
        }
        let (leaf, visited) = self.descend_to_rank(rank);
        let stats = QueryStats {
            nodes_visited: visited,
            levels_touched: self.levels.len() as u64,
            ..QueryStats::default()
        };
        Ok((self.make_cursor(leaf), stats))
    }

    /// The value stored at the given rank.
    pub fn value_at(&self, rank: usize) -> Result<V> {
        let cursor = self.select(rank)?;
        Ok(self
            .node(cursor.node)
            .value
            .expect("cursor references a deepest-level node"))
    }

    /// The value under a cursor.
    pub fn cursor_value(&self, cursor: Cursor) -> Result<V> {
        let node = self.check_cursor(cursor)?;
        Ok(self
            .node(node)
            .value
            .expect("cursor references a deepest-level node"))
    }

    /// Number of elements strictly before the cursor's element, computed
    /// by walking left to each group head and ascending.
    pub fn rank_of(&self, cursor: Cursor) -> Result<usize> {
        let mut cur = self.check_cursor(cursor)?;
        let mut rank = 0usize;
        loop {
            while !self.node(cur).group_head {
                cur = self
                    .node(cur)
                    .prev
                    .expect("non-head node has a left neighbor");
                rank += self.node(cur).count;
            }
            match self.node(cur).up {
                Some(parent) => cur = parent,
                None => return Ok(rank),
            }
        }
    }

    /// Constant-time step to the next element.
    pub fn cursor_next(&self, cursor: Cursor) -> Result<Cursor> {
        let node = self.check_cursor(cursor)?;
        match self.node(node).next {
            Some(next) => Ok(self.make_cursor(next)),
            None => Err(Error::Boundary("last element")),
        }
    }

    /// Constant-time step to the previous element.
    pub fn cursor_prev(&self, cursor: Cursor) -> Result<Cursor> {
        let node = self.check_cursor(cursor)?;
        match self.node(node).prev {
            Some(prev) => Ok(self.make_cursor(prev)),
            None => Err(Error::Boundary("first element")),
        }
    }

    /// Iterates over the values at ranks `[from, to)`.
    pub fn iter_range(&self, from: usize, to: usize) -> Result<impl Iterator<Item = V> + '_> {
        if from > to || to > self.size {
            return Err(Error::BoundsOutOfRange {
                from,
                to,
                len: self.size,
            });
        }
        let start = if from == to {
            None
        } else {
            Some(self.select(from)?.node)
        };
        let mut remaining = to - from;
        let mut cur = start;
        Ok(std::iter::from_fn(move || {
            if remaining == 0 {
                return None;
            }
            let id = cur?;
            remaining -= 1;
            let node = self.node(id);
            cur = node.next;
            node.value
        }))
    }
}
