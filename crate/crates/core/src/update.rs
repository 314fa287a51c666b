//! Insert and remove.
//!
//! Both operations touch the deepest-level list first and then walk the
//! ancestor chain once, recomputing aggregates and repairing group sizes
//! as they go:
//!
//! - A group pushed past `max_group` splits into halves of ⌊k/2⌋ and
//!   ⌈k/2⌉ children; the extra parent joins the level above and the
//!   repair continues upward.
//! - A group dropping below `min_group` borrows one child from the
//!   adjacent sibling group, or merges with it when the sibling is at
//!   minimum size. Sibling selection stays inside the parent's own group
//!   below the top level, so only one ancestor chain needs refreshing.
//! - The top level grows a new level once it reaches the growth
//!   threshold and is collapsed away when it shrinks to a single node.
//!
//! Group boundaries are contiguous runs of one level's list, so moving a
//! child between adjacent groups is purely a matter of updating head
//! flags and the sparse up/down links; the list itself never changes.

use crate::error::{Error, Result};
use crate::node::{Node, NodeId};
use crate::tree::SumSequence;
use crate::value::Value;

impl<V: Value> SumSequence<V> {
    /// Inserts `value` so that its rank equals `rank`; all following
    /// ranks shift up by one.
    pub fn insert(&mut self, rank: usize, value: V) -> Result<()> {
        if rank > self.size {
            return Err(Error::RankOutOfRange {
                rank,
                len: self.size,
            });
        }
        value.check_storable()?;
        self.epoch += 1;
        let track = self.config.track_squares();
        let leaf = self.alloc(Node::leaf(value, track));

        if self.size == 0 {
            self.node_mut(leaf).group_head = true;
            self.levels[0].head = Some(leaf);
            self.levels[0].len = 1;
            self.first = Some(leaf);
            self.last = Some(leaf);
            self.size = 1;
            return Ok(());
        }

        if rank == self.size {
            // Append: joins the last group.
            let anchor = self.last.expect("nonempty sequence has a last leaf");
            self.node_mut(anchor).next = Some(leaf);
            self.node_mut(leaf).prev = Some(anchor);
            self.last = Some(leaf);
        } else {
            // Insert directly before the current occupant of `rank`. If
            // that node heads its group, the new node takes over the
            // headship so the group still starts at the inserted rank.
            let (at, _) = self.descend_to_rank(rank);
            if self.node(at).group_head {
                let up = self.node(at).up;
                {
                    let n = self.node_mut(at);
                    n.group_head = false;
                    n.up = None;
                }
                {
                    let n = self.node_mut(leaf);
                    n.group_head = true;
                    n.up = up;
                }
                if let Some(parent) = up {
                    self.node_mut(parent).down = Some(leaf);
                }
            }
            let before = self.node(at).prev;
            self.node_mut(leaf).next = Some(at);
            self.node_mut(at).prev = Some(leaf);
            if let Some(b) = before {
                self.node_mut(b).next = Some(leaf);
                self.node_mut(leaf).prev = Some(b);
            } else {
                self.first = Some(leaf);
                self.levels[0].head = Some(leaf);
            }
        }
        self.levels[0].len += 1;
        self.size += 1;

        let parent = self.parent_of(leaf);
        self.rebalance_upward(parent, 1);
        Ok(())
    }

    /// Removes and returns the element at `rank`; all following ranks
    /// shift down by one.
    pub fn remove(&mut self, rank: usize) -> Result<V> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange {
                rank,
                len: self.size,
            });
        }
        let (x, _) = self.descend_to_rank(rank);
        self.epoch += 1;
        let value = self.node(x).value.expect("deepest-level node stores a value");
        let parent = self.parent_of(x);

        // Pass the headship to the right neighbor before unlinking.
        if self.node(x).group_head {
            if let Some(next) = self.node(x).next {
                debug_assert!(
                    !self.node(next).group_head,
                    "groups below the top never shrink to one member"
                );
                let up = self.node(x).up;
                {
                    let n = self.node_mut(next);
                    n.group_head = true;
                    n.up = up;
                }
                if let Some(p) = up {
                    self.node_mut(p).down = Some(next);
                }
            }
        }

        let (prev, next) = {
            let n = self.node(x);
            (n.prev, n.next)
        };
        match prev {
            Some(p) => self.node_mut(p).next = next,
            None => {
                self.first = next;
                self.levels[0].head = next;
            }
        }
        match next {
            Some(n) => self.node_mut(n).prev = prev,
            None => self.last = prev,
        }
        self.levels[0].len -= 1;
        self.size -= 1;
        self.release(x);

        self.rebalance_upward(parent, 1);
        Ok(value)
    }

    // ------------------------------------------------------------------
    // Rebalancing
    // ------------------------------------------------------------------

    /// Walks the ancestor chain from `parent` (a node at `level`) to the
    /// top, recomputing aggregates and repairing any group-size breach
    /// in the child level, then settles the top level.
    fn rebalance_upward(&mut self, mut parent: Option<NodeId>, mut level: usize) {
        while let Some(p) = parent {
            let k = self.child_count(p);
            let carrier = if k > self.config.max_group() {
                self.split_group(p, level);
                p
            } else if k < self.config.min_group() {
                self.fix_underflow(p, level)
            } else {
                self.recompute(p);
                p
            };
            parent = self.parent_of(carrier);
            level += 1;
        }
        self.settle_top();
    }

    /// Splits `parent`'s oversized child group in two; the new parent of
    /// the right half is linked right after `parent` at `level`.
    fn split_group(&mut self, parent: NodeId, level: usize) {
        let k = self.child_count(parent);
        let keep = k / 2;
        let mut cur = self.node(parent).down.expect("internal node has children");
        for _ in 0..keep {
            cur = self.node(cur).next.expect("split stays within the group");
        }
        let mid = cur;

        let track = self.config.track_squares();
        let right = self.alloc(Node::internal(mid, track));
        {
            let m = self.node_mut(mid);
            m.group_head = true;
            m.up = Some(right);
        }
        let after = self.node(parent).next;
        self.node_mut(parent).next = Some(right);
        self.node_mut(right).prev = Some(parent);
        if let Some(a) = after {
            self.node_mut(right).next = Some(a);
            self.node_mut(a).prev = Some(right);
        }
        self.levels[level].len += 1;
        self.recompute(parent);
        self.recompute(right);
    }

    /// Repairs `parent`'s undersized child group by borrowing from or
    /// merging with the adjacent sibling group. Returns the node whose
    /// ancestor chain continues the upward repair.
    fn fix_underflow(&mut self, parent: NodeId, level: usize) -> NodeId {
        let min = self.config.min_group();
        if !self.node(parent).group_head {
            // Left sibling shares parent's group (or is a plain top-level
            // neighbor); its last child is exactly head.prev.
            let sibling = self.node(parent).prev.expect("non-head node has a left neighbor");
            if self.child_count(sibling) > min {
                let head = self.node(parent).down.expect("internal node has children");
                let moved = self.node(head).prev.expect("sibling group lies directly left");
                {
                    let h = self.node_mut(head);
                    h.group_head = false;
                    h.up = None;
                }
                {
                    let m = self.node_mut(moved);
                    m.group_head = true;
                    m.up = Some(parent);
                }
                self.node_mut(parent).down = Some(moved);
                self.recompute(sibling);
                self.recompute(parent);
                parent
            } else {
                // Merge: sibling absorbs parent's children.
                let head = self.node(parent).down.expect("internal node has children");
                {
                    let h = self.node_mut(head);
                    h.group_head = false;
                    h.up = None;
                }
                self.unlink_internal(parent, level);
                self.recompute(sibling);
                sibling
            }
        } else {
            // Parent heads its group (or the top level): the right
            // neighbor is a member of the same group.
            let sibling = self
                .node(parent)
                .next
                .expect("a lone group cannot underflow");
            debug_assert!(!self.node(sibling).group_head);
            if self.child_count(sibling) > min {
                let donor_head = self.node(sibling).down.expect("internal node has children");
                let new_head = self
                    .node(donor_head)
                    .next
                    .expect("donor group has at least two children");
                {
                    let d = self.node_mut(donor_head);
                    d.group_head = false;
                    d.up = None;
                }
                {
                    let n = self.node_mut(new_head);
                    n.group_head = true;
                    n.up = Some(sibling);
                }
                self.node_mut(sibling).down = Some(new_head);
                self.recompute(parent);
                self.recompute(sibling);
            } else {
                // Merge: parent absorbs sibling's children.
                let donor_head = self.node(sibling).down.expect("internal node has children");
                {
                    let d = self.node_mut(donor_head);
                    d.group_head = false;
                    d.up = None;
                }
                self.unlink_internal(sibling, level);
                self.recompute(parent);
            }
            parent
        }
    }

    /// Unlinks an internal node from its level list and frees it. The
    /// node is never a group head or the level head (merges always
    /// delete the right-hand node of an adjacent pair).
    fn unlink_internal(&mut self, id: NodeId, level: usize) {
        debug_assert!(!self.node(id).group_head);
        let (prev, next) = {
            let n = self.node(id);
            (n.prev, n.next)
        };
        let p = prev.expect("deleted internal node has a left neighbor");
        self.node_mut(p).next = next;
        if let Some(n) = next {
            self.node_mut(n).prev = prev;
        }
        self.levels[level].len -= 1;
        self.release(id);
    }

    /// Grows a new level above a full top and collapses single-node top
    /// levels.
    fn settle_top(&mut self) {
        while self.levels.last().expect("levels never empty").len >= self.config.growth_threshold()
        {
            self.build_level_above();
        }
        while self.levels.len() > 1 && self.levels.last().unwrap().len == 1 {
            let top = self.levels.pop().expect("levels never empty");
            let lone = top.head.expect("single-node level has a head");
            let child_head = self.node(lone).down.expect("internal node has children");
            // The child head stays a group head as the first node of the
            // new top level; it just loses its parent link.
            self.node_mut(child_head).up = None;
            self.release(lone);
        }
    }
}
