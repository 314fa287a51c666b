//! Arena-backed tree nodes.
//!
//! Nodes live in a `Vec` and reference each other through `NodeId`
//! indices; removed slots are recycled through a free list. The link set
//! is deliberately sparse: every level is a doubly linked list, `down`
//! exists only on internal nodes (and targets the first child of the
//! group), and `up` exists only on group heads below the top level.

use crate::value::Value;

/// Index of a node in the arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct NodeId(pub(crate) u32);

impl NodeId {
    #[inline]
    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

/// One tree node. Deepest-level nodes carry the element value and have
/// `count == 1`; internal nodes aggregate their child group.
#[derive(Debug, Clone)]
pub(crate) struct Node<V: Value> {
    pub next: Option<NodeId>,
    pub prev: Option<NodeId>,
    /// First child of this node's group; present iff internal.
    pub down: Option<NodeId>,
    /// Parent; present iff this node heads a group below the top level.
    pub up: Option<NodeId>,
    /// First child of its group, or first node of the top level.
    pub group_head: bool,
    /// Number of deepest-level elements covered.
    pub count: usize,
    pub sum: V::Agg,
    /// Present iff the sequence tracks squares.
    pub sum_sq: Option<V::Sq>,
    /// Present iff deepest-level node.
    pub value: Option<V>,
}

impl<V: Value> Node<V> {
    pub(crate) fn leaf(value: V, track_squares: bool) -> Self {
        Node {
            next: None,
            prev: None,
            down: None,
            up: None,
            group_head: false,
            count: 1,
            sum: value.to_agg(),
            sum_sq: track_squares.then(|| value.to_sq()),
            value: Some(value),
        }
    }

    pub(crate) fn internal(first_child: NodeId, track_squares: bool) -> Self {
        Node {
            next: None,
            prev: None,
            down: Some(first_child),
            up: None,
            group_head: false,
            count: 0,
            sum: V::agg_zero(),
            sum_sq: track_squares.then(V::sq_zero),
            value: None,
        }
    }

}
