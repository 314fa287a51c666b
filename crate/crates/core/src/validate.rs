//! Exhaustive structural validation.
//!
//! `validate` re-derives every invariant from scratch: link symmetry,
//! group-head placement, sparse up/down wiring, group-size bounds, level
//! sizes, and aggregate soundness (counts, sums, and squared sums checked
//! against freshly recomputed child totals). Float aggregates are
//! compared with relative tolerance `1e-9`; everything else is exact.

use crate::node::NodeId;
use crate::tree::SumSequence;
use crate::value::Value;
use std::fmt;

/// One failed check: where it happened and which rule broke.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Level index, deepest level = 0.
    pub level: usize,
    /// Node position within the level, leftmost = 0.
    pub ordinal: usize,
    /// Stable rule identifier.
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {} node {}: {} ({})",
            self.level, self.ordinal, self.rule, self.detail
        )
    }
}

/// Outcome of a full structural validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, level: usize, ordinal: usize, rule: &'static str, detail: String) {
        self.ok = false;
        self.violations.push(Violation {
            level,
            ordinal,
            rule,
            detail,
        });
    }
}

impl<V: Value> SumSequence<V> {
    /// Checks every structural and aggregation invariant, returning all
    /// violations found rather than stopping at the first.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            ok: true,
            violations: Vec::new(),
        };
        let track = self.config.track_squares();

        if self.levels.is_empty() {
            report.push(0, 0, "levels-nonempty", "no levels at all".into());
            return report;
        }

        for (li, level) in self.levels.iter().enumerate() {
            let is_top = li == self.levels.len() - 1;
            let is_deepest = li == 0;
            let mut ordinal = 0usize;
            let mut prev: Option<NodeId> = None;
            let mut cur = level.head;
            let mut level_count_total = 0usize;

            while let Some(id) = cur {
                let node = self.node(id);

                if node.prev != prev {
                    report.push(li, ordinal, "link-symmetry", "prev link mismatch".into());
                }
                if let Some(n) = node.next {
                    if self.node(n).prev != Some(id) {
                        report.push(li, ordinal, "link-symmetry", "next.prev mismatch".into());
                    }
                }

                if ordinal == 0 && !node.group_head {
                    report.push(li, ordinal, "group-head", "level head not a group head".into());
                }

                match (node.group_head, is_top, node.up) {
                    (true, false, None) => report.push(
                        li,
                        ordinal,
                        "up-links",
                        "group head below top missing up link".into(),
                    ),
                    (true, true, Some(_)) => {
                        report.push(li, ordinal, "up-links", "top-level node has up link".into())
                    }
                    (false, _, Some(_)) => {
                        report.push(li, ordinal, "up-links", "non-head node has up link".into())
                    }
                    _ => {}
                }
                if let Some(up) = node.up {
                    if self.node(up).down != Some(id) {
                        report.push(li, ordinal, "up-links", "parent.down does not point back".into());
                    }
                }

                if is_deepest {
                    if node.down.is_some() {
                        report.push(li, ordinal, "leaf-shape", "deepest node has down link".into());
                    }
                    match node.value {
                        None => {
                            report.push(li, ordinal, "leaf-shape", "deepest node missing value".into())
                        }
                        Some(v) => {
                            if node.count != 1 {
                                report.push(
                                    li,
                                    ordinal,
                                    "leaf-aggregates",
                                    format!("count {} != 1", node.count),
                                );
                            }
                            if !V::agg_close(node.sum, v.to_agg()) {
                                report.push(
                                    li,
                                    ordinal,
                                    "leaf-aggregates",
                                    format!("sum {:?} != value {:?}", node.sum, v),
                                );
                            }
                            match (track, node.sum_sq) {
                                (true, Some(sq)) => {
                                    if !V::sq_close(sq, v.to_sq()) {
                                        report.push(
                                            li,
                                            ordinal,
                                            "leaf-aggregates",
                                            format!("sum_sq {sq:?} != value squared"),
                                        );
                                    }
                                }
                                (true, None) => report.push(
                                    li,
                                    ordinal,
                                    "squares-payload",
                                    "missing sum_sq with squares tracked".into(),
                                ),
                                (false, Some(_)) => report.push(
                                    li,
                                    ordinal,
                                    "squares-payload",
                                    "sum_sq present with squares disabled".into(),
                                ),
                                (false, None) => {}
                            }
                        }
                    }
                } else {
                    if node.value.is_some() {
                        report.push(li, ordinal, "node-shape", "internal node stores a value".into());
                    }
                    match node.down {
                        None => report.push(li, ordinal, "node-shape", "internal node has no down".into()),
                        Some(child) => {
                            if !self.node(child).group_head {
                                report.push(
                                    li,
                                    ordinal,
                                    "down-links",
                                    "down target is not a group head".into(),
                                );
                            }
                            if self.node(child).up != Some(id) {
                                report.push(
                                    li,
                                    ordinal,
                                    "down-links",
                                    "child head does not point back up".into(),
                                );
                            }
                            self.check_group(&mut report, li, ordinal, id);
                        }
                    }
                }

                level_count_total += node.count;
                ordinal += 1;
                prev = Some(id);
                cur = node.next;
            }

            if ordinal != level.len {
                report.push(
                    li,
                    0,
                    "level-size",
                    format!("descriptor says {} nodes, walked {}", level.len, ordinal),
                );
            }
            if level_count_total != self.size {
                report.push(
                    li,
                    0,
                    "size-consistency",
                    format!("level covers {} elements, size is {}", level_count_total, self.size),
                );
            }
            if is_top {
                let threshold = self.config.growth_threshold();
                if level.len >= threshold {
                    report.push(
                        li,
                        0,
                        "top-level-bound",
                        format!("top level has {} nodes, wants < {}", level.len, threshold),
                    );
                }
                if self.levels.len() > 1 && level.len < 2 {
                    report.push(
                        li,
                        0,
                        "top-level-bound",
                        "top level above another level has fewer than 2 nodes".into(),
                    );
                }
            }
        }

        // First/last pointers and deepest-list endpoints.
        if self.first != self.levels[0].head {
            report.push(0, 0, "endpoints", "first != deepest level head".into());
        }
        match (self.last, self.first) {
            (Some(last), Some(_)) => {
                if self.node(last).next.is_some() {
                    report.push(0, 0, "endpoints", "last node has a successor".into());
                }
            }
            (None, None) => {}
            _ => report.push(0, 0, "endpoints", "first/last presence mismatch".into()),
        }
        if self.levels[0].len != self.size {
            report.push(
                0,
                0,
                "size-consistency",
                format!("{} deepest nodes, size {}", self.levels[0].len, self.size),
            );
        }

        // Level-count bound: levels <= ceil(log_min(max(size, 2))) + 1.
        let bound = log_ceil(self.size.max(2), self.config.min_group()) + 1;
        if self.levels.len() > bound {
            report.push(
                self.levels.len() - 1,
                0,
                "level-count-bound",
                format!("{} levels exceeds bound {}", self.levels.len(), bound),
            );
        }

        report
    }

    fn check_group(
        &self,
        report: &mut ValidationReport,
        level: usize,
        ordinal: usize,
        parent: NodeId,
    ) {
        let min = self.config.min_group();
        let max = self.config.max_group();
        let track = self.config.track_squares();
        let mut count = 0usize;
        let mut sum = V::agg_zero();
        let mut sum_sq = V::sq_zero();
        let mut members = 0usize;
        let mut cur = self.node(parent).down;
        let mut seen_head = false;
        while let Some(id) = cur {
            let child = self.node(id);
            if child.group_head {
                if seen_head {
                    break;
                }
                seen_head = true;
            }
            members += 1;
            count += child.count;
            sum = V::agg_add(sum, child.sum);
            if track {
                if let Some(sq) = child.sum_sq {
                    sum_sq = V::sq_add(sum_sq, sq);
                }
            }
            cur = child.next;
        }

        if members < min || members > max {
            report.push(
                level,
                ordinal,
                "group-size",
                format!("group has {members} children, wants {min}..={max}"),
            );
        }
        let node = self.node(parent);
        if node.count != count {
            report.push(
                level,
                ordinal,
                "aggregate-count",
                format!("stored {} recomputed {}", node.count, count),
            );
        }
        if !V::agg_close(node.sum, sum) {
            report.push(
                level,
                ordinal,
                "aggregate-sum",
                format!("stored {:?} recomputed {:?}", node.sum, sum),
            );
        }
        if track {
            match node.sum_sq {
                Some(sq) => {
                    if !V::sq_close(sq, sum_sq) {
                        report.push(
                            level,
                            ordinal,
                            "aggregate-sum-sq",
                            format!("stored {sq:?} recomputed {sum_sq:?}"),
                        );
                    }
                }
                None => report.push(
                    level,
                    ordinal,
                    "squares-payload",
                    "missing sum_sq with squares tracked".into(),
                ),
            }
        }
    }
}

/// Smallest `k` with `base^k >= n` (base >= 2, n >= 1).
fn log_ceil(n: usize, base: usize) -> usize {
    let mut k = 0;
    let mut reach = 1usize;
    while reach < n {
        reach = reach.saturating_mul(base);
        k += 1;
    }
    k
}
