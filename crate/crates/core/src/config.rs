//! Tree shape configuration.

use crate::error::{Error, Result};

/// Which element type a sequence stores. Exposed for runtime dispatch
/// (the CLI selects the backing type from a flag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueMode {
    Integer64,
    Float64,
}

/// Fanout bounds and augmentation switches. Immutable once a sequence
/// is built from it.
///
/// `max_group` is the maximum number of children per parent; the minimum
/// is derived as `ceil(max_group / 2)` and enforced on every internal
/// group after mutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeConfig {
    max_group: usize,
    track_squares: bool,
}

impl TreeConfig {
    pub const DEFAULT_MAX_GROUP: usize = 8;

    /// Creates a configuration with the given fanout. Fails if
    /// `max_group < 3` (smaller fanouts cannot keep groups balanced).
    pub fn new(max_group: usize) -> Result<Self> {
        if max_group < 3 {
            return Err(Error::Config(format!(
                "max_group must be at least 3, got {max_group}"
            )));
        }
        Ok(Self {
            max_group,
            track_squares: true,
        })
    }

    /// Enables or disables the sum-of-squares payload.
    pub fn with_track_squares(mut self, enabled: bool) -> Self {
        self.track_squares = enabled;
        self
    }

    #[inline]
    pub fn max_group(&self) -> usize {
        self.max_group
    }

    /// `ceil(max_group / 2)`; always at least 2.
    #[inline]
    pub fn min_group(&self) -> usize {
        self.max_group.div_ceil(2)
    }

    #[inline]
    pub fn track_squares(&self) -> bool {
        self.track_squares
    }

    /// Node count at which the top level gets a new level built above it.
    ///
    /// This is `max(max_group, 2 * min_group)`: the smallest top-level
    /// population that can be regrouped into two groups of at least
    /// `min_group` children each. For even `max_group` the two coincide;
    /// for odd `max_group` a level of exactly `max_group` nodes cannot be
    /// split into two legal groups and is left as the top.
    #[inline]
    pub(crate) fn growth_threshold(&self) -> usize {
        self.max_group.max(2 * self.min_group())
    }
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_group: Self::DEFAULT_MAX_GROUP,
            track_squares: true,
        }
    }
}
