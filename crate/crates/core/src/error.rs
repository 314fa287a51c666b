//! Error type shared by every operation in the crate.

use std::fmt;

/// Everything that can go wrong when building, mutating, or querying a
/// [`SumSequence`](crate::SumSequence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The tree configuration is invalid (e.g. `max_group < 3`).
    Config(String),
    /// An input value is outside the stored domain (non-finite float).
    Domain(String),
    /// A rank argument is out of range.
    RankOutOfRange { rank: usize, len: usize },
    /// A `[from, to)` bounds pair is out of range or inverted.
    BoundsOutOfRange { from: usize, to: usize, len: usize },
    /// The operation requires a nonempty range.
    EmptyRange,
    /// An integer sum does not fit the element value type.
    Overflow,
    /// The cursor was created before the last mutation of its owner.
    StaleCursor,
    /// Two cursors belong to different sequences.
    CursorOwner,
    /// The two cursors are not in ascending rank order.
    CursorOrder,
    /// A cursor step walked past the first or last element.
    Boundary(&'static str),
    /// Sum-of-squares queries need `track_squares` enabled.
    SquaresDisabled,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::RankOutOfRange { rank, len } => {
                write!(f, "rank {rank} out of range for length {len}")
            }
            Error::BoundsOutOfRange { from, to, len } => {
                write!(f, "bounds [{from}, {to}) out of range for length {len}")
            }
            Error::EmptyRange => write!(f, "operation requires a nonempty range"),
            Error::Overflow => write!(f, "arithmetic overflow in value type"),
            Error::StaleCursor => write!(f, "cursor invalidated by a mutation"),
            Error::CursorOwner => write!(f, "cursors belong to different sequences"),
            Error::CursorOrder => write!(f, "cursors are not in ascending rank order"),
            Error::Boundary(which) => write!(f, "cursor step past the {which}"),
            Error::SquaresDisabled => {
                write!(f, "sum-of-squares augmentation is disabled for this sequence")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
