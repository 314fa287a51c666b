//! Element value abstraction.
//!
//! A sequence is generic over its element type. Two types are supported:
//!
//! - `i64`: sums and squared sums are accumulated in `i128` so that
//!   internal aggregates never wrap. Narrowing a queried sum back to
//!   `i64` is checked and surfaces as an explicit overflow error.
//! - `f64`: aggregates stay `f64`; inputs must be finite.

use crate::config::ValueMode;
use crate::error::{Error, Result};
use std::fmt;

/// An element type storable in a [`SumSequence`](crate::SumSequence).
///
/// `Agg` is the accumulator type for sums of values, `Sq` for sums of
/// squared values. Both are wide enough that aggregation inside the tree
/// cannot overflow at any realistic size.
pub trait Value:
    Copy + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    type Agg: Copy + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static;
    type Sq: Copy + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static;

    const MODE: ValueMode;

    fn zero() -> Self;
    fn agg_zero() -> Self::Agg;
    fn sq_zero() -> Self::Sq;

    fn to_agg(self) -> Self::Agg;
    /// The squared value, in the wide representation.
    fn to_sq(self) -> Self::Sq;

    fn agg_add(a: Self::Agg, b: Self::Agg) -> Self::Agg;
    fn agg_sub(a: Self::Agg, b: Self::Agg) -> Self::Agg;
    fn sq_add(a: Self::Sq, b: Self::Sq) -> Self::Sq;

    /// Narrows an aggregate back to the element type; `None` means the
    /// sum does not fit (integer mode only).
    fn agg_to_value(a: Self::Agg) -> Option<Self>;

    fn agg_to_f64(a: Self::Agg) -> f64;
    fn sq_to_f64(s: Self::Sq) -> f64;

    /// Rejects values the container cannot store (non-finite floats).
    fn check_storable(self) -> Result<()>;

    /// Aggregate equality for structural validation: exact for integers,
    /// relative tolerance `1e-9` for floats.
    fn agg_close(a: Self::Agg, b: Self::Agg) -> bool;
    fn sq_close(a: Self::Sq, b: Self::Sq) -> bool;

    /// Parses one data-file token. Integer mode accepts an optional sign
    /// followed by decimal digits; float mode accepts standard decimal
    /// and scientific literals. Non-finite floats are rejected.
    fn parse_token(token: &str) -> Option<Self>;
}

pub(crate) const FLOAT_AGG_RTOL: f64 = 1e-9;

fn close_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= FLOAT_AGG_RTOL * a.abs().max(b.abs()).max(1.0)
}

impl Value for i64 {
    type Agg = i128;
    type Sq = i128;

    const MODE: ValueMode = ValueMode::Integer64;

    fn zero() -> Self {
        0
    }
    fn agg_zero() -> i128 {
        0
    }
    fn sq_zero() -> i128 {
        0
    }

    fn to_agg(self) -> i128 {
        self as i128
    }
    fn to_sq(self) -> i128 {
        (self as i128) * (self as i128)
    }

    fn agg_add(a: i128, b: i128) -> i128 {
        a + b
    }
    fn agg_sub(a: i128, b: i128) -> i128 {
        a - b
    }
    fn sq_add(a: i128, b: i128) -> i128 {
        a + b
    }

    fn agg_to_value(a: i128) -> Option<i64> {
        i64::try_from(a).ok()
    }

    fn agg_to_f64(a: i128) -> f64 {
        a as f64
    }
    fn sq_to_f64(s: i128) -> f64 {
        s as f64
    }

    fn check_storable(self) -> Result<()> {
        Ok(())
    }

    fn agg_close(a: i128, b: i128) -> bool {
        a == b
    }
    fn sq_close(a: i128, b: i128) -> bool {
        a == b
    }

    fn parse_token(token: &str) -> Option<i64> {
        token.parse().ok()
    }
}

impl Value for f64 {
    type Agg = f64;
    type Sq = f64;

    const MODE: ValueMode = ValueMode::Float64;

    fn zero() -> Self {
        0.0
    }
    fn agg_zero() -> f64 {
        0.0
    }
    fn sq_zero() -> f64 {
        0.0
    }

    fn to_agg(self) -> f64 {
        self
    }
    fn to_sq(self) -> f64 {
        self * self
    }

    fn agg_add(a: f64, b: f64) -> f64 {
        a + b
    }
    fn agg_sub(a: f64, b: f64) -> f64 {
        a - b
    }
    fn sq_add(a: f64, b: f64) -> f64 {
        a + b
    }

    fn agg_to_value(a: f64) -> Option<f64> {
        Some(a)
    }

    fn agg_to_f64(a: f64) -> f64 {
        a
    }
    fn sq_to_f64(s: f64) -> f64 {
        s
    }

    fn check_storable(self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!("non-finite value {self}")))
        }
    }

    fn agg_close(a: f64, b: f64) -> bool {
        close_rel(a, b)
    }
    fn sq_close(a: f64, b: f64) -> bool {
        close_rel(a, b)
    }

    fn parse_token(token: &str) -> Option<f64> {
        let v: f64 = token.parse().ok()?;
        v.is_finite().then_some(v)
    }
}
