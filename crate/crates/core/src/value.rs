//! Integer scores and the bound pairs that bracket a minimax value.

use std::fmt;

use thiserror::Error;

/// Score in evaluation units, always from the side to move's perspective.
pub type Value = i32;

/// Remaining search depth in plies.
pub type Depth = u32;

/// Stands in for +infinity. Every evaluation lies strictly below it.
pub const PLUS_INF: Value = 32_000;
/// Stands in for -infinity. Every evaluation lies strictly above it.
pub const MINUS_INF: Value = -32_000;

/// Negamax sign flip. The sentinels are symmetric, so this never overflows.
#[inline]
pub fn negamax_flip(v: Value) -> Value {
    -v
}

/// Returns true for values strictly between the two sentinels.
#[inline]
pub fn is_evaluation(v: Value) -> bool {
    v > MINUS_INF && v < PLUS_INF
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("bound update would cross: lower {lower} > upper {upper}")]
pub struct CrossedBounds {
    pub lower: Value,
    pub upper: Value,
}

/// Interval `[lower, upper]` known to contain a node's minimax value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundPair {
    pub lower: Value,
    pub upper: Value,
}

impl Default for BoundPair {
    fn default() -> Self {
        Self::UNKNOWN
    }
}

impl BoundPair {
    pub const UNKNOWN: BoundPair = BoundPair {
        lower: MINUS_INF,
        upper: PLUS_INF,
    };

    pub fn new(lower: Value, upper: Value) -> Result<Self, CrossedBounds> {
        if lower > upper {
            return Err(CrossedBounds { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn exact(v: Value) -> Self {
        Self { lower: v, upper: v }
    }

    pub fn upper_only(v: Value) -> Self {
        Self {
            lower: MINUS_INF,
            upper: v,
        }
    }

    pub fn lower_only(v: Value) -> Self {
        Self {
            lower: v,
            upper: PLUS_INF,
        }
    }

    #[inline]
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    #[inline]
    pub fn width(&self) -> Value {
        self.upper - self.lower
    }

    #[inline]
    pub fn contains(&self, v: Value) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// Folds the result of one null-window probe into the pair: a value below
    /// the probed bound is a new upper bound, anything else a new lower bound.
    pub fn merge(self, g: Value, bound: Value) -> Result<Self, CrossedBounds> {
        if g < bound {
            Self::new(self.lower, g)
        } else {
            Self::new(g, self.upper)
        }
    }

    /// Intersection of two intervals for the same node.
    pub fn intersect(self, other: BoundPair) -> Result<Self, CrossedBounds> {
        Self::new(self.lower.max(other.lower), self.upper.min(other.upper))
    }

    /// Both bounds negated and swapped, i.e. the same interval seen from the
    /// other side.
    pub fn flipped(self) -> Self {
        Self {
            lower: negamax_flip(self.upper),
            upper: negamax_flip(self.lower),
        }
    }
}

/// Free-function form of [`BoundPair::merge`].
pub fn merge_bound(b: BoundPair, g: Value, bound: Value) -> Result<BoundPair, CrossedBounds> {
    b.merge(g, bound)
}

impl fmt::Display for BoundPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}
