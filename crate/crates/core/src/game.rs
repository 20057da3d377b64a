use std::fmt::Debug;
use std::hash::Hash;

use crate::value::Value;

/// A position in a two-player zero-sum game, seen in negamax convention.
///
/// Implementations must be deterministic: the same position always yields
/// the same move sequence, the same children and the same evaluation.
/// `evaluate` scores from the side to move, so a child's score is the
/// negation of the parent's point of view.
pub trait GamePosition: Clone {
    type Move: Copy + Eq + Hash + Debug;

    /// Legal moves in the game's static order. Empty exactly when terminal.
    fn legal_moves(&self) -> Vec<Self::Move>;

    fn apply(&self, mv: Self::Move) -> Self;

    fn is_terminal(&self) -> bool;

    /// Heuristic (or, at terminal positions, exact) score for the side to
    /// move. Must lie strictly between `MINUS_INF` and `PLUS_INF`.
    fn evaluate(&self) -> Value;

    /// 64-bit hash used as the transposition-table key. Must include the
    /// side to move.
    fn position_key(&self) -> u64;
}

/// The transposition-table key of a position.
#[inline]
pub fn zobrist_key<G: GamePosition>(position: &G) -> u64 {
    position.position_key()
}

/// Counts move paths of exactly `depth` plies; terminal positions reached
/// early count as one path.
pub fn perft<G: GamePosition>(position: &G, depth: u32) -> u64 {
    if depth == 0 || position.is_terminal() {
        return 1;
    }
    position
        .legal_moves()
        .into_iter()
        .map(|mv| perft(&position.apply(mv), depth - 1))
        .sum()
}
