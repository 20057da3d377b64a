//! Brute-force negamax: no pruning, no memory, every node visited. Ground
//! truth for verifying the searches.

use std::collections::HashSet;

use thiserror::Error;

use crate::game::GamePosition;
use crate::ttable::{TranspositionTable, TERMINAL_DEPTH};
use crate::value::{BoundPair, Depth, Value};

/// Node ceiling used by [`oracle_minimax`].
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle exceeded its ceiling of {0} nodes")]
    TooLarge(u64),
}

/// Exact negamax value of `position` searched `depth` plies.
pub fn oracle_minimax<G: GamePosition>(position: &G, depth: Depth) -> Result<Value, OracleError> {
    oracle_with_limit(position, depth, DEFAULT_NODE_LIMIT)
}

pub fn oracle_with_limit<G: GamePosition>(position: &G, depth: Depth, limit: u64) -> Result<Value, OracleError> {
    let mut visited = 0;
    negamax(position, depth, limit, &mut visited)
}

/// Value of each root move from the root's point of view, in move order.
pub fn oracle_root_values<G: GamePosition>(position: &G, depth: Depth) -> Result<Vec<(G::Move, Value)>, OracleError> {
    if depth == 0 {
        return Ok(Vec::new());
    }
    let mut visited = 0;
    position
        .legal_moves()
        .into_iter()
        .map(|mv| Ok((mv, -negamax(&position.apply(mv), depth - 1, DEFAULT_NODE_LIMIT, &mut visited)?)))
        .collect()
}

/// A stored interval that does not contain the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableViolation {
    pub key: u64,
    pub depth: Depth,
    pub bounds: BoundPair,
    /// `None` for a terminal-depth entry on a non-terminal position.
    pub truth: Option<Value>,
}

/// Checks every table entry for a position within `plies` of `root`
/// against the oracle value at the entry's own depth.
pub fn table_violations<G: GamePosition>(
    root: &G,
    plies: Depth,
    table: &TranspositionTable<G::Move>,
) -> Result<Vec<TableViolation>, OracleError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![(root.clone(), plies)];
    while let Some((pos, left)) = stack.pop() {
        let key = pos.position_key();
        if !seen.insert((key, left)) {
            continue;
        }
        if let Some(e) = table.peek(key) {
            let truth = if e.depth == TERMINAL_DEPTH {
                pos.is_terminal().then(|| pos.evaluate())
            } else {
                Some(oracle_minimax(&pos, e.depth)?)
            };
            if !truth.is_some_and(|v| e.bounds.contains(v)) {
                out.push(TableViolation {
                    key,
                    depth: e.depth,
                    bounds: e.bounds,
                    truth,
                });
            }
        }
        if left > 0 {
            stack.extend(pos.legal_moves().into_iter().map(|m| (pos.apply(m), left - 1)));
        }
    }
    out.sort_by_key(|v| (v.key, v.depth));
    out.dedup();
    Ok(out)
}

fn negamax<G: GamePosition>(position: &G, depth: Depth, limit: u64, visited: &mut u64) -> Result<Value, OracleError> {
    *visited += 1;
    if *visited > limit {
        return Err(OracleError::TooLarge(limit));
    }
    if depth == 0 || position.is_terminal() {
        return Ok(position.evaluate());
    }
    let mut best = None;
    for mv in position.legal_moves() {
        let v = -negamax(&position.apply(mv), depth - 1, limit, visited)?;
        best = Some(best.map_or(v, |b: Value| b.max(v)));
    }
    Ok(best.expect("non-terminal positions have moves"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::explicit::ExplicitTree;
    use crate::games::tictactoe::TicTacToeState;

    #[test]
    fn small_trees() {
        let t0 = ExplicitTree::parse("((3 7) (5 2))").unwrap();
        assert_eq!(oracle_minimax(&t0.root(), 2), Ok(3));
        assert_eq!(oracle_minimax(&t0.root(), 0), Ok(0));
        let vals = oracle_root_values(&t0.root(), 2).unwrap();
        assert_eq!(vals, vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn tictactoe_is_a_draw() {
        assert_eq!(oracle_minimax(&TicTacToeState::new(), 9), Ok(0));
    }

    #[test]
    fn finds_corrupted_entries() {
        let t0 = ExplicitTree::parse("((3 7) (5 2))").unwrap();
        let mut s = crate::search::Searcher::unbounded();
        s.alpha_beta(&t0.root(), crate::value::MINUS_INF, crate::value::PLUS_INF, 2).unwrap();
        assert_eq!(table_violations(&t0.root(), 2, &s.table), Ok(Vec::new()));
        let key = t0.root().position_key();
        s.table.entry_mut(key).unwrap().bounds = BoundPair::exact(9);
        let bad = table_violations(&t0.root(), 2, &s.table).unwrap();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].truth, Some(3));
    }

    #[test]
    fn ceiling() {
        let t = ExplicitTree::parse("((1 2) (3 4))").unwrap();
        assert_eq!(oracle_with_limit(&t.root(), 2, 3), Err(OracleError::TooLarge(3)));
    }
}
