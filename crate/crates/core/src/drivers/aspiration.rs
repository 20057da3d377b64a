use super::DriverError;
use crate::game::GamePosition;
use crate::search::Searcher;
use crate::stats::SearchStats;
use crate::value::{Depth, Value, MINUS_INF, PLUS_INF};

/// Default aspiration half-width in evaluation units.
pub const DEFAULT_HALF_WIDTH: Value = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspirationOutcome {
    pub f: Value,
    /// Open-window searches after the aspiration window missed (0 or 1).
    pub researches: u32,
    pub stats: SearchStats,
    pub nbp: u64,
}

/// NegaScout inside `(previous_f - w, previous_f + w)`. A fail low is
/// re-searched on `(MINUS_INF, g + 1)`, a fail high on `(g - 1, PLUS_INF)`.
pub fn aspiration_negascout<G: GamePosition>(
    root: &G,
    depth: Depth,
    previous_f: Value,
    window_half_width: Value,
    searcher: &mut Searcher<G>,
) -> Result<AspirationOutcome, DriverError> {
    if window_half_width < 1 {
        return Err(DriverError::InvalidParameter("aspiration half-width must be at least 1"));
    }
    let before = searcher.stats.clone();
    searcher.clear_leaves();
    searcher.table.next_age();
    let alpha = previous_f.saturating_sub(window_half_width).max(MINUS_INF);
    let beta = previous_f.saturating_add(window_half_width).min(PLUS_INF);
    let alpha = alpha.min(PLUS_INF - 1);
    let beta = beta.max(MINUS_INF + 1);
    let mut f = searcher.negascout(root, alpha, beta, depth)?;
    let mut researches = 0;
    if f <= alpha && alpha > MINUS_INF {
        researches = 1;
        searcher.stats.researches += 1;
        f = searcher.negascout(root, MINUS_INF, f + 1, depth)?;
    } else if f >= beta && beta < PLUS_INF {
        researches = 1;
        searcher.stats.researches += 1;
        f = searcher.negascout(root, f - 1, PLUS_INF, depth)?;
    }
    Ok(AspirationOutcome {
        f,
        researches,
        stats: (&searcher.stats - &before).expect("counters only grow"),
        nbp: searcher.unique_leaves(),
    })
}
