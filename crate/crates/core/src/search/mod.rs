//! Node-level search procedures sharing one table, one history and one set
//! of counters: MT (null-window test with memory), fail-soft alpha-beta and
//! NegaScout.

mod alpha_beta;
mod mt;
mod negascout;
pub mod ordering;

use std::collections::HashSet;

use thiserror::Error;

use crate::game::GamePosition;
use crate::stats::SearchStats;
use crate::ttable::{Probe, TTConfig, TableError, TranspositionTable, TERMINAL_DEPTH};
use crate::value::{BoundPair, Depth, Value};

pub use mt::{FailDirection, MtResult};
pub use ordering::{history_update, order_move_list, order_moves, HistoryTable, OrderingContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("node budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("probe bound {0} outside (MINUS_INF, PLUS_INF]")]
    InvalidBound(Value),
    #[error("empty window ({alpha}, {beta})")]
    InvalidWindow { alpha: Value, beta: Value },
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Probe and store the transposition table.
    pub use_table: bool,
    /// Order by history scores after the table move.
    pub use_history: bool,
    /// Abort once this many nodes have been visited.
    pub node_budget: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            use_table: true,
            use_history: false,
            node_budget: None,
        }
    }
}

/// Everything one search owns: table, counters, history and settings.
#[derive(Debug, Clone)]
pub struct Searcher<G: GamePosition> {
    pub table: TranspositionTable<G::Move>,
    pub stats: SearchStats,
    pub history: HistoryTable<G::Move>,
    pub config: SearchConfig,
    /// Keys of every position evaluated since the last [`Searcher::clear_leaves`].
    leaf_keys: HashSet<u64>,
}

/// What a table probe resolved to at one node.
enum Lookup<M> {
    Cutoff(Value),
    Continue(Option<M>),
}

impl<G: GamePosition> Searcher<G> {
    pub fn new(table: TranspositionTable<G::Move>, config: SearchConfig) -> Self {
        Self {
            table,
            stats: SearchStats::default(),
            history: HistoryTable::default(),
            config,
            leaf_keys: HashSet::new(),
        }
    }

    pub fn with_table_config(tt: TTConfig, config: SearchConfig) -> Result<Self, TableError> {
        Ok(Self::new(TranspositionTable::new(tt)?, config))
    }

    /// Default-sized two-tier table, no history.
    pub fn standard() -> Self {
        Self::new(
            TranspositionTable::new(TTConfig::default()).expect("default table config is valid"),
            SearchConfig::default(),
        )
    }

    /// Collision-free table that never evicts.
    pub fn unbounded() -> Self {
        Self::new(TranspositionTable::unbounded(), SearchConfig::default())
    }

    /// Plain search without any memory.
    pub fn memoryless() -> Self {
        Self::new(
            TranspositionTable::with_bits(crate::ttable::MIN_SIZE_LOG2).expect("minimum size is valid"),
            SearchConfig {
                use_table: false,
                ..SearchConfig::default()
            },
        )
    }

    pub fn reset_stats(&mut self) {
        self.stats = SearchStats::default();
        self.leaf_keys.clear();
    }

    /// Number of distinct positions evaluated (bottom positions).
    pub fn unique_leaves(&self) -> u64 {
        self.leaf_keys.len() as u64
    }

    pub fn clear_leaves(&mut self) {
        self.leaf_keys.clear();
    }

    fn enter(&self) -> Result<(), SearchError> {
        if let Some(budget) = self.config.node_budget {
            if self.stats.total_nodes() >= budget {
                return Err(SearchError::BudgetExhausted { budget });
            }
        }
        Ok(())
    }

    /// Probes the table and applies the window test shared by all three
    /// procedures: a lower bound at or above `beta`, or an upper bound at or
    /// below `alpha`, settles the node.
    fn lookup(&mut self, key: u64, depth: Depth, alpha: Value, beta: Value) -> Lookup<G::Move> {
        if !self.config.use_table {
            return Lookup::Continue(None);
        }
        self.stats.tt_probes += 1;
        match self.table.probe(key, depth) {
            Probe::Hit(e) => {
                self.stats.tt_hits += 1;
                let b = e.bounds;
                if b.lower >= beta {
                    self.stats.tt_cutoffs += 1;
                    Lookup::Cutoff(b.lower)
                } else if b.upper <= alpha {
                    self.stats.tt_cutoffs += 1;
                    Lookup::Cutoff(b.upper)
                } else if b.is_exact() {
                    self.stats.tt_cutoffs += 1;
                    Lookup::Cutoff(b.lower)
                } else {
                    Lookup::Continue(e.best_move)
                }
            }
            Probe::OrderingOnly(m) => Lookup::Continue(Some(m)),
            Probe::Miss => Lookup::Continue(None),
        }
    }

    fn store(&mut self, key: u64, depth: Depth, bounds: BoundPair, best: Option<G::Move>) {
        if !self.config.use_table {
            return;
        }
        self.stats.tt_stores += 1;
        let age = self.table.age();
        if let Err(TableError::Inconsistent { .. }) = self.table.store(key, depth, bounds, best, age) {
            self.stats.tt_conflicts += 1;
        }
    }

    /// Leaf handling shared by all procedures: evaluate, store both bounds.
    fn leaf(&mut self, position: &G, key: u64, depth: Depth) -> Value {
        let v = position.evaluate();
        debug_assert!(crate::value::is_evaluation(v), "evaluation {v} outside sentinels");
        self.stats.leaf_evals += 1;
        self.leaf_keys.insert(key);
        let stored_depth = if position.is_terminal() { TERMINAL_DEPTH } else { depth };
        self.store(key, stored_depth, BoundPair::exact(v), None);
        v
    }

    fn is_leaf(position: &G, depth: Depth) -> bool {
        depth == 0 || position.is_terminal()
    }

    fn ordered_moves(&self, position: &G, tt_move: Option<G::Move>) -> Vec<G::Move> {
        let moves = position.legal_moves();
        debug_assert!(
            tt_move.is_none_or(|m| moves.contains(&m)),
            "table move {tt_move:?} is not legal here"
        );
        let ctx = OrderingContext {
            tt_move,
            history: self.config.use_history.then_some(&self.history),
        };
        order_move_list(moves, &ctx)
    }

    /// Bookkeeping for a node whose search ended at or above `beta`.
    fn note_cut(&mut self, ply: Depth, examined: u64, best: Option<G::Move>, depth: Depth) {
        self.stats.record_cut(ply, examined);
        if let Some(m) = best {
            self.history.update(m, depth);
        }
    }

    /// Finishes a fail-soft window search: classifies `g` against the
    /// original window and stores the matching bound.
    fn finish(
        &mut self,
        key: u64,
        depth: Depth,
        ply: Depth,
        g: Value,
        alpha: Value,
        beta: Value,
        best: Option<G::Move>,
        examined: u64,
    ) {
        if g <= alpha {
            self.store(key, depth, BoundPair::upper_only(g), None);
        } else if g >= beta {
            self.store(key, depth, BoundPair::lower_only(g), best);
            self.note_cut(ply, examined, best, depth);
        } else {
            self.store(key, depth, BoundPair::exact(g), best);
            if let Some(m) = best {
                self.history.update(m, depth);
            }
        }
    }

    /// Best move the table holds for `position`, if any.
    pub fn table_move(&self, position: &G) -> Option<G::Move> {
        self.table.peek(position.position_key()).and_then(|e| e.best_move)
    }
}
