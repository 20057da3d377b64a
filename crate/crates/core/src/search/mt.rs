use super::{Lookup, SearchError, Searcher};
use crate::game::GamePosition;
use crate::stats::SearchStats;
use crate::value::{negamax_flip, BoundPair, Depth, Value, MINUS_INF, PLUS_INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailDirection {
    /// `g < bound`: `g` is an upper bound on the value.
    Low,
    /// `g >= bound`: `g` is a lower bound on the value.
    High,
}

impl FailDirection {
    pub fn of(g: Value, bound: Value) -> Self {
        if g < bound {
            FailDirection::Low
        } else {
            FailDirection::High
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtResult {
    pub g: Value,
    pub fail: FailDirection,
    /// Counters accumulated by this call alone.
    pub stats: SearchStats,
}

impl MtResult {
    /// The interval this result proves, given nothing else.
    pub fn bounds(&self) -> BoundPair {
        match self.fail {
            FailDirection::Low => BoundPair::upper_only(self.g),
            FailDirection::High => BoundPair::lower_only(self.g),
        }
    }
}

impl<G: GamePosition> Searcher<G> {
    /// Memory-enhanced test: decides whether the value of `position` searched
    /// `depth` plies deep is below `bound` or at least `bound`.
    ///
    /// With integer values this is a null-window search on `[bound - 1, bound]`.
    /// A result `g < bound` is an upper bound on the value, `g >= bound` a
    /// lower bound.
    pub fn mt(&mut self, position: &G, bound: Value, depth: Depth) -> Result<MtResult, SearchError> {
        if bound <= MINUS_INF || bound > PLUS_INF {
            return Err(SearchError::InvalidBound(bound));
        }
        let before = self.stats.clone();
        self.stats.mt_calls += 1;
        let g = self.mt_node(position, bound, depth, 0)?;
        let stats = (&self.stats - &before).expect("counters only grow");
        Ok(MtResult {
            g,
            fail: FailDirection::of(g, bound),
            stats,
        })
    }

    fn mt_node(&mut self, position: &G, bound: Value, depth: Depth, ply: Depth) -> Result<Value, SearchError> {
        self.enter()?;
        let key = position.position_key();
        let tt_move = match self.lookup(key, depth, bound - 1, bound) {
            Lookup::Cutoff(v) => return Ok(v),
            Lookup::Continue(m) => m,
        };
        if Self::is_leaf(position, depth) {
            return Ok(self.leaf(position, key, depth));
        }
        self.stats.interior_nodes += 1;

        let mut g = MINUS_INF;
        let mut best = None;
        let mut examined = 0;
        for mv in self.ordered_moves(position, tt_move) {
            if g >= bound {
                break;
            }
            examined += 1;
            let child = position.apply(mv);
            let v = negamax_flip(self.mt_node(&child, 1 - bound, depth - 1, ply + 1)?);
            if v > g {
                g = v;
                best = Some(mv);
            }
        }

        if g < bound {
            self.store(key, depth, BoundPair::upper_only(g), None);
        } else {
            self.store(key, depth, BoundPair::lower_only(g), best);
            self.note_cut(ply, examined, best, depth);
        }
        Ok(g)
    }
}
