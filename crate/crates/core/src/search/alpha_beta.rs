use super::{Lookup, SearchError, Searcher};
use crate::game::GamePosition;
use crate::value::{negamax_flip, Depth, Value, MINUS_INF};

impl<G: GamePosition> Searcher<G> {
    /// Fail-soft alpha-beta. A result strictly inside `(alpha, beta)` is the
    /// exact value; `<= alpha` is an upper bound; `>= beta` a lower bound.
    pub fn alpha_beta(&mut self, position: &G, alpha: Value, beta: Value, depth: Depth) -> Result<Value, SearchError> {
        if alpha >= beta {
            return Err(SearchError::InvalidWindow { alpha, beta });
        }
        self.ab_node(position, alpha, beta, depth, 0)
    }

    fn ab_node(&mut self, position: &G, alpha: Value, beta: Value, depth: Depth, ply: Depth) -> Result<Value, SearchError> {
        self.enter()?;
        let key = position.position_key();
        let tt_move = match self.lookup(key, depth, alpha, beta) {
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
            if g >= beta {
                break;
            }
            examined += 1;
            let a = alpha.max(g);
            let child = position.apply(mv);
            let v = negamax_flip(self.ab_node(&child, negamax_flip(beta), negamax_flip(a), depth - 1, ply + 1)?);
            if v > g {
                g = v;
                best = Some(mv);
            }
        }
        self.finish(key, depth, ply, g, alpha, beta, best, examined);
        Ok(g)
    }
}
