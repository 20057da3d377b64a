use super::{Lookup, SearchError, Searcher};
use crate::game::GamePosition;
use crate::value::{negamax_flip, Depth, Value, MINUS_INF};

impl<G: GamePosition> Searcher<G> {
    /// Fail-soft NegaScout: the first move gets the full window, later moves a
    /// null window, and a null-window fail high inside the window is
    /// re-searched with `(g, beta)`. Same value contract as
    /// [`Searcher::alpha_beta`].
    pub fn negascout(&mut self, position: &G, alpha: Value, beta: Value, depth: Depth) -> Result<Value, SearchError> {
        if alpha >= beta {
            return Err(SearchError::InvalidWindow { alpha, beta });
        }
        self.ns_node(position, alpha, beta, depth, 0)
    }

    fn ns_node(&mut self, position: &G, alpha: Value, beta: Value, depth: Depth, ply: Depth) -> Result<Value, SearchError> {
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
        for (i, mv) in self.ordered_moves(position, tt_move).into_iter().enumerate() {
            if g >= beta {
                break;
            }
            examined += 1;
            let a = alpha.max(g);
            let child = position.apply(mv);
            let v = if i == 0 {
                negamax_flip(self.ns_node(&child, negamax_flip(beta), negamax_flip(a), depth - 1, ply + 1)?)
            } else {
                let scout = negamax_flip(self.ns_node(&child, negamax_flip(a) - 1, negamax_flip(a), depth - 1, ply + 1)?);
                // a leaf child answers the null window exactly
                if scout > a && scout < beta && depth > 1 {
                    self.stats.researches += 1;
                    let full = negamax_flip(self.ns_node(&child, negamax_flip(beta), negamax_flip(scout), depth - 1, ply + 1)?);
                    full.max(scout)
                } else {
                    scout
                }
            };
            if v > g {
                g = v;
                best = Some(mv);
            }
        }
        self.finish(key, depth, ply, g, alpha, beta, best, examined);
        Ok(g)
    }
}
