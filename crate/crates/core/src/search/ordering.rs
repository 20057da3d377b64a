use std::collections::HashMap;
use std::hash::Hash;

use crate::game::GamePosition;
use crate::value::Depth;

/// History-heuristic scores: moves that cut off or were best gain `2^depth`.
#[derive(Debug, Clone)]
pub struct HistoryTable<M> {
    scores: HashMap<M, u64>,
}

impl<M> Default for HistoryTable<M> {
    fn default() -> Self {
        Self {
            scores: HashMap::new(),
        }
    }
}

impl<M: Copy + Eq + Hash> HistoryTable<M> {
    pub fn score(&self, mv: M) -> u64 {
        self.scores.get(&mv).copied().unwrap_or(0)
    }

    pub fn update(&mut self, mv: M, depth: Depth) {
        let bonus = 1u64 << depth.min(62);
        let s = self.scores.entry(mv).or_insert(0);
        *s = s.saturating_add(bonus);
    }

    pub fn clear(&mut self) {
        self.scores.clear();
    }
}

pub fn history_update<M: Copy + Eq + Hash>(history: &mut HistoryTable<M>, mv: M, depth: Depth) {
    history.update(mv, depth);
}

/// What move ordering may draw on at one node.
#[derive(Debug, Clone, Copy)]
pub struct OrderingContext<'a, M> {
    pub tt_move: Option<M>,
    pub history: Option<&'a HistoryTable<M>>,
}

impl<M> Default for OrderingContext<'_, M> {
    fn default() -> Self {
        Self {
            tt_move: None,
            history: None,
        }
    }
}

/// Table move first, then by history score descending. The sort is stable,
/// so equal scores keep the game's static order.
pub fn order_move_list<M: Copy + Eq + Hash>(mut moves: Vec<M>, ctx: &OrderingContext<'_, M>) -> Vec<M> {
    if let Some(h) = ctx.history {
        moves.sort_by_key(|m| std::cmp::Reverse(h.score(*m)));
    }
    if let Some(tt) = ctx.tt_move {
        if let Some(pos) = moves.iter().position(|m| *m == tt) {
            moves[..=pos].rotate_right(1);
        }
    }
    moves
}

pub fn order_moves<G: GamePosition>(position: &G, ctx: &OrderingContext<'_, G::Move>) -> Vec<G::Move> {
    order_move_list(position.legal_moves(), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_move_goes_first() {
        let ctx = OrderingContext {
            tt_move: Some(3u8),
            history: None,
        };
        assert_eq!(order_move_list(vec![1, 2, 3, 4], &ctx), vec![3, 1, 2, 4]);
    }

    #[test]
    fn zero_history_keeps_static_order() {
        let h = HistoryTable::default();
        let ctx = OrderingContext {
            tt_move: None,
            history: Some(&h),
        };
        assert_eq!(order_move_list(vec![5u8, 1, 4, 2], &ctx), vec![5, 1, 4, 2]);
    }

    #[test]
    fn history_sorts_descending() {
        let mut h = HistoryTable::default();
        h.scores.insert(1u8, 5);
        h.scores.insert(2u8, 9);
        let ctx = OrderingContext {
            tt_move: None,
            history: Some(&h),
        };
        assert_eq!(order_move_list(vec![0u8, 1, 2, 3], &ctx), vec![2, 1, 0, 3]);
        let ctx = OrderingContext {
            tt_move: Some(3),
            history: Some(&h),
        };
        assert_eq!(order_move_list(vec![0u8, 1, 2, 3], &ctx), vec![3, 2, 1, 0]);
    }

    #[test]
    fn history_increments() {
        let mut h = HistoryTable::default();
        history_update(&mut h, 7u8, 3);
        assert_eq!(h.score(7), 8);
        let mut h = HistoryTable::default();
        h.update(7u8, 1);
        h.update(7u8, 1);
        assert_eq!(h.score(7), 4);
        h.update(7u8, 200);
        assert!(h.score(7) > 4);
    }

    proptest! {
        #[test]
        fn ordering_is_a_permutation(
            n in 0usize..12,
            tt in proptest::option::of(0u8..14),
            bumps in proptest::collection::vec((0u8..12, 0u32..8), 0..20),
        ) {
            let mut h = HistoryTable::default();
            let mut last = Vec::new();
            for (m, d) in bumps {
                let before = h.score(m);
                h.update(m, d);
                prop_assert!(h.score(m) > before);
                last.push(m);
            }
            let moves: Vec<u8> = (0..n as u8).collect();
            let ordered = order_move_list(moves.clone(), &OrderingContext { tt_move: tt, history: Some(&h) });
            let mut sorted = ordered.clone();
            sorted.sort();
            prop_assert_eq!(sorted, moves);
            if let Some(t) = tt.filter(|t| (*t as usize) < n) {
                prop_assert_eq!(ordered[0], t);
            }
        }
    }
}
