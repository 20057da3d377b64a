use super::DriverError;
use crate::game::GamePosition;
use crate::search::{FailDirection, SearchError, Searcher};
use crate::stats::SearchStats;
use crate::value::{BoundPair, Depth, Value, MINUS_INF, PLUS_INF};

/// Bounds on each root move's value, from the root player's side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootMoveBounds<M> {
    pub moves: Vec<(M, BoundPair)>,
}

impl<M: Copy + Eq> RootMoveBounds<M> {
    pub fn get(&self, mv: M) -> Option<BoundPair> {
        self.moves.iter().find(|(m, _)| *m == mv).map(|(_, b)| *b)
    }

    /// Highest upper bound among moves other than `mv`.
    fn max_upper_except(&self, i: usize) -> Value {
        self.moves
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (_, b))| b.upper)
            .max()
            .unwrap_or(MINUS_INF)
    }

    /// Highest lower bound, then highest upper bound, then move order.
    fn select(&self) -> usize {
        let mut best = 0;
        for (i, (_, b)) in self.moves.iter().enumerate() {
            let cur = self.moves[best].1;
            if (b.lower, b.upper) > (cur.lower, cur.upper) {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbePurpose {
    /// Raising the candidate's lower bound.
    Lower,
    /// Pushing another move's upper bound below the candidate.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BestProbe<M> {
    pub mv: M,
    pub purpose: ProbePurpose,
    /// Root-perspective bound and result.
    pub bound: Value,
    pub g: Value,
    pub fail: FailDirection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestOutcome<M> {
    /// `None` only when the root has no moves or depth is 0.
    pub best: Option<M>,
    /// False when the node budget ran out before the proof closed.
    pub proven: bool,
    pub root_bounds: RootMoveBounds<M>,
    pub mt_calls: u64,
    pub trace: Vec<BestProbe<M>>,
    pub stats: SearchStats,
    pub nbp: u64,
}

impl<M: Copy + Eq> BestOutcome<M> {
    /// Proven lower bound on the chosen move's value.
    pub fn value_lower_bound(&self) -> Option<Value> {
        self.best.and_then(|m| self.root_bounds.get(m)).map(|b| b.lower)
    }
}

/// Proves which root move is best without pinning down its value: raise a
/// lower bound on the candidate to `first_guess`, then show every other
/// move's upper bound is no higher. A candidate that fails its test is
/// replaced by the move with the highest lower bound (then highest upper
/// bound, then earliest in move order).
pub fn mtd_best<G: GamePosition>(
    root: &G,
    depth: Depth,
    first_guess: Value,
    candidate_move: Option<G::Move>,
    searcher: &mut Searcher<G>,
) -> Result<BestOutcome<G::Move>, DriverError> {
    let before = searcher.stats.clone();
    searcher.clear_leaves();
    let moves = if depth == 0 { Vec::new() } else { root.legal_moves() };
    let mut rb = RootMoveBounds {
        moves: moves.iter().map(|&m| (m, BoundPair::UNKNOWN)).collect(),
    };
    let mut trace = Vec::new();
    let finish = |searcher: &Searcher<G>, best, proven, rb, trace: Vec<BestProbe<G::Move>>| {
        Ok(BestOutcome {
            best,
            proven,
            root_bounds: rb,
            mt_calls: trace.len() as u64,
            trace,
            stats: (&searcher.stats - &before).expect("counters only grow"),
            nbp: searcher.unique_leaves(),
        })
    };
    if moves.len() <= 1 {
        return finish(searcher, moves.first().copied(), true, rb, trace);
    }

    let mut cand = match candidate_move {
        Some(m) => moves.iter().position(|&x| x == m).ok_or(DriverError::IllegalCandidate)?,
        None => 0,
    };
    let mut target = first_guess.clamp(MINUS_INF + 1, PLUS_INF);

    loop {
        let lower = rb.moves[cand].1.lower;
        if lower >= rb.max_upper_except(cand) {
            return finish(searcher, Some(moves[cand]), true, rb, trace);
        }

        let t = target.min(rb.moves[cand].1.upper);
        let (i, bound, purpose) = if lower < t {
            (cand, t, ProbePurpose::Lower)
        } else {
            // `lower >= t` only after the candidate's lower bound is in place
            let Some(o) = (0..moves.len()).find(|&o| o != cand && rb.moves[o].1.upper > lower) else {
                unreachable!("stop test failed but no move has a higher upper bound");
            };
            (o, lower + 1, ProbePurpose::Upper)
        };

        searcher.table.next_age();
        let child = root.apply(moves[i]);
        let g = match searcher.mt(&child, 1 - bound, depth - 1) {
            Ok(r) => -r.g,
            Err(SearchError::BudgetExhausted { .. }) => {
                return finish(searcher, Some(moves[cand]), false, rb, trace);
            }
            Err(e) => return Err(e.into()),
        };
        let held = rb.moves[i].1;
        rb.moves[i].1 = held
            .merge(g, bound)
            .map_err(|_| DriverError::Contradiction { bound, g, bounds: held })?;
        let fail = FailDirection::of(g, bound);
        trace.push(BestProbe {
            mv: moves[i],
            purpose,
            bound,
            g,
            fail,
        });

        match (purpose, fail) {
            (ProbePurpose::Lower, FailDirection::Low) => {
                cand = rb.select();
                target = g;
            }
            (ProbePurpose::Upper, FailDirection::High) => {
                cand = rb.select();
                target = rb.moves[cand].1.lower;
            }
            _ => {}
        }
        if rb.moves.iter().any(|(_, b)| b.lower > rb.moves[cand].1.lower) {
            cand = rb.select();
            target = rb.moves[cand].1.lower;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::ExplicitTree;

    #[test]
    fn correct_candidate_needs_no_upper_bound_on_itself() {
        let t0 = ExplicitTree::parse("((3 7) (5 2))").unwrap();
        let mut s = Searcher::unbounded();
        let out = mtd_best(&t0.root(), 2, 3, Some(0), &mut s).unwrap();
        assert_eq!(out.best, Some(0));
        assert!(out.proven);
        assert_eq!(out.root_bounds.get(0).unwrap().lower, 3);
        assert_eq!(out.root_bounds.get(1).unwrap().upper, 2);
        assert!(out.trace.iter().all(|p| p.mv != 0 || p.purpose == ProbePurpose::Lower));
        assert_eq!(out.mt_calls, 2);
    }

    #[test]
    fn wrong_candidate_falls_back() {
        let t0 = ExplicitTree::parse("((3 7) (5 2))").unwrap();
        let mut s = Searcher::unbounded();
        let out = mtd_best(&t0.root(), 2, 3, Some(1), &mut s).unwrap();
        assert_eq!(out.trace[0].mv, 1);
        assert_eq!(out.trace[0].fail, FailDirection::Low);
        assert_eq!(out.best, Some(0));
        assert!(out.proven);
    }

    #[test]
    fn single_move_is_free() {
        let t = ExplicitTree::parse("((4 1))").unwrap();
        let mut s = Searcher::unbounded();
        let out = mtd_best(&t.root(), 2, 0, None, &mut s).unwrap();
        assert_eq!(out.best, Some(0));
        assert_eq!(out.mt_calls, 0);
    }

    #[test]
    fn illegal_candidate() {
        let t0 = ExplicitTree::parse("((3 7) (5 2))").unwrap();
        let mut s = Searcher::unbounded();
        assert_eq!(mtd_best(&t0.root(), 2, 0, Some(9), &mut s), Err(DriverError::IllegalCandidate));
    }
}
