//! Drivers: repeated MT calls that narrow the root interval until it
//! collapses to the minimax value, plus aspiration NegaScout and iterative
//! deepening over any of them.

mod aspiration;
mod best;
mod deepening;

use thiserror::Error;

use crate::game::GamePosition;
use crate::search::{FailDirection, SearchError, Searcher};
use crate::stats::SearchStats;
use crate::value::{BoundPair, CrossedBounds, Depth, Value, MINUS_INF, PLUS_INF};

pub use aspiration::{aspiration_negascout, AspirationOutcome, DEFAULT_HALF_WIDTH};
pub use best::{mtd_best, BestOutcome, BestProbe, ProbePurpose, RootMoveBounds};
pub use deepening::{
    iterative_deepening, run_algorithm, Algorithm, Cumulative, DeepeningReport, DriverParams, Iteration, RunOutcome,
    UnknownAlgorithm,
};

/// Default MTD-step stepsize in evaluation units.
pub const DEFAULT_STEP: Value = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("policy proposed bound {bound} outside the open interval {bounds}")]
    NoProgress { bound: Value, bounds: BoundPair },
    #[error("pass at bound {bound} returned {g}, contradicting {bounds}")]
    Contradiction { bound: Value, g: Value, bounds: BoundPair },
    #[error("value lies outside the bisection range [{lo}, {hi}]: root interval {bounds}")]
    OutsideRange { lo: Value, hi: Value, bounds: BoundPair },
    #[error("invalid driver parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("candidate move is not legal at the root")]
    IllegalCandidate,
}

/// How an MTD driver picks the bound of each MT pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriverPolicy {
    /// Start at `PLUS_INF`, then probe at the last upper bound.
    SssStar,
    /// Start just above `MINUS_INF`, then probe one above the last lower bound.
    DualStar,
    /// Bisect the interval, restricted to `[lo, hi]`.
    Bisection { lo: Value, hi: Value },
    /// Start at a guess, then step to `g` or `g + 1`.
    FirstGuess { guess: Value },
    /// Start at `PLUS_INF`, then drop by at most `step` per fail low.
    Step { step: Value },
}

impl DriverPolicy {
    pub fn validate(&self) -> Result<(), DriverError> {
        match *self {
            DriverPolicy::Bisection { lo, hi } if lo >= hi => Err(DriverError::InvalidParameter("bisection needs lo < hi")),
            DriverPolicy::Step { step } if step < 1 => Err(DriverError::InvalidParameter("stepsize must be at least 1")),
            _ => Ok(()),
        }
    }

    /// Bound of the first pass.
    pub fn first(&self, bounds: BoundPair) -> Value {
        match *self {
            DriverPolicy::SssStar | DriverPolicy::Step { .. } => PLUS_INF,
            DriverPolicy::DualStar => MINUS_INF + 1,
            DriverPolicy::Bisection { .. } => self.bisect(bounds),
            DriverPolicy::FirstGuess { guess } => guess.clamp(MINUS_INF + 1, PLUS_INF),
        }
    }

    /// Bound of the pass after one that probed `bound` and returned `g`,
    /// given the merged root interval.
    pub fn next(&self, g: Value, bound: Value, bounds: BoundPair) -> Value {
        match *self {
            DriverPolicy::SssStar => g,
            DriverPolicy::DualStar => g + 1,
            DriverPolicy::Bisection { .. } => self.bisect(bounds),
            DriverPolicy::FirstGuess { .. } => {
                if g < bound {
                    g
                } else {
                    g + 1
                }
            }
            DriverPolicy::Step { step } => (bounds.lower + 1).max(g.saturating_sub(step)),
        }
    }

    fn bisect(&self, bounds: BoundPair) -> Value {
        let DriverPolicy::Bisection { lo, hi } = *self else {
            unreachable!("bisect on a non-bisection policy")
        };
        let l = bounds.lower.max(lo - 1);
        let u = bounds.upper.min(hi);
        let mid = (l + u).div_euclid(2);
        mid.clamp(bounds.lower + 1, bounds.upper.max(bounds.lower + 1))
    }
}

/// One MT call made by a driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pass {
    pub bound: Value,
    pub g: Value,
    pub fail: FailDirection,
    /// Root interval after merging this pass.
    pub bounds: BoundPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriverOutcome {
    pub f: Value,
    pub mt_calls: u64,
    pub trace: Vec<Pass>,
    pub bounds: BoundPair,
    /// Counters for this run alone.
    pub stats: SearchStats,
    /// Distinct positions evaluated during this run.
    pub nbp: u64,
}

impl DriverOutcome {
    pub fn bound_trace(&self) -> Vec<Value> {
        self.trace.iter().map(|p| p.bound).collect()
    }
}

/// The generic driver: calls MT at the bounds `policy` proposes until the
/// root interval closes. `observe` sees every pass and the searcher state
/// right after it.
pub fn mtd_observed<G, F>(
    policy: DriverPolicy,
    root: &G,
    depth: Depth,
    searcher: &mut Searcher<G>,
    mut observe: F,
) -> Result<DriverOutcome, DriverError>
where
    G: GamePosition,
    F: FnMut(&Pass, &Searcher<G>),
{
    policy.validate()?;
    let before = searcher.stats.clone();
    searcher.clear_leaves();
    let mut bounds = BoundPair::UNKNOWN;
    let mut trace = Vec::new();
    let mut bound = policy.first(bounds);
    loop {
        if bound <= bounds.lower || bound > bounds.upper {
            return Err(DriverError::NoProgress { bound, bounds });
        }
        searcher.table.next_age();
        let r = searcher.mt(root, bound, depth)?;
        bounds = bounds
            .merge(r.g, bound)
            .map_err(|CrossedBounds { .. }| DriverError::Contradiction { bound, g: r.g, bounds })?;
        let pass = Pass {
            bound,
            g: r.g,
            fail: r.fail,
            bounds,
        };
        observe(&pass, searcher);
        trace.push(pass);
        if let DriverPolicy::Bisection { lo, hi } = policy {
            if bounds.lower > hi || bounds.upper < lo {
                return Err(DriverError::OutsideRange { lo, hi, bounds });
            }
        }
        if bounds.is_exact() {
            break;
        }
        bound = policy.next(r.g, bound, bounds);
    }
    let stats = (&searcher.stats - &before).expect("counters only grow");
    Ok(DriverOutcome {
        f: bounds.lower,
        mt_calls: trace.len() as u64,
        trace,
        bounds,
        stats,
        nbp: searcher.unique_leaves(),
    })
}

/// Number of table entries in the solution tree the table currently holds
/// below `root`: every child of a node holding only an upper bound, and
/// only the stored best child of a node holding a lower bound. Refuted
/// siblings left over from earlier passes are not counted.
pub fn solution_tree_entries<G: GamePosition>(
    root: &G,
    depth: Depth,
    table: &crate::ttable::TranspositionTable<G::Move>,
) -> usize {
    let mut count = 0;
    let mut stack = vec![(root.clone(), depth)];
    while let Some((pos, left)) = stack.pop() {
        let Some(e) = table.peek(pos.position_key()) else {
            continue;
        };
        count += 1;
        if left == 0 || pos.is_terminal() {
            continue;
        }
        match e.best_move {
            Some(m) if e.bounds.lower > MINUS_INF => stack.push((pos.apply(m), left - 1)),
            _ => stack.extend(pos.legal_moves().into_iter().map(|m| (pos.apply(m), left - 1))),
        }
    }
    count
}

pub fn mtd<G: GamePosition>(
    policy: DriverPolicy,
    root: &G,
    depth: Depth,
    searcher: &mut Searcher<G>,
) -> Result<DriverOutcome, DriverError> {
    mtd_observed(policy, root, depth, searcher, |_, _| {})
}

pub fn sss_star<G: GamePosition>(root: &G, depth: Depth, searcher: &mut Searcher<G>) -> Result<DriverOutcome, DriverError> {
    mtd(DriverPolicy::SssStar, root, depth, searcher)
}

pub fn dual_star<G: GamePosition>(root: &G, depth: Depth, searcher: &mut Searcher<G>) -> Result<DriverOutcome, DriverError> {
    mtd(DriverPolicy::DualStar, root, depth, searcher)
}

pub fn mtd_bi<G: GamePosition>(
    root: &G,
    depth: Depth,
    lo: Value,
    hi: Value,
    searcher: &mut Searcher<G>,
) -> Result<DriverOutcome, DriverError> {
    mtd(DriverPolicy::Bisection { lo, hi }, root, depth, searcher)
}

pub fn mtd_f<G: GamePosition>(
    root: &G,
    depth: Depth,
    first_guess: Value,
    searcher: &mut Searcher<G>,
) -> Result<DriverOutcome, DriverError> {
    mtd(DriverPolicy::FirstGuess { guess: first_guess }, root, depth, searcher)
}

pub fn mtd_step<G: GamePosition>(
    root: &G,
    depth: Depth,
    stepsize: Value,
    searcher: &mut Searcher<G>,
) -> Result<DriverOutcome, DriverError> {
    mtd(DriverPolicy::Step { step: stepsize }, root, depth, searcher)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::ExplicitTree;

    fn t0() -> crate::games::TreeNode {
        ExplicitTree::parse("((3 7) (5 2))").unwrap().root()
    }

    #[test]
    fn bisection_probe_stays_inside() {
        let p = DriverPolicy::Bisection { lo: -100, hi: 100 };
        // the range of interest is (lo - 1, hi], midpoint floor(-1 / 2)
        assert_eq!(p.first(BoundPair::UNKNOWN), -1);
        let b = BoundPair::new(3, 4).unwrap();
        assert_eq!(p.next(3, 3, b), 4);
        let wide = DriverPolicy::Bisection { lo: MINUS_INF, hi: PLUS_INF };
        assert_eq!(wide.first(BoundPair::UNKNOWN), 0);
    }

    #[test]
    fn invalid_parameters() {
        let mut s = Searcher::standard();
        assert!(matches!(mtd_step(&t0(), 2, 0, &mut s), Err(DriverError::InvalidParameter(_))));
        assert!(matches!(mtd_bi(&t0(), 2, 5, 5, &mut s), Err(DriverError::InvalidParameter(_))));
    }

    #[test]
    fn bisection_detects_value_outside_range() {
        let mut s = Searcher::standard();
        assert!(matches!(
            mtd_bi(&t0(), 2, 10, 20, &mut s),
            Err(DriverError::OutsideRange { lo: 10, hi: 20, .. })
        ));
    }
}
