use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{
    aspiration_negascout, mtd, mtd_best, DriverError, DriverPolicy, Pass, DEFAULT_HALF_WIDTH, DEFAULT_STEP,
};
use crate::game::GamePosition;
use crate::search::{SearchError, Searcher};
use crate::stats::SearchStats;
use crate::value::{Depth, Value, MINUS_INF, PLUS_INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    AlphaBeta,
    NegaScout,
    AspirationNegaScout,
    SssStar,
    DualStar,
    MtdBi,
    MtdF,
    MtdStep,
    MtdBest,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::AlphaBeta,
        Algorithm::NegaScout,
        Algorithm::AspirationNegaScout,
        Algorithm::SssStar,
        Algorithm::DualStar,
        Algorithm::MtdBi,
        Algorithm::MtdF,
        Algorithm::MtdStep,
        Algorithm::MtdBest,
    ];

    /// The algorithms that compute the exact minimax value.
    pub const VALUE: [Algorithm; 8] = [
        Algorithm::AlphaBeta,
        Algorithm::NegaScout,
        Algorithm::AspirationNegaScout,
        Algorithm::SssStar,
        Algorithm::DualStar,
        Algorithm::MtdBi,
        Algorithm::MtdF,
        Algorithm::MtdStep,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::AlphaBeta => "ab",
            Algorithm::NegaScout => "ns",
            Algorithm::AspirationNegaScout => "asp-ns",
            Algorithm::SssStar => "sss",
            Algorithm::DualStar => "dual",
            Algorithm::MtdBi => "mtd-bi",
            Algorithm::MtdF => "mtd-f",
            Algorithm::MtdStep => "mtd-step",
            Algorithm::MtdBest => "mtd-best",
        }
    }

    pub fn is_value_algorithm(&self) -> bool {
        *self != Algorithm::MtdBest
    }

    pub fn is_mtd(&self) -> bool {
        matches!(
            self,
            Algorithm::SssStar | Algorithm::DualStar | Algorithm::MtdBi | Algorithm::MtdF | Algorithm::MtdStep
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm {0:?} (expected one of ab, ns, asp-ns, sss, dual, mtd-bi, mtd-f, mtd-step, mtd-best)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DriverParams {
    pub window_half_width: Value,
    pub step: Value,
    pub bi_lo: Value,
    pub bi_hi: Value,
    /// Added to every MTD-f (and MTD-best) seed during iterative deepening.
    pub guess_offset: Value,
}

impl Default for DriverParams {
    fn default() -> Self {
        Self {
            window_half_width: DEFAULT_HALF_WIDTH,
            step: DEFAULT_STEP,
            bi_lo: MINUS_INF,
            bi_hi: PLUS_INF,
            guess_offset: 0,
        }
    }
}

/// Result of one algorithm at one depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome<M> {
    /// Exact value, or for MTD-best the proven lower bound of its move.
    pub value: Value,
    pub exact: bool,
    pub best_move: Option<M>,
    pub mt_calls: u64,
    /// MT passes of the MTD drivers; empty for the others.
    pub trace: Vec<Pass>,
    pub stats: SearchStats,
    pub nbp: u64,
    /// False if MTD-best ran out of budget before finishing its proof.
    pub complete: bool,
}

/// Runs `algo` once at `depth`. `seed` is the expected value used by
/// MTD-f, MTD-best and aspiration NegaScout; `candidate` is MTD-best's
/// starting move.
pub fn run_algorithm<G: GamePosition>(
    algo: Algorithm,
    root: &G,
    depth: Depth,
    params: &DriverParams,
    seed: Value,
    candidate: Option<G::Move>,
    searcher: &mut Searcher<G>,
) -> Result<RunOutcome<G::Move>, DriverError> {
    let full_window = |searcher: &mut Searcher<G>, ns: bool| -> Result<RunOutcome<G::Move>, DriverError> {
        let before = searcher.stats.clone();
        searcher.clear_leaves();
        searcher.table.next_age();
        let value = if ns {
            searcher.negascout(root, MINUS_INF, PLUS_INF, depth)?
        } else {
            searcher.alpha_beta(root, MINUS_INF, PLUS_INF, depth)?
        };
        Ok(RunOutcome {
            value,
            exact: true,
            best_move: searcher.table_move(root),
            mt_calls: 0,
            trace: Vec::new(),
            stats: (&searcher.stats - &before).expect("counters only grow"),
            nbp: searcher.unique_leaves(),
            complete: true,
        })
    };
    let policy = match algo {
        Algorithm::AlphaBeta => return full_window(searcher, false),
        Algorithm::NegaScout => return full_window(searcher, true),
        Algorithm::AspirationNegaScout => {
            let out = aspiration_negascout(root, depth, seed, params.window_half_width, searcher)?;
            return Ok(RunOutcome {
                value: out.f,
                exact: true,
                best_move: searcher.table_move(root),
                mt_calls: 0,
                trace: Vec::new(),
                stats: out.stats,
                nbp: out.nbp,
                complete: true,
            });
        }
        Algorithm::MtdBest => {
            let out = mtd_best(root, depth, seed, candidate, searcher)?;
            let value = out.value_lower_bound().unwrap_or_else(|| root.evaluate());
            return Ok(RunOutcome {
                value,
                exact: false,
                best_move: out.best,
                mt_calls: out.mt_calls,
                trace: Vec::new(),
                stats: out.stats,
                nbp: out.nbp,
                complete: out.proven,
            });
        }
        Algorithm::SssStar => DriverPolicy::SssStar,
        Algorithm::DualStar => DriverPolicy::DualStar,
        Algorithm::MtdBi => DriverPolicy::Bisection {
            lo: params.bi_lo,
            hi: params.bi_hi,
        },
        Algorithm::MtdF => DriverPolicy::FirstGuess { guess: seed },
        Algorithm::MtdStep => DriverPolicy::Step { step: params.step },
    };
    let out = mtd(policy, root, depth, searcher)?;
    Ok(RunOutcome {
        value: out.f,
        exact: true,
        best_move: searcher.table_move(root),
        mt_calls: out.mt_calls,
        trace: out.trace,
        stats: out.stats,
        nbp: out.nbp,
        complete: true,
    })
}

/// Totals over every iteration up to and including one depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cumulative {
    pub nbp: u64,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration<M> {
    pub depth: Depth,
    pub seed: Value,
    pub outcome: RunOutcome<M>,
    pub cumulative: Cumulative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeepeningReport<M> {
    pub algorithm: Algorithm,
    pub iterations: Vec<Iteration<M>>,
    /// The node budget ran out; `iterations` holds the completed depths.
    pub aborted: bool,
}

impl<M> DeepeningReport<M> {
    pub fn last(&self) -> Option<&Iteration<M>> {
        self.iterations.last()
    }
}

/// Searches depths `depth_step, 2 * depth_step, ...` up to `max_depth`
/// with one table, seeding each iteration from the previous one.
pub fn iterative_deepening<G: GamePosition>(
    algo: Algorithm,
    root: &G,
    max_depth: Depth,
    depth_step: Depth,
    params: &DriverParams,
    searcher: &mut Searcher<G>,
) -> Result<DeepeningReport<G::Move>, DriverError> {
    if max_depth < 1 {
        return Err(DriverError::InvalidParameter("maximum depth must be at least 1"));
    }
    if !(1..=2).contains(&depth_step) {
        return Err(DriverError::InvalidParameter("depth step must be 1 or 2"));
    }
    let mut depths: Vec<Depth> = (1..).map(|k| k * depth_step).take_while(|&d| d <= max_depth).collect();
    if depths.last() != Some(&max_depth) {
        depths.push(max_depth);
    }

    let start = searcher.stats.clone();
    let mut report = DeepeningReport {
        algorithm: algo,
        iterations: Vec::new(),
        aborted: false,
    };
    let mut previous_f: Value = 0;
    let mut candidate = None;
    let mut nbp = 0;
    for depth in depths {
        let seed = match algo {
            Algorithm::MtdF | Algorithm::MtdBest => previous_f.saturating_add(params.guess_offset),
            _ => previous_f,
        };
        let outcome = match run_algorithm(algo, root, depth, params, seed, candidate, searcher) {
            Ok(o) => o,
            Err(DriverError::Search(SearchError::BudgetExhausted { .. })) => {
                report.aborted = true;
                break;
            }
            Err(e) => return Err(e),
        };
        if !outcome.complete {
            report.aborted = true;
            break;
        }
        previous_f = outcome.value;
        candidate = outcome.best_move;
        nbp += outcome.nbp;
        report.iterations.push(Iteration {
            depth,
            seed,
            cumulative: Cumulative {
                nbp,
                stats: (&searcher.stats - &start).expect("counters only grow"),
            },
            outcome,
        });
    }
    Ok(report)
}
