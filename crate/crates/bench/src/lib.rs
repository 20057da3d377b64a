//! Experiment runner and verification harness for the MTD search family.
//!
//! Every experiment is a matrix of independent cells (one algorithm on one
//! position); results come back in spec order whatever the thread count.

pub mod ordering;
pub mod positions;
pub mod run;
pub mod spec;
pub mod sweep;

use std::fmt;

use mtd_core::drivers::{Algorithm, DriverError};
use mtd_core::Depth;
use thiserror::Error;

pub use ordering::{ordering_report, OrderingRow};
pub use positions::Root;
pub use run::{relative_rows, run_matrix, verify_suite, MatrixResult, ResultRow};
pub use spec::{ExperimentSpec, GameKind, Mode, Options, SpecError};
pub use sweep::{first_guess_sweep, SweepPoint};

/// One cell of an experiment, for error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellId {
    pub algo: Algorithm,
    pub game: GameKind,
    pub position: u64,
    pub depth: Depth,
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "algo={} game={} position={} depth={}",
            self.algo, self.game, self.position, self.depth
        )
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("verification failed at {cell}: {message}")]
    Verification { cell: CellId, message: String },
    #[error("oracle ceiling exceeded at {cell}: {message}")]
    Ceiling { cell: CellId, message: String },
    #[error("search error at {cell}: {source}")]
    Driver { cell: CellId, source: DriverError },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// 1 for a failed check, 2 for a spec the harness cannot honour.
    pub fn exit_code(&self) -> u8 {
        match self {
            BenchError::Spec(_) | BenchError::Ceiling { .. } => 2,
            _ => 1,
        }
    }
}

/// Runs `f` on a pool of `jobs` threads.
pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, BenchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SpecError::Invalid(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}
