//! The algorithm × position × depth matrix, its CSV views and the oracle
//! checks applied to every cell under `--verify`.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use mtd_core::drivers::{iterative_deepening, Algorithm, DeepeningReport, DriverParams};
use mtd_core::games::{oracle_minimax, oracle_root_values, table_violations, OracleError};
use mtd_core::search::FailDirection;
use mtd_core::ttable::TERMINAL_DEPTH;
use mtd_core::{BoundPair, Depth, GamePosition, SearchConfig, Searcher, TTConfig, Value};
use rayon::prelude::*;

use crate::positions::Root;
use crate::spec::{ExperimentSpec, GameKind};
use crate::{with_pool, with_root, BenchError, CellId};

pub const CSV_HEADER: [&str; 11] = [
    "algo", "game", "position", "depth", "nbp", "nodes", "mt_calls", "tt_hits", "tt_stores", "cut_rate", "wall_ms",
];
pub const RELATIVE_HEADER: [&str; 6] = ["algo", "game", "position", "depth", "nbp_pct", "nodes_pct"];

/// Cumulative counters of one algorithm on one position, over every
/// iteration up to `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algo: Algorithm,
    pub game: GameKind,
    pub position: u64,
    pub depth: Depth,
    pub nbp: u64,
    pub nodes: u64,
    pub mt_calls: u64,
    pub tt_hits: u64,
    pub tt_stores: u64,
    pub cut_rate: f64,
    pub wall_ms: f64,
}

impl ResultRow {
    fn record(&self) -> [String; 11] {
        [
            self.algo.to_string(),
            self.game.to_string(),
            self.position.to_string(),
            self.depth.to_string(),
            self.nbp.to_string(),
            self.nodes.to_string(),
            self.mt_calls.to_string(),
            self.tt_hits.to_string(),
            self.tt_stores.to_string(),
            format!("{:.6}", self.cut_rate),
            format!("{:.3}", self.wall_ms),
        ]
    }
}

/// A row as a percentage of aspiration NegaScout on the same position and
/// depth.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeRow {
    pub algo: Algorithm,
    pub game: GameKind,
    pub position: u64,
    pub depth: Depth,
    pub nbp_pct: Option<f64>,
    pub nodes_pct: Option<f64>,
}

pub fn percent(x: u64, base: u64) -> Option<f64> {
    (base > 0).then(|| 100.0 * x as f64 / base as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixResult {
    /// Algorithm-major, then position, then depth.
    pub rows: Vec<ResultRow>,
    pub relative: Vec<RelativeRow>,
    /// Cells checked against the oracle (zero without `--verify`).
    pub verified_cells: usize,
}

impl MatrixResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record(r.record())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_relative_csv<W: Write>(&self, out: W) -> Result<(), BenchError> {
        let pct = |p: Option<f64>| p.map(|x| format!("{x:.4}")).unwrap_or_default();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RELATIVE_HEADER)?;
        for r in &self.relative {
            w.write_record([
                r.algo.to_string(),
                r.game.to_string(),
                r.position.to_string(),
                r.depth.to_string(),
                pct(r.nbp_pct),
                pct(r.nodes_pct),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Normalises `rows` against the asp-ns rows in `baseline` with the same
/// position and depth.
pub fn relative_rows(rows: &[ResultRow], baseline: &[ResultRow]) -> Vec<RelativeRow> {
    let base: HashMap<(u64, Depth), &ResultRow> = baseline
        .iter()
        .filter(|r| r.algo == Algorithm::AspirationNegaScout)
        .map(|r| ((r.position, r.depth), r))
        .collect();
    rows.iter()
        .map(|r| {
            let b = base.get(&(r.position, r.depth));
            RelativeRow {
                algo: r.algo,
                game: r.game,
                position: r.position,
                depth: r.depth,
                nbp_pct: b.and_then(|b| percent(r.nbp, b.nbp)),
                nodes_pct: b.and_then(|b| percent(r.nodes, b.nodes)),
            }
        })
        .collect()
}

/// How one cell's searches are set up and checked.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellPlan {
    pub table: TTConfig,
    pub params: DriverParams,
    pub verify: bool,
    pub inject_fault: bool,
}

/// Oracle values of one position, cached across algorithms and depths.
struct Oracle<'a, G: GamePosition> {
    root: &'a G,
    values: HashMap<Depth, Value>,
    root_values: HashMap<Depth, Vec<(G::Move, Value)>>,
}

impl<'a, G: GamePosition> Oracle<'a, G> {
    fn new(root: &'a G) -> Self {
        Self {
            root,
            values: HashMap::new(),
            root_values: HashMap::new(),
        }
    }

    fn value(&mut self, depth: Depth) -> Result<Value, OracleError> {
        if let Some(&v) = self.values.get(&depth) {
            return Ok(v);
        }
        let v = oracle_minimax(self.root, depth)?;
        self.values.insert(depth, v);
        Ok(v)
    }

    fn root_values(&mut self, depth: Depth) -> Result<&[(G::Move, Value)], OracleError> {
        if !self.root_values.contains_key(&depth) {
            let v = oracle_root_values(self.root, depth)?;
            self.root_values.insert(depth, v);
        }
        Ok(&self.root_values[&depth])
    }
}

/// Runs iterative deepening once per reported depth, each with a fresh
/// table, and returns one row per depth.
pub(crate) fn run_cell<G: GamePosition>(
    root: &G,
    algo: Algorithm,
    game: GameKind,
    position: u64,
    depths: &[Depth],
    plan: &CellPlan,
) -> Result<Vec<ResultRow>, BenchError> {
    let mut oracle = Oracle::new(root);
    let mut rows = Vec::with_capacity(depths.len());
    for &depth in depths {
        let cell = CellId {
            algo,
            game,
            position,
            depth,
        };
        let mut searcher = Searcher::<G>::with_table_config(plan.table, SearchConfig::default())
            .map_err(|e| crate::SpecError::Invalid(e.to_string()))?;
        let start = Instant::now();
        let report = iterative_deepening(algo, root, depth, 1, &plan.params, &mut searcher)
            .map_err(|source| BenchError::Driver { cell, source })?;
        let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
        let last = report.last().filter(|_| !report.aborted).ok_or_else(|| BenchError::Verification {
            cell,
            message: "iterative deepening stopped early".into(),
        })?;
        if plan.verify {
            if plan.inject_fault {
                corrupt_root_entry(root, &mut searcher, &mut oracle);
            }
            check_run(root, &report, &searcher, &mut oracle).map_err(|e| match e {
                Failure::Check(message) => BenchError::Verification { cell, message },
                Failure::Oracle(err) => BenchError::Ceiling {
                    cell,
                    message: err.to_string(),
                },
            })?;
        }
        let stats = &last.cumulative.stats;
        rows.push(ResultRow {
            algo,
            game,
            position,
            depth,
            nbp: last.cumulative.nbp,
            nodes: stats.total_nodes(),
            mt_calls: stats.mt_calls,
            tt_hits: stats.tt_hits,
            tt_stores: stats.tt_stores,
            cut_rate: stats.cut_rate(),
            wall_ms,
        });
    }
    Ok(rows)
}

enum Failure {
    Check(String),
    Oracle(OracleError),
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Oracle(e)
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Failure::Check(format!($($msg)+)));
        }
    };
}

/// Test hook: overwrite the root's table entry with a wrong exact value.
fn corrupt_root_entry<G: GamePosition>(root: &G, searcher: &mut Searcher<G>, oracle: &mut Oracle<'_, G>) {
    let Some(depth) = searcher.table.peek(root.position_key()).map(|e| e.depth) else {
        return;
    };
    let truth = if depth == TERMINAL_DEPTH {
        root.evaluate()
    } else {
        match oracle.value(depth) {
            Ok(v) => v,
            Err(_) => return,
        }
    };
    if let Some(e) = searcher.table.entry_mut(root.position_key()) {
        e.bounds = BoundPair::exact(truth + 1);
    }
}

fn check_run<G: GamePosition>(
    root: &G,
    report: &DeepeningReport<G::Move>,
    searcher: &Searcher<G>,
    oracle: &mut Oracle<'_, G>,
) -> Result<(), Failure> {
    let algo = report.algorithm;
    for it in &report.iterations {
        let truth = oracle.value(it.depth)?;
        let out = &it.outcome;
        if algo.is_value_algorithm() {
            ensure!(
                out.exact && out.value == truth,
                "depth {}: value {} but the oracle says {truth}",
                it.depth,
                out.value
            );
        } else {
            ensure!(out.value <= truth, "depth {}: proven bound {} above {truth}", it.depth, out.value);
            let values = oracle.root_values(it.depth)?;
            if let Some(best) = out.best_move {
                let v = values.iter().find(|(m, _)| *m == best).map(|&(_, v)| v);
                ensure!(v == Some(truth), "depth {}: move {best:?} is worth {v:?}, not {truth}", it.depth);
            }
        }
        for (k, p) in out.trace.iter().enumerate() {
            let sound = match p.fail {
                FailDirection::High => p.g >= p.bound && truth >= p.g,
                FailDirection::Low => p.g < p.bound && truth <= p.g,
            };
            ensure!(sound, "depth {} pass {k}: {:?} at bound {} returned {} against {truth}", it.depth, p.fail, p.bound, p.g);
            ensure!(p.bounds.contains(truth), "depth {} pass {k}: interval {} misses {truth}", it.depth, p.bounds);
        }
        ensure!(
            it.cumulative.nbp <= it.cumulative.stats.total_nodes(),
            "depth {}: nbp {} above total nodes {}",
            it.depth,
            it.cumulative.nbp,
            it.cumulative.stats.total_nodes()
        );
    }
    if let Err(v) = searcher.stats.check() {
        return Err(Failure::Check(format!("inconsistent counters: {v}")));
    }
    let max_depth = report.last().map_or(0, |it| it.depth);
    let bad = table_violations(root, max_depth, &searcher.table)?;
    if let Some(v) = bad.first() {
        return Err(Failure::Check(format!(
            "{} unsound table entries; first: key {:#x} depth {} bounds {} truth {:?}",
            bad.len(),
            v.key,
            v.depth,
            v.bounds,
            v.truth
        )));
    }
    Ok(())
}

fn execute(spec: &ExperimentSpec, plan: CellPlan, algos: &[Algorithm]) -> Result<Vec<ResultRow>, BenchError> {
    let roots: Vec<(u64, Root)> = spec
        .positions
        .iter()
        .map(|&id| Ok((id, Root::build(spec, id)?)))
        .collect::<Result<_, BenchError>>()?;
    let cells: Vec<(Algorithm, usize)> = algos
        .iter()
        .flat_map(|&a| (0..roots.len()).map(move |i| (a, i)))
        .collect();
    let results: Vec<Result<Vec<ResultRow>, BenchError>> = with_pool(spec.jobs, || {
        cells
            .par_iter()
            .map(|&(algo, i)| {
                let (id, root) = &roots[i];
                let depths = spec.depths_for(*id);
                with_root!(root, r => run_cell(r, algo, spec.game, *id, &depths, &plan))
            })
            .collect()
    })?;
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Runs every cell of `spec` with its own table size, plus asp-ns for the
/// relative view when it was not requested.
pub fn run_matrix(spec: &ExperimentSpec) -> Result<MatrixResult, BenchError> {
    let plan = CellPlan {
        table: TTConfig::with_bits(spec.tt_bits).map_err(|e| crate::SpecError::Invalid(e.to_string()))?,
        params: spec.params,
        verify: spec.verify,
        inject_fault: spec.inject_fault,
    };
    let mut algos = spec.algorithms.clone();
    let extra = !algos.contains(&Algorithm::AspirationNegaScout);
    if extra {
        algos.push(Algorithm::AspirationNegaScout);
    }
    let mut rows = execute(spec, plan, &algos)?;
    let baseline = if extra {
        let cut = rows.iter().position(|r| r.algo == Algorithm::AspirationNegaScout).unwrap_or(rows.len());
        rows.split_off(cut)
    } else {
        rows.clone()
    };
    let relative = relative_rows(&rows, &baseline);
    let verified_cells = if spec.verify { rows.len() } else { 0 };
    Ok(MatrixResult {
        rows,
        relative,
        verified_cells,
    })
}

/// Checks every cell against the oracle with a collision-free table.
pub fn verify_suite(spec: &ExperimentSpec) -> Result<MatrixResult, BenchError> {
    let plan = CellPlan {
        table: TTConfig::unbounded(),
        params: spec.params,
        verify: true,
        inject_fault: spec.inject_fault,
    };
    let rows = execute(spec, plan, &spec.algorithms)?;
    let relative = relative_rows(&rows, &rows);
    Ok(MatrixResult {
        verified_cells: rows.len(),
        rows,
        relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{Mode, Options};

    fn small(algo: &[&str], seeds: u64, depths: Vec<Depth>) -> ExperimentSpec {
        let o = Options {
            algo: algo.iter().map(|s| s.to_string()).collect(),
            seeds: Some(seeds),
            depths,
            w: Some(3),
            d: Some(4),
            tt_bits: Some(12),
            ..Options::default()
        };
        ExperimentSpec::from_options(&o, Mode::Run).unwrap()
    }

    #[test]
    fn one_row_per_cell_in_spec_order() {
        let out = run_matrix(&small(&["mtd-f", "sss"], 3, vec![2, 4])).unwrap();
        assert_eq!(out.rows.len(), 12);
        let keys: Vec<_> = out.rows.iter().map(|r| (r.algo, r.position, r.depth)).collect();
        assert_eq!(keys[0], (Algorithm::MtdF, 0, 2));
        assert_eq!(keys[1], (Algorithm::MtdF, 0, 4));
        assert_eq!(keys[6], (Algorithm::SssStar, 0, 2));
        assert!(out.rows.iter().all(|r| r.nbp <= r.nodes));
        assert!(out.relative.iter().all(|r| r.nbp_pct.is_some()));
    }

    #[test]
    fn baseline_is_one_hundred_percent_of_itself() {
        let out = run_matrix(&small(&["asp-ns"], 2, vec![1, 3])).unwrap();
        assert!(out.relative.iter().all(|r| r.nbp_pct == Some(100.0) && r.nodes_pct == Some(100.0)));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut spec = small(&["mtd-bi", "dual", "ns"], 4, vec![3]);
        let one = run_matrix(&spec).unwrap();
        spec.jobs = 4;
        let four = run_matrix(&spec).unwrap();
        let strip = |m: &MatrixResult| {
            m.rows
                .iter()
                .map(|r| ResultRow { wall_ms: 0.0, ..r.clone() })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&one), strip(&four));
    }

    #[test]
    fn verification_catches_a_corrupted_entry() {
        let mut spec = small(&["sss"], 1, vec![2]);
        spec.verify = true;
        assert!(run_matrix(&spec).is_ok());
        spec.inject_fault = true;
        match run_matrix(&spec) {
            Err(BenchError::Verification { cell, .. }) => {
                assert_eq!((cell.algo, cell.position, cell.depth), (Algorithm::SssStar, 0, 2))
            }
            other => panic!("{other:?}"),
        }
    }
}
