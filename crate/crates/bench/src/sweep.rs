//! Tree size of iteratively deepened MTD-f as a function of how far its
//! first guess sits from the previous iteration's value.

use std::io::Write;

use mtd_core::drivers::{iterative_deepening, Algorithm, DriverParams};
use mtd_core::{Depth, GamePosition, SearchConfig, Searcher, TTConfig, Value};
use rayon::prelude::*;

use crate::positions::Root;
use crate::run::percent;
use crate::spec::{ExperimentSpec, GameKind, SpecError, SyntheticShape};
use crate::{with_pool, with_root, BenchError, CellId};

pub const SWEEP_HEADER: [&str; 4] = ["series", "offset", "mean_rel_nbp", "positions"];

/// Mean cumulative NBP relative to asp-ns, in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub series: Algorithm,
    /// `None` for the SSS* and DUAL* reference rows.
    pub offset: Option<Value>,
    pub mean_rel_nbp: f64,
    pub positions: usize,
}

/// Nine offsets evenly spread over `[-reach, reach]`.
pub fn default_offsets(reach: Value) -> Vec<Value> {
    (-4..=4).map(|k| k * reach / 4).collect()
}

fn reach(spec: &ExperimentSpec) -> Value {
    match (spec.game, spec.shape) {
        (GameKind::Synthetic, SyntheticShape::Uniform(c)) => c.value_reach(),
        (GameKind::Synthetic, SyntheticShape::Suite) => 60,
        (GameKind::TicTacToe, _) => mtd_core::games::tictactoe::WIN,
        (GameKind::Othello6, _) => 64,
    }
}

/// Cumulative NBP of one ID run to `depth` with a fresh table.
fn cumulative_nbp<G: GamePosition>(
    root: &G,
    algo: Algorithm,
    depth: Depth,
    params: &DriverParams,
    table: TTConfig,
    cell: CellId,
) -> Result<u64, BenchError> {
    let mut s = Searcher::<G>::with_table_config(table, SearchConfig::default())
        .map_err(|e| SpecError::Invalid(e.to_string()))?;
    let report =
        iterative_deepening(algo, root, depth, 1, params, &mut s).map_err(|source| BenchError::Driver { cell, source })?;
    match report.last() {
        Some(it) if !report.aborted => Ok(it.cumulative.nbp),
        _ => Err(BenchError::Verification {
            cell,
            message: "iterative deepening stopped early".into(),
        }),
    }
}

/// One position: NBP percentages for every offset, then SSS* and DUAL*.
fn sweep_position<G: GamePosition>(
    root: &G,
    spec: &ExperimentSpec,
    id: u64,
    offsets: &[Value],
    table: TTConfig,
) -> Result<Vec<Option<f64>>, BenchError> {
    let depth = *spec.depths_for(id).last().expect("depth lists are non-empty");
    let cell = |algo| CellId {
        algo,
        game: spec.game,
        position: id,
        depth,
    };
    let base = cumulative_nbp(root, Algorithm::AspirationNegaScout, depth, &spec.params, table, cell(Algorithm::AspirationNegaScout))?;
    let mut out = Vec::with_capacity(offsets.len() + 2);
    for &offset in offsets {
        let params = DriverParams {
            guess_offset: offset,
            ..spec.params
        };
        let nbp = cumulative_nbp(root, Algorithm::MtdF, depth, &params, table, cell(Algorithm::MtdF))?;
        out.push(percent(nbp, base));
    }
    for algo in [Algorithm::SssStar, Algorithm::DualStar] {
        out.push(percent(cumulative_nbp(root, algo, depth, &spec.params, table, cell(algo))?, base));
    }
    Ok(out)
}

/// Runs ID MTD-f on every position once per first-guess offset.
pub fn first_guess_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepPoint>, BenchError> {
    let offsets = spec.offsets.clone().unwrap_or_else(|| default_offsets(reach(spec)));
    if offsets.is_empty() {
        return Err(SpecError::Invalid("no first-guess offsets".into()).into());
    }
    let table = TTConfig::with_bits(spec.tt_bits).map_err(|e| SpecError::Invalid(e.to_string()))?;
    let results: Vec<Result<Vec<Option<f64>>, BenchError>> = with_pool(spec.jobs, || {
        spec.positions
            .par_iter()
            .map(|&id| {
                let root = Root::build(spec, id)?;
                with_root!(&root, r => sweep_position(r, spec, id, &offsets, table))
            })
            .collect()
    })?;
    let per_position = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let series: Vec<(Algorithm, Option<Value>)> = offsets
        .iter()
        .map(|&o| (Algorithm::MtdF, Some(o)))
        .chain([(Algorithm::SssStar, None), (Algorithm::DualStar, None)])
        .collect();
    Ok(series
        .into_iter()
        .enumerate()
        .map(|(k, (algo, offset))| {
            let vals: Vec<f64> = per_position.iter().filter_map(|p| p[k]).collect();
            SweepPoint {
                series: algo,
                offset,
                mean_rel_nbp: if vals.is_empty() {
                    f64::NAN
                } else {
                    vals.iter().sum::<f64>() / vals.len() as f64
                },
                positions: vals.len(),
            }
        })
        .collect())
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for p in points {
        w.write_record([
            p.series.to_string(),
            p.offset.map(|o| o.to_string()).unwrap_or_default(),
            format!("{:.4}", p.mean_rel_nbp),
            p.positions.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
