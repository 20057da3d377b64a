//! How often the first move examined at a cut node produced the cutoff,
//! per distance from the root.

use std::io::Write;

use mtd_core::drivers::iterative_deepening;
use mtd_core::stats::PlyCuts;
use mtd_core::{GamePosition, SearchConfig, Searcher, TTConfig};
use rayon::prelude::*;

use crate::positions::Root;
use crate::spec::{ExperimentSpec, SpecError};
use crate::{with_pool, with_root, BenchError, CellId};

pub const ORDERING_HEADER: [&str; 5] = ["ply", "cut_nodes", "first_move_cuts", "rate_pct", "category"];

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingRow {
    pub ply: usize,
    pub cuts: PlyCuts,
}

impl OrderingRow {
    pub fn rate_pct(&self) -> f64 {
        100.0 * self.cuts.rate()
    }
}

/// Ordering quality label for a first-move success rate in percent.
pub fn category(rate_pct: f64) -> &'static str {
    if rate_pct >= 95.0 {
        "almost perfectly ordered"
    } else if rate_pct >= 90.0 {
        "very strongly ordered"
    } else if rate_pct >= 80.0 {
        "strongly ordered"
    } else {
        "below strongly ordered"
    }
}

fn position_cuts<G: GamePosition>(
    root: &G,
    spec: &ExperimentSpec,
    id: u64,
    table: TTConfig,
) -> Result<Vec<PlyCuts>, BenchError> {
    let algo = spec.algorithms[0];
    let depth = *spec.depths_for(id).last().expect("depth lists are non-empty");
    let cell = CellId {
        algo,
        game: spec.game,
        position: id,
        depth,
    };
    let mut s = Searcher::<G>::with_table_config(table, SearchConfig::default())
        .map_err(|e| SpecError::Invalid(e.to_string()))?;
    iterative_deepening(algo, root, depth, 1, &spec.params, &mut s).map_err(|source| BenchError::Driver { cell, source })?;
    Ok(s.stats.cuts_by_ply.clone())
}

/// Runs the experiment's first algorithm under iterative deepening on every
/// position and sums cut statistics per ply.
pub fn ordering_report(spec: &ExperimentSpec) -> Result<Vec<OrderingRow>, BenchError> {
    let table = TTConfig::with_bits(spec.tt_bits).map_err(|e| SpecError::Invalid(e.to_string()))?;
    let results: Vec<Result<Vec<PlyCuts>, BenchError>> = with_pool(spec.jobs, || {
        spec.positions
            .par_iter()
            .map(|&id| {
                let root = Root::build(spec, id)?;
                with_root!(&root, r => position_cuts(r, spec, id, table))
            })
            .collect()
    })?;
    let mut total: Vec<PlyCuts> = Vec::new();
    for per_ply in results {
        let per_ply = per_ply?;
        if total.len() < per_ply.len() {
            total.resize(per_ply.len(), PlyCuts::default());
        }
        for (t, c) in total.iter_mut().zip(&per_ply) {
            t.cut_nodes += c.cut_nodes;
            t.first_move_cuts += c.first_move_cuts;
        }
    }
    Ok(total
        .into_iter()
        .enumerate()
        .map(|(ply, cuts)| OrderingRow { ply, cuts })
        .collect())
}

pub fn write_ordering_csv<W: Write>(rows: &[OrderingRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ORDERING_HEADER)?;
    for r in rows {
        let rate = r.rate_pct();
        w.write_record([
            r.ply.to_string(),
            r.cuts.cut_nodes.to_string(),
            r.cuts.first_move_cuts.to_string(),
            format!("{rate:.2}"),
            category(rate).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{Mode, Options};
    use mtd_core::games::SyntheticTreeConfig;
    use mtd_core::{MINUS_INF, PLUS_INF};

    fn spec(o: Options) -> ExperimentSpec {
        ExperimentSpec::from_options(
            &Options {
                tt_bits: Some(12),
                ..o
            },
            Mode::Ordering,
        )
        .unwrap()
    }

    #[test]
    fn thresholds() {
        assert_eq!(category(100.0), "almost perfectly ordered");
        assert_eq!(category(95.0), "almost perfectly ordered");
        assert_eq!(category(94.9), "very strongly ordered");
        assert_eq!(category(80.0), "strongly ordered");
        assert_eq!(category(79.0), "below strongly ordered");
    }

    #[test]
    fn single_move_trees_are_perfectly_ordered() {
        let rows = ordering_report(&spec(Options {
            w: Some(1),
            d: Some(6),
            seeds: Some(3),
            ..Options::default()
        }))
        .unwrap();
        assert!(rows.iter().all(|r| r.rate_pct() == 100.0));
    }

    #[test]
    fn perfect_static_order_is_fully_successful_without_a_table() {
        for seed in 0..5 {
            let root = SyntheticTreeConfig {
                order_pct: 100,
                ..SyntheticTreeConfig::uniform(seed, 4, 4)
            }
            .build()
            .unwrap();
            let mut s = Searcher::memoryless();
            s.alpha_beta(&root, MINUS_INF, PLUS_INF, 4).unwrap();
            assert!(s.stats.cut_nodes > 0);
            assert_eq!(s.stats.cut_rate(), 1.0, "seed {seed}");
        }
    }

    #[test]
    fn table_moves_from_shallow_iterations_can_displace_the_static_order() {
        let rows = ordering_report(&spec(Options {
            algo: vec!["ab".into()],
            w: Some(4),
            d: Some(4),
            order_pct: Some(100),
            seeds: Some(5),
            ..Options::default()
        }))
        .unwrap();
        assert!(rows.iter().any(|r| r.cuts.cut_nodes > 0));
        for r in &rows {
            assert!(r.rate_pct() >= 90.0, "ply {}: {}", r.ply, r.rate_pct());
        }
    }
}
