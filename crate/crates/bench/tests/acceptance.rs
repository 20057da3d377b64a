//! Acceptance suite: one PASS/FAIL line per criterion, then the
//! report-only tables.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use mtd_bench::{first_guess_sweep, ordering_report, run_matrix, verify_suite, ExperimentSpec, Mode, Options};
use mtd_core::drivers::{
    dual_star, mtd, mtd_best, mtd_f, mtd_observed, solution_tree_entries, sss_star, Algorithm, DriverPolicy,
    ProbePurpose,
};
use mtd_core::games::{oracle_minimax, oracle_root_values, suite_config, SyntheticNode, SyntheticTreeConfig};
use mtd_core::search::FailDirection;
use mtd_core::{Searcher, MINUS_INF, PLUS_INF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite() -> impl Iterator<Item = (SyntheticTreeConfig, SyntheticNode)> {
    (0..1000).map(|i| {
        let cfg = suite_config(i);
        (cfg, cfg.build().expect("suite configs are valid"))
    })
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn spec(o: Options, mode: Mode) -> ExperimentSpec {
    ExperimentSpec::from_options(&Options { jobs: Some(jobs()), ..o }, mode).expect("valid spec")
}

fn oracle_agreement() -> Outcome {
    let synthetic = verify_suite(&spec(Options::default(), Mode::Verify)).map_err(|e| e.to_string())?;
    let ttt = verify_suite(&spec(
        Options {
            game: Some("tictactoe".into()),
            depths: vec![9],
            ..Options::default()
        },
        Mode::Verify,
    ))
    .map_err(|e| e.to_string())?;
    Ok(format!(
        "{} suite cells, {} tic-tac-toe cells at depth 9",
        synthetic.verified_cells, ttt.verified_cells
    ))
}

fn mt_soundness() -> Outcome {
    let mut checks = 0u64;
    let mut trees = 0;
    for seed in 0..40 {
        for w in 1..=3 {
            for d in 0..=4 {
                for cfg in [
                    SyntheticTreeConfig::uniform(seed, w, d),
                    SyntheticTreeConfig {
                        correlation: mtd_core::games::Correlation::Independent,
                        order_pct: (seed * 13 % 101) as u8,
                        ..SyntheticTreeConfig::uniform(seed, w, d)
                    },
                ] {
                    let root = cfg.build().unwrap();
                    let f = oracle_minimax(&root, d).unwrap();
                    let reach = cfg.value_reach();
                    trees += 1;
                    for bound in -reach..=reach + 1 {
                        let r = Searcher::unbounded().mt(&root, bound, d).map_err(|e| e.to_string())?;
                        let ok = match r.fail {
                            FailDirection::Low => r.g < bound && f <= r.g,
                            FailDirection::High => r.g >= bound && f >= r.g,
                        };
                        if !ok {
                            return Err(format!("{cfg:?} bound {bound}: {r:?} against {f}"));
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checks} bounds over {trees} trees"))
}

fn null_window_identity() -> Outcome {
    let mut checks = 0;
    for (cfg, root) in suite() {
        let f = oracle_minimax(&root, cfg.depth).unwrap();
        let reach = cfg.value_reach();
        for bound in [f - 3, f, f + 1, f + 4, -reach, reach + 1] {
            let mut a = Searcher::unbounded();
            let mut b = Searcher::unbounded();
            let g = a.mt(&root, bound, cfg.depth).map_err(|e| e.to_string())?.g;
            let h = b.alpha_beta(&root, bound - 1, bound, cfg.depth).map_err(|e| e.to_string())?;
            if g != h || a.stats.leaf_evals != b.stats.leaf_evals {
                return Err(format!(
                    "tree {} bound {bound}: mt {g}/{} leaves, alpha-beta {h}/{} leaves",
                    cfg.seed, a.stats.leaf_evals, b.stats.leaf_evals
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} bound/tree pairs"))
}

fn sss_dominance() -> Outcome {
    let (mut sss_total, mut ab_total) = (0, 0);
    for (cfg, root) in suite() {
        let sss = sss_star(&root, cfg.depth, &mut Searcher::unbounded()).map_err(|e| e.to_string())?;
        let mut ab = Searcher::memoryless();
        ab.alpha_beta(&root, MINUS_INF, PLUS_INF, cfg.depth).map_err(|e| e.to_string())?;
        if sss.nbp > ab.stats.leaf_evals {
            return Err(format!("tree {}: sss {} > alpha-beta {}", cfg.seed, sss.nbp, ab.stats.leaf_evals));
        }
        sss_total += sss.nbp;
        ab_total += ab.stats.leaf_evals;
    }
    Ok(format!("1000 trees, {sss_total} vs {ab_total} leaves in total"))
}

fn mtd_f_two_calls() -> Outcome {
    for (cfg, root) in suite() {
        let f = oracle_minimax(&root, cfg.depth).unwrap();
        let out = mtd_f(&root, cfg.depth, f, &mut Searcher::unbounded()).map_err(|e| e.to_string())?;
        if out.mt_calls != 2 || out.f != f {
            return Err(format!("tree {}: {} calls, value {}", cfg.seed, out.mt_calls, out.f));
        }
    }
    Ok("1000 trees".into())
}

fn monotone_convergence() -> Outcome {
    let mut passes = 0;
    for (cfg, root) in suite() {
        let d = cfg.depth;
        let sss = sss_star(&root, d, &mut Searcher::unbounded()).map_err(|e| e.to_string())?;
        if !sss.bound_trace().windows(2).all(|w| w[1] < w[0]) {
            return Err(format!("tree {}: sss bounds {:?}", cfg.seed, sss.bound_trace()));
        }
        let dual = dual_star(&root, d, &mut Searcher::unbounded()).map_err(|e| e.to_string())?;
        if !dual.bound_trace().windows(2).all(|w| w[1] > w[0]) {
            return Err(format!("tree {}: dual bounds {:?}", cfg.seed, dual.bound_trace()));
        }
        let bi = mtd(
            DriverPolicy::Bisection {
                lo: MINUS_INF,
                hi: PLUS_INF,
            },
            &root,
            d,
            &mut Searcher::unbounded(),
        )
        .map_err(|e| e.to_string())?;
        let mut width = PLUS_INF - MINUS_INF;
        for p in &bi.trace {
            let w = p.bounds.width();
            if w > (width + 1) / 2 {
                return Err(format!("tree {}: bisection width {w} after {width}", cfg.seed));
            }
            width = w;
        }
        passes += sss.mt_calls + dual.mt_calls + bi.mt_calls;
    }
    Ok(format!("{passes} passes"))
}

fn first_guess_trend() -> Outcome {
    let reach = 10 * 5;
    let points = first_guess_sweep(&spec(
        Options {
            w: Some(10),
            d: Some(5),
            inc: Some(10),
            corr: Some(true),
            seeds: Some(100),
            tt_bits: Some(18),
            first_guess_offsets: vec![-reach, 0, reach],
            ..Options::default()
        },
        Mode::Sweep,
    ))
    .map_err(|e| e.to_string())?;
    let at = |o| {
        points
            .iter()
            .find(|p| p.offset == Some(o))
            .map(|p| p.mean_rel_nbp)
            .unwrap()
    };
    let (low, zero, high) = (at(-reach), at(0), at(reach));
    let sss = points.iter().find(|p| p.series == Algorithm::SssStar).unwrap().mean_rel_nbp;
    let detail = format!("mean NBP vs asp-ns: -{reach}: {low:.2}%, 0: {zero:.2}%, +{reach}: {high:.2}% (sss {sss:.2}%)");
    if zero < low && zero < high {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn storage_bound() -> Outcome {
    let mut literal_over = 0;
    let mut runs = 0;
    let mut worst_ratio: f64 = 0.0;
    for w in 2..=4u32 {
        for d in 2..=6u32 {
            let limit = 4 * (w as usize).pow(d.div_ceil(2));
            for seed in 0..20 {
                let root = SyntheticTreeConfig::uniform(seed, w, d).build().unwrap();
                let (mut live, mut occupied) = (0, 0);
                mtd_observed(DriverPolicy::SssStar, &root, d, &mut Searcher::unbounded(), |_, s| {
                    live = live.max(solution_tree_entries(&root, d, &s.table));
                    occupied = occupied.max(s.table.occupancy());
                })
                .map_err(|e| e.to_string())?;
                if live > limit {
                    return Err(format!("w={w} d={d} seed={seed}: solution tree {live} > {limit}"));
                }
                worst_ratio = worst_ratio.max(live as f64 / limit as f64);
                literal_over += usize::from(occupied > limit);
                runs += 1;
            }
        }
    }
    Ok(format!(
        "{runs} runs, largest solution tree at {:.0}% of the bound; current-age occupancy exceeded it in {literal_over} runs",
        100.0 * worst_ratio
    ))
}

fn mtd_best_argmax() -> Outcome {
    let mut trees = 0;
    for (cfg, root) in suite() {
        if trees == 200 {
            break;
        }
        let values = oracle_root_values(&root, cfg.depth).unwrap();
        let mut sorted: Vec<_> = values.iter().map(|&(_, v)| v).collect();
        sorted.sort_unstable();
        if values.len() < 2 || sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        trees += 1;
        let &(winner, f) = values.iter().max_by_key(|(_, v)| *v).unwrap();
        let right = mtd_best(&root, cfg.depth, f, Some(winner), &mut Searcher::unbounded()).map_err(|e| e.to_string())?;
        if right.best != Some(winner) || !right.proven {
            return Err(format!("tree {}: chose {:?}, expected {winner}", cfg.seed, right.best));
        }
        if right.trace.iter().any(|p| p.mv == winner && p.purpose == ProbePurpose::Upper) {
            return Err(format!("tree {}: upper-bound probe on the winning move", cfg.seed));
        }
        let loser = values.iter().find(|(m, _)| *m != winner).unwrap().0;
        let wrong = mtd_best(&root, cfg.depth, f, Some(loser), &mut Searcher::unbounded()).map_err(|e| e.to_string())?;
        if wrong.best != Some(winner) {
            return Err(format!("tree {}: from candidate {loser} chose {:?}", cfg.seed, wrong.best));
        }
    }
    if trees < 200 {
        return Err(format!("only {trees} suite trees have distinct root values"));
    }
    Ok("200 trees, right and wrong starting candidates".into())
}

fn strip_wall_time(csv: &[u8]) -> Vec<String> {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(rest, _)| rest).to_string())
        .collect()
}

fn cli_determinism() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_mtd-bench"))
            .arg("run")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        Ok(out.stdout)
    };
    let (a, b) = (strip_wall_time(&run()?), strip_wall_time(&run()?));
    if a != b {
        return Err("two default runs differ outside wall_ms".into());
    }
    Ok(format!("{} identical rows", a.len() - 1))
}

fn othello_report() {
    let result = run_matrix(&spec(
        Options {
            game: Some("othello6".into()),
            ..Options::default()
        },
        Mode::Run,
    ))
    .expect("othello run");
    let mut table: BTreeMap<(Algorithm, u32), Vec<f64>> = BTreeMap::new();
    for r in &result.relative {
        if let Some(p) = r.nbp_pct {
            table.entry((r.algo, r.depth)).or_default().push(p);
        }
    }
    println!("REPORT 6x6 Othello, cumulative NBP relative to asp-ns (mean over 10 positions, %)");
    print!("  {:<9}", "algo");
    for d in 1..=6 {
        print!("{:>9}", format!("d={d}"));
    }
    println!();
    for algo in Algorithm::ALL {
        print!("  {:<9}", algo.name());
        for d in 1..=6 {
            let v = &table[&(algo, d)];
            print!("{:>9.1}", v.iter().sum::<f64>() / v.len() as f64);
        }
        println!();
    }
    let calls: Vec<f64> = result
        .rows
        .iter()
        .filter(|r| r.algo == Algorithm::MtdF && r.depth == 6)
        .map(|r| r.mt_calls as f64 / 6.0)
        .collect();
    println!(
        "REPORT MTD-f mean MT calls per iteration on Othello to depth 6: {:.2}",
        calls.iter().sum::<f64>() / calls.len() as f64
    );
}

fn ordering_report_table() {
    let rows = ordering_report(&spec(
        Options {
            game: Some("othello6".into()),
            algo: vec!["mtd-f".into()],
            ..Options::default()
        },
        Mode::Ordering,
    ))
    .expect("ordering run");
    println!("REPORT first-move cutoff rate per ply, ID MTD-f on Othello to depth 6");
    for r in rows {
        println!(
            "  ply {}: {:>6} cut nodes, {:>6.2}% {}",
            r.ply,
            r.cuts.cut_nodes,
            r.rate_pct(),
            mtd_bench::ordering::category(r.rate_pct())
        );
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle agreement", oracle_agreement),
        ("mt soundness", mt_soundness),
        ("null-window identity", null_window_identity),
        ("sss* dominance", sss_dominance),
        ("mtd-f two-call property", mtd_f_two_calls),
        ("monotone convergence", monotone_convergence),
        ("first-guess trend", first_guess_trend),
        ("storage bound", storage_bound),
        ("mtd-best argmax soundness", mtd_best_argmax),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    othello_report();
    ordering_report_table();
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
