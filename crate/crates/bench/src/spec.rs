//! Experiment specifications: flags, `key = value` config files and the
//! validated [`ExperimentSpec`] built from them.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use mtd_core::drivers::{Algorithm, DriverParams};
use mtd_core::games::{suite_config, Branching, Correlation, SyntheticTreeConfig};
use mtd_core::ttable::{MAX_SIZE_LOG2, MIN_SIZE_LOG2};
use mtd_core::{Depth, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("{0}")]
    Invalid(String),
    #[error("config file {path}: line {line}: {message}")]
    ConfigLine { path: String, line: usize, message: String },
    #[error("cannot read config file {0}: {1}")]
    ConfigRead(String, String),
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameKind {
    Synthetic,
    TicTacToe,
    Othello6,
}

impl GameKind {
    pub fn name(&self) -> &'static str {
        match self {
            GameKind::Synthetic => "synthetic",
            GameKind::TicTacToe => "tictactoe",
            GameKind::Othello6 => "othello6",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameKind {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "synthetic" => Ok(GameKind::Synthetic),
            "tictactoe" => Ok(GameKind::TicTacToe),
            "othello6" => Ok(GameKind::Othello6),
            _ => Err(invalid(format!(
                "unknown game {s:?} (expected synthetic, tictactoe or othello6)"
            ))),
        }
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

fn parse_on_off(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected on or off, got {s:?}")),
    }
}

fn or_list<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

fn non_empty<T>(v: &Vec<T>) -> Option<&Vec<T>> {
    (!v.is_empty()).then_some(v)
}

/// Every setting an experiment accepts. Unset fields fall back to the
/// config file, then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Algorithm to run; repeat or comma-separate for several.
    #[arg(long = "algo", value_delimiter = ',')]
    pub algo: Vec<String>,
    /// synthetic, tictactoe or othello6.
    #[arg(long)]
    pub game: Option<String>,
    /// Report only this depth (iterative deepening still starts at 1).
    #[arg(long)]
    pub depth: Option<Depth>,
    /// Comma-separated depths to report.
    #[arg(long, value_delimiter = ',')]
    pub depths: Vec<Depth>,
    /// Number of positions, seeded 0..N.
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Explicit comma-separated position seeds.
    #[arg(long = "seed-list", value_delimiter = ',')]
    pub seed_list: Vec<u64>,
    /// Transposition table size as log2 of the entry count.
    #[arg(long = "tt-bits")]
    pub tt_bits: Option<u32>,
    /// Write the result CSV here (a relative view goes next to it).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Check every cell against the brute-force oracle.
    #[arg(long)]
    pub verify: bool,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Percentage of synthetic nodes that present their best child first.
    #[arg(long = "order-pct")]
    pub order_pct: Option<u8>,
    /// Correlated synthetic values: on or off.
    #[arg(long, value_parser = parse_on_off)]
    pub corr: Option<bool>,
    /// Fixed synthetic branching factor.
    #[arg(long)]
    pub w: Option<u32>,
    #[arg(long)]
    pub wmin: Option<u32>,
    #[arg(long)]
    pub wmax: Option<u32>,
    /// Synthetic tree depth.
    #[arg(long)]
    pub d: Option<u32>,
    /// Synthetic per-edge increment range.
    #[arg(long)]
    pub inc: Option<i32>,
    /// Offsets added to MTD-f's first guess, e.g. "-20,0,20".
    #[arg(long = "first-guess-offsets", value_delimiter = ',', allow_hyphen_values = true)]
    pub first_guess_offsets: Vec<Value>,
    /// Read `key = value` settings from this file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "inject-fault", hide = true)]
    pub inject_fault: bool,
}

impl Options {
    /// Reads a config file of `key = value` lines. Blank lines and lines
    /// starting with `#` are skipped; keys are the long flag names.
    pub fn from_config_file(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SpecError::ConfigRead(path.display().to_string(), e.to_string()))?;
        Self::from_config_str(&text, &path.display().to_string())
    }

    pub fn from_config_str(text: &str, origin: &str) -> Result<Self, SpecError> {
        let mut o = Options::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| SpecError::ConfigLine {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse().map_err(|e| err(format!("{key}: {e}")));
            match key {
                "algo" => o.algo.extend(parse_list::<String>(value).map_err(err)?),
                "game" => o.game = Some(value.to_string()),
                "depth" => o.depth = Some(num(value)?),
                "depths" => o.depths = parse_list(value).map_err(err)?,
                "seeds" => o.seeds = Some(value.parse().map_err(|e| err(format!("{key}: {e}")))?),
                "seed-list" => o.seed_list = parse_list(value).map_err(err)?,
                "tt-bits" => o.tt_bits = Some(num(value)?),
                "csv" => o.csv = Some(PathBuf::from(value)),
                "verify" => o.verify = parse_on_off(value).map_err(err)?,
                "jobs" => o.jobs = Some(value.parse().map_err(|e| err(format!("{key}: {e}")))?),
                "order-pct" => o.order_pct = Some(value.parse().map_err(|e| err(format!("{key}: {e}")))?),
                "corr" => o.corr = Some(parse_on_off(value).map_err(err)?),
                "w" => o.w = Some(num(value)?),
                "wmin" => o.wmin = Some(num(value)?),
                "wmax" => o.wmax = Some(num(value)?),
                "d" => o.d = Some(num(value)?),
                "inc" => o.inc = Some(value.parse().map_err(|e| err(format!("{key}: {e}")))?),
                "first-guess-offsets" => o.first_guess_offsets = parse_list(value).map_err(err)?,
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(o)
    }

    /// Fills every unset field of `self` from `file`.
    pub fn or(self, file: Options) -> Options {
        Options {
            algo: or_list(self.algo, file.algo),
            game: self.game.or(file.game),
            depth: self.depth.or(file.depth),
            depths: or_list(self.depths, file.depths),
            seeds: self.seeds.or(file.seeds),
            seed_list: or_list(self.seed_list, file.seed_list),
            tt_bits: self.tt_bits.or(file.tt_bits),
            csv: self.csv.or(file.csv),
            verify: self.verify || file.verify,
            jobs: self.jobs.or(file.jobs),
            order_pct: self.order_pct.or(file.order_pct),
            corr: self.corr.or(file.corr),
            w: self.w.or(file.w),
            wmin: self.wmin.or(file.wmin),
            wmax: self.wmax.or(file.wmax),
            d: self.d.or(file.d),
            inc: self.inc.or(file.inc),
            first_guess_offsets: or_list(self.first_guess_offsets, file.first_guess_offsets),
            config: self.config,
            inject_fault: self.inject_fault || file.inject_fault,
        }
    }

    /// Merges the config file named by `--config`, if any.
    pub fn resolve(self) -> Result<Options, SpecError> {
        match self.config.clone() {
            Some(path) => {
                let file = Options::from_config_file(&path)?;
                Ok(self.or(file))
            }
            None => Ok(self),
        }
    }

    fn shape_given(&self) -> bool {
        self.w.is_some() || self.wmin.is_some() || self.wmax.is_some() || self.d.is_some()
    }
}

/// Which subcommand a spec is for; the defaults differ slightly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    Verify,
    Sweep,
    Ordering,
}

pub const DEFAULT_W: u32 = 6;
pub const DEFAULT_D: u32 = 5;
pub const DEFAULT_INC: i32 = 10;
pub const DEFAULT_SEEDS: u64 = 10;
pub const DEFAULT_TT_BITS: u32 = 16;
pub const SUITE_SIZE: u64 = 1000;
pub const SWEEP_SEEDS: u64 = 100;

/// How synthetic positions are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticShape {
    /// One shape for every seed.
    Uniform(SyntheticTreeConfig),
    /// The verification suite: shape varies with the seed.
    Suite,
}

impl SyntheticShape {
    pub fn config(&self, seed: u64) -> SyntheticTreeConfig {
        match *self {
            SyntheticShape::Uniform(c) => SyntheticTreeConfig { seed, ..c },
            SyntheticShape::Suite => suite_config(seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub algorithms: Vec<Algorithm>,
    pub game: GameKind,
    pub shape: SyntheticShape,
    /// Depths reported. `None` means every depth up to the position's
    /// natural limit (the tree depth for synthetic suites).
    pub depths: Option<Vec<Depth>>,
    pub positions: Vec<u64>,
    pub tt_bits: u32,
    pub csv: Option<PathBuf>,
    pub verify: bool,
    pub jobs: usize,
    pub params: DriverParams,
    pub offsets: Option<Vec<Value>>,
    pub inject_fault: bool,
}

impl ExperimentSpec {
    pub fn from_options(o: &Options, mode: Mode) -> Result<Self, SpecError> {
        let game: GameKind = o.game.as_deref().unwrap_or("synthetic").parse()?;

        let algorithms: Vec<Algorithm> = if o.algo.is_empty() {
            match mode {
                Mode::Sweep | Mode::Ordering => vec![Algorithm::MtdF],
                Mode::Run | Mode::Verify => Algorithm::ALL.to_vec(),
            }
        } else {
            o.algo
                .iter()
                .map(|a| a.parse::<Algorithm>().map_err(|e| invalid(e.to_string())))
                .collect::<Result<_, _>>()?
        };

        let suite = game == GameKind::Synthetic && mode == Mode::Verify && !o.shape_given();
        let shape = if suite {
            SyntheticShape::Suite
        } else {
            let branching = match (o.w, o.wmin, o.wmax) {
                (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                    return Err(invalid("--w conflicts with --wmin/--wmax"));
                }
                (_, Some(min), Some(max)) => Branching::Range { min, max },
                (_, Some(_), None) | (_, None, Some(_)) => {
                    return Err(invalid("--wmin and --wmax must be given together"));
                }
                (w, None, None) => Branching::Fixed(w.unwrap_or(DEFAULT_W)),
            };
            let cfg = SyntheticTreeConfig {
                seed: 0,
                branching,
                depth: o.d.unwrap_or(DEFAULT_D),
                increment_range: o.inc.unwrap_or(DEFAULT_INC),
                correlation: if o.corr.unwrap_or(true) {
                    Correlation::Correlated
                } else {
                    Correlation::Independent
                },
                order_pct: o.order_pct.unwrap_or(0),
            };
            cfg.validate().map_err(|e| invalid(e.to_string()))?;
            SyntheticShape::Uniform(cfg)
        };

        let depths = match (o.depth, non_empty(&o.depths)) {
            (Some(_), Some(_)) => return Err(invalid("--depth conflicts with --depths")),
            (Some(d), None) => Some(vec![d]),
            (None, Some(list)) => {
                let mut list = list.clone();
                list.sort_unstable();
                list.dedup();
                Some(list)
            }
            (None, None) => match (game, shape) {
                (GameKind::Synthetic, SyntheticShape::Uniform(c)) => Some((1..=c.depth.max(1)).collect()),
                (GameKind::Synthetic, SyntheticShape::Suite) => None,
                (GameKind::TicTacToe, _) => Some((1..=9).collect()),
                (GameKind::Othello6, _) => Some((1..=6).collect()),
            },
        };
        if let Some(d) = &depths {
            if d.is_empty() || d[0] == 0 {
                return Err(invalid("depths must be at least 1"));
            }
        }

        let positions = match (o.seeds, non_empty(&o.seed_list)) {
            (Some(_), Some(_)) => return Err(invalid("--seeds conflicts with --seed-list")),
            (Some(n), None) => (0..n).collect(),
            (None, Some(list)) => list.clone(),
            (None, None) => {
                let n = match (mode, game) {
                    (Mode::Verify, GameKind::Synthetic) if suite => SUITE_SIZE,
                    (Mode::Sweep, GameKind::Synthetic) => SWEEP_SEEDS,
                    (_, GameKind::TicTacToe) => 1,
                    _ => DEFAULT_SEEDS,
                };
                (0..n).collect()
            }
        };
        if positions.is_empty() {
            return Err(invalid("no positions to search"));
        }
        if algorithms.is_empty() {
            return Err(invalid("no algorithms selected"));
        }

        let tt_bits = o.tt_bits.unwrap_or(DEFAULT_TT_BITS);
        if !(MIN_SIZE_LOG2..=MAX_SIZE_LOG2).contains(&tt_bits) {
            return Err(invalid(format!(
                "--tt-bits must lie in {MIN_SIZE_LOG2}..={MAX_SIZE_LOG2}"
            )));
        }
        let jobs = o.jobs.unwrap_or(1);
        if jobs == 0 {
            return Err(invalid("--jobs must be at least 1"));
        }

        Ok(ExperimentSpec {
            algorithms,
            game,
            shape,
            depths,
            positions,
            tt_bits,
            csv: o.csv.clone(),
            verify: o.verify || mode == Mode::Verify,
            jobs,
            params: DriverParams::default(),
            offsets: non_empty(&o.first_guess_offsets).cloned(),
            inject_fault: o.inject_fault,
        })
    }

    /// Depths reported for one position.
    pub fn depths_for(&self, position: u64) -> Vec<Depth> {
        match &self.depths {
            Some(d) => d.clone(),
            None => (1..=self.shape.config(position).depth.max(1)).collect(),
        }
    }
}
