//! Game-tree search built on MT, a null-window alpha-beta test with a
//! transposition table, and the drivers that call it repeatedly until the
//! minimax value is pinned down.

pub mod drivers;
pub mod game;
pub mod games;
pub mod hash;
pub mod search;
pub mod stats;
pub mod ttable;
pub mod value;

pub use game::GamePosition;
pub use search::{FailDirection, MtResult, SearchConfig, SearchError, Searcher};
pub use stats::SearchStats;
pub use ttable::{TTConfig, TranspositionTable};
pub use value::{BoundPair, Depth, Value, MINUS_INF, PLUS_INF};
