//! Search domains and the brute-force oracle.

pub mod explicit;
pub mod oracle;
pub mod othello;
pub mod synthetic;
pub mod tictactoe;

pub use explicit::{ExplicitTree, TreeNode};
pub use oracle::{oracle_minimax, oracle_root_values, oracle_with_limit, table_violations, OracleError, TableViolation};
pub use othello::{othello_evaluate, OthelloState};
pub use synthetic::{
    suite_config, synthetic_children, synthetic_evaluate, Branching, Correlation, SyntheticNode, SyntheticTreeConfig,
};
pub use tictactoe::TicTacToeState;
