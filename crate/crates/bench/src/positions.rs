//! Test positions: seeded synthetic trees and scripted game openings.

use mtd_core::games::{OthelloState, SyntheticNode, TicTacToeState};
use mtd_core::hash::mix;
use mtd_core::GamePosition;

use crate::spec::{ExperimentSpec, GameKind, SpecError};

/// A root position of any supported game.
#[derive(Debug, Clone)]
pub enum Root {
    Synthetic(SyntheticNode),
    TicTacToe(TicTacToeState),
    Othello(OthelloState),
}

/// Evaluates `$body` with `$r` bound to the concrete position inside a
/// [`Root`], so generic code runs once per game type.
#[macro_export]
macro_rules! with_root {
    ($root:expr, $r:ident => $body:expr) => {
        match $root {
            $crate::positions::Root::Synthetic($r) => $body,
            $crate::positions::Root::TicTacToe($r) => $body,
            $crate::positions::Root::Othello($r) => $body,
        }
    };
}

/// Plays `plies` seeded pseudo-random moves from `start`.
pub fn scripted_prefix<G: GamePosition>(start: G, seed: u64, plies: u32) -> G {
    let mut s = start;
    for ply in 0..plies {
        let moves = s.legal_moves();
        if moves.is_empty() {
            break;
        }
        let pick = mix(seed, ply as u64, 0x7A7) % moves.len() as u64;
        s = s.apply(moves[pick as usize]);
    }
    s
}

impl Root {
    /// Position `id` of the experiment's game. Tic-tac-toe position 0 is the empty
    /// board; Othello positions are short scripted openings.
    pub fn build(spec: &ExperimentSpec, id: u64) -> Result<Root, SpecError> {
        Ok(match spec.game {
            GameKind::Synthetic => Root::Synthetic(
                spec.shape
                    .config(id)
                    .build()
                    .map_err(|e| SpecError::Invalid(e.to_string()))?,
            ),
            GameKind::TicTacToe => Root::TicTacToe(scripted_prefix(TicTacToeState::new(), id, (id % 5) as u32)),
            GameKind::Othello6 => Root::Othello(OthelloState::scripted(id, 4 + (id % 5) as u32)),
        })
    }
}
