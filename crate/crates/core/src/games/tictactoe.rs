use std::sync::OnceLock;

use crate::game::GamePosition;
use crate::hash::Zobrist;
use crate::value::Value;

/// Score of a decided game, from the winner's side.
pub const WIN: Value = 100;

const LINES: [u16; 8] = [
    0b000_000_111,
    0b000_111_000,
    0b111_000_000,
    0b001_001_001,
    0b010_010_010,
    0b100_100_100,
    0b100_010_001,
    0b001_010_100,
];
const FULL: u16 = 0b111_111_111;

fn keys() -> &'static Zobrist {
    static KEYS: OnceLock<Zobrist> = OnceLock::new();
    KEYS.get_or_init(|| Zobrist::new(0x7777_0003, 9, 2))
}

/// Tic-tac-toe. Squares are numbered 0..9 row by row; X moves first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TicTacToeState {
    /// Marks of the side to move and of the opponent.
    me: u16,
    opp: u16,
    x_to_move: bool,
    key: u64,
}

impl Default for TicTacToeState {
    fn default() -> Self {
        Self::new()
    }
}

impl TicTacToeState {
    pub fn new() -> Self {
        Self {
            me: 0,
            opp: 0,
            x_to_move: true,
            key: 0,
        }
    }

    /// Plays a sequence of squares from the empty board.
    pub fn from_moves(moves: &[u8]) -> Option<Self> {
        let mut s = Self::new();
        for &m in moves {
            if !s.legal_moves().contains(&m) {
                return None;
            }
            s = s.apply(m);
        }
        Some(s)
    }

    fn won(marks: u16) -> bool {
        LINES.iter().any(|&l| marks & l == l)
    }

    pub fn x_to_move(&self) -> bool {
        self.x_to_move
    }
}

impl GamePosition for TicTacToeState {
    type Move = u8;

    fn legal_moves(&self) -> Vec<u8> {
        if self.is_terminal() {
            return Vec::new();
        }
        let empty = !(self.me | self.opp) & FULL;
        (0..9).filter(|&i| empty & (1 << i) != 0).collect()
    }

    fn apply(&self, mv: u8) -> Self {
        let kind = if self.x_to_move { 0 } else { 1 };
        let z = keys();
        Self {
            me: self.opp,
            opp: self.me | (1 << mv),
            x_to_move: !self.x_to_move,
            key: self.key ^ z.piece(mv as usize, kind) ^ z.side,
        }
    }

    fn is_terminal(&self) -> bool {
        Self::won(self.opp) || Self::won(self.me) || (self.me | self.opp) == FULL
    }

    /// Decided games score `±WIN`; otherwise the number of lines still open
    /// for the side to move minus those open for the opponent.
    fn evaluate(&self) -> Value {
        if Self::won(self.me) {
            return WIN;
        }
        if Self::won(self.opp) {
            return -WIN;
        }
        let open = |blocker: u16| LINES.iter().filter(|&&l| l & blocker == 0).count() as Value;
        open(self.opp) - open(self.me)
    }

    fn position_key(&self) -> u64 {
        self.key
    }
}
