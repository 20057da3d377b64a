//! 6x6 Othello on 36-bit boards.
//!
//! Square `r * 6 + c` is bit `r * 6 + c`. A side with no placement but an
//! opponent who can still move must play [`PASS`]; the game ends when
//! neither side can move.

use std::sync::OnceLock;

use crate::game::GamePosition;
use crate::hash::Zobrist;
use crate::value::Value;

pub const SIZE: usize = 6;
pub const SQUARES: usize = SIZE * SIZE;
pub const PASS: u8 = SQUARES as u8;

/// Base score of a finished game; the disc margin is added on top.
pub const GAME_WON: Value = 10_000;
pub const DISC_WEIGHT: Value = 1;
pub const MOBILITY_WEIGHT: Value = 4;
pub const CORNER_WEIGHT: Value = 20;

const FULL: u64 = (1 << SQUARES) - 1;
const NOT_COL0: u64 = {
    let mut m = FULL;
    let mut r = 0;
    while r < SIZE {
        m &= !(1 << (r * SIZE));
        r += 1;
    }
    m
};
const NOT_COL5: u64 = {
    let mut m = FULL;
    let mut r = 0;
    while r < SIZE {
        m &= !(1 << (r * SIZE + SIZE - 1));
        r += 1;
    }
    m
};
const CORNERS: u64 = 1 | (1 << (SIZE - 1)) | (1 << (SIZE * (SIZE - 1))) | (1 << (SQUARES - 1));

/// The eight ray directions as shift functions.
const DIRECTIONS: [fn(u64) -> u64; 8] = [
    |b| (b << 1) & NOT_COL0,
    |b| (b >> 1) & NOT_COL5,
    |b| (b << SIZE) & FULL,
    |b| b >> SIZE,
    |b| (b << (SIZE + 1)) & NOT_COL0 & FULL,
    |b| (b << (SIZE - 1)) & NOT_COL5 & FULL,
    |b| (b >> (SIZE - 1)) & NOT_COL0,
    |b| (b >> (SIZE + 1)) & NOT_COL5,
];

fn keys() -> &'static Zobrist {
    static KEYS: OnceLock<Zobrist> = OnceLock::new();
    KEYS.get_or_init(|| Zobrist::new(0x0714_E110, SQUARES, 2))
}

fn placements(me: u64, opp: u64) -> u64 {
    let empty = !(me | opp) & FULL;
    let mut moves = 0;
    for shift in DIRECTIONS {
        let mut run = shift(me) & opp;
        for _ in 0..SIZE - 3 {
            run |= shift(run) & opp;
        }
        moves |= shift(run) & empty;
    }
    moves
}

fn flips(me: u64, opp: u64, sq: u8) -> u64 {
    let from = 1u64 << sq;
    let mut all = 0;
    for shift in DIRECTIONS {
        let mut line = 0;
        let mut cur = shift(from);
        while cur & opp != 0 {
            line |= cur;
            cur = shift(cur);
        }
        if cur & me != 0 {
            all |= line;
        }
    }
    all
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OthelloState {
    me: u64,
    opp: u64,
    black_to_move: bool,
}

impl Default for OthelloState {
    fn default() -> Self {
        Self::initial()
    }
}

impl OthelloState {
    /// Standard start: white on the c3/d4 diagonal, black on the other,
    /// black to move.
    pub fn initial() -> Self {
        let sq = |r: usize, c: usize| 1u64 << (r * SIZE + c);
        let white = sq(2, 2) | sq(3, 3);
        let black = sq(2, 3) | sq(3, 2);
        Self {
            me: black,
            opp: white,
            black_to_move: true,
        }
    }

    /// Builds a position from explicit disc sets.
    pub fn from_discs(black: u64, white: u64, black_to_move: bool) -> Option<Self> {
        if black & white != 0 || (black | white) & !FULL != 0 {
            return None;
        }
        let (me, opp) = if black_to_move { (black, white) } else { (white, black) };
        Some(Self { me, opp, black_to_move })
    }

    pub fn black(&self) -> u64 {
        if self.black_to_move {
            self.me
        } else {
            self.opp
        }
    }

    pub fn white(&self) -> u64 {
        if self.black_to_move {
            self.opp
        } else {
            self.me
        }
    }

    pub fn black_to_move(&self) -> bool {
        self.black_to_move
    }

    /// The same position with every disc's colour flipped, side to move kept.
    pub fn colors_swapped(&self) -> Self {
        Self {
            me: self.opp,
            opp: self.me,
            black_to_move: self.black_to_move,
        }
    }

    pub fn disc_margin(&self) -> Value {
        self.me.count_ones() as Value - self.opp.count_ones() as Value
    }

    /// Plays `plies` moves chosen by a seeded hash from the start position,
    /// stopping early at the end of the game.
    pub fn scripted(seed: u64, plies: u32) -> Self {
        let mut s = Self::initial();
        for ply in 0..plies {
            let moves = s.legal_moves();
            if moves.is_empty() {
                break;
            }
            let pick = crate::hash::mix(seed, ply as u64, 0x0B5E) % moves.len() as u64;
            s = s.apply(moves[pick as usize]);
        }
        s
    }
}

impl GamePosition for OthelloState {
    type Move = u8;

    fn legal_moves(&self) -> Vec<u8> {
        let mut bits = placements(self.me, self.opp);
        if bits == 0 {
            return if placements(self.opp, self.me) != 0 { vec![PASS] } else { Vec::new() };
        }
        let mut out = Vec::with_capacity(bits.count_ones() as usize);
        while bits != 0 {
            out.push(bits.trailing_zeros() as u8);
            bits &= bits - 1;
        }
        out
    }

    fn apply(&self, mv: u8) -> Self {
        if mv == PASS {
            return Self {
                me: self.opp,
                opp: self.me,
                black_to_move: !self.black_to_move,
            };
        }
        let f = flips(self.me, self.opp, mv);
        debug_assert!(f != 0, "move {mv} flips nothing");
        Self {
            me: self.opp & !f,
            opp: self.me | f | (1 << mv),
            black_to_move: !self.black_to_move,
        }
    }

    fn is_terminal(&self) -> bool {
        placements(self.me, self.opp) == 0 && placements(self.opp, self.me) == 0
    }

    fn evaluate(&self) -> Value {
        othello_evaluate(self)
    }

    fn position_key(&self) -> u64 {
        let z = keys();
        let mut key = if self.black_to_move { 0 } else { z.side };
        for (mut bits, kind) in [(self.black(), 0), (self.white(), 1)] {
            while bits != 0 {
                key ^= z.piece(bits.trailing_zeros() as usize, kind);
                bits &= bits - 1;
            }
        }
        key
    }
}

/// Side-to-move score. Finished games are `±(GAME_WON + margin)` or 0;
/// otherwise a weighted sum of disc, mobility and corner differences.
pub fn othello_evaluate(s: &OthelloState) -> Value {
    let margin = s.disc_margin();
    if s.is_terminal() {
        return match margin {
            0 => 0,
            m if m > 0 => GAME_WON + m,
            m => -GAME_WON + m,
        };
    }
    let mobility = placements(s.me, s.opp).count_ones() as Value - placements(s.opp, s.me).count_ones() as Value;
    let corners = (s.me & CORNERS).count_ones() as Value - (s.opp & CORNERS).count_ones() as Value;
    DISC_WEIGHT * margin + MOBILITY_WEIGHT * mobility + CORNER_WEIGHT * corners
}
