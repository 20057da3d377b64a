//! Stateless splittable hashing: every pseudo-random quantity is a pure
//! function of a seed and a position, so nodes can be generated in any order.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of a (seed, item, stream) triple.
#[inline]
pub fn mix(seed: u64, item: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(item ^ stream.wrapping_mul(GOLDEN)))
}

/// Uniform integer in `[-range, range]`.
#[inline]
pub fn symmetric(h: u64, range: i32) -> i32 {
    if range <= 0 {
        return 0;
    }
    let span = 2 * range as u64 + 1;
    (h % span) as i32 - range
}

/// Zobrist key table: one pseudo-random word per (square, piece) pair plus a
/// side-to-move word.
#[derive(Debug, Clone)]
pub struct Zobrist {
    pieces: Vec<u64>,
    piece_kinds: usize,
    pub side: u64,
}

impl Zobrist {
    pub fn new(tag: u64, squares: usize, piece_kinds: usize) -> Self {
        let pieces = (0..squares * piece_kinds)
            .map(|i| mix(tag, i as u64, 1))
            .collect();
        Self {
            pieces,
            piece_kinds,
            side: mix(tag, u64::MAX, 2),
        }
    }

    #[inline]
    pub fn piece(&self, square: usize, kind: usize) -> u64 {
        self.pieces[square * self.piece_kinds + kind]
    }
}
