//! Transposition table holding both bounds, a best move and an age stamp
//! per position.
//!
//! Two storage layouts are offered. [`Replacement::TwoTier`] is a fixed-size
//! direct-mapped table of two-entry buckets (a depth-preferred slot and a
//! most-recent slot) plus an ordering-only shadow of the last evicted best
//! move. [`Replacement::Unbounded`] never evicts; it is the collision-free
//! table used when search results are checked against an oracle.

use std::collections::HashMap;

use thiserror::Error;

use crate::value::{BoundPair, Depth};

/// Depth recorded for terminal positions; their value holds at any depth.
pub const TERMINAL_DEPTH: Depth = Depth::MAX;

pub const MIN_SIZE_LOG2: u32 = 8;
pub const MAX_SIZE_LOG2: u32 = 28;
pub const DEFAULT_SIZE_LOG2: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TTEntry<M> {
    pub key: u64,
    pub depth: Depth,
    pub bounds: BoundPair,
    pub best_move: Option<M>,
    pub age: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Replacement {
    #[default]
    TwoTier,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TTConfig {
    /// The table holds `2^size_log2` entries (ignored when unbounded).
    pub size_log2: u32,
    pub replacement: Replacement,
}

impl Default for TTConfig {
    fn default() -> Self {
        Self {
            size_log2: DEFAULT_SIZE_LOG2,
            replacement: Replacement::TwoTier,
        }
    }
}

impl TTConfig {
    pub fn with_bits(size_log2: u32) -> Result<Self, TableError> {
        let cfg = Self {
            size_log2,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn unbounded() -> Self {
        Self {
            size_log2: DEFAULT_SIZE_LOG2,
            replacement: Replacement::Unbounded,
        }
    }

    pub fn validate(&self) -> Result<(), TableError> {
        if !(MIN_SIZE_LOG2..=MAX_SIZE_LOG2).contains(&self.size_log2) {
            return Err(TableError::Size(self.size_log2));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table size exponent {0} outside {MIN_SIZE_LOG2}..={MAX_SIZE_LOG2}")]
    Size(u32),
    #[error("stored bounds {held} and incoming {incoming} for key {key:#018x} at depth {depth} do not intersect")]
    Inconsistent {
        key: u64,
        depth: Depth,
        held: BoundPair,
        incoming: BoundPair,
    },
    #[error("bounds {0} are crossed")]
    Crossed(BoundPair),
}

/// Result of a table lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe<M> {
    /// Matching key searched at least as deep as requested.
    Hit(TTEntry<M>),
    /// Only a move hint is usable: the matching entry is too shallow, or
    /// only an evicted shadow remains.
    OrderingOnly(M),
    Miss,
}

impl<M: Copy> Probe<M> {
    pub fn best_move(&self) -> Option<M> {
        match self {
            Probe::Hit(e) => e.best_move,
            Probe::OrderingOnly(m) => Some(*m),
            Probe::Miss => None,
        }
    }
}

#[derive(Debug, Clone)]
struct Bucket<M> {
    deep: Option<TTEntry<M>>,
    recent: Option<TTEntry<M>>,
    shadow: Option<(u64, M)>,
}

impl<M> Default for Bucket<M> {
    fn default() -> Self {
        Self {
            deep: None,
            recent: None,
            shadow: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Storage<M> {
    Buckets(Vec<Bucket<M>>),
    Map(HashMap<u64, TTEntry<M>>),
}

#[derive(Debug, Clone)]
pub struct TranspositionTable<M> {
    config: TTConfig,
    storage: Storage<M>,
    age: u32,
}

/// Whether `new` should take the depth-preferred slot from `old`.
fn preferred<M>(new: &TTEntry<M>, old: &TTEntry<M>) -> bool {
    new.depth > old.depth || (new.depth == old.depth && new.age >= old.age)
}

/// Folds `new` into an entry for the same key.
fn merge_same_key<M: Copy>(held: &mut TTEntry<M>, new: TTEntry<M>) -> Result<(), TableError> {
    let mut result = Ok(());
    if new.depth > held.depth {
        held.depth = new.depth;
        held.bounds = new.bounds;
    } else if new.depth == held.depth {
        match held.bounds.intersect(new.bounds) {
            Ok(b) => held.bounds = b,
            Err(_) => {
                result = Err(TableError::Inconsistent {
                    key: new.key,
                    depth: new.depth,
                    held: held.bounds,
                    incoming: new.bounds,
                });
                held.bounds = new.bounds;
            }
        }
    }
    // a shallower result never displaces deeper bounds
    if new.depth >= held.depth || held.best_move.is_none() {
        held.best_move = new.best_move.or(held.best_move);
    }
    held.age = held.age.max(new.age);
    result
}

impl<M: Copy> TranspositionTable<M> {
    pub fn new(config: TTConfig) -> Result<Self, TableError> {
        let storage = match config.replacement {
            Replacement::TwoTier => {
                config.validate()?;
                let buckets = 1usize << (config.size_log2 - 1);
                Storage::Buckets(vec![Bucket::default(); buckets])
            }
            Replacement::Unbounded => Storage::Map(HashMap::new()),
        };
        Ok(Self {
            config,
            storage,
            age: 0,
        })
    }

    pub fn with_bits(size_log2: u32) -> Result<Self, TableError> {
        Self::new(TTConfig::with_bits(size_log2)?)
    }

    pub fn unbounded() -> Self {
        Self::new(TTConfig::unbounded()).expect("unbounded tables have no size limit")
    }

    pub fn config(&self) -> TTConfig {
        self.config
    }

    /// Current search-iteration stamp.
    pub fn age(&self) -> u32 {
        self.age
    }

    /// Starts a new stamp; entries written or used afterwards count as live.
    pub fn next_age(&mut self) -> u32 {
        self.age = self.age.wrapping_add(1);
        self.age
    }

    /// Capacity in entries, `None` when unbounded.
    pub fn capacity(&self) -> Option<usize> {
        match &self.storage {
            Storage::Buckets(b) => Some(b.len() * 2),
            Storage::Map(_) => None,
        }
    }

    #[inline]
    fn index(buckets: usize, key: u64) -> usize {
        (key as usize) & (buckets - 1)
    }

    /// Looks up `key` for a search of `depth` remaining plies. A hit
    /// refreshes the entry's age.
    pub fn probe(&mut self, key: u64, depth: Depth) -> Probe<M> {
        let age = self.age;
        let (found, shadow) = match &mut self.storage {
            Storage::Map(map) => (map.get_mut(&key), None),
            Storage::Buckets(buckets) => {
                let i = Self::index(buckets.len(), key);
                let bucket = &mut buckets[i];
                let shadow = bucket.shadow.filter(|(k, _)| *k == key).map(|(_, m)| m);
                let found = match (&mut bucket.deep, &mut bucket.recent) {
                    (Some(e), _) if e.key == key => Some(e),
                    (_, Some(e)) if e.key == key => Some(e),
                    _ => None,
                };
                (found, shadow)
            }
        };
        match found {
            Some(e) if e.depth >= depth => {
                e.age = age;
                Probe::Hit(*e)
            }
            Some(e) => match e.best_move.or(shadow) {
                Some(m) => Probe::OrderingOnly(m),
                None => Probe::Miss,
            },
            None => shadow.map_or(Probe::Miss, Probe::OrderingOnly),
        }
    }

    /// Read-only lookup ignoring depth; does not touch the age.
    pub fn peek(&self, key: u64) -> Option<&TTEntry<M>> {
        match &self.storage {
            Storage::Map(map) => map.get(&key),
            Storage::Buckets(buckets) => {
                let bucket = &buckets[Self::index(buckets.len(), key)];
                bucket
                    .deep
                    .iter()
                    .chain(bucket.recent.iter())
                    .find(|e| e.key == key)
            }
        }
    }

    /// Mutable access to a stored entry. Only meant for fault injection in
    /// verification harnesses.
    #[doc(hidden)]
    pub fn entry_mut(&mut self, key: u64) -> Option<&mut TTEntry<M>> {
        match &mut self.storage {
            Storage::Map(map) => map.get_mut(&key),
            Storage::Buckets(buckets) => {
                let i = Self::index(buckets.len(), key);
                let bucket = &mut buckets[i];
                match (&mut bucket.deep, &mut bucket.recent) {
                    (Some(e), _) if e.key == key => Some(e),
                    (_, Some(e)) if e.key == key => Some(e),
                    _ => None,
                }
            }
        }
    }

    /// Stores bounds for `key`. Re-storing the same key at the same depth
    /// intersects the intervals; if they are disjoint the new bounds are
    /// kept and the inconsistency is reported.
    pub fn store(
        &mut self,
        key: u64,
        depth: Depth,
        bounds: BoundPair,
        best_move: Option<M>,
        age: u32,
    ) -> Result<(), TableError> {
        if bounds.lower > bounds.upper {
            return Err(TableError::Crossed(bounds));
        }
        let new = TTEntry {
            key,
            depth,
            bounds,
            best_move,
            age,
        };
        match &mut self.storage {
            Storage::Map(map) => match map.get_mut(&key) {
                Some(held) => merge_same_key(held, new),
                None => {
                    map.insert(key, new);
                    Ok(())
                }
            },
            Storage::Buckets(buckets) => {
                let i = Self::index(buckets.len(), key);
                let bucket = &mut buckets[i];
                if let Some(held) = bucket.deep.as_mut().filter(|e| e.key == key) {
                    return merge_same_key(held, new);
                }
                if let Some(held) = bucket.recent.as_mut().filter(|e| e.key == key) {
                    let res = merge_same_key(held, new);
                    let promote = match (&bucket.recent, &bucket.deep) {
                        (Some(r), Some(d)) => preferred(r, d),
                        (Some(_), None) => true,
                        _ => false,
                    };
                    if promote {
                        std::mem::swap(&mut bucket.deep, &mut bucket.recent);
                    }
                    return res;
                }
                let evicted = match &bucket.deep {
                    Some(d) if !preferred(&new, d) => match &bucket.recent {
                        Some(r) if r.age > new.age => {
                            // shallower and older than both occupants
                            return Ok(());
                        }
                        _ => bucket.recent.replace(new),
                    },
                    _ => {
                        let demoted = bucket.deep.replace(new);
                        std::mem::replace(&mut bucket.recent, demoted)
                    }
                };
                if let Some(TTEntry {
                    key: k,
                    best_move: Some(m),
                    ..
                }) = evicted
                {
                    bucket.shadow = Some((k, m));
                }
                Ok(())
            }
        }
    }

    /// Number of entries carrying the current age stamp.
    pub fn occupancy(&self) -> usize {
        self.entries().filter(|e| e.age == self.age).count()
    }

    /// Number of entries held, regardless of age.
    pub fn len(&self) -> usize {
        self.entries().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> Box<dyn Iterator<Item = &TTEntry<M>> + '_> {
        match &self.storage {
            Storage::Map(map) => Box::new(map.values()),
            Storage::Buckets(buckets) => Box::new(
                buckets
                    .iter()
                    .flat_map(|b| b.deep.iter().chain(b.recent.iter())),
            ),
        }
    }

    pub fn clear(&mut self) {
        match &mut self.storage {
            Storage::Map(map) => map.clear(),
            Storage::Buckets(buckets) => buckets.iter_mut().for_each(|b| *b = Bucket::default()),
        }
        self.age = 0;
    }
}

/// Free-function probe, mirroring [`TranspositionTable::probe`].
pub fn tt_probe<M: Copy>(table: &mut TranspositionTable<M>, key: u64, depth: Depth) -> Probe<M> {
    table.probe(key, depth)
}

/// Free-function store, mirroring [`TranspositionTable::store`].
pub fn tt_store<M: Copy>(
    table: &mut TranspositionTable<M>,
    key: u64,
    depth: Depth,
    bounds: BoundPair,
    best_move: Option<M>,
    age: u32,
) -> Result<(), TableError> {
    table.store(key, depth, bounds, best_move, age)
}

pub fn tt_occupancy<M: Copy>(table: &TranspositionTable<M>) -> usize {
    table.occupancy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{MINUS_INF, PLUS_INF};

    fn small() -> TranspositionTable<u8> {
        TranspositionTable::with_bits(8).unwrap()
    }

    #[test]
    fn roundtrip_hit() {
        let mut t = small();
        let b = BoundPair::new(3, 9).unwrap();
        t.store(77, 5, b, Some(2), 0).unwrap();
        assert_eq!(
            t.probe(77, 5),
            Probe::Hit(TTEntry {
                key: 77,
                depth: 5,
                bounds: b,
                best_move: Some(2),
                age: 0
            })
        );
        assert!(matches!(t.probe(77, 4), Probe::Hit(_)));
    }

    #[test]
    fn shallow_entry_is_ordering_only() {
        let mut t = small();
        t.store(77, 3, BoundPair::exact(1), Some(4), 0).unwrap();
        assert_eq!(t.probe(77, 5), Probe::OrderingOnly(4));
        t.store(78, 3, BoundPair::exact(1), None, 0).unwrap();
        assert_eq!(t.probe(78, 5), Probe::Miss);
    }

    #[test]
    fn empty_table_misses() {
        let mut t = small();
        for key in [0u64, 1, 12345, u64::MAX] {
            assert_eq!(t.probe(key, 0), Probe::Miss);
        }
        assert_eq!(t.occupancy(), 0);
        assert!(t.is_empty());
    }

    #[test]
    fn same_depth_restore_intersects() {
        let mut t = small();
        t.store(5, 2, BoundPair::new(MINUS_INF, 41).unwrap(), None, 0).unwrap();
        t.store(5, 2, BoundPair::new(35, PLUS_INF).unwrap(), Some(1), 0).unwrap();
        let e = t.peek(5).unwrap();
        assert_eq!(e.bounds, BoundPair::new(35, 41).unwrap());
        assert_eq!(e.best_move, Some(1));
    }

    #[test]
    fn disjoint_restore_is_reported() {
        let mut t = small();
        t.store(5, 2, BoundPair::upper_only(3), None, 0).unwrap();
        let err = t.store(5, 2, BoundPair::lower_only(4), None, 0).unwrap_err();
        assert!(matches!(err, TableError::Inconsistent { key: 5, depth: 2, .. }));
        assert_eq!(t.peek(5).unwrap().bounds, BoundPair::lower_only(4));
        assert!(matches!(
            t.store(6, 1, BoundPair { lower: 2, upper: 1 }, None, 0),
            Err(TableError::Crossed(_))
        ));
    }

    #[test]
    fn deeper_result_replaces_bounds_and_shallower_is_ignored() {
        let mut t = small();
        t.store(9, 2, BoundPair::exact(5), Some(0), 0).unwrap();
        t.store(9, 4, BoundPair::upper_only(7), None, 1).unwrap();
        let e = *t.peek(9).unwrap();
        assert_eq!((e.depth, e.bounds, e.best_move), (4, BoundPair::upper_only(7), Some(0)));
        t.store(9, 1, BoundPair::exact(-3), Some(2), 1).unwrap();
        let e = *t.peek(9).unwrap();
        assert_eq!((e.depth, e.bounds, e.best_move), (4, BoundPair::upper_only(7), Some(0)));
    }

    // Keys 1, 129, 257 and 385 share bucket 1 of a 2^8-entry table.
    #[test]
    fn replacement_policy_orders() {
        for (first_depth, second_depth) in [(2u32, 6u32), (6, 2)] {
            let mut t = small();
            t.store(1, first_depth, BoundPair::exact(0), Some(1), 0).unwrap();
            t.store(129, second_depth, BoundPair::exact(0), Some(2), 0).unwrap();
            // both survive: deeper in the preferred slot, the other in the recent slot
            assert!(t.peek(1).is_some() && t.peek(129).is_some());
            let deeper = if first_depth > second_depth { 1 } else { 129 };
            // a third, deeper entry takes the preferred slot and demotes
            t.store(257, 9, BoundPair::exact(0), Some(3), 0).unwrap();
            assert_eq!(t.peek(257).unwrap().depth, 9);
            assert!(t.peek(deeper).is_some(), "demoted deeper entry survives");
            let shallower = if deeper == 1 { 129 } else { 1 };
            assert!(t.peek(shallower).is_none());
            // its move survives as an ordering-only shadow
            assert!(matches!(t.probe(shallower, 0), Probe::OrderingOnly(_)));
        }
    }

    #[test]
    fn shallower_older_entry_is_discarded() {
        let mut t = small();
        t.next_age();
        t.next_age();
        t.store(1, 6, BoundPair::exact(0), None, 2).unwrap();
        t.store(129, 4, BoundPair::exact(0), None, 2).unwrap();
        t.store(257, 3, BoundPair::exact(0), None, 1).unwrap();
        assert!(t.peek(257).is_none());
        assert!(t.peek(1).is_some() && t.peek(129).is_some());
        // a current-age shallower entry still enters the recent slot
        t.store(385, 3, BoundPair::exact(0), None, 2).unwrap();
        assert!(t.peek(385).is_some() && t.peek(129).is_none());
    }

    #[test]
    fn occupancy_counts_current_age() {
        let mut t = small();
        t.store(3, 0, BoundPair::exact(1), None, t.age()).unwrap();
        assert_eq!(t.occupancy(), 1);
        t.next_age();
        assert_eq!(t.occupancy(), 0);
        assert_eq!(t.len(), 1);
        assert!(matches!(t.probe(3, 0), Probe::Hit(_)));
        assert_eq!(t.occupancy(), 1);
    }

    #[test]
    fn unbounded_never_evicts() {
        let mut t: TranspositionTable<u8> = TranspositionTable::unbounded();
        for k in 0..10_000u64 {
            t.store(k << 20, 1, BoundPair::exact(k as i32 % 100), None, 0).unwrap();
        }
        assert_eq!(t.len(), 10_000);
        assert_eq!(t.capacity(), None);
    }

    #[test]
    fn size_limits() {
        assert!(TTConfig::with_bits(7).is_err());
        assert!(TTConfig::with_bits(29).is_err());
        assert_eq!(TranspositionTable::<u8>::with_bits(8).unwrap().capacity(), Some(256));
    }

    #[test]
    fn identical_operations_give_identical_tables() {
        let run = || {
            let mut t = small();
            for i in 0..2000u64 {
                let k = i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
                t.store(k, (i % 7) as u32, BoundPair::exact((i % 50) as i32), Some((i % 5) as u8), (i / 300) as u32)
                    .ok();
            }
            let mut v: Vec<_> = t.entries().copied().collect();
            v.sort_by_key(|e| e.key);
            v
        };
        assert_eq!(run(), run());
    }
}
