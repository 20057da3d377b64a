//! Seeded synthetic game trees.
//!
//! Every node is identified by its index in a `W`-ary heap numbering
//! (`W` the largest branching factor): the root is 0 and child `i` of node
//! `k` is `k * W + i + 1`. Child counts, edge increments, leaf values and
//! child presentation order are all hashes of `(seed, index)`, so a tree is
//! a pure function of its configuration and can be walked in any order.
//!
//! In correlated mode a node's score is the sum of the increments on the
//! edges leading to it, so siblings share most of their value. Independent
//! mode draws each node's score from its own hash alone.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::game::GamePosition;
use crate::hash::{mix, splitmix64, symmetric};
use crate::value::{Value, PLUS_INF};

const STREAM_WIDTH: u64 = 11;
const STREAM_EDGE: u64 = 12;
const STREAM_LEAF: u64 = 13;
const STREAM_ORDER: u64 = 14;
const STREAM_SHUFFLE: u64 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    Fixed(u32),
    Range { min: u32, max: u32 },
}

impl Branching {
    pub fn max(&self) -> u32 {
        match *self {
            Branching::Fixed(w) => w,
            Branching::Range { max, .. } => max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Correlation {
    #[default]
    Correlated,
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("branching factor must be at least 1")]
    ZeroBranching,
    #[error("branching range {min}..={max} is empty")]
    EmptyRange { min: u32, max: u32 },
    #[error("increment range must be non-negative")]
    NegativeIncrement,
    #[error("ordering percentage {0} above 100")]
    OrderPct(u8),
    #[error("tree with branching {w} and depth {d} is too large to index")]
    TooLarge { w: u32, d: u32 },
    #[error("values up to {0} would reach the sentinels")]
    ValueRange(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticTreeConfig {
    pub seed: u64,
    pub branching: Branching,
    pub depth: u32,
    /// Each edge adds a value drawn uniformly from `[-inc, inc]`.
    pub increment_range: i32,
    pub correlation: Correlation,
    /// Percentage of nodes that present their best child first; the rest
    /// present a seeded shuffle.
    pub order_pct: u8,
}

impl Default for SyntheticTreeConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            branching: Branching::Fixed(4),
            depth: 4,
            increment_range: 10,
            correlation: Correlation::Correlated,
            order_pct: 0,
        }
    }
}

impl SyntheticTreeConfig {
    pub fn uniform(seed: u64, w: u32, depth: u32) -> Self {
        Self {
            seed,
            branching: Branching::Fixed(w),
            depth,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.branching {
            Branching::Fixed(0) => return Err(ConfigError::ZeroBranching),
            Branching::Range { min: 0, .. } => return Err(ConfigError::ZeroBranching),
            Branching::Range { min, max } if min > max => return Err(ConfigError::EmptyRange { min, max }),
            _ => {}
        }
        if self.increment_range < 0 {
            return Err(ConfigError::NegativeIncrement);
        }
        if self.order_pct > 100 {
            return Err(ConfigError::OrderPct(self.order_pct));
        }
        let w = self.branching.max() as u64;
        let mut last: u64 = 0;
        for _ in 0..self.depth {
            last = last
                .checked_mul(w)
                .and_then(|x| x.checked_add(w))
                .ok_or(ConfigError::TooLarge {
                    w: self.branching.max(),
                    d: self.depth,
                })?;
        }
        let reach = self.increment_range as i64 * self.depth.max(1) as i64;
        if reach >= PLUS_INF as i64 {
            return Err(ConfigError::ValueRange(reach));
        }
        Ok(())
    }

    /// Magnitude of the largest value any node can take.
    pub fn value_reach(&self) -> Value {
        self.increment_range * self.depth.max(1) as Value
    }

    pub fn build(self) -> Result<SyntheticNode, ConfigError> {
        self.validate()?;
        Ok(Arc::new(SyntheticTree {
            config: self,
            radix: self.branching.max() as u64,
            key_mask: splitmix64(self.seed) & !0xFFFF_FFFF,
            memo: Mutex::new(HashMap::new()),
        })
        .root())
    }
}

/// The `i`-th tree of the standard verification suite: `w` in 2..=4,
/// depth in 2..=6, alternating correlated and independent blocks, with a
/// spread of ordering qualities.
pub fn suite_config(i: u64) -> SyntheticTreeConfig {
    SyntheticTreeConfig {
        seed: i,
        branching: Branching::Fixed(2 + (i % 3) as u32),
        depth: 2 + ((i / 3) % 5) as u32,
        increment_range: 10,
        correlation: if (i / 15) % 2 == 0 {
            Correlation::Correlated
        } else {
            Correlation::Independent
        },
        order_pct: ((i * 37) % 101) as u8,
    }
}

#[derive(Debug)]
pub struct SyntheticTree {
    config: SyntheticTreeConfig,
    radix: u64,
    key_mask: u64,
    /// Full-depth negamax values by node index, filled on demand for
    /// best-child-first ordering.
    memo: Mutex<HashMap<u64, Value>>,
}

impl SyntheticTree {
    pub fn config(&self) -> &SyntheticTreeConfig {
        &self.config
    }

    fn root(self: Arc<Self>) -> SyntheticNode {
        let score = self.node_score(0, 0);
        SyntheticNode {
            tree: self,
            index: 0,
            ply: 0,
            score,
        }
    }

    fn child_count(&self, index: u64) -> u32 {
        match self.config.branching {
            Branching::Fixed(w) => w,
            Branching::Range { min, max } => {
                min + (mix(self.config.seed, index, STREAM_WIDTH) % (max - min + 1) as u64) as u32
            }
        }
    }

    #[inline]
    fn child_index(&self, index: u64, slot: u32) -> u64 {
        index * self.radix + slot as u64 + 1
    }

    fn increment(&self, index: u64) -> Value {
        symmetric(mix(self.config.seed, index, STREAM_EDGE), self.config.increment_range)
    }

    /// Root-perspective score of a node whose parent scored `parent`.
    fn node_score(&self, index: u64, parent: Value) -> Value {
        match self.config.correlation {
            Correlation::Correlated if index == 0 => 0,
            Correlation::Correlated => parent + self.increment(index),
            Correlation::Independent => symmetric(mix(self.config.seed, index, STREAM_LEAF), self.config.value_reach()),
        }
    }

    /// Negamax value of a subtree searched to the full tree depth, for the
    /// side to move at `ply`.
    fn subtree_value(&self, index: u64, ply: u32, score: Value) -> Value {
        if ply == self.config.depth {
            return if ply % 2 == 0 { score } else { -score };
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(&index) {
            return *v;
        }
        let v = (0..self.child_count(index))
            .map(|slot| {
                let c = self.child_index(index, slot);
                -self.subtree_value(c, ply + 1, self.node_score(c, score))
            })
            .max()
            .expect("at least one child");
        self.memo.lock().expect("memo lock").insert(index, v);
        v
    }

    fn children_order(&self, index: u64, ply: u32, score: Value) -> Vec<u32> {
        let n = self.child_count(index);
        let seed = self.config.seed;
        let best_first = (mix(seed, index, STREAM_ORDER) % 100) < self.config.order_pct as u64;
        let mut order: Vec<u32> = (0..n).collect();
        if best_first {
            let best = (0..n)
                .max_by_key(|&slot| {
                    let c = self.child_index(index, slot);
                    // ties go to the lowest slot
                    (-self.subtree_value(c, ply + 1, self.node_score(c, score)), std::cmp::Reverse(slot))
                })
                .expect("at least one child");
            order[..=best as usize].rotate_right(1);
        } else {
            for j in (1..n as usize).rev() {
                let r = (mix(seed, index, STREAM_SHUFFLE + j as u64) % (j as u64 + 1)) as usize;
                order.swap(j, r);
            }
        }
        order
    }
}

/// A node of a synthetic tree. Moves are child slots.
#[derive(Debug, Clone)]
pub struct SyntheticNode {
    tree: Arc<SyntheticTree>,
    index: u64,
    ply: u32,
    score: Value,
}

impl SyntheticNode {
    pub fn tree(&self) -> &SyntheticTree {
        &self.tree
    }

    pub fn config(&self) -> &SyntheticTreeConfig {
        &self.tree.config
    }

    /// Heap index of this node; unique within the tree.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn ply(&self) -> u32 {
        self.ply
    }

    /// Score from the root player's point of view.
    pub fn root_score(&self) -> Value {
        self.score
    }

    /// Number of children, ignoring whether this node is at the tree depth.
    pub fn branching(&self) -> u32 {
        self.tree.child_count(self.index)
    }

    /// Exact value of this node's subtree to the full tree depth.
    pub fn full_depth_value(&self) -> Value {
        self.tree.subtree_value(self.index, self.ply, self.score)
    }
}

/// Children of a synthetic node in presentation order.
pub fn synthetic_children(node: &SyntheticNode) -> Vec<SyntheticNode> {
    node.legal_moves().into_iter().map(|m| node.apply(m)).collect()
}

/// Side-to-move evaluation of a synthetic node.
pub fn synthetic_evaluate(node: &SyntheticNode) -> Value {
    node.evaluate()
}

impl GamePosition for SyntheticNode {
    type Move = u32;

    fn legal_moves(&self) -> Vec<u32> {
        if self.is_terminal() {
            return Vec::new();
        }
        self.tree.children_order(self.index, self.ply, self.score)
    }

    fn apply(&self, mv: u32) -> Self {
        let index = self.tree.child_index(self.index, mv);
        SyntheticNode {
            tree: Arc::clone(&self.tree),
            index,
            ply: self.ply + 1,
            score: self.tree.node_score(index, self.score),
        }
    }

    fn is_terminal(&self) -> bool {
        self.ply >= self.tree.config.depth
    }

    fn evaluate(&self) -> Value {
        if self.ply % 2 == 0 {
            self.score
        } else {
            -self.score
        }
    }

    /// Heap index XOR a seed-derived mask in the high half: injective, and
    /// the low bits that select a table slot stay the heap index.
    fn position_key(&self) -> u64 {
        self.index ^ self.tree.key_mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn leaves(n: &SyntheticNode) -> Vec<SyntheticNode> {
        if n.is_terminal() {
            return vec![n.clone()];
        }
        synthetic_children(n).iter().flat_map(leaves).collect()
    }

    #[test]
    fn deterministic_children() {
        let cfg = SyntheticTreeConfig {
            order_pct: 50,
            ..SyntheticTreeConfig::uniform(9, 5, 4)
        };
        let a = cfg.build().unwrap();
        let b = cfg.build().unwrap();
        let walk = |n: &SyntheticNode| -> Vec<(u64, Vec<u32>, Value)> {
            let mut out = Vec::new();
            let mut stack = vec![n.clone()];
            while let Some(x) = stack.pop() {
                out.push((x.index(), x.legal_moves(), x.evaluate()));
                stack.extend(synthetic_children(&x));
            }
            out
        };
        assert_eq!(walk(&a), walk(&b));
        assert_eq!(a.legal_moves(), a.legal_moves());
    }

    #[test]
    fn zero_increments_give_zero_leaves() {
        let cfg = SyntheticTreeConfig {
            increment_range: 0,
            ..SyntheticTreeConfig::uniform(3, 3, 3)
        };
        assert!(leaves(&cfg.build().unwrap()).iter().all(|l| l.evaluate() == 0));
    }

    #[test]
    fn sibling_leaves_differ_by_two_increments() {
        for seed in 0..20 {
            let cfg = SyntheticTreeConfig {
                increment_range: 7,
                ..SyntheticTreeConfig::uniform(seed, 3, 3)
            };
            let root = cfg.build().unwrap();
            let mut stack = vec![root];
            while let Some(n) = stack.pop() {
                if n.ply() + 1 == cfg.depth {
                    let vals: Vec<Value> = synthetic_children(&n).iter().map(|c| c.root_score()).collect();
                    let spread = vals.iter().max().unwrap() - vals.iter().min().unwrap();
                    assert!(spread <= 14);
                } else {
                    stack.extend(synthetic_children(&n));
                }
            }
        }
    }

    #[test]
    fn full_enumeration_counts() {
        let root = SyntheticTreeConfig::uniform(1, 3, 3).build().unwrap();
        let ls = leaves(&root);
        assert_eq!(ls.len(), 27);
        let keys: HashSet<u64> = ls.iter().map(|l| l.position_key()).collect();
        assert_eq!(keys.len(), 27);
    }

    #[test]
    fn variable_branching_stays_in_range() {
        let cfg = SyntheticTreeConfig {
            branching: Branching::Range { min: 2, max: 5 },
            ..SyntheticTreeConfig::uniform(4, 1, 4)
        };
        let root = cfg.build().unwrap();
        let mut seen = HashSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !n.is_terminal() {
                let k = n.legal_moves().len();
                assert!((2..=5).contains(&k));
                seen.insert(k);
                stack.extend(synthetic_children(&n));
            }
        }
        assert!(seen.len() > 1);
    }

    #[test]
    fn keys_are_unique_across_the_tree() {
        let cfg = SyntheticTreeConfig {
            branching: Branching::Range { min: 1, max: 4 },
            ..SyntheticTreeConfig::uniform(11, 1, 5)
        };
        let mut keys = HashSet::new();
        let mut stack = vec![cfg.build().unwrap()];
        while let Some(n) = stack.pop() {
            assert!(keys.insert(n.position_key()));
            stack.extend(synthetic_children(&n));
        }
    }

    #[test]
    fn best_first_ordering() {
        let cfg = SyntheticTreeConfig {
            order_pct: 100,
            ..SyntheticTreeConfig::uniform(5, 4, 4)
        };
        let root = cfg.build().unwrap();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n.is_terminal() {
                continue;
            }
            let kids = synthetic_children(&n);
            let best = kids.iter().map(|c| -c.full_depth_value()).max().unwrap();
            assert_eq!(-kids[0].full_depth_value(), best);
            stack.extend(kids);
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(SyntheticTreeConfig::uniform(0, 0, 3).validate(), Err(ConfigError::ZeroBranching));
        let bad = SyntheticTreeConfig {
            branching: Branching::Range { min: 4, max: 2 },
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(ConfigError::EmptyRange { .. })));
        assert!(matches!(SyntheticTreeConfig::uniform(0, 36, 13).validate(), Err(ConfigError::TooLarge { .. })));
        assert!(SyntheticTreeConfig::uniform(0, 36, 12).validate().is_ok());
        let neg = SyntheticTreeConfig {
            increment_range: -1,
            ..Default::default()
        };
        assert_eq!(neg.validate(), Err(ConfigError::NegativeIncrement));
        let huge = SyntheticTreeConfig {
            increment_range: 10_000,
            ..Default::default()
        };
        assert!(matches!(huge.validate(), Err(ConfigError::ValueRange(_))));
    }

    #[test]
    fn suite_covers_parameter_grid() {
        let cfgs: Vec<_> = (0..1000).map(suite_config).collect();
        for w in 2..=4 {
            for d in 2..=6 {
                for c in [Correlation::Correlated, Correlation::Independent] {
                    assert!(cfgs
                        .iter()
                        .any(|x| x.branching == Branching::Fixed(w) && x.depth == d && x.correlation == c));
                }
            }
        }
        assert!(cfgs.iter().all(|c| c.validate().is_ok()));
    }
}
