//! Hand-written game trees, given as nested lists of leaf values.
//!
//! Leaf values are written from the root player's point of view, the way
//! textbook minimax figures label them; the position reports them in negamax
//! convention. `"((3 7) (5 2))"` is a max root over two min nodes.

use std::sync::Arc;

use thiserror::Error;

use crate::game::GamePosition;
use crate::hash::splitmix64;
use crate::value::{is_evaluation, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Leaf(Value),
    Interior(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("leaf value {0} outside the evaluation range")]
    OutOfRange(i64),
    #[error("empty child list at byte {0}")]
    EmptyList(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTree {
    nodes: Vec<Node>,
}

impl ExplicitTree {
    pub fn parse(text: &str) -> Result<Arc<Self>, TreeParseError> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            nodes: Vec::new(),
        };
        p.node()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(TreeParseError::Unexpected(p.bytes[p.pos] as char, p.pos));
        }
        Ok(Arc::new(Self { nodes: p.nodes }))
    }

    pub fn root(self: &Arc<Self>) -> TreeNode {
        TreeNode {
            tree: Arc::clone(self),
            node: 0,
            ply: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of leaves.
    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && (self.bytes[self.pos].is_ascii_whitespace() || self.bytes[self.pos] == b',') {
            self.pos += 1;
        }
    }

    fn node(&mut self) -> Result<usize, TreeParseError> {
        self.skip_ws();
        let id = self.nodes.len();
        match self.bytes.get(self.pos) {
            None => Err(TreeParseError::UnexpectedEnd),
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                self.nodes.push(Node::Interior(Vec::new()));
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.bytes.get(self.pos) {
                        None => return Err(TreeParseError::UnexpectedEnd),
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => children.push(self.node()?),
                    }
                }
                if children.is_empty() {
                    return Err(TreeParseError::EmptyList(open));
                }
                self.nodes[id] = Node::Interior(children);
                Ok(id)
            }
            Some(&c) if c == b'-' || c.is_ascii_digit() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
                let v: i64 = s.parse().map_err(|_| TreeParseError::Unexpected(c as char, start))?;
                if v < i32::MIN as i64 || v > i32::MAX as i64 || !is_evaluation(v as Value) {
                    return Err(TreeParseError::OutOfRange(v));
                }
                self.nodes.push(Node::Leaf(v as Value));
                Ok(id)
            }
            Some(&c) => Err(TreeParseError::Unexpected(c as char, self.pos)),
        }
    }
}

/// A node of an [`ExplicitTree`]. Moves are child indices.
#[derive(Debug, Clone)]
pub struct TreeNode {
    tree: Arc<ExplicitTree>,
    node: usize,
    ply: u32,
}

impl TreeNode {
    pub fn ply(&self) -> u32 {
        self.ply
    }

    pub fn id(&self) -> usize {
        self.node
    }
}

impl GamePosition for TreeNode {
    type Move = u32;

    fn legal_moves(&self) -> Vec<u32> {
        match &self.tree.nodes[self.node] {
            Node::Leaf(_) => Vec::new(),
            Node::Interior(c) => (0..c.len() as u32).collect(),
        }
    }

    fn apply(&self, mv: u32) -> Self {
        match &self.tree.nodes[self.node] {
            Node::Interior(c) => TreeNode {
                tree: Arc::clone(&self.tree),
                node: c[mv as usize],
                ply: self.ply + 1,
            },
            Node::Leaf(_) => panic!("no moves at a leaf"),
        }
    }

    fn is_terminal(&self) -> bool {
        matches!(self.tree.nodes[self.node], Node::Leaf(_))
    }

    /// Interior nodes have no heuristic and score 0.
    fn evaluate(&self) -> Value {
        let v = match self.tree.nodes[self.node] {
            Node::Leaf(v) => v,
            Node::Interior(_) => 0,
        };
        if self.ply % 2 == 0 {
            v
        } else {
            -v
        }
    }

    fn position_key(&self) -> u64 {
        splitmix64(self.node as u64)
    }
}
