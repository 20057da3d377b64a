//! Observational counters collected by every search.

use std::ops::Sub;

use thiserror::Error;

use crate::value::Depth;

/// Cut-node counts at one distance from the root.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlyCuts {
    pub cut_nodes: u64,
    pub first_move_cuts: u64,
}

impl PlyCuts {
    /// Fraction of cut nodes whose first examined move produced the cutoff.
    /// A ply without cut nodes is vacuously perfectly ordered.
    pub fn rate(&self) -> f64 {
        if self.cut_nodes == 0 {
            1.0
        } else {
            self.first_move_cuts as f64 / self.cut_nodes as f64
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Calls to `evaluate`; a position evaluated twice counts twice.
    pub leaf_evals: u64,
    pub interior_nodes: u64,
    pub tt_probes: u64,
    /// Probes that found an entry searched at least as deep as requested.
    pub tt_hits: u64,
    /// Hits whose bounds ended the node without searching it.
    pub tt_cutoffs: u64,
    pub tt_stores: u64,
    /// Stores whose bounds disagreed with the entry already held.
    pub tt_conflicts: u64,
    pub mt_calls: u64,
    pub cut_nodes: u64,
    pub cut_node_moves_examined: u64,
    pub first_move_cuts: u64,
    pub researches: u64,
    pub cuts_by_ply: Vec<PlyCuts>,
}

impl SearchStats {
    /// Every node visit ends in exactly one of: a table cutoff, a leaf
    /// evaluation or an interior expansion.
    pub fn total_nodes(&self) -> u64 {
        self.leaf_evals + self.interior_nodes + self.tt_cutoffs
    }

    pub fn cut_rate(&self) -> f64 {
        PlyCuts {
            cut_nodes: self.cut_nodes,
            first_move_cuts: self.first_move_cuts,
        }
        .rate()
    }

    pub(crate) fn record_cut(&mut self, ply: Depth, moves_examined: u64) {
        self.cut_nodes += 1;
        self.cut_node_moves_examined += moves_examined;
        let first = moves_examined == 1;
        if first {
            self.first_move_cuts += 1;
        }
        let ply = ply as usize;
        if self.cuts_by_ply.len() <= ply {
            self.cuts_by_ply.resize(ply + 1, PlyCuts::default());
        }
        let slot = &mut self.cuts_by_ply[ply];
        slot.cut_nodes += 1;
        if first {
            slot.first_move_cuts += 1;
        }
    }

    /// Checks the counter relationships that hold for any finished search.
    pub fn check(&self) -> Result<(), StatsViolation> {
        if self.cut_node_moves_examined < self.cut_nodes {
            return Err(StatsViolation::MovesBelowCuts);
        }
        if self.tt_hits > self.tt_probes || self.tt_cutoffs > self.tt_hits {
            return Err(StatsViolation::TableCounts);
        }
        let (cuts, firsts) = self
            .cuts_by_ply
            .iter()
            .fold((0, 0), |(c, f), p| (c + p.cut_nodes, f + p.first_move_cuts));
        if cuts != self.cut_nodes || firsts != self.first_move_cuts {
            return Err(StatsViolation::PlyBuckets);
        }
        Ok(())
    }

    /// True if no counter of `self` is below the matching one in `earlier`.
    pub fn dominates(&self, earlier: &SearchStats) -> bool {
        let d = self - earlier;
        d.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StatsViolation {
    #[error("cut-node moves examined is below the number of cut nodes")]
    MovesBelowCuts,
    #[error("table hit/cutoff counts exceed probes")]
    TableCounts,
    #[error("per-ply cut buckets do not sum to the totals")]
    PlyBuckets,
}

/// Counter difference; `None` if any counter went backwards.
impl<'a> Sub<&'a SearchStats> for &'a SearchStats {
    type Output = Option<SearchStats>;

    fn sub(self, rhs: &'a SearchStats) -> Option<SearchStats> {
        let mut cuts_by_ply = Vec::with_capacity(self.cuts_by_ply.len());
        for (i, now) in self.cuts_by_ply.iter().enumerate() {
            let before = rhs.cuts_by_ply.get(i).copied().unwrap_or_default();
            cuts_by_ply.push(PlyCuts {
                cut_nodes: now.cut_nodes.checked_sub(before.cut_nodes)?,
                first_move_cuts: now.first_move_cuts.checked_sub(before.first_move_cuts)?,
            });
        }
        if rhs.cuts_by_ply.len() > self.cuts_by_ply.len() {
            return None;
        }
        Some(SearchStats {
            leaf_evals: self.leaf_evals.checked_sub(rhs.leaf_evals)?,
            interior_nodes: self.interior_nodes.checked_sub(rhs.interior_nodes)?,
            tt_probes: self.tt_probes.checked_sub(rhs.tt_probes)?,
            tt_hits: self.tt_hits.checked_sub(rhs.tt_hits)?,
            tt_cutoffs: self.tt_cutoffs.checked_sub(rhs.tt_cutoffs)?,
            tt_stores: self.tt_stores.checked_sub(rhs.tt_stores)?,
            tt_conflicts: self.tt_conflicts.checked_sub(rhs.tt_conflicts)?,
            mt_calls: self.mt_calls.checked_sub(rhs.mt_calls)?,
            cut_nodes: self.cut_nodes.checked_sub(rhs.cut_nodes)?,
            cut_node_moves_examined: self
                .cut_node_moves_examined
                .checked_sub(rhs.cut_node_moves_examined)?,
            first_move_cuts: self.first_move_cuts.checked_sub(rhs.first_move_cuts)?,
            researches: self.researches.checked_sub(rhs.researches)?,
            cuts_by_ply,
        })
    }
}
