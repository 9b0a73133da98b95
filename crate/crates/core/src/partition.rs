//! Column-complete partitions: `t + 1` rank-indexed sequences that all store
//! the same number of ranks.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{standard_entries, sum_schedule, Column, ModulusConfig};

/// A position inside a partition: 1-based set index and 1-based rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub set: usize,
    pub rank: usize,
}

impl Slot {
    pub fn new(set: usize, rank: usize) -> Self {
        Self { set, rank }
    }
}

/// A prefix of a partition of the non-negative integers into `t + 1` sets,
/// stored rank by rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    config: ModulusConfig,
    // row-major: rank r occupies cells[(r-1)*width .. r*width]
    cells: Vec<i64>,
}

impl Partition {
    /// Builds a partition from explicit columns. Checks widths,
    /// non-negativity and distinctness; sum conformance is not required.
    pub fn new(config: ModulusConfig, columns: Vec<Vec<i64>>) -> Result<Self> {
        let width = config.width();
        let mut cells = Vec::with_capacity(columns.len() * width);
        for (idx, col) in columns.into_iter().enumerate() {
            if col.len() != width {
                return Err(Error::Invariant(format!(
                    "rank {} has {} entries, expected {}",
                    idx + 1,
                    col.len(),
                    width
                )));
            }
            cells.extend(col);
        }
        let p = Self { config, cells };
        p.check_structure()?;
        Ok(p)
    }

    pub(crate) fn from_cells(config: ModulusConfig, cells: Vec<i64>) -> Self {
        debug_assert_eq!(cells.len() % config.width(), 0);
        Self { config, cells }
    }

    fn check_structure(&self) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.cells.len());
        for (idx, &v) in self.cells.iter().enumerate() {
            let slot = self.slot_of(idx);
            if v < 0 {
                return Err(Error::Invariant(format!(
                    "negative element {v} in set {} at rank {}",
                    slot.set, slot.rank
                )));
            }
            if !seen.insert(v) {
                return Err(Error::Invariant(format!(
                    "duplicate element {v} (set {} at rank {})",
                    slot.set, slot.rank
                )));
            }
        }
        Ok(())
    }

    fn slot_of(&self, idx: usize) -> Slot {
        let w = self.width();
        Slot::new(idx % w + 1, idx / w + 1)
    }

    fn index_of(&self, slot: Slot) -> Result<usize> {
        if slot.rank == 0 || slot.set == 0 || slot.set > self.width() {
            return Err(Error::Invariant(format!(
                "slot (set {}, rank {}) is not a valid position",
                slot.set, slot.rank
            )));
        }
        self.require(slot.rank)?;
        Ok((slot.rank - 1) * self.width() + slot.set - 1)
    }

    pub fn config(&self) -> ModulusConfig {
        self.config
    }

    /// Number of sets.
    pub fn width(&self) -> usize {
        self.config.width()
    }

    /// Number of stored ranks.
    pub fn horizon(&self) -> usize {
        self.cells.len() / self.width()
    }

    /// Errors unless at least `horizon` ranks are stored.
    pub fn require(&self, horizon: usize) -> Result<()> {
        if horizon > self.horizon() {
            Err(Error::Horizon {
                requested: horizon,
                stored: self.horizon(),
            })
        } else {
            Ok(())
        }
    }

    /// Entries of the rank-`rank` column. Panics outside `1..=horizon`.
    pub fn column(&self, rank: usize) -> &[i64] {
        assert!(
            rank >= 1 && rank <= self.horizon(),
            "rank {rank} outside 1..={}",
            self.horizon()
        );
        let w = self.width();
        &self.cells[(rank - 1) * w..rank * w]
    }

    pub fn column_owned(&self, rank: usize) -> Column {
        Column {
            rank,
            entries: self.column(rank).to_vec(),
        }
    }

    /// All stored columns in rank order.
    pub fn columns(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.cells.chunks_exact(self.width())
    }

    pub fn get(&self, slot: Slot) -> Result<i64> {
        Ok(self.cells[self.index_of(slot)?])
    }

    pub(crate) fn swap_cells(&mut self, a: Slot, b: Slot) -> Result<()> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        self.cells.swap(ia, ib);
        Ok(())
    }

    /// Elements of set `set` (1-based) in rank order.
    pub fn set_elements(&self, set: usize) -> Vec<i64> {
        assert!(set >= 1 && set <= self.width());
        self.columns().map(|c| c[set - 1]).collect()
    }

    /// First slot holding `value`, if stored.
    pub fn locate(&self, value: i64) -> Option<Slot> {
        self.cells
            .iter()
            .position(|&v| v == value)
            .map(|idx| self.slot_of(idx))
    }

    pub fn column_sum(&self, rank: usize) -> i64 {
        self.column(rank).iter().sum()
    }

    /// Ranks whose column sum differs from `S(rank)`.
    pub fn broken_ranks(&self) -> Vec<usize> {
        (1..=self.horizon())
            .filter(|&r| self.column_sum(r) != sum_schedule(self.config, r))
            .collect()
    }

    pub fn is_sum_conforming(&self) -> bool {
        self.broken_ranks().is_empty()
    }

    /// Minimum over sets of each set's last stored element; every smaller
    /// non-negative integer must be stored for a prefix-complete partition.
    pub fn prefix_bound(&self) -> i64 {
        if self.horizon() == 0 {
            return 0;
        }
        self.column(self.horizon())
            .iter()
            .copied()
            .min()
            .unwrap_or(0)
    }

    /// Every integer below [`prefix_bound`](Self::prefix_bound) is stored
    /// exactly once.
    pub fn is_prefix_complete(&self) -> bool {
        let bound = self.prefix_bound();
        let mut hit = vec![false; bound.max(0) as usize];
        for &v in &self.cells {
            if v < bound {
                if hit[v as usize] {
                    return false;
                }
                hit[v as usize] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Every violated partition invariant, described in words.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.check_structure() {
            out.push(e.to_string());
        }
        if !self.is_prefix_complete() {
            out.push(format!(
                "prefix completeness fails below {}",
                self.prefix_bound()
            ));
        }
        let broken = self.broken_ranks();
        if !broken.is_empty() {
            let shown: Vec<_> = broken.iter().take(8).map(|r| r.to_string()).collect();
            out.push(format!(
                "column sums off schedule at ranks {}",
                shown.join(", ")
            ));
        }
        out
    }

    /// Sorted multiset of the elements in ranks `1..=ranks`.
    pub fn prefix_multiset(&self, ranks: usize) -> Vec<i64> {
        let mut v = self.cells[..ranks * self.width()].to_vec();
        v.sort_unstable();
        v
    }

    /// The first `horizon` ranks.
    pub fn truncated(&self, horizon: usize) -> Result<Partition> {
        self.require(horizon)?;
        Ok(Self::from_cells(
            self.config,
            self.cells[..horizon * self.width()].to_vec(),
        ))
    }

    pub(crate) fn cells(&self) -> &[i64] {
        &self.cells
    }
}

/// The m-standard partition to `horizon` ranks.
pub fn standard_partition(config: ModulusConfig, horizon: usize) -> Partition {
    let mut cells = Vec::with_capacity(horizon * config.width());
    for n in 1..=horizon {
        cells.extend(standard_entries(config, n));
    }
    Partition::from_cells(config, cells)
}
