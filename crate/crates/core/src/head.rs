//! Heads: the first few columns of a statement, before greedy extension.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::schedule::{sum_schedule, ModulusConfig};

/// A validated head: pairwise-disjoint columns of `t + 1` non-negative
/// integers, column `c` summing to `S(c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Head {
    pub config: ModulusConfig,
    pub columns: Vec<Vec<i64>>,
    /// Position in the enumeration order, 1-based.
    pub id: Option<usize>,
}

/// Sorted union of every head element. Heads with equal keys leave the same
/// set of unused integers, so their greedy tails coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DedupKey(pub Vec<i64>);

impl Head {
    pub fn new(config: ModulusConfig, columns: Vec<Vec<i64>>, id: Option<usize>) -> Result<Self> {
        let head = Self {
            config,
            columns,
            id,
        };
        head.validate()?;
        Ok(head)
    }

    pub fn validate(&self) -> Result<()> {
        let width = self.config.width();
        let mut seen = HashSet::new();
        for (idx, col) in self.columns.iter().enumerate() {
            let rank = idx + 1;
            if col.len() != width {
                return Err(Error::Invariant(format!(
                    "rank {rank} has {} entries, expected {width}",
                    col.len()
                )));
            }
            for &v in col {
                if v < 0 {
                    return Err(Error::Invariant(format!(
                        "negative element {v} at rank {rank}"
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::Invariant(format!(
                        "duplicate element {v} at rank {rank}"
                    )));
                }
            }
            let sum: i64 = col.iter().sum();
            let expected = sum_schedule(self.config, rank);
            if sum != expected {
                return Err(Error::Invariant(format!(
                    "rank {rank} sums to {sum}, expected S({rank}) = {expected}"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn dedup_key(&self) -> DedupKey {
        let mut all: Vec<i64> = self.columns.iter().flatten().copied().collect();
        all.sort_unstable();
        DedupKey(all)
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_cells(self.config, self.columns.concat())
    }
}

/// A head with unknown slots (`None`), as read from a puzzle statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialHead {
    pub config: ModulusConfig,
    pub columns: Vec<Vec<Option<i64>>>,
}

impl PartialHead {
    pub fn missing(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, col) in self.columns.iter().enumerate() {
            for (s, v) in col.iter().enumerate() {
                if v.is_none() {
                    out.push((s + 1, r + 1));
                }
            }
        }
        out
    }

    pub fn from_head(head: &Head) -> Self {
        Self {
            config: head.config,
            columns: head
                .columns
                .iter()
                .map(|c| c.iter().copied().map(Some).collect())
                .collect(),
        }
    }
}
