//! Exhaustive generation of heads: every way to fill the first `C` columns
//! with pairwise-disjoint sets of `t + 1` non-negative integers whose sums
//! follow the schedule.
//!
//! Heads are produced in depth-first order with each column written as an
//! increasing tuple and columns chosen in lexicographic order. For `m = 5`
//! this is the familiar numbering 1..36: six groups fixed by ranks 3 and 4,
//! six rank-5 choices in each.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::head::{DedupKey, Head};
use crate::partition::standard_partition;
use crate::schedule::{sum_schedule, ModulusConfig};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_HEAD_COLUMNS: usize = 5;

/// All strictly increasing `size`-tuples of integers `>= min_value`, avoiding
/// `excluded`, that sum to `total`, in lexicographic order.
pub fn sum_decompositions(
    total: i64,
    size: usize,
    min_value: i64,
    excluded: &HashSet<i64>,
) -> Vec<Vec<i64>> {
    let mut search = Search::unbounded();
    let mut out = Vec::new();
    search
        .decompose(
            total,
            size,
            min_value.max(0),
            excluded,
            &mut Vec::new(),
            &mut out,
        )
        .expect("unbounded search cannot exhaust its budget");
    out
}

struct Search {
    budget: u64,
    nodes: u64,
}

impl Search {
    fn unbounded() -> Self {
        Self {
            budget: u64::MAX,
            nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::Resource {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn decompose(
        &mut self,
        remaining: i64,
        size: usize,
        from: i64,
        excluded: &HashSet<i64>,
        acc: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        self.tick()?;
        if size == 0 {
            if remaining == 0 {
                out.push(acc.clone());
            }
            return Ok(());
        }
        if size == 1 {
            if remaining >= from && !excluded.contains(&remaining) {
                acc.push(remaining);
                out.push(acc.clone());
                acc.pop();
            }
            return Ok(());
        }
        let k = size as i64;
        let mut x = from;
        // smallest completion x + (x+1) + ... + (x+k-1) must fit
        while k * x + k * (k - 1) / 2 <= remaining {
            if !excluded.contains(&x) {
                acc.push(x);
                self.decompose(remaining - x, size - 1, x + 1, excluded, acc, out)?;
                acc.pop();
            }
            x += 1;
        }
        Ok(())
    }
}

/// Every head of `column_count` columns for `config`, numbered from 1 in
/// enumeration order.
pub fn enumerate_heads_general(
    config: ModulusConfig,
    column_count: usize,
    node_budget: u64,
) -> Result<Vec<Head>> {
    let mut search = Search {
        budget: node_budget,
        nodes: 0,
    };
    let mut heads = Vec::new();
    let mut used = HashSet::new();
    let mut columns = Vec::with_capacity(column_count);
    fill(
        config,
        column_count,
        &mut search,
        &mut used,
        &mut columns,
        &mut heads,
    )?;
    for (idx, head) in heads.iter_mut().enumerate() {
        head.id = Some(idx + 1);
    }
    Ok(heads)
}

fn fill(
    config: ModulusConfig,
    column_count: usize,
    search: &mut Search,
    used: &mut HashSet<i64>,
    columns: &mut Vec<Vec<i64>>,
    heads: &mut Vec<Head>,
) -> Result<()> {
    let rank = columns.len() + 1;
    if rank > column_count {
        heads.push(Head {
            config,
            columns: columns.clone(),
            id: None,
        });
        return Ok(());
    }
    let mut choices = Vec::new();
    search.decompose(
        sum_schedule(config, rank),
        config.width(),
        0,
        used,
        &mut Vec::new(),
        &mut choices,
    )?;
    for choice in choices {
        used.extend(choice.iter().copied());
        columns.push(choice);
        fill(config, column_count, search, used, columns, heads)?;
        let choice = columns.pop().expect("pushed above");
        for v in &choice {
            used.remove(v);
        }
    }
    Ok(())
}

/// The 36 five-column heads for `m = 5`.
pub fn enumerate_heads(config: ModulusConfig) -> Result<Vec<Head>> {
    if config.m() != 5 {
        return Err(Error::ConfigMismatch {
            expected: 5,
            found: config.m(),
        });
    }
    enumerate_heads_general(config, DEFAULT_HEAD_COLUMNS, DEFAULT_NODE_BUDGET)
}

/// `sum over heads of ((t+1)!)^C`: every head yields one statement per
/// ordering of each of its columns.
pub fn count_statements(heads: &[Head]) -> u128 {
    heads
        .iter()
        .map(|h| {
            let per_column: u128 = (1..=h.config.width() as u128).product();
            per_column
                .checked_pow(h.len() as u32)
                .expect("statement count overflows u128")
        })
        .try_fold(0u128, |acc, n| acc.checked_add(n))
        .expect("statement count overflows u128")
}

/// Heads sharing one [`DedupKey`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DedupGroup {
    /// Lowest-numbered head of the group.
    pub representative: Head,
    /// Ids of the other heads in the group, ascending.
    pub duplicates: Vec<usize>,
    /// The group's elements are those of the m-standard head.
    pub standard: bool,
}

impl DedupGroup {
    pub fn ids(&self) -> Vec<usize> {
        self.representative
            .id
            .into_iter()
            .chain(self.duplicates.iter().copied())
            .collect()
    }
}

/// Groups heads by the union of their elements, in order of first
/// appearance. Heads without an id are numbered by position.
pub fn dedup_heads(heads: &[Head]) -> Vec<DedupGroup> {
    let mut index: HashMap<DedupKey, usize> = HashMap::new();
    let mut groups: Vec<DedupGroup> = Vec::new();
    for (pos, head) in heads.iter().enumerate() {
        let id = head.id.unwrap_or(pos + 1);
        let key = head.dedup_key();
        match index.get(&key) {
            Some(&g) => groups[g].duplicates.push(id),
            None => {
                let standard = key == standard_key(head.config, head.len());
                index.insert(key, groups.len());
                let mut representative = head.clone();
                representative.id = Some(id);
                groups.push(DedupGroup {
                    representative,
                    duplicates: Vec::new(),
                    standard,
                });
            }
        }
    }
    groups
}

fn standard_key(config: ModulusConfig, columns: usize) -> DedupKey {
    let mut all: Vec<i64> = standard_partition(config, columns)
        .columns()
        .flatten()
        .copied()
        .collect();
    all.sort_unstable();
    DedupKey(all)
}
