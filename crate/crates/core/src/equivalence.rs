//! Equivalence of partitions (identical columns beyond some rank `N`, with
//! the first `N` columns holding the same elements) decided up to a finite
//! horizon, and the closed-form exception signatures of the eight `m = 5`
//! classes.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::greedy_extend;
use crate::head::Head;
use crate::partition::{standard_partition, Partition};
use crate::schedule::standard_entries;

/// Columns of two partitions agree on every rank in `(n, verified_to]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub n: usize,
    pub verified_to: usize,
}

fn same_config(p: &Partition, q: &Partition) -> Result<()> {
    if p.config() != q.config() {
        return Err(Error::ConfigMismatch {
            expected: p.config().m(),
            found: q.config().m(),
        });
    }
    Ok(())
}

/// Smallest `N <= horizon / 2` such that `p` and `q` agree on ranks
/// `(N, horizon]` and hold the same elements in ranks `1..=N`.
pub fn equivalent_up_to(
    p: &Partition,
    q: &Partition,
    horizon: usize,
) -> Result<Option<EquivalenceWitness>> {
    same_config(p, q)?;
    p.require(horizon)?;
    q.require(horizon)?;
    let mut n = horizon;
    while n > 0 && p.column(n) == q.column(n) {
        n -= 1;
    }
    if n > horizon / 2 || p.prefix_multiset(n) != q.prefix_multiset(n) {
        return Ok(None);
    }
    Ok(Some(EquivalenceWitness {
        n,
        verified_to: horizon,
    }))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as root so results are order-stable
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Groups `partitions` into equivalence classes at `horizon`. Classes hold
/// input indices, ascending, and are ordered by their smallest member.
pub fn classify(partitions: &[Partition], horizon: usize) -> Result<Vec<Vec<usize>>> {
    if let Some(first) = partitions.first() {
        for p in partitions {
            same_config(first, p)?;
            p.require(horizon)?;
        }
    }
    // equivalent partitions agree on (horizon/2, horizon], so only
    // partitions with identical tails need a full comparison
    let mut buckets: HashMap<&[i64], Vec<usize>> = HashMap::new();
    for (idx, p) in partitions.iter().enumerate() {
        let w = p.width();
        let tail = &p.cells()[(horizon / 2) * w..horizon * w];
        buckets.entry(tail).or_default().push(idx);
    }
    let mut uf = UnionFind::new(partitions.len());
    for members in buckets.values() {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if uf.find(a) != uf.find(b)
                    && equivalent_up_to(&partitions[a], &partitions[b], horizon)?.is_some()
                {
                    uf.union(a, b);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for idx in 0..partitions.len() {
        let root = uf.find(idx);
        let c = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(idx);
    }
    Ok(classes)
}

/// One rank where a partition departs from the m-standard partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankDiff {
    pub rank: usize,
    pub standard: Vec<i64>,
    pub actual: Vec<i64>,
}

/// Every rank up to `horizon` where `p` differs from the m-standard
/// partition, ascending.
pub fn diff_vs_standard(p: &Partition, horizon: usize) -> Result<Vec<RankDiff>> {
    p.require(horizon)?;
    let mut out = Vec::new();
    for rank in 1..=horizon {
        let actual = p.column(rank);
        if !standard_entries(p.config(), rank).eq(actual.iter().copied()) {
            out.push(RankDiff {
                rank,
                standard: standard_entries(p.config(), rank).collect(),
                actual: actual.to_vec(),
            });
        }
    }
    Ok(out)
}

/// `scale * 2^k + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub scale: i64,
    pub offset: i64,
}

impl Affine {
    pub const fn new(scale: i64, offset: i64) -> Self {
        Self { scale, offset }
    }

    pub fn at(&self, k: u32) -> i64 {
        self.scale * (1i64 << k) + self.offset
    }
}

/// Ranks `position(k)` for `k >= min_k` where a class replaces the standard
/// column by a fixed variant column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionFamily {
    pub position: Affine,
    pub min_k: u32,
    pub standard: Vec<Affine>,
    pub variant: Vec<Affine>,
}

impl ExceptionFamily {
    /// `(k, rank)` for every family position up to `horizon`.
    pub fn positions(&self, horizon: usize) -> impl Iterator<Item = (u32, usize)> + '_ {
        (self.min_k..62)
            .map(|k| (k, self.position.at(k)))
            .take_while(move |&(_, r)| r <= horizon as i64)
            .map(|(k, r)| (k, r as usize))
    }

    pub fn standard_at(&self, k: u32) -> Vec<i64> {
        self.standard.iter().map(|a| a.at(k)).collect()
    }

    pub fn variant_at(&self, k: u32) -> Vec<i64> {
        self.variant.iter().map(|a| a.at(k)).collect()
    }
}

/// Where and how the members of one `m = 5` class depart from the standard
/// partition after rank `coincide_after`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSignature {
    pub class_id: usize,
    pub coincide_after: usize,
    pub families: Vec<ExceptionFamily>,
}

impl ClassSignature {
    /// Variant columns keyed by rank, up to `horizon`.
    fn variant_at_rank(&self, horizon: usize) -> HashMap<usize, Vec<i64>> {
        let mut out = HashMap::new();
        for fam in &self.families {
            for (k, rank) in fam.positions(horizon) {
                out.insert(rank, fam.variant_at(k));
            }
        }
        out
    }
}

fn triple(v: [(i64, i64); 3]) -> Vec<Affine> {
    v.iter().map(|&(s, o)| Affine::new(s, o)).collect()
}

fn family(
    position: (i64, i64),
    min_k: u32,
    standard: [(i64, i64); 3],
    variant: [(i64, i64); 3],
) -> ExceptionFamily {
    ExceptionFamily {
        position: Affine::new(position.0, position.1),
        min_k,
        standard: triple(standard),
        variant: triple(variant),
    }
}

/// The eight class signatures for `m = 5`, indexed `class_id - 1`.
///
/// Classes 3 and 6 are written with `j = k - 1`, so their positions are
/// `2 * 2^j + 1` and `2 * 2^j + 2` for `j >= 2`.
pub fn m5_signatures() -> Vec<ClassSignature> {
    const STD_10_1: [(i64, i64); 3] = [(25, 1), (25, 2), (50, 0)];
    const STD_12_1: [(i64, i64); 3] = [(30, 1), (30, 2), (60, 0)];
    const STD_12_2: [(i64, i64); 3] = [(30, 3), (30, 4), (60, 5)];
    const STD_2_1: [(i64, i64); 3] = [(5, 1), (5, 2), (10, 0)];
    const STD_2_2: [(i64, i64); 3] = [(5, 3), (5, 4), (10, 5)];

    let sig = |class_id, coincide_after, families| ClassSignature {
        class_id,
        coincide_after,
        families,
    };
    vec![
        sig(
            1,
            10,
            vec![
                family((10, 1), 0, STD_10_1, [(25, 0), (25, 2), (50, 1)]),
                family((12, 2), 0, STD_12_2, [(30, 3), (30, 5), (60, 4)]),
            ],
        ),
        sig(
            2,
            12,
            vec![
                family((10, 1), 0, STD_10_1, [(25, 0), (25, 1), (50, 2)]),
                family((12, 2), 0, STD_12_2, [(30, 4), (30, 5), (60, 3)]),
            ],
        ),
        sig(
            3,
            8,
            vec![
                family((2, 1), 2, STD_2_1, [(5, 0), (5, 1), (10, 2)]),
                family((2, 2), 2, STD_2_2, [(5, 4), (5, 5), (10, 3)]),
            ],
        ),
        sig(4, 6, vec![]),
        sig(
            5,
            10,
            vec![
                family((10, 1), 0, STD_10_1, [(25, 0), (25, 2), (50, 1)]),
                family((12, 1), 0, STD_12_1, [(30, 0), (30, 2), (60, 1)]),
                family((12, 2), 0, STD_12_2, [(30, 4), (30, 5), (60, 3)]),
            ],
        ),
        sig(
            6,
            8,
            vec![
                family((2, 1), 2, STD_2_1, [(5, 0), (5, 2), (10, 1)]),
                family((2, 2), 2, STD_2_2, [(5, 3), (5, 5), (10, 4)]),
            ],
        ),
        sig(
            7,
            10,
            vec![
                family((12, 1), 0, STD_12_1, [(30, 0), (30, 2), (60, 1)]),
                family((12, 2), 0, STD_12_2, [(30, 3), (30, 5), (60, 4)]),
            ],
        ),
        sig(
            8,
            12,
            vec![
                family((12, 1), 0, STD_12_1, [(30, 0), (30, 1), (60, 2)]),
                family((12, 2), 0, STD_12_2, [(30, 4), (30, 5), (60, 3)]),
            ],
        ),
    ]
}

/// First rank in `(coincide_after, horizon]` where `p` departs from what
/// `sig` prescribes, if any. Columns are compared entry by entry.
pub fn signature_mismatch(
    p: &Partition,
    sig: &ClassSignature,
    horizon: usize,
) -> Result<Option<usize>> {
    if p.config().m() != 5 {
        return Err(Error::ConfigMismatch {
            expected: 5,
            found: p.config().m(),
        });
    }
    p.require(horizon)?;
    let variants = sig.variant_at_rank(horizon);
    for rank in sig.coincide_after + 1..=horizon {
        let actual = p.column(rank);
        let ok = match variants.get(&rank) {
            Some(v) => v.as_slice() == actual,
            None => standard_entries(p.config(), rank).eq(actual.iter().copied()),
        };
        if !ok {
            return Ok(Some(rank));
        }
    }
    Ok(None)
}

pub fn check_signature(p: &Partition, sig: &ClassSignature, horizon: usize) -> Result<bool> {
    Ok(signature_mismatch(p, sig, horizon)?.is_none())
}

/// Ids of the heads whose greedy extension is equivalent to the m-standard
/// partition at `horizon`. Heads whose extension fails are not equivalent.
pub fn standard_equivalent_heads(heads: &[Head], horizon: usize) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    let mut standard: Option<Partition> = None;
    for (pos, head) in heads.iter().enumerate() {
        let Ok(p) = greedy_extend(&head.to_partition(), horizon) else {
            continue;
        };
        let std = standard.get_or_insert_with(|| standard_partition(head.config, horizon));
        if equivalent_up_to(&p, std, horizon)?.is_some() {
            out.insert(head.id.unwrap_or(pos + 1));
        }
    }
    Ok(out)
}
