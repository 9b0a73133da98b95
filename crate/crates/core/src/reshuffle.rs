//! Element exchanges between slots, and the two infinite families of
//! sum-preserving pair exchanges on the `m = 5` standard partition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{Partition, Slot};

/// Two distinct slots whose elements trade places.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwapSpec {
    pub first: Slot,
    pub second: Slot,
}

impl SwapSpec {
    pub fn new(first: Slot, second: Slot) -> Result<Self> {
        if first == second {
            return Err(Error::Invariant(format!(
                "cannot swap slot (set {}, rank {}) with itself",
                first.set, first.rank
            )));
        }
        Ok(Self { first, second })
    }
}

/// A swapped partition together with the ranks whose sums are now off
/// schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapOutcome {
    pub partition: Partition,
    pub broken_ranks: Vec<usize>,
}

pub fn swap_pair(p: &Partition, spec: SwapSpec) -> Result<SwapOutcome> {
    let mut partition = p.clone();
    partition.swap_cells(spec.first, spec.second)?;
    let broken_ranks = partition.broken_ranks();
    Ok(SwapOutcome {
        partition,
        broken_ranks,
    })
}

/// Swaps the slots currently holding values `a` and `b`.
pub fn swap_values(p: &Partition, a: i64, b: i64) -> Result<SwapOutcome> {
    let find = |v: i64| {
        p.locate(v)
            .ok_or_else(|| Error::Invariant(format!("value {v} is not stored")))
    };
    swap_pair(p, SwapSpec::new(find(a)?, find(b)?)?)
}

fn require_m5(p: &Partition) -> Result<()> {
    if p.config().m() != 5 {
        return Err(Error::ConfigMismatch {
            expected: 5,
            found: p.config().m(),
        });
    }
    Ok(())
}

/// Slot pairs exchanged by the first family at index `k >= 1`: rank `4k`
/// of sets 1 and 3 against rank `6k - 1` of sets 1 and 2.
pub fn family_i_slots(k: usize) -> [SwapSpec; 2] {
    assert!(k >= 1);
    let (a, b) = (4 * k, 6 * k - 1);
    [
        SwapSpec {
            first: Slot::new(1, a),
            second: Slot::new(1, b),
        },
        SwapSpec {
            first: Slot::new(3, a),
            second: Slot::new(2, b),
        },
    ]
}

/// Slot pairs exchanged by the second family at index `k >= 0`: rank
/// `4k + 3` of sets 2 and 3 against rank `6k + 4` of sets 1 and 2.
pub fn family_ii_slots(k: usize) -> [SwapSpec; 2] {
    let (a, b) = (4 * k + 3, 6 * k + 4);
    [
        SwapSpec {
            first: Slot::new(2, a),
            second: Slot::new(1, b),
        },
        SwapSpec {
            first: Slot::new(3, a),
            second: Slot::new(2, b),
        },
    ]
}

fn apply_family(
    p: &Partition,
    ks: impl Iterator<Item = usize>,
    slots: fn(usize) -> [SwapSpec; 2],
) -> Result<Partition> {
    require_m5(p)?;
    let mut out = p.clone();
    for k in ks {
        for spec in slots(k) {
            out.swap_cells(spec.first, spec.second)?;
        }
    }
    Ok(out)
}

/// Applies the first family for `k = 1..=k_max`. Needs `6 k_max - 1`
/// stored ranks.
pub fn reshuffle_family_i(p: &Partition, k_max: usize) -> Result<Partition> {
    if k_max > 0 {
        p.require(6 * k_max - 1)?;
    }
    apply_family(p, 1..=k_max, family_i_slots)
}

/// Applies the second family for `k = 0..k_max` (`k_max` exchanges). Needs
/// `6 k_max - 2` stored ranks.
pub fn reshuffle_family_ii(p: &Partition, k_max: usize) -> Result<Partition> {
    if k_max > 0 {
        p.require(6 * (k_max - 1) + 4)?;
    }
    apply_family(p, 0..k_max, family_ii_slots)
}

/// Every rank in `1..=horizon` sums to the schedule.
pub fn verify_sum_pattern(p: &Partition, horizon: usize) -> Result<bool> {
    p.require(horizon)?;
    Ok((1..=horizon).all(|r| p.column_sum(r) == crate::schedule::sum_schedule(p.config(), r)))
}
