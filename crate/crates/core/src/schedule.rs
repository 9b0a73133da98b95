//! The odd modulus `m = 2t + 1`, the column-sum schedule `S(n)`, and the
//! m-standard partition in closed form.
//!
//! The m-standard partition has `t + 1` sets. For `1 <= i <= t` the rank-`n`
//! element of set `i` is `(t+1)(n-1) - floor(n/2) + i`; the last set holds the
//! multiples of `m`. Ranks are 1-based everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd modulus `m = 2t + 1` with `m >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct ModulusConfig {
    m: i64,
}

impl ModulusConfig {
    pub fn new(m: i64) -> Result<Self> {
        if m < 3 || m % 2 == 0 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Self { m })
    }

    /// Config from `t`, i.e. `m = 2t + 1`.
    pub fn from_t(t: i64) -> Result<Self> {
        Self::new(2 * t + 1)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn t(&self) -> i64 {
        (self.m - 1) / 2
    }

    /// Number of sets in a partition, `t + 1`.
    pub fn width(&self) -> usize {
        self.t() as usize + 1
    }

    pub fn schedule(&self) -> SumSchedule {
        SumSchedule { config: *self }
    }
}

impl TryFrom<i64> for ModulusConfig {
    type Error = Error;

    fn try_from(m: i64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<ModulusConfig> for i64 {
    fn from(config: ModulusConfig) -> i64 {
        config.m
    }
}

/// The required column sum `S(n)` for every rank `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumSchedule {
    config: ModulusConfig,
}

impl SumSchedule {
    pub fn config(&self) -> ModulusConfig {
        self.config
    }

    pub fn value(&self, n: usize) -> i64 {
        sum_schedule(self.config, n)
    }

    /// `S(n+1) - S(n)`: `(t+1)^2 + t` for even `n`, `(t+1)^2` for odd `n`.
    pub fn difference(&self, n: usize) -> i64 {
        let t = self.config.t();
        let base = (t + 1) * (t + 1);
        if n.is_multiple_of(2) {
            base + t
        } else {
            base
        }
    }
}

/// `S(n) = (t+1)^2 (n-1) + t floor((n-1)/2) + t(t+1)/2`.
///
/// Panics if `n == 0`.
pub fn sum_schedule(config: ModulusConfig, n: usize) -> i64 {
    assert!(n >= 1, "ranks are 1-based");
    let t = config.t();
    let n = n as i64;
    (t + 1) * (t + 1) * (n - 1) + t * ((n - 1) / 2) + t * (t + 1) / 2
}

/// The rank-indexed entries of one column; entry `i` (0-based here) belongs
/// to set `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub rank: usize,
    pub entries: Vec<i64>,
}

impl Column {
    pub fn sum(&self) -> i64 {
        self.entries.iter().sum()
    }
}

/// Rank-`n` column of the m-standard partition.
pub fn standard_column(config: ModulusConfig, n: usize) -> Column {
    assert!(n >= 1, "ranks are 1-based");
    Column {
        rank: n,
        entries: standard_entries(config, n).collect(),
    }
}

pub(crate) fn standard_entries(config: ModulusConfig, n: usize) -> impl Iterator<Item = i64> {
    let t = config.t();
    let n = n as i64;
    let base = (t + 1) * (n - 1) - n / 2;
    (1..=t)
        .map(move |i| base + i)
        .chain(std::iter::once(config.m() * (n - 1)))
}

/// 1-based index of the m-standard set that contains `x`: `i` when
/// `x mod m` is `i` or `t + i`, and `t + 1` for multiples of `m`.
pub fn residue_set_index(config: ModulusConfig, x: i64) -> usize {
    let r = x.rem_euclid(config.m());
    let t = config.t();
    if r == 0 {
        (t + 1) as usize
    } else if r <= t {
        r as usize
    } else {
        (r - t) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: i64) -> ModulusConfig {
        ModulusConfig::new(m).unwrap()
    }

    #[test]
    fn rejects_even_and_small_moduli() {
        assert_eq!(ModulusConfig::new(4), Err(Error::InvalidModulus(4)));
        assert_eq!(ModulusConfig::new(1), Err(Error::InvalidModulus(1)));
        assert_eq!(ModulusConfig::new(-5), Err(Error::InvalidModulus(-5)));
        let c = cfg(9);
        assert_eq!((c.m(), c.t(), c.width()), (9, 4, 5));
        assert_eq!(ModulusConfig::from_t(2).unwrap(), cfg(5));
    }

    #[test]
    fn schedule_reported_values() {
        let five = cfg(5);
        assert_eq!(
            (1..=5).map(|n| sum_schedule(five, n)).collect::<Vec<_>>(),
            vec![3, 12, 23, 32, 43]
        );
        let seven = cfg(7);
        assert_eq!(
            (1..=5).map(|n| sum_schedule(seven, n)).collect::<Vec<_>>(),
            vec![6, 22, 41, 57, 76]
        );
        assert_eq!(sum_schedule(five, 6), 52);
        assert_eq!(sum_schedule(five, 7), 63);
        assert_eq!(sum_schedule(seven, 6), 92);
    }

    #[test]
    fn first_sum_is_triangular() {
        for m in (3..=41).step_by(2) {
            let c = cfg(m);
            assert_eq!(sum_schedule(c, 1), c.t() * (c.t() + 1) / 2);
        }
    }

    #[test]
    fn m5_schedule_matches_three_set_form() {
        let c = cfg(5);
        for n in 1..100_000usize {
            let ni = n as i64;
            assert_eq!(sum_schedule(c, n), 11 * ni - 2 * (ni / 2) - 8);
            let alternating = if n % 2 == 0 { 11 } else { 9 };
            assert_eq!(sum_schedule(c, n + 1) - sum_schedule(c, n), alternating);
            // n - 1 = floor(n/2) + floor((n-1)/2)
            assert_eq!(ni - 1, ni / 2 + (ni - 1) / 2);
        }
    }

    #[test]
    fn general_difference_matches_schedule() {
        for m in [3, 5, 7, 9, 11, 101] {
            let s = cfg(m).schedule();
            for n in 1..2000 {
                assert_eq!(s.value(n + 1) - s.value(n), s.difference(n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn standard_columns_examples() {
        assert_eq!(standard_column(cfg(5), 1).entries, vec![1, 2, 0]);
        assert_eq!(standard_column(cfg(5), 3).entries, vec![6, 7, 10]);
        assert_eq!(standard_column(cfg(7), 1).entries, vec![1, 2, 3, 0]);
        for m in [5, 7, 9, 11] {
            let c = cfg(m);
            for n in 1..=100_000 {
                assert_eq!(standard_column(c, n).sum(), sum_schedule(c, n));
            }
        }
    }

    #[test]
    fn m5_standard_matches_three_set_form() {
        let c = cfg(5);
        for n in 1..1000usize {
            let ni = n as i64;
            let col = standard_column(c, n).entries;
            assert_eq!(
                col,
                vec![3 * ni - ni / 2 - 2, 3 * ni - ni / 2 - 1, 5 * ni - 5]
            );
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_set_index(cfg(5), 13), 1);
        assert_eq!(residue_set_index(cfg(5), 0), 3);
        assert_eq!(residue_set_index(cfg(5), 7), 2);
        assert_eq!(residue_set_index(cfg(7), 10), 3);
    }

    #[test]
    fn residue_agrees_with_membership_scan() {
        // m = 7 scan to horizon 100: every value's set is where it was placed.
        let c = cfg(7);
        let mut found = std::collections::HashMap::new();
        for n in 1..=100 {
            for (i, v) in standard_column(c, n).entries.into_iter().enumerate() {
                found.insert(v, i + 1);
            }
        }
        assert_eq!(found[&10], 3);
        for x in 0..300 {
            assert_eq!(found[&x], residue_set_index(c, x), "x = {x}");
        }
    }
}
