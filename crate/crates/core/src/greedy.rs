//! Greedy extension: at each new rank the `t` smallest unused integers go,
//! in increasing order, to sets `1..=t`, and the last set receives whatever
//! makes the column sum to `S(n)`.

use crate::error::{Error, Result};
use crate::head::{Head, PartialHead};
use crate::partition::Partition;
use crate::schedule::{sum_schedule, ModulusConfig};

/// Growable bitset of placed integers with a low-water mark below which
/// every integer is used.
#[derive(Debug, Clone, Default)]
struct UsedSet {
    words: Vec<u64>,
    low: i64,
}

impl UsedSet {
    fn contains(&self, x: i64) -> bool {
        let (w, b) = (x as usize / 64, x as usize % 64);
        self.words.get(w).is_some_and(|word| word >> b & 1 == 1)
    }

    fn insert(&mut self, x: i64) {
        let (w, b) = (x as usize / 64, x as usize % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
        while self.contains(self.low) {
            self.low += 1;
        }
    }

    /// The `count` smallest integers not in the set, ascending.
    fn smallest_unused(&self, count: usize) -> Vec<i64> {
        let mut out = Vec::with_capacity(count);
        let mut x = self.low;
        while out.len() < count {
            if !self.contains(x) {
                out.push(x);
            }
            x += 1;
        }
        out
    }
}

/// Partial partition under greedy construction.
#[derive(Debug, Clone)]
pub struct Builder {
    config: ModulusConfig,
    cells: Vec<i64>,
    used: UsedSet,
}

impl Builder {
    /// Starts from a sum-conforming head.
    pub fn from_head(head: &Partition) -> Result<Self> {
        if let Some(&rank) = head.broken_ranks().first() {
            return Err(Error::Invariant(format!(
                "head column {rank} sums to {}, expected S({rank}) = {}",
                head.column_sum(rank),
                sum_schedule(head.config(), rank)
            )));
        }
        let mut used = UsedSet::default();
        for &v in head.cells() {
            used.insert(v);
        }
        Ok(Self {
            config: head.config(),
            cells: head.cells().to_vec(),
            used,
        })
    }

    /// Rank of the next column to fill.
    pub fn next_rank(&self) -> usize {
        self.cells.len() / self.config.width() + 1
    }

    pub fn is_used(&self, x: i64) -> bool {
        x >= 0 && self.used.contains(x)
    }

    /// Appends one greedy column. On error the builder is unchanged.
    pub fn extend_one(&mut self) -> Result<&[i64]> {
        let rank = self.next_rank();
        let t = self.config.t() as usize;
        let mut column = self.used.smallest_unused(t);
        let last = sum_schedule(self.config, rank) - column.iter().sum::<i64>();
        if last < 0 {
            return Err(Error::Negative { rank, value: last });
        }
        if self.used.contains(last) || column.contains(&last) {
            return Err(Error::Collision { rank, value: last });
        }
        column.push(last);
        for &v in &column {
            self.used.insert(v);
        }
        let start = self.cells.len();
        self.cells.extend(column);
        Ok(&self.cells[start..])
    }

    pub fn partial(&self) -> Partition {
        Partition::from_cells(self.config, self.cells.clone())
    }

    pub fn into_partition(self) -> Partition {
        Partition::from_cells(self.config, self.cells)
    }
}

/// Extends `head` greedily until `horizon` ranks are stored. A head longer
/// than `horizon` is truncated.
pub fn greedy_extend(head: &Partition, horizon: usize) -> Result<Partition> {
    if head.horizon() >= horizon {
        return head.truncated(horizon);
    }
    let mut builder = Builder::from_head(head)?;
    builder
        .cells
        .reserve((horizon - head.horizon()) * head.width());
    while builder.next_rank() <= horizon {
        builder.extend_one()?;
    }
    Ok(builder.into_partition())
}

/// Fills the single missing entry of `partial` so its column sums to the
/// schedule. Returns the completed head and the forced value.
pub fn complete_head(partial: &PartialHead) -> Result<(Head, i64)> {
    let missing = partial.missing();
    let &[(set, rank)] = missing.as_slice() else {
        return Err(Error::Invariant(format!(
            "expected exactly one missing entry, found {}",
            missing.len()
        )));
    };
    let known: i64 = partial.columns[rank - 1].iter().flatten().sum();
    let value = sum_schedule(partial.config, rank) - known;
    if value < 0 {
        return Err(Error::Negative { rank, value });
    }
    if partial
        .columns
        .iter()
        .flatten()
        .flatten()
        .any(|&v| v == value)
    {
        return Err(Error::Collision { rank, value });
    }
    let columns = partial
        .columns
        .iter()
        .enumerate()
        .map(|(r, col)| {
            col.iter()
                .enumerate()
                .map(|(s, v)| match v {
                    Some(v) => *v,
                    None => {
                        debug_assert_eq!((s + 1, r + 1), (set, rank));
                        value
                    }
                })
                .collect()
        })
        .collect();
    Ok((Head::new(partial.config, columns, None)?, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::standard_partition;

    fn cfg(m: i64) -> ModulusConfig {
        ModulusConfig::new(m).unwrap()
    }

    fn puzzle_partial() -> PartialHead {
        PartialHead {
            config: cfg(5),
            columns: vec![
                vec![Some(0), Some(1), Some(2)],
                vec![Some(3), Some(4), Some(5)],
                vec![Some(6), Some(7), Some(10)],
                vec![Some(8), Some(11), Some(13)],
                vec![Some(9), Some(14), None],
            ],
        }
    }

    fn problem_seven_partial() -> PartialHead {
        let sets = [
            [1, 6, 9, 21, 28],
            [0, 5, 8, 14, 15],
            [3, 7, 13, 10, 17],
            [2, 4, 11, 12, -1],
        ];
        PartialHead {
            config: cfg(7),
            columns: (0..5)
                .map(|r| sets.iter().map(|s| (s[r] >= 0).then_some(s[r])).collect())
                .collect(),
        }
    }

    #[test]
    fn used_set_tracks_low_water() {
        let mut u = UsedSet::default();
        for x in [0, 1, 2, 5, 7, 130] {
            u.insert(x);
        }
        assert_eq!(u.low, 3);
        assert_eq!(u.smallest_unused(4), vec![3, 4, 6, 8]);
        assert!(u.contains(130) && !u.contains(129) && !u.contains(10_000));
    }

    #[test]
    fn completes_puzzle_head() {
        let (head, value) = complete_head(&puzzle_partial()).unwrap();
        assert_eq!(value, 20);
        assert_eq!(head.columns[4], vec![9, 14, 20]);
    }

    #[test]
    fn completes_problem_seven_head() {
        let (head, value) = complete_head(&problem_seven_partial()).unwrap();
        assert_eq!(value, 16);
        assert_eq!(head.columns[4], vec![28, 15, 17, 16]);
    }

    #[test]
    fn completes_standard_first_entry() {
        let mut partial = PartialHead::from_head(
            &Head::new(cfg(5), vec![vec![1, 2, 0], vec![3, 4, 5]], None).unwrap(),
        );
        partial.columns[0][2] = None;
        assert_eq!(complete_head(&partial).unwrap().1, 0);
    }

    #[test]
    fn complete_head_errors() {
        let mut two_missing = puzzle_partial();
        two_missing.columns[0][0] = None;
        assert!(matches!(
            complete_head(&two_missing),
            Err(Error::Invariant(_))
        ));

        // 43 - 13 - 19 = 11, already placed at rank 4
        let mut collide = puzzle_partial();
        collide.columns[4] = vec![None, Some(13), Some(19)];
        assert_eq!(
            complete_head(&collide),
            Err(Error::Collision { rank: 5, value: 11 })
        );

        let mut negative = puzzle_partial();
        negative.columns[4] = vec![Some(30), Some(14), None];
        assert_eq!(
            complete_head(&negative),
            Err(Error::Negative { rank: 5, value: -1 })
        );
    }

    #[test]
    fn extends_puzzle_statement() {
        let (head, _) = complete_head(&puzzle_partial()).unwrap();
        let p = greedy_extend(&head.to_partition(), 7).unwrap();
        assert_eq!(p.column(6), &[12, 15, 25]);
        assert_eq!(p.column(7), &[16, 17, 30]);
    }

    #[test]
    fn extend_one_from_standard_rank_one() {
        let mut b = Builder::from_head(&standard_partition(cfg(5), 1)).unwrap();
        assert_eq!(b.next_rank(), 2);
        assert_eq!(b.extend_one().unwrap(), &[3, 4, 5]);
        assert_eq!(b.next_rank(), 3);
        assert!(b.is_used(5) && !b.is_used(6));
    }

    #[test]
    fn extends_problem_seven_statement() {
        let (head, _) = complete_head(&problem_seven_partial()).unwrap();
        let p = greedy_extend(&head.to_partition(), 7).unwrap();
        assert_eq!(p.column(6), &[18, 19, 20, 35]);
        assert_eq!(p.column(7), &[22, 23, 24, 42]);
        let full = greedy_extend(&head.to_partition(), 500).unwrap();
        let std = standard_partition(cfg(7), 500);
        for r in 6..=500 {
            assert_eq!(full.column(r), std.column(r), "rank {r}");
        }
    }

    #[test]
    fn standard_head_reproduces_standard() {
        for m in [3, 5, 7, 9, 11, 13] {
            let c = cfg(m);
            let std = standard_partition(c, 10_000);
            for head_len in [1, 5] {
                let p = greedy_extend(&std.truncated(head_len).unwrap(), 10_000).unwrap();
                assert_eq!(p, std, "m={m}");
            }
        }
    }

    #[test]
    fn collision_is_reported_with_rank_and_state_kept() {
        // An m = 7 head whose rank-7 column would need 111 - 22 - 24 - 25 = 40,
        // which rank 6 already took.
        let head = Partition::new(
            cfg(7),
            vec![
                vec![0, 1, 2, 3],
                vec![4, 5, 6, 7],
                vec![8, 9, 10, 14],
                vec![11, 12, 13, 21],
                vec![15, 18, 20, 23],
            ],
        )
        .unwrap();
        let mut b = Builder::from_head(&head).unwrap();
        assert_eq!(b.extend_one().unwrap(), &[16, 17, 19, 40]);
        let before = b.partial();
        assert_eq!(b.extend_one(), Err(Error::Collision { rank: 7, value: 40 }));
        assert_eq!(b.partial(), before);
        assert_eq!(b.next_rank(), 7);
        assert_eq!(
            greedy_extend(&head, 100),
            Err(Error::Collision { rank: 7, value: 40 })
        );
    }

    #[test]
    fn rejects_non_conforming_head() {
        let head = Partition::new(cfg(5), vec![vec![1, 2, 3]]).unwrap();
        assert!(matches!(greedy_extend(&head, 4), Err(Error::Invariant(_))));
    }
}
