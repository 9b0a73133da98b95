//! Differential checks against deliberately naive re-derivations.

use std::collections::HashSet;

use rankpart::enumeration::{enumerate_heads, enumerate_heads_general, sum_decompositions};
use rankpart::{greedy_extend, sum_schedule, ModulusConfig};

fn triple_loop(total: i64, min: i64, excluded: &HashSet<i64>) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in min..=total {
        for b in a + 1..=total {
            for c in b + 1..=total {
                if a + b + c == total && ![a, b, c].iter().any(|v| excluded.contains(v)) {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

#[test]
fn decompositions_match_triple_loop() {
    let none = HashSet::new();
    let some: HashSet<i64> = [0, 3, 7, 11, 12, 20, 31].into_iter().collect();
    for total in 0..=120 {
        for min in [0, 1, 5, 9] {
            for excluded in [&none, &some] {
                assert_eq!(
                    sum_decompositions(total, 3, min, excluded),
                    triple_loop(total, min, excluded),
                    "total {total}, min {min}"
                );
            }
        }
    }
}

/// Greedy extension with "smallest unused" recomputed by scanning from zero.
fn linear_scan_extend(config: ModulusConfig, head: &[Vec<i64>], horizon: usize) -> Vec<Vec<i64>> {
    let t = config.t() as usize;
    let mut columns: Vec<Vec<i64>> = head.to_vec();
    while columns.len() < horizon {
        let mut used = vec![false; 64 * horizon];
        for &v in columns.iter().flatten() {
            used[v as usize] = true;
        }
        let next: Vec<i64> = (0..used.len())
            .filter(|&x| !used[x])
            .take(t)
            .map(|x| x as i64)
            .collect();
        let n = columns.len() + 1;
        let last = sum_schedule(config, n) - next.iter().sum::<i64>();
        assert!(last >= 0 && !used[last as usize] && !next.contains(&last));
        let mut col = next;
        col.push(last);
        columns.push(col);
    }
    columns
}

#[test]
fn greedy_matches_linear_scan_for_all_heads() {
    let config = ModulusConfig::new(5).unwrap();
    for head in enumerate_heads(config).unwrap() {
        let fast = greedy_extend(&head.to_partition(), 512).unwrap();
        let slow = linear_scan_extend(config, &head.columns, 512);
        for (r, col) in slow.iter().enumerate() {
            assert_eq!(
                fast.column(r + 1),
                col.as_slice(),
                "head {:?} rank {}",
                head.id,
                r + 1
            );
        }
    }
}

#[test]
fn greedy_matches_linear_scan_for_m9_sample() {
    let config = ModulusConfig::new(9).unwrap();
    let heads = enumerate_heads_general(config, 5, u64::MAX).unwrap();
    for head in heads.iter().step_by(97) {
        let fast = greedy_extend(&head.to_partition(), 256).unwrap();
        let slow = linear_scan_extend(config, &head.columns, 256);
        for (r, col) in slow.iter().enumerate() {
            assert_eq!(fast.column(r + 1), col.as_slice());
        }
    }
}
