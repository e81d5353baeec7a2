#![allow(dead_code)]

use crystalft::gf2::BinaryMatrix;

/// Single-source shortest distances by Bellman-Ford relaxation. Edges of
/// weight `i64::MAX` are absent.
pub fn bellman_ford(n: usize, ends: &[(u32, u32)], weights: &[i64], src: usize) -> Vec<Option<i64>> {
    let mut dist: Vec<Option<i64>> = vec![None; n];
    dist[src] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for (i, &(u, v)) in ends.iter().enumerate() {
            if weights[i] == i64::MAX {
                continue;
            }
            for (a, b) in [(u as usize, v as usize), (v as usize, u as usize)] {
                if let Some(da) = dist[a] {
                    let nd = da + weights[i];
                    if dist[b].is_none_or(|db| nd < db) {
                        dist[b] = Some(nd);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Minimum total weight of a perfect matching of a complete graph, by
/// recursion on the lowest unmatched vertex. `i64::MAX` marks a missing pair.
pub fn exhaustive_matching(dist: &[Vec<i64>]) -> Option<i64> {
    fn go(dist: &[Vec<i64>], used: &mut [bool]) -> Option<i64> {
        let Some(i) = used.iter().position(|u| !u) else {
            return Some(0);
        };
        used[i] = true;
        let mut best: Option<i64> = None;
        for j in i + 1..dist.len() {
            if used[j] || dist[i][j] == i64::MAX {
                continue;
            }
            used[j] = true;
            if let Some(rest) = go(dist, used) {
                let total = rest + dist[i][j];
                best = Some(best.map_or(total, |b: i64| b.min(total)));
            }
            used[j] = false;
        }
        used[i] = false;
        best
    }
    go(dist, &mut vec![false; dist.len()])
}

/// Whether `v` lies in the column space of `m`, by comparing ranks.
pub fn in_column_space(m: &BinaryMatrix, v: &[usize]) -> bool {
    let mut aug = BinaryMatrix::zeros(m.rows(), m.cols() + 1);
    aug.add_block(0, 0, m);
    for &i in v {
        aug.flip(i, m.cols());
    }
    aug.rank() == m.rank()
}
