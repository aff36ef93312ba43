//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own checkers; everything is recomputed by brute force.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use netcode_core::protocols::PartiteGraphF;

/// Smallest `w` with `2^w ≥ count`.
pub fn ceil_log2(count: u64) -> usize {
    (0..64).find(|&w| (1u128 << w) >= count as u128).unwrap()
}

/// Largest subset of `{1..=range}` with no three-term arithmetic
/// progression, by exhaustive search over bitmasks.
pub fn max_ap3_free(range: u64) -> usize {
    assert!(range <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << range) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let has = |v: u64| v >= 1 && v <= range && mask >> (v - 1) & 1 == 1;
        let free = (1..=range).all(|a| !has(a) || (1..=range).all(|d| !(has(a + d) && has(a + 2 * d))));
        if free {
            best = size;
        }
    }
    best
}

/// Least `N` with `N · A(N) ≥ 2^m` for three-term progressions.
pub fn smallest_triangle_range(m: u32) -> u64 {
    (1u64..).find(|&n| n * max_ap3_free(n) as u64 >= 1 << m).unwrap()
}

/// An edge of the partite graph: part `i` (0-based) label `a` to part
/// `i+1` label `b`.
pub type PEdge = (usize, u64, u64);

fn cycle_edges(c: &[u64]) -> Vec<PEdge> {
    let n = c.len();
    (0..n).map(|i| (i, c[i], c[(i + 1) % n])).collect()
}

/// Every closed walk choosing one label per part with all `n` edges in `F`.
pub fn all_special_cycles(cycles: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut adj: HashMap<(usize, u64), BTreeSet<u64>> = HashMap::new();
    for c in cycles {
        for (i, a, b) in cycle_edges(c) {
            adj.entry((i, a)).or_default().insert(b);
        }
    }
    let starts: BTreeSet<u64> = cycles.iter().map(|c| c[0]).collect();
    let mut found = Vec::new();
    let mut stack: Vec<Vec<u64>> = starts.into_iter().map(|a| vec![a]).collect();
    while let Some(path) = stack.pop() {
        let i = path.len() - 1;
        let Some(next) = adj.get(&(i, path[i])) else { continue };
        if path.len() == n {
            if next.contains(&path[0]) {
                found.push(path);
            }
            continue;
        }
        for &b in next {
            let mut p = path.clone();
            p.push(b);
            stack.push(p);
        }
    }
    found.sort();
    found
}

/// Properties (1), (2), (3) of a labeled `F`, recomputed from scratch.
pub fn f_properties(f: &PartiteGraphF) -> (bool, bool, bool) {
    let n = f.n();
    let cycles = f.cycles();
    let expected = 1usize << f.m();
    let mut seen = HashSet::new();
    let disjoint = cycles.len() == expected && cycles.iter().flat_map(|c| cycle_edges(c)).all(|e| seen.insert(e));
    let special = all_special_cycles(cycles, n);
    let mut uses: HashMap<PEdge, usize> = HashMap::new();
    for c in &special {
        for e in cycle_edges(c) {
            *uses.entry(e).or_default() += 1;
        }
    }
    let unique = seen.iter().all(|e| uses.get(e) == Some(&1));
    (disjoint, unique, special.len() == expected)
}
