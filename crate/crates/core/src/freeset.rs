//! Integer sets free of nontrivial solutions to
//! `x_2 + … + x_n = (n−1)·x_1`, and the symbol encoder built on them.
//!
//! For `n = 3` the constraint reads `x_2 + x_3 = 2·x_1`, so the sets are
//! exactly the sets without 3-term arithmetic progressions.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budgets;
use crate::error::{ensure_budget, sat_pow, Error, Result};

/// A free set of order `n` inside `{1..range}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeSet {
    pub range: u64,
    pub order: usize,
    pub members: Vec<u64>,
}

impl FreeSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Header `N n`, then the members separated by spaces.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.members.iter().map(u64::to_string).collect();
        format!("{} {}\n{}\n", self.range, self.order, body.join(" "))
    }

    /// Parses [`FreeSet::to_text`] output; checks range, order and freeness.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let (range, order) = match head.as_slice() {
            [a, b] => a.parse::<u64>().ok().zip(b.parse::<usize>().ok()),
            _ => None,
        }
        .ok_or_else(|| Error::parse(line, "expected header \"N n\""))?;
        check_order(order)?;
        let mut members = Vec::new();
        for (line, text) in lines {
            for tok in text.split_whitespace() {
                let v: u64 = tok
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad integer {tok:?}")))?;
                if v == 0 || v > range {
                    return Err(Error::parse(line, format!("{v} outside 1..{range}")));
                }
                members.push(v);
            }
        }
        members.sort_unstable();
        members.dedup();
        if let Some(bad) = find_violation_fast(&members, order) {
            return Err(Error::Construction(format!(
                "imported set is not free of order {order}: {bad:?}"
            )));
        }
        Ok(FreeSet {
            range,
            order,
            members,
        })
    }
}

impl fmt::Display for FreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.members.iter().map(u64::to_string).collect();
        write!(f, "{{{}}} ⊆ [1,{}]", body.join(","), self.range)
    }
}

fn check_order(order: usize) -> Result<()> {
    if !(3..=16).contains(&order) {
        return Err(Error::param(format!("order must be in 3..=16, got {order}")));
    }
    Ok(())
}

/// True iff `x[1..]` sums to `(n−1)·x[0]` and not all entries are equal.
fn violates(tuple: &[u64]) -> bool {
    let lhs: u128 = tuple[1..].iter().map(|&v| v as u128).sum();
    lhs == (tuple.len() as u128 - 1) * tuple[0] as u128 && tuple.iter().any(|&v| v != tuple[0])
}

/// Brute force over all ordered `n`-tuples of `members` with repetition.
/// Returns the first violating tuple in lexicographic order of positions.
pub fn find_violation(members: &[u64], order: usize, budget: u64) -> Result<Option<Vec<u64>>> {
    check_order(order)?;
    let k = members.len() as u128;
    ensure_budget("free-set tuples", sat_pow(k, order as u32), budget as u128)?;
    let hit = members.par_iter().enumerate().find_map_first(|(_, &first)| {
        let mut tuple = vec![first; order];
        search_tuples(members, &mut tuple, 1).then_some(tuple)
    });
    Ok(hit)
}

fn search_tuples(members: &[u64], tuple: &mut [u64], pos: usize) -> bool {
    if pos == tuple.len() {
        return violates(tuple);
    }
    for &v in members {
        tuple[pos] = v;
        if search_tuples(members, tuple, pos + 1) {
            return true;
        }
    }
    false
}

/// Exhaustive freeness check; errors when `|S|^n` exceeds `budget`.
pub fn verify_free(members: &[u64], order: usize, budget: u64) -> Result<bool> {
    Ok(find_violation(members, order, budget)?.is_none())
}

/// Fixed-capacity bitset over `0..capacity`.
#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(capacity: usize) -> Self {
        Bits(vec![0; capacity.div_ceil(64).max(1)])
    }

    fn get(&self, i: u64) -> bool {
        let w = (i / 64) as usize;
        w < self.0.len() && (self.0[w] >> (i % 64)) & 1 == 1
    }

    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    /// `self |= other << shift`, truncated to capacity.
    fn or_shifted(&mut self, other: &Bits, shift: u64) {
        let words = (shift / 64) as usize;
        let bits = (shift % 64) as u32;
        let len = self.0.len();
        for i in (words..len).rev() {
            let src = i - words;
            let mut v = other.0[src] << bits;
            if bits > 0 && src > 0 {
                v |= other.0[src - 1] >> (64 - bits);
            }
            self.0[i] |= v;
        }
    }
}

/// Incremental freeness test. `sums[k]` holds every sum of a `k`-element
/// multiset drawn from the current members.
#[derive(Clone, Debug)]
pub struct SumsetTracker {
    order: usize,
    limit: u64,
    members: Vec<u64>,
    sums: Vec<Bits>,
}

impl SumsetTracker {
    /// Tracker for candidates in `1..=limit`.
    pub fn new(order: usize, limit: u64) -> Self {
        let capacity = (order as u64 - 1) * limit + 1;
        let mut sums = vec![Bits::new(capacity as usize); order];
        sums[0].set(0);
        SumsetTracker {
            order,
            limit,
            members: Vec::new(),
            sums,
        }
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// Whether `members ∪ {c}` is still free (`c` not yet a member).
    pub fn allows(&self, c: u64) -> bool {
        let r = self.order as u64 - 1;
        // c as the averaged element, with the others drawn from members.
        for t in 1..=r {
            if self.sums[t as usize].get(t * c) {
                return false;
            }
        }
        // c among the summands, some member as the averaged element.
        for &s in &self.members {
            for j in 1..r {
                let Some(rest) = (r * s).checked_sub(j * c) else {
                    break;
                };
                if self.sums[(r - j) as usize].get(rest) {
                    return false;
                }
            }
        }
        true
    }

    pub fn insert(&mut self, c: u64) {
        debug_assert!(c >= 1 && c <= self.limit);
        let r = self.order - 1;
        for k in (1..=r).rev() {
            for i in 1..=k {
                let (lo, hi) = self.sums.split_at_mut(k);
                hi[0].or_shifted(&lo[k - i], i as u64 * c);
            }
        }
        self.members.push(c);
    }
}

/// First violating subset found by incremental insertion, if any.
fn find_violation_fast(members: &[u64], order: usize) -> Option<Vec<u64>> {
    let limit = members.iter().copied().max().unwrap_or(1);
    let mut tracker = SumsetTracker::new(order, limit);
    for (i, &c) in members.iter().enumerate() {
        if !tracker.allows(c) {
            return Some(members[..=i].to_vec());
        }
        tracker.insert(c);
    }
    None
}

/// Freeness via the incremental sumset test; exact and fast.
pub fn is_free(members: &[u64], order: usize) -> bool {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == members.len() && find_violation_fast(&sorted, order).is_none()
}

/// Memoized branch-and-bound for maximum free subsets of `{1..N}`.
///
/// Freeness is translation invariant, so a free subset of `{i..N}` has at
/// most `A(N−i+1)` elements; the table of earlier maxima bounds each branch.
#[derive(Debug, Clone)]
pub struct FreeSetSearcher {
    order: usize,
    maxima: Vec<FreeSet>,
}

impl FreeSetSearcher {
    pub fn new(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(FreeSetSearcher {
            order,
            maxima: Vec::new(),
        })
    }

    /// `A(N)` together with the lexicographically least maximum set.
    pub fn maximum(&mut self, range: u64, limit: u64) -> Result<&FreeSet> {
        ensure_budget("exact free-set range", range as u128, limit as u128)?;
        if range == 0 {
            return Err(Error::param("range must be at least 1"));
        }
        while (self.maxima.len() as u64) < range {
            let next = self.maxima.len() as u64 + 1;
            let set = self.solve(next);
            self.maxima.push(set);
        }
        Ok(&self.maxima[range as usize - 1])
    }

    fn bound(&self, length: u64) -> usize {
        if length == 0 {
            0
        } else {
            self.maxima[length as usize - 1].len()
        }
    }

    fn solve(&self, range: u64) -> FreeSet {
        let ceiling = if range == 1 { 1 } else { self.bound(range - 1) + 1 };
        let mut best: Vec<u64> = Vec::new();
        let tracker = SumsetTracker::new(self.order, range);
        self.dfs(range, 1, &tracker, &mut best, ceiling);
        FreeSet {
            range,
            order: self.order,
            members: best,
        }
    }

    fn dfs(&self, range: u64, next: u64, tracker: &SumsetTracker, best: &mut Vec<u64>, ceiling: usize) {
        let size = tracker.members().len();
        if size > best.len() {
            *best = tracker.members().to_vec();
        }
        if best.len() == ceiling || next > range {
            return;
        }
        if size + self.bound_or_len(range - next + 1) <= best.len() {
            return;
        }
        if tracker.allows(next) {
            let mut child = tracker.clone();
            child.insert(next);
            self.dfs(range, next + 1, &child, best, ceiling);
            if best.len() == ceiling {
                return;
            }
        }
        self.dfs(range, next + 1, tracker, best, ceiling);
    }

    fn bound_or_len(&self, length: u64) -> usize {
        if (length as usize) <= self.maxima.len() {
            self.bound(length)
        } else {
            length as usize
        }
    }
}

/// Maximum free subset of `{1..N}`, lexicographically least among maxima.
pub fn exact_max_free_set(range: u64, order: usize, limit: u64) -> Result<FreeSet> {
    Ok(FreeSetSearcher::new(order)?.maximum(range, limit)?.clone())
}

/// Sphere construction: vectors with digits in `0..D` and a fixed squared
/// norm, read as integers in base `(n−1)(D−1)+1` so that sums of `n−1`
/// members never carry. The best shell over all fitting `(d, D)` is then
/// completed greedily over `1..N`.
pub fn behrend_set(range: u64, order: usize, budgets: &Budgets) -> Result<FreeSet> {
    check_order(order)?;
    if range == 0 {
        return Err(Error::param("range must be at least 1"));
    }
    ensure_budget("Behrend range", range as u128, budgets.behrend_range as u128)?;
    let mut best: Vec<u64> = Vec::new();
    let r = order as u64 - 1;
    for dim in 2u32.. {
        let mut fitted_any = false;
        for digits in 2u64.. {
            let base = r * (digits - 1) + 1;
            let Some(top) = base.checked_pow(dim).map(|p| (digits - 1) * (p - 1) / (base - 1) + 1)
            else {
                break;
            };
            if top > range {
                break;
            }
            fitted_any = true;
            let shell = best_shell(dim, digits, base);
            if shell.len() > best.len() || (shell.len() == best.len() && shell < best) {
                best = shell;
            }
        }
        if !fitted_any {
            break;
        }
    }
    let mut tracker = SumsetTracker::new(order, range);
    best.sort_unstable();
    for &v in &best {
        debug_assert!(tracker.allows(v));
        tracker.insert(v);
    }
    for c in 1..=range {
        if !best.contains(&c) && tracker.allows(c) {
            tracker.insert(c);
        }
    }
    let mut members = tracker.members().to_vec();
    members.sort_unstable();
    if let Some(bad) = find_violation_fast(&members, order) {
        return Err(Error::Construction(format!("sphere set failed re-verification: {bad:?}")));
    }
    if sat_pow(members.len() as u128, order as u32) <= budgets.free_set_tuples as u128
        && !verify_free(&members, order, budgets.free_set_tuples)?
    {
        return Err(Error::Construction("sphere set failed exhaustive re-verification".into()));
    }
    Ok(FreeSet {
        range,
        order,
        members,
    })
}

/// Largest squared-norm shell of `{0..D}^d` (smallest norm on ties), as
/// sorted integers `1 + Σ digit_i · base^i`.
fn best_shell(dim: u32, digits: u64, base: u64) -> Vec<u64> {
    let max_norm = dim as u64 * (digits - 1) * (digits - 1);
    let mut counts = vec![0u64; max_norm as usize + 1];
    let mut digit = vec![0u64; dim as usize];
    let total = digits.pow(dim);
    let norm_of = |digit: &[u64]| digit.iter().map(|d| d * d).sum::<u64>();
    for _ in 0..total {
        counts[norm_of(&digit) as usize] += 1;
        increment(&mut digit, digits);
    }
    let (norm, _) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty");
    let mut shell = Vec::new();
    digit.iter_mut().for_each(|d| *d = 0);
    for _ in 0..total {
        if norm_of(&digit) == norm as u64 {
            let value = digit.iter().rev().fold(0u64, |acc, d| acc * base + d) + 1;
            shell.push(value);
        }
        increment(&mut digit, digits);
    }
    shell.sort_unstable();
    shell
}

fn increment(digit: &mut [u64], digits: u64) {
    for d in digit.iter_mut() {
        *d += 1;
        if *d < digits {
            return;
        }
        *d = 0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Exact,
    Behrend,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeChoice {
    pub range: u64,
    pub set: FreeSet,
    pub construction: Construction,
}

/// Least `N` with `N · |free(N)| ≥ 2^m`. Uses exact maxima while `N` is
/// within the exact-search budget, otherwise the sphere construction
/// scanned from `⌈√(2^m)⌉`.
pub fn smallest_range(m: u32, order: usize, budgets: &Budgets) -> Result<RangeChoice> {
    check_order(order)?;
    if !(1..=62).contains(&m) {
        return Err(Error::param(format!("m must be in 1..=62, got {m}")));
    }
    let target = 1u128 << m;
    let mut searcher = FreeSetSearcher::new(order)?;
    for range in 1..=budgets.free_set_range {
        let set = searcher.maximum(range, budgets.free_set_range)?;
        if range as u128 * set.len() as u128 >= target {
            return Ok(RangeChoice {
                range,
                set: set.clone(),
                construction: Construction::Exact,
            });
        }
    }
    let start = (target as f64).sqrt().ceil() as u64;
    let start = (start.saturating_sub(1)..=start + 1)
        .find(|s| (*s as u128) * (*s as u128) >= target)
        .unwrap_or(start)
        .max(1);
    for range in start..=budgets.behrend_range {
        let set = behrend_set(range, order, budgets)?;
        if range as u128 * set.len() as u128 >= target {
            return Ok(RangeChoice {
                range,
                set,
                construction: Construction::Behrend,
            });
        }
    }
    Err(Error::Capacity {
        what: format!("free-set range for m = {m}"),
        required: target,
        budget: budgets.behrend_range as u128 * budgets.behrend_range as u128,
    })
}

/// Injective map from symbols to arithmetic tuples
/// `(α, α+β, …, α+(n−1)β)` with `α ∈ 1..N`, `β ∈ B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncoderT {
    pub m: u32,
    pub order: usize,
    pub range: u64,
    pub steps: Vec<u64>,
}

impl EncoderT {
    pub fn new(m: u32, set: &FreeSet) -> Result<Self> {
        if !(1..=62).contains(&m) {
            return Err(Error::param(format!("m must be in 1..=62, got {m}")));
        }
        let capacity = set.range as u128 * set.len() as u128;
        if capacity < 1u128 << m {
            return Err(Error::Construction(format!(
                "N·|B| = {capacity} < 2^{m}: not enough (α, β) pairs"
            )));
        }
        Ok(EncoderT {
            m,
            order: set.order,
            range: set.range,
            steps: set.members.clone(),
        })
    }

    pub fn symbols(&self) -> u64 {
        1u64 << self.m
    }

    /// `(α, β)` for a symbol: row-major over `α`, then sorted `β`.
    pub fn pair(&self, symbol: u64) -> (u64, u64) {
        let k = self.steps.len() as u64;
        (symbol / k + 1, self.steps[(symbol % k) as usize])
    }

    /// Entry `i` (1-based) of the tuple: `α + (i−1)β`.
    pub fn entry(&self, symbol: u64, i: usize) -> u64 {
        let (a, b) = self.pair(symbol);
        a + (i as u64 - 1) * b
    }

    pub fn tuple(&self, symbol: u64) -> Vec<u64> {
        (1..=self.order).map(|i| self.entry(symbol, i)).collect()
    }

    /// Largest tuple entry any symbol can produce.
    pub fn max_entry(&self) -> u64 {
        self.order as u64 * self.range
    }

    /// The symbol whose tuple has `a` at position `i` and `b` at position
    /// `j` (`i ≠ j`, 1-based), if any.
    pub fn decode_entries(&self, i: usize, a: u64, j: usize, b: u64) -> Option<u64> {
        if i == j || i == 0 || j == 0 || i > self.order || j > self.order {
            return None;
        }
        let (i, a, j, b) = if i < j { (i, a, j, b) } else { (j, b, i, a) };
        let gap = (j - i) as u64;
        let diff = b.checked_sub(a)?;
        if diff % gap != 0 {
            return None;
        }
        let beta = diff / gap;
        let pos = self.steps.binary_search(&beta).ok()? as u64;
        let alpha = a.checked_sub((i as u64 - 1) * beta)?;
        if alpha == 0 || alpha > self.range {
            return None;
        }
        let symbol = (alpha - 1) * self.steps.len() as u64 + pos;
        (symbol < self.symbols()).then_some(symbol)
    }
}

/// Encoder for `m`-bit symbols on cycles of length `order`.
pub fn build_encoder(m: u32, order: usize, budgets: &Budgets) -> Result<(EncoderT, RangeChoice)> {
    let choice = smallest_range(m, order, budgets)?;
    Ok((EncoderT::new(m, &choice.set)?, choice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TUPLES: u64 = 1 << 24;

    /// Every subset of `{1..N}` by bit mask, largest first, lexicographic
    /// among equal sizes.
    fn brute_max(range: u64, order: usize) -> Vec<u64> {
        let mut best: Vec<u64> = Vec::new();
        for mask in 0u64..(1 << range) {
            let set: Vec<u64> = (1..=range).filter(|v| (mask >> (v - 1)) & 1 == 1).collect();
            if set.len() < best.len() || !verify_free(&set, order, TUPLES).unwrap() {
                continue;
            }
            if set.len() > best.len() || set < best {
                best = set;
            }
        }
        best
    }

    #[test]
    fn verify_examples() {
        assert!(verify_free(&[1, 2], 3, TUPLES).unwrap());
        assert!(!verify_free(&[1, 2, 3], 3, TUPLES).unwrap());
        assert!(verify_free(&[1, 2, 4, 5], 3, TUPLES).unwrap());
        assert_eq!(find_violation(&[1, 2, 3], 3, TUPLES).unwrap(), Some(vec![2, 1, 3]));
        assert!(verify_free(&[1, 2, 3, 4, 5], 3, 10).is_err());
        // 1 + 1 + 4 = 3·2 breaks order 4.
        assert!(!verify_free(&[1, 2, 4], 4, TUPLES).unwrap());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_max_free_set(1, 3, 60).unwrap().members, vec![1]);
        assert_eq!(exact_max_free_set(4, 3, 60).unwrap().members, vec![1, 2, 4]);
        for range in 1..=12 {
            let got = exact_max_free_set(range, 3, 60).unwrap();
            assert_eq!(got.members, brute_max(range, 3), "N = {range}");
        }
        for range in 1..=10 {
            let got = exact_max_free_set(range, 4, 60).unwrap();
            assert_eq!(got.members, brute_max(range, 4), "order 4, N = {range}");
        }
        assert!(exact_max_free_set(61, 3, 60).is_err());
    }

    #[test]
    fn known_maxima() {
        // Sizes of the largest 3-AP-free subsets of {1..N}.
        let known = [1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9];
        let mut searcher = FreeSetSearcher::new(3).unwrap();
        for (i, &size) in known.iter().enumerate() {
            assert_eq!(searcher.maximum(i as u64 + 1, 60).unwrap().len(), size);
        }
    }

    #[test]
    fn behrend_examples() {
        let budgets = Budgets::default();
        let ten = behrend_set(10, 3, &budgets).unwrap();
        assert_eq!(ten.members, vec![1, 2, 4, 5, 10]);
        assert!(ten.len() >= 4);
        let hundred = behrend_set(100, 3, &budgets).unwrap();
        assert!(hundred.len() >= ten.len());
        assert!(verify_free(&hundred.members, 3, TUPLES).unwrap());
        for order in 3..=5 {
            for range in [1, 2, 7, 30, 200] {
                let s = behrend_set(range, order, &budgets).unwrap();
                assert!(is_free(&s.members, order), "order {order}, N = {range}");
                assert!(s.members.iter().all(|&v| (1..=range).contains(&v)));
            }
        }
    }

    #[test]
    fn smallest_range_examples() {
        let budgets = Budgets::default();
        assert_eq!(smallest_range(1, 3, &budgets).unwrap().range, 2);
        let two = smallest_range(2, 3, &budgets).unwrap();
        let oracle = (1u64..).find(|&n| n * brute_max(n, 3).len() as u64 >= 4).unwrap();
        assert_eq!(two.range, oracle);
        let four = smallest_range(4, 3, &budgets).unwrap();
        assert_eq!((four.range, four.set.members.clone()), (5, vec![1, 2, 4, 5]));
        let six = smallest_range(6, 3, &budgets).unwrap();
        assert_eq!((six.range, six.set.len()), (11, 6));
        assert_eq!(six.construction, Construction::Exact);
    }

    #[test]
    fn smallest_range_falls_back_to_spheres() {
        let budgets = Budgets {
            free_set_range: 8,
            ..Budgets::default()
        };
        let choice = smallest_range(8, 3, &budgets).unwrap();
        assert_eq!(choice.construction, Construction::Behrend);
        let n = choice.range;
        assert!(n as u128 * choice.set.len() as u128 >= 256);
        let before = behrend_set(n - 1, 3, &budgets).unwrap();
        assert!((n - 1) * (before.len() as u64) < 256);
    }

    #[test]
    fn minimality() {
        let budgets = Budgets::default();
        for m in 1..=8 {
            let choice = smallest_range(m, 3, &budgets).unwrap();
            let n = choice.range;
            if n > 1 {
                let prev = exact_max_free_set(n - 1, 3, 60).unwrap();
                assert!(((n - 1) as u128) * (prev.len() as u128) < 1u128 << m);
            }
        }
    }

    #[test]
    fn encoder_examples() {
        let budgets = Budgets::default();
        let (t, choice) = build_encoder(4, 3, &budgets).unwrap();
        assert_eq!(t.pair(0), (1, choice.set.members[0]));
        assert_eq!(t.tuple(0), vec![1, 2, 3]);
        for m in 1..=8 {
            let (t, _) = build_encoder(m, 3, &budgets).unwrap();
            let mut seen = std::collections::HashSet::new();
            for x in 0..t.symbols() {
                let tup = t.tuple(x);
                assert!(seen.insert(tup.clone()));
                assert!(tup.iter().all(|&v| v >= 1 && v <= t.max_entry()));
                for i in 1..=3 {
                    for j in 1..=3 {
                        if i != j {
                            assert_eq!(t.decode_entries(i, tup[i - 1], j, tup[j - 1]), Some(x));
                        }
                    }
                }
            }
        }
        let tiny = FreeSet { range: 2, order: 3, members: vec![1] };
        assert!(EncoderT::new(2, &tiny).is_err());
    }

    #[test]
    fn consecutive_entries_identify_the_symbol() {
        let budgets = Budgets::default();
        for (m, order) in [(6, 3), (5, 4), (4, 5)] {
            let (t, _) = build_encoder(m, order, &budgets).unwrap();
            for i in 1..order {
                let mut owner = std::collections::HashMap::new();
                for x in 0..t.symbols() {
                    let key = (t.entry(x, i), t.entry(x, i + 1));
                    assert!(owner.insert(key, x).is_none(), "m={m} order={order} i={i}");
                }
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let s = exact_max_free_set(11, 3, 60).unwrap();
        assert_eq!(FreeSet::from_text(&s.to_text()).unwrap(), s);
        assert!(FreeSet::from_text("5 3\n1 2 3\n").is_err());
        assert!(FreeSet::from_text("5 3\n1 9\n").is_err());
    }

    proptest! {
        #[test]
        fn fast_check_matches_brute_force(set in proptest::collection::btree_set(1u64..40, 0..9), order in 3usize..6) {
            let members: Vec<u64> = set.into_iter().collect();
            prop_assert_eq!(is_free(&members, order), verify_free(&members, order, TUPLES).unwrap());
        }

        #[test]
        fn exact_search_output_is_free(range in 1u64..25, order in 3usize..5) {
            let s = exact_max_free_set(range, order, 60).unwrap();
            prop_assert!(verify_free(&s.members, order, TUPLES).unwrap());
        }

        #[test]
        fn encoder_tuples_are_progressions(m in 1u32..9, seed in any::<u64>()) {
            let (t, _) = build_encoder(m, 3, &Budgets::default()).unwrap();
            let x = seed % t.symbols();
            let tup = t.tuple(x);
            let beta = tup[1] - tup[0];
            prop_assert!(t.steps.contains(&beta));
            prop_assert_eq!(tup[2] - tup[1], beta);
        }
    }
}
