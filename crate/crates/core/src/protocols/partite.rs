//! The `n`-partite graph `F` whose special `n`-cycles encode the symbols.
//!
//! A special cycle picks one label from each part `I_1..I_n` and joins
//! consecutive parts, part `n` closing back to part 1. Symbol `x` owns the
//! cycle through the entries of its encoder tuple.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::budget::Budgets;
use crate::codes::bits_for;
use crate::error::{ensure_budget, Error, Result};
use crate::freeset::{build_encoder, EncoderT, RangeChoice};

/// Edge between part `part` (1-based) and the next part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartEdge {
    pub part: usize,
    pub from: u64,
    pub to: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteGraphF {
    n: usize,
    m: u32,
    /// Sorted labels of each part; `parts[i]` is `I_{i+1}`.
    parts: Vec<Vec<u64>>,
    /// `cycles[x][i]`: label of symbol `x` in part `i+1`.
    cycles: Vec<Vec<u64>>,
    owner: HashMap<PartEdge, u64>,
}

impl PartiteGraphF {
    /// Builds `F` from explicit labeled cycles without checking any of the
    /// three properties.
    pub fn from_cycles(n: usize, m: u32, cycles: Vec<Vec<u64>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("special cycles need n >= 3"));
        }
        if let Some(bad) = cycles.iter().position(|c| c.len() != n) {
            return Err(Error::param(format!("cycle of symbol {bad} does not have {n} labels")));
        }
        let mut parts = vec![Vec::new(); n];
        for c in &cycles {
            for (i, &label) in c.iter().enumerate() {
                parts[i].push(label);
            }
        }
        for p in &mut parts {
            p.sort_unstable();
            p.dedup();
        }
        let mut owner = HashMap::new();
        for (x, c) in cycles.iter().enumerate() {
            for e in cycle_edges(c) {
                owner.entry(e).or_insert(x as u64);
            }
        }
        Ok(PartiteGraphF {
            n,
            m,
            parts,
            cycles,
            owner,
        })
    }

    pub fn from_encoder(t: &EncoderT) -> Result<Self> {
        let cycles = (0..t.symbols()).map(|x| t.tuple(x)).collect();
        PartiteGraphF::from_cycles(t.order, t.m, cycles)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Sorted labels of part `i` (1-based).
    pub fn part(&self, i: usize) -> &[u64] {
        &self.parts[i - 1]
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// `⌈log₂|I_i|⌉` for each part.
    pub fn index_widths(&self) -> Vec<usize> {
        self.parts.iter().map(|p| bits_for(p.len() as u64)).collect()
    }

    pub fn max_label(&self) -> u64 {
        self.parts.iter().filter_map(|p| p.last().copied()).max().unwrap_or(0)
    }

    /// Label of symbol `x` in part `i` (1-based).
    pub fn label(&self, x: u64, i: usize) -> u64 {
        self.cycles[x as usize][i - 1]
    }

    pub fn cycle(&self, x: u64) -> &[u64] {
        &self.cycles[x as usize]
    }

    pub fn cycles(&self) -> &[Vec<u64>] {
        &self.cycles
    }

    pub fn symbols(&self) -> u64 {
        self.cycles.len() as u64
    }

    /// Distinct edges of `F`, sorted.
    pub fn edges(&self) -> Vec<PartEdge> {
        let mut edges: Vec<PartEdge> = self.owner.keys().copied().collect();
        edges.sort_unstable();
        edges
    }

    /// Position of `label` inside sorted part `i`.
    pub fn index_in_part(&self, i: usize, label: u64) -> Option<usize> {
        self.parts[i - 1].binary_search(&label).ok()
    }

    /// The symbol whose cycle uses the edge from `a ∈ I_i` to
    /// `b ∈ I_{i+1}` (part `n` wraps to part 1).
    pub fn symbol_for_edge(&self, i: usize, a: u64, b: u64) -> Option<u64> {
        self.owner.get(&PartEdge { part: i, from: a, to: b }).copied()
    }

    /// Header `n m`, then one line per symbol: hex symbol and its labels.
    pub fn to_text(&self) -> String {
        let digits = (self.m as usize).div_ceil(4).max(1);
        let mut out = format!("{} {}\n", self.n, self.m);
        for (x, c) in self.cycles.iter().enumerate() {
            let labels: Vec<String> = c.iter().map(u64::to_string).collect();
            out.push_str(&format!("{x:0digits$x} {}\n", labels.join(" ")));
        }
        out
    }

    /// Cycles with every part relabeled by order of first use, scanning
    /// symbols in increasing order.
    pub fn canonical(&self) -> Vec<Vec<u64>> {
        canonical_form(&self.cycles, self.n)
    }

    /// Checks properties (1), (2) and (3).
    pub fn verify_properties(&self, budgets: &Budgets) -> Result<PropertyReport> {
        let expected = 1u64 << self.m;
        let mut owners: BTreeMap<PartEdge, Vec<u64>> = BTreeMap::new();
        for (x, c) in self.cycles.iter().enumerate() {
            for e in cycle_edges(c) {
                owners.entry(e).or_default().push(x as u64);
            }
        }
        let shared = owners.iter().find(|(_, xs)| xs.len() > 1);
        let disjoint = PropertyCheck {
            holds: self.cycles.len() as u64 == expected && shared.is_none(),
            detail: match shared {
                Some((e, xs)) => format!("edge {} shared by symbols {xs:?}", describe(e, self.n)),
                None if self.cycles.len() as u64 != expected => {
                    format!("{} labeled cycles, expected {expected}", self.cycles.len())
                }
                None => format!("{expected} pairwise edge-disjoint special cycles"),
            },
        };

        let all = self.special_cycles(budgets.cycle_walks)?;
        let mut through: BTreeMap<PartEdge, u64> = owners.keys().map(|&e| (e, 0)).collect();
        for c in &all {
            for e in cycle_edges(c) {
                *through.entry(e).or_default() += 1;
            }
        }
        let off = through.iter().find(|(_, &k)| k != 1);
        let unique = PropertyCheck {
            holds: off.is_none(),
            detail: match off {
                Some((e, k)) => format!("edge {} lies on {k} special cycles", describe(e, self.n)),
                None => "every edge lies on exactly one special cycle".into(),
            },
        };

        let labeled: std::collections::HashSet<&Vec<u64>> = self.cycles.iter().collect();
        let stray = all.iter().find(|c| !labeled.contains(c));
        let count = PropertyCheck {
            holds: all.len() as u64 == expected,
            detail: match stray {
                Some(c) if all.len() as u64 != expected => {
                    format!("{} special cycles, expected {expected}; unlabeled {c:?}", all.len())
                }
                _ if all.len() as u64 != expected => {
                    format!("{} special cycles, expected {expected}", all.len())
                }
                _ => format!("exactly {expected} special cycles"),
            },
        };
        Ok(PropertyReport {
            edge_disjoint: disjoint,
            unique_cycle_per_edge: unique,
            cycle_count: count,
            special_cycles: all.len() as u64,
        })
    }

    /// Every special cycle of `F`, found by walking part 1 → part n and
    /// closing back to the start.
    pub fn special_cycles(&self, walk_budget: u64) -> Result<Vec<Vec<u64>>> {
        let mut adjacency: Vec<BTreeMap<u64, Vec<u64>>> = vec![BTreeMap::new(); self.n];
        for e in self.owner.keys() {
            adjacency[e.part - 1].entry(e.from).or_default().push(e.to);
        }
        for map in &mut adjacency {
            for targets in map.values_mut() {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        let mut found = Vec::new();
        let mut steps = 0u64;
        let mut path = Vec::with_capacity(self.n);
        for &start in &self.parts[0] {
            path.clear();
            path.push(start);
            self.walk(&adjacency, &mut path, &mut found, &mut steps, walk_budget)?;
        }
        found.sort();
        Ok(found)
    }

    fn walk(
        &self,
        adjacency: &[BTreeMap<u64, Vec<u64>>],
        path: &mut Vec<u64>,
        found: &mut Vec<Vec<u64>>,
        steps: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *steps += 1;
        ensure_budget("special-cycle walk steps", *steps as u128, budget as u128)?;
        let last = *path.last().expect("nonempty");
        let part = path.len();
        let Some(next) = adjacency[part - 1].get(&last) else {
            return Ok(());
        };
        if part == self.n {
            if next.binary_search(&path[0]).is_ok() {
                found.push(path.clone());
            }
            return Ok(());
        }
        for &v in next {
            path.push(v);
            self.walk(adjacency, path, found, steps, budget)?;
            path.pop();
        }
        Ok(())
    }
}

fn describe(e: &PartEdge, n: usize) -> String {
    format!("I{}:{} - I{}:{}", e.part, e.from, e.part % n + 1, e.to)
}

fn cycle_edges(c: &[u64]) -> impl Iterator<Item = PartEdge> + '_ {
    let n = c.len();
    (0..n).map(move |i| PartEdge {
        part: i + 1,
        from: c[i],
        to: c[(i + 1) % n],
    })
}

/// Relabels each part by order of first appearance.
pub fn canonical_form(cycles: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut maps: Vec<HashMap<u64, u64>> = vec![HashMap::new(); n];
    cycles
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(i, &label)| {
                    let next = maps[i].len() as u64;
                    *maps[i].entry(label).or_insert(next)
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    /// (1): exactly `2^m` labeled cycles, pairwise edge-disjoint.
    pub edge_disjoint: PropertyCheck,
    /// (2): each edge lies on exactly one special cycle.
    pub unique_cycle_per_edge: PropertyCheck,
    /// (3): exactly `2^m` special cycles in total.
    pub cycle_count: PropertyCheck,
    pub special_cycles: u64,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.edge_disjoint.holds && self.unique_cycle_per_edge.holds && self.cycle_count.holds
    }

    pub fn flags(&self) -> (bool, bool, bool) {
        (
            self.edge_disjoint.holds,
            self.unique_cycle_per_edge.holds,
            self.cycle_count.holds,
        )
    }
}

/// Largest `m` for which [`build_f`] checks all three properties.
pub const FULL_CHECK_MAX_M: u32 = 8;

/// `F` for cycles of length `n` and `m`-bit symbols, with the encoder and
/// range it was built from. All three properties are verified for
/// `m ≤ 8`, property (1) always.
pub fn build_f(n: usize, m: u32, budgets: &Budgets) -> Result<(PartiteGraphF, EncoderT, RangeChoice)> {
    let (encoder, choice) = build_encoder(m, n, budgets)?;
    let f = PartiteGraphF::from_encoder(&encoder)?;
    let report = if m <= FULL_CHECK_MAX_M {
        f.verify_properties(budgets)?
    } else {
        let mut report = f.verify_properties_disjoint_only();
        report.special_cycles = f.symbols();
        report
    };
    if !report.all_hold() {
        return Err(Error::Construction(format!(
            "special-cycle graph for n = {n}, m = {m} fails: {} / {} / {}",
            report.edge_disjoint.detail,
            report.unique_cycle_per_edge.detail,
            report.cycle_count.detail
        )));
    }
    Ok((f, encoder, choice))
}

impl PartiteGraphF {
    fn verify_properties_disjoint_only(&self) -> PropertyReport {
        let expected = 1u64 << self.m;
        let edges = self.owner.len() as u64;
        let holds = self.cycles.len() as u64 == expected && edges == expected * self.n as u64;
        let skipped = PropertyCheck {
            holds: true,
            detail: format!("not walked above m = {FULL_CHECK_MAX_M}"),
        };
        PropertyReport {
            edge_disjoint: PropertyCheck {
                holds,
                detail: format!("{edges} distinct edges over {} cycles", self.cycles.len()),
            },
            unique_cycle_per_edge: skipped.clone(),
            cycle_count: skipped,
            special_cycles: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs_satisfy_all_properties() {
        let budgets = Budgets::default();
        for (n, m) in [(3, 1), (3, 2), (3, 4), (3, 6), (4, 3), (5, 3)] {
            let (f, t, choice) = build_f(n, m, &budgets).unwrap();
            let report = f.verify_properties(&budgets).unwrap();
            assert_eq!(report.flags(), (true, true, true), "n={n} m={m}");
            assert_eq!(report.special_cycles, 1 << m);
            assert_eq!(f.edges().len(), n << m);
            assert!(f.part_sizes().iter().all(|&s| s as u64 <= n as u64 * choice.range));
            assert_eq!(f.max_label(), f.max_label().min(t.max_entry()));
        }
    }

    #[test]
    fn duplicated_edge_is_reported() {
        let budgets = Budgets::default();
        let (f, _, _) = build_f(3, 2, &budgets).unwrap();
        let mut cycles = f.cycles().to_vec();
        cycles[1][0] = cycles[0][0];
        cycles[1][1] = cycles[0][1];
        let broken = PartiteGraphF::from_cycles(3, 2, cycles).unwrap();
        let report = broken.verify_properties(&budgets).unwrap();
        assert!(!report.edge_disjoint.holds);
        assert!(report.edge_disjoint.detail.contains("shared by symbols [0, 1]"));
    }

    #[test]
    fn extra_special_cycle_is_reported() {
        // Edge-disjoint labeled cycles whose union also contains the
        // unlabeled cycle (1,2,5).
        let cycles = vec![vec![1, 2, 3], vec![1, 4, 5], vec![6, 2, 5], vec![6, 4, 3]];
        let f = PartiteGraphF::from_cycles(3, 2, cycles).unwrap();
        let report = f.verify_properties(&Budgets::default()).unwrap();
        assert!(report.edge_disjoint.holds);
        assert!(!report.unique_cycle_per_edge.holds);
        assert!(!report.cycle_count.holds);
        assert!(report.special_cycles > 4);
    }

    #[test]
    fn canonical_form_ignores_label_names() {
        let a = vec![vec![5, 9, 2], vec![7, 9, 4]];
        let b = vec![vec![1, 1, 1], vec![2, 1, 2]];
        assert_eq!(canonical_form(&a, 3), canonical_form(&b, 3));
    }

    #[test]
    fn export_format() {
        let (f, _, _) = build_f(3, 1, &Budgets::default()).unwrap();
        let text = f.to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("3 1"));
        assert_eq!(lines.next(), Some("0 1 2 3"));
        assert_eq!(lines.next(), Some("1 1 3 5"));
    }

    #[test]
    fn walk_budget_is_enforced() {
        let (f, _, _) = build_f(3, 4, &Budgets::default()).unwrap();
        assert!(f.special_cycles(3).is_err());
    }
}
