//! Exhaustive checks of protocol behavior and of the structural facts the
//! lower bounds rest on.
//!
//! Every check enumerates its whole domain. Work is spread with rayon, and
//! results are reduced so that the reported counterexample is always the
//! least failing case in enumeration order, whatever the thread count.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::bounds::BoundReport;
use crate::budget::Budgets;
use crate::codes::{bits_for, CodeSpec, InputSpace, Word};
use crate::engine::{execute_adaptive, execute_static, AdaptiveProtocol, StaticSchedule, Transcript};
use crate::error::{ensure_budget, Error, Result};
use crate::graph::{binomial, mix_unchecked, Cut, Edge, Topology};
use crate::protocols::cycle::CycleLayout;
use crate::protocols::partite::{canonical_form, PartiteGraphF};
use crate::rational::{self, Rational};

/// Result of one check. A failed check always carries a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<String>,
    pub metrics: BTreeMap<String, String>,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            detail: detail.into(),
            counterexample: None,
            metrics: BTreeMap::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, counterexample: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: false,
            detail: detail.into(),
            counterexample: Some(counterexample.into()),
            metrics: BTreeMap::new(),
        }
    }

    pub fn with_metric(mut self, key: &str, value: impl ToString) -> Self {
        self.metrics.insert(key.to_string(), value.to_string());
        self
    }

    pub fn metric(&self, key: &str) -> Option<&str> {
        self.metrics.get(key).map(String::as_str)
    }

    /// `metric(key)` parsed as an integer.
    pub fn metric_u64(&self, key: &str) -> Option<u64> {
        self.metric(key)?.parse().ok()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: CheckOutcome) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            for (k, v) in &c.metrics {
                let _ = writeln!(out, "    {k} = {v}");
            }
            if let Some(cx) = &c.counterexample {
                for line in cx.lines() {
                    let _ = writeln!(out, "    | {line}");
                }
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "checks": self.checks,
        })
    }
}

fn describe_static(p: &StaticSchedule, g: &Topology, x: &Word, what: &str) -> String {
    match execute_static(p, g, x) {
        Ok(run) => format!("input {x} ({what})\n{}", run.transcript.dump()),
        Err(e) => format!("input {x} ({what}); execution error: {e}"),
    }
}

/// Per-chunk aggregate for [`exhaustive_detect_check`].
#[derive(Clone, Copy)]
struct DetectAgg {
    min_bits: usize,
    max_bits: usize,
    accepted: u64,
    first_bad: Option<u64>,
}

impl DetectAgg {
    fn empty() -> Self {
        DetectAgg {
            min_bits: usize::MAX,
            max_bits: 0,
            accepted: 0,
            first_bad: None,
        }
    }

    fn merge(self, other: Self) -> Self {
        DetectAgg {
            min_bits: self.min_bits.min(other.min_bits),
            max_bits: self.max_bits.max(other.max_bits),
            accepted: self.accepted + other.accepted,
            first_bad: match (self.first_bad, other.first_bad) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

/// Runs `p` on all of `Q^n` and compares each verdict with membership.
pub fn exhaustive_detect_check(
    p: &StaticSchedule,
    g: &Topology,
    code: &CodeSpec,
    budgets: &Budgets,
) -> Result<CheckOutcome> {
    let space = InputSpace::new(code.n(), code.m())?;
    let size = space.ensure_enumerable(budgets.executions)?;
    p.validate(g)?;
    let agg = (0..size)
        .into_par_iter()
        .map(|i| -> Result<DetectAgg> {
            let x = space.word(i);
            let run = execute_static(p, g, &x)?;
            let bits = run.transcript.total_bits();
            let expected = code.contains_unchecked(&x);
            Ok(DetectAgg {
                min_bits: bits,
                max_bits: bits,
                accepted: run.accepted as u64,
                first_bad: (run.accepted != expected).then_some(i),
            })
        })
        .try_reduce(DetectAgg::empty, |a, b| Ok(a.merge(b)))?;
    let name = format!("detect {} on {} nodes, m={}", p.name, g.n(), code.m());
    let outcome = match agg.first_bad {
        None => CheckOutcome::pass(name, format!("all {size} inputs decided correctly")),
        Some(i) => {
            let x = space.word(i);
            let member = code.contains_unchecked(&x);
            let what = if member { "codeword rejected" } else { "non-codeword accepted" };
            CheckOutcome::fail(name, what, describe_static(p, g, &x, what))
        }
    };
    Ok(outcome
        .with_metric("inputs", size)
        .with_metric("accepted", agg.accepted)
        .with_metric("min_bits", agg.min_bits)
        .with_metric("max_bits", agg.max_bits))
}

/// All corruption patterns touching at most `t` positions, as
/// `(vertex, xor mask)` lists, in lexicographic order.
fn corruption_patterns(n: usize, m: u32, t: usize) -> Vec<Vec<(usize, u64)>> {
    let masks = (1u64 << m) - 1;
    let mut out = vec![Vec::new()];
    for size in 1..=t.min(n) {
        for positions in (1..=n).combinations(size) {
            for deltas in positions.iter().map(|_| 1..=masks).multi_cartesian_product() {
                out.push(positions.iter().copied().zip(deltas).collect());
            }
        }
    }
    out
}

fn apply(c: &Word, pattern: &[(usize, u64)]) -> Word {
    pattern
        .iter()
        .fold(c.clone(), |w, &(v, delta)| w.with_symbol(v, w.values()[v - 1] ^ delta))
}

#[derive(Clone)]
struct CorrectAgg {
    cases: u64,
    max_total: (usize, u64),
    min_total: usize,
    max_detect: usize,
    max_correction: usize,
    first_bad: Option<u64>,
}

impl CorrectAgg {
    fn empty() -> Self {
        CorrectAgg {
            cases: 0,
            max_total: (0, u64::MAX),
            min_total: usize::MAX,
            max_detect: 0,
            max_correction: 0,
            first_bad: None,
        }
    }

    fn merge(self, o: Self) -> Self {
        // Ties keep the earliest case so the witness is order-independent.
        let max_total = match self.max_total.0.cmp(&o.max_total.0) {
            std::cmp::Ordering::Greater => self.max_total,
            std::cmp::Ordering::Less => o.max_total,
            std::cmp::Ordering::Equal => (self.max_total.0, self.max_total.1.min(o.max_total.1)),
        };
        CorrectAgg {
            cases: self.cases + o.cases,
            max_total,
            min_total: self.min_total.min(o.min_total),
            max_detect: self.max_detect.max(o.max_detect),
            max_correction: self.max_correction.max(o.max_correction),
            first_bad: match (self.first_bad, o.first_bad) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }
}

/// For every codeword and every corruption of at most `t` symbols, checks
/// that each vertex outputs its symbol of the original codeword.
pub fn exhaustive_correct_check(
    p: &AdaptiveProtocol,
    g: &Topology,
    code: &CodeSpec,
    t: usize,
    budgets: &Budgets,
) -> Result<CheckOutcome> {
    let n = code.n();
    let m = code.m();
    let per_word: u128 = (0..=t.min(n))
        .map(|i| binomial(n, i) * ((1u128 << m) - 1).pow(i as u32))
        .sum();
    let words = code.size().unwrap_or(u128::MAX);
    ensure_budget("codewords x corruptions", words.saturating_mul(per_word), budgets.executions as u128)?;
    let codewords: Vec<Word> = code.enumerate(budgets.codewords)?.collect();
    let patterns = corruption_patterns(n, m, t);
    let stride = patterns.len() as u64;

    let agg = codewords
        .par_iter()
        .enumerate()
        .map(|(ci, c)| -> Result<CorrectAgg> {
            let mut agg = CorrectAgg::empty();
            for (pi, pattern) in patterns.iter().enumerate() {
                let case = ci as u64 * stride + pi as u64;
                let y = apply(c, pattern);
                let run = execute_adaptive(p, g, &y)?;
                let total = run.transcript.total_bits();
                agg = agg.merge(CorrectAgg {
                    cases: 1,
                    max_total: (total, case),
                    min_total: total,
                    max_detect: run.detection_bits,
                    max_correction: run.correction_bits(),
                    first_bad: (run.output != *c).then_some(case),
                });
            }
            Ok(agg)
        })
        .try_reduce(CorrectAgg::empty, |a, b| Ok(a.merge(b)))?;

    let case_word = |case: u64| {
        let c = &codewords[(case / stride) as usize];
        (c, apply(c, &patterns[(case % stride) as usize]))
    };
    let name = format!("correct {} (t={t}) on {} nodes, m={m}", p.name, g.n());
    let outcome = match agg.first_bad {
        None => CheckOutcome::pass(name, format!("all {} cases repaired", agg.cases)),
        Some(case) => {
            let (c, y) = case_word(case);
            let cx = match execute_adaptive(p, g, &y) {
                Ok(run) => format!(
                    "codeword {c}, received {y}, output {}\n{}",
                    run.output,
                    run.transcript.dump()
                ),
                Err(e) => format!("codeword {c}, received {y}; execution error: {e}"),
            };
            CheckOutcome::fail(name, "wrong output", cx)
        }
    };
    let mut outcome = outcome
        .with_metric("cases", agg.cases)
        .with_metric("max_total_bits", agg.max_total.0)
        .with_metric("min_total_bits", agg.min_total)
        .with_metric("max_detection_bits", agg.max_detect)
        .with_metric("max_correction_bits", agg.max_correction);
    if agg.cases > 0 {
        let (c, y) = case_word(agg.max_total.1);
        outcome = outcome.with_metric("worst_case", format!("{c} -> {y}"));
    }
    Ok(outcome)
}

/// Full transcripts of `p` on every input, indexed like [`InputSpace::word`].
pub fn transcript_table(p: &StaticSchedule, g: &Topology, budgets: &Budgets) -> Result<Vec<BitString>> {
    let space = InputSpace::new(p.n, p.m)?;
    let size = space.ensure_enumerable(budgets.executions)?;
    (0..size)
        .into_par_iter()
        .map(|i| Ok(execute_static(p, g, &space.word(i))?.transcript.concatenated()))
        .collect()
}

/// `|{y ∈ Q^n : h(y) = h(x)}|`.
pub fn collision_count(p: &StaticSchedule, g: &Topology, x: &Word, budgets: &Budgets) -> Result<u64> {
    let space = InputSpace::new(p.n, p.m)?;
    let size = space.ensure_enumerable(budgets.executions)?;
    let hx = execute_static(p, g, x)?.transcript.concatenated();
    (0..size)
        .into_par_iter()
        .map(|i| Ok((execute_static(p, g, &space.word(i))?.transcript.concatenated() == hx) as u64))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionReport {
    /// `(codeword, collision count)` in codeword order.
    pub counts: Vec<(Word, u64)>,
    pub max_count: u64,
    /// First pair of distinct codewords sharing a transcript.
    pub shared: Option<(Word, Word)>,
}

/// Collision counts of every codeword, and whether codeword transcripts
/// are pairwise distinct.
pub fn collision_report(
    p: &StaticSchedule,
    g: &Topology,
    code: &CodeSpec,
    budgets: &Budgets,
) -> Result<CollisionReport> {
    let table = transcript_table(p, g, budgets)?;
    let mut histogram: HashMap<&BitString, u64> = HashMap::new();
    for h in &table {
        *histogram.entry(h).or_default() += 1;
    }
    let space = InputSpace::new(p.n, p.m)?;
    let mut seen: HashMap<&BitString, Word> = HashMap::new();
    let mut counts = Vec::new();
    let mut shared = None;
    for c in code.enumerate(budgets.codewords)? {
        let h = &table[space.index_of(&c) as usize];
        counts.push((c.clone(), histogram[h]));
        if let Some(prev) = seen.get(h) {
            shared.get_or_insert_with(|| (prev.clone(), c.clone()));
        } else {
            seen.insert(h, c);
        }
    }
    let max_count = counts.iter().map(|(_, k)| *k).max().unwrap_or(0);
    Ok(CollisionReport {
        counts,
        max_count,
        shared,
    })
}

/// Every codeword shares its transcript with at most `2^m` inputs, and no
/// two codewords share one.
pub fn collision_check(p: &StaticSchedule, g: &Topology, code: &CodeSpec, budgets: &Budgets) -> Result<CheckOutcome> {
    let report = collision_report(p, g, code, budgets)?;
    let limit = 1u64 << code.m();
    let name = format!("transcript collisions of {}", p.name);
    let outcome = if let Some((c, k)) = report.counts.iter().find(|(_, k)| *k > limit) {
        CheckOutcome::fail(
            name,
            format!("a codeword collides with more than {limit} inputs"),
            format!("codeword {c} shares its transcript with {k} inputs"),
        )
    } else if let Some((a, b)) = &report.shared {
        CheckOutcome::fail(
            name,
            "two codewords share a transcript",
            format!("{a} and {b}\n{}", describe_static(p, g, a, "first codeword")),
        )
    } else {
        CheckOutcome::pass(name, format!("every codeword has at most {limit} collisions; transcripts distinct"))
    };
    Ok(outcome
        .with_metric("codewords", report.counts.len())
        .with_metric("max_collisions", report.max_count))
}

fn cut_key(t: &Transcript, cut: &[Edge]) -> Vec<BitString> {
    cut.iter().map(|&e| t.on_edge(e)).collect()
}

type CutScan = (u64, u64, Option<(u64, u64)>);

/// Per cut: matching pairs, violations and the first violating pair.
fn mixing_scan(
    space: &InputSpace,
    cuts: &[Cut],
    accepted: &[bool],
    transcripts: &[Option<&Transcript>],
) -> Vec<CutScan> {
    cuts.par_iter()
        .map(|cut| {
            let mut groups: BTreeMap<Vec<BitString>, Vec<u64>> = BTreeMap::new();
            for (i, t) in transcripts.iter().enumerate() {
                if let (true, Some(t)) = (accepted[i], t) {
                    groups.entry(cut_key(t, &cut.cut_set)).or_default().push(i as u64);
                }
            }
            let (mut pairs, mut bad, mut first) = (0u64, 0u64, None);
            for members in groups.values() {
                for (a, &xi) in members.iter().enumerate() {
                    for &yi in &members[a + 1..] {
                        pairs += 1;
                        let (x, y) = (space.word(xi), space.word(yi));
                        let xy = space.index_of(&mix_unchecked(&x, &y, cut.side));
                        let yx = space.index_of(&mix_unchecked(&y, &x, cut.side));
                        if !accepted[xy as usize] && !accepted[yx as usize] {
                            bad += 1;
                            first = first.or(Some((xi, yi)));
                        }
                    }
                }
            }
            (pairs, bad, first)
        })
        .collect()
}

/// For each cut and each pair of accepted inputs whose messages across the
/// cut coincide, at least one of the two mixed words must be accepted.
pub fn cut_mixing_check(p: &StaticSchedule, g: &Topology, budgets: &Budgets) -> Result<CheckOutcome> {
    let space = InputSpace::new(p.n, p.m)?;
    let size = space.ensure_enumerable(budgets.executions)?;
    let runs: Vec<(bool, Option<Transcript>)> = (0..size)
        .into_par_iter()
        .map(|i| {
            let run = execute_static(p, g, &space.word(i))?;
            Ok((run.accepted, run.accepted.then_some(run.transcript)))
        })
        .collect::<Result<_>>()?;
    let accepted: Vec<u64> = (0..size).filter(|&i| runs[i as usize].0).collect();
    // Mixing with S and with its complement is the same test.
    let cuts: Vec<_> = g
        .all_cuts(budgets.executions)?
        .into_iter()
        .filter(|c| c.side.contains(1))
        .collect();
    ensure_budget(
        "cuts x accepted pairs",
        cuts.len() as u128 * (accepted.len() as u128).pow(2),
        budgets.executions as u128,
    )?;

    let transcripts: Vec<Option<&Transcript>> = runs.iter().map(|r| r.1.as_ref()).collect();
    let flags: Vec<bool> = runs.iter().map(|r| r.0).collect();
    let per_cut = mixing_scan(&space, &cuts, &flags, &transcripts);
    let pairs: u64 = per_cut.iter().map(|r| r.0).sum();
    let violations: u64 = per_cut.iter().map(|r| r.1).sum();
    let name = format!("cut mixing for {}", p.name);
    let outcome = match per_cut.iter().enumerate().find_map(|(ci, r)| r.2.map(|w| (ci, w))) {
        None => CheckOutcome::pass(name, format!("{pairs} matching pairs over {} cuts, no violations", cuts.len())),
        Some((ci, (xi, yi))) => {
            let (x, y) = (space.word(xi), space.word(yi));
            let side = cuts[ci].side;
            CheckOutcome::fail(
                name,
                format!("{violations} violations"),
                format!(
                    "side {side}: {x} and {y} accepted with equal cut messages, but {} and {} rejected",
                    mix_unchecked(&x, &y, side),
                    mix_unchecked(&y, &x, side)
                ),
            )
        }
    };
    Ok(outcome
        .with_metric("cuts", cuts.len())
        .with_metric("accepted", accepted.len())
        .with_metric("pairs", pairs)
        .with_metric("violations", violations))
}

/// The `n`-partite graph a detection protocol on a cycle induces from the
/// repetition code: part `j` holds the distinct messages seen on the edge
/// from position `j` to `j+1`, labeled by first use over codewords in
/// increasing order.
#[derive(Debug, Clone)]
pub struct InducedF {
    pub f: PartiteGraphF,
    pub layout: CycleLayout,
    /// Bits on edge `j` for the first codeword (static schedules send the
    /// same number of bits on every input).
    pub edge_bits: Vec<usize>,
}

pub fn extract_induced_f(p: &StaticSchedule, g: &Topology, budgets: &Budgets) -> Result<InducedF> {
    let n = g.n();
    if g.edges().len() != n {
        return Err(Error::param("induced F needs a cycle graph"));
    }
    let layout = CycleLayout::of(g, budgets)?;
    let code = CodeSpec::repetition(n, p.m)?;
    let edges: Vec<Edge> = (1..=n)
        .map(|j| Edge::new(layout.vertex(j), layout.vertex(j + 1)))
        .collect();
    let codewords: Vec<Word> = code.enumerate(budgets.codewords)?.collect();
    let per_edge: Vec<Vec<BitString>> = codewords
        .par_iter()
        .map(|c| {
            let t = execute_static(p, g, c)?.transcript;
            Ok(edges.iter().map(|&e| t.on_edge(e)).collect())
        })
        .collect::<Result<_>>()?;
    let mut labels: Vec<HashMap<&BitString, u64>> = vec![HashMap::new(); n];
    let cycles: Vec<Vec<u64>> = per_edge
        .iter()
        .map(|msgs| {
            msgs.iter()
                .enumerate()
                .map(|(j, h)| {
                    let next = labels[j].len() as u64;
                    *labels[j].entry(h).or_insert(next)
                })
                .collect()
        })
        .collect();
    let edge_bits = per_edge.first().map(|m| m.iter().map(BitString::len).collect()).unwrap_or_default();
    Ok(InducedF {
        f: PartiteGraphF::from_cycles(n, p.m, cycles)?,
        layout,
        edge_bits,
    })
}

/// Properties (1) and (2) of the induced graph, the pairwise part-size
/// bound and the per-edge bit bound. With `reference`, also compares the
/// canonical forms.
pub fn induced_f_check(
    p: &StaticSchedule,
    g: &Topology,
    reference: Option<&PartiteGraphF>,
    budgets: &Budgets,
) -> Result<CheckOutcome> {
    let induced = extract_induced_f(p, g, budgets)?;
    let f = &induced.f;
    let props = f.verify_properties(budgets)?;
    let sizes = f.part_sizes();
    let name = format!("induced F of {}", p.name);
    let need = 1u128 << p.m;
    let mut problems = Vec::new();
    if !props.edge_disjoint.holds {
        problems.push(format!("property (1): {}", props.edge_disjoint.detail));
    }
    if !props.unique_cycle_per_edge.holds {
        problems.push(format!("property (2): {}", props.unique_cycle_per_edge.detail));
    }
    for (j, l) in (0..sizes.len()).tuple_combinations() {
        if (sizes[j] as u128) * (sizes[l] as u128) < need {
            problems.push(format!("|I_{}|·|I_{}| = {}·{} < 2^{}", j + 1, l + 1, sizes[j], sizes[l], p.m));
        }
    }
    for (j, (&bits, &size)) in induced.edge_bits.iter().zip(&sizes).enumerate() {
        let lower = bits_for(size as u64);
        if bits < lower {
            problems.push(format!("edge {} carries {bits} bits < ceil(log2 {size}) = {lower}", j + 1));
        }
    }
    if let Some(r) = reference {
        if canonical_form(r.cycles(), r.n()) != f.canonical() {
            problems.push("canonical form differs from the reference F".into());
        }
    }
    let outcome = if problems.is_empty() {
        CheckOutcome::pass(name, "properties (1)(2), part-size and per-edge bounds hold")
    } else {
        CheckOutcome::fail(name, problems[0].clone(), format!("{}\n{}", problems.join("\n"), f.to_text()))
    };
    Ok(outcome
        .with_metric("part_sizes", sizes.iter().join(" "))
        .with_metric("edge_bits", induced.edge_bits.iter().join(" ")))
}

/// A measured normalized cost against every applicable lower bound. The
/// `n − 1` bound only applies when `linear` is set.
pub fn compare_to_bounds(label: &str, measured: &Rational, linear: bool, bounds: &BoundReport) -> CheckOutcome {
    let mut applicable: Vec<(&str, Rational)> = vec![("dimension", bounds.dimension.clone())];
    if let Some(lp) = bounds.lp.value() {
        applicable.push(("lp", lp.value.clone()));
    }
    if let Some(v) = bounds.closed_nkd.value() {
        applicable.push(("closed_nkd", v.clone()));
    }
    if let Some(v) = bounds.mds.value() {
        applicable.push(("mds", v.clone()));
    }
    applicable.push(("combined", bounds.combined.clone()));
    if linear {
        applicable.push(("linear", bounds.linear.clone()));
    }
    let name = format!("bounds vs {label}");
    let violated: Vec<_> = applicable.iter().filter(|(_, b)| measured < b).collect();
    let strongest = bounds.combined.clone();
    let outcome = if violated.is_empty() {
        CheckOutcome::pass(
            name,
            format!("measured {} >= every applicable bound", rational::format(measured)),
        )
    } else {
        let list = violated
            .iter()
            .map(|(k, b)| format!("{k} = {}", rational::format(b)))
            .join(", ");
        CheckOutcome::fail(
            name,
            "measured cost below a lower bound",
            format!("measured {} < {list}", rational::format(measured)),
        )
    };
    outcome
        .with_metric("measured", rational::format(measured))
        .with_metric("combined_bound", rational::format(&strongest))
        .with_metric("slack", rational::format(&(measured - &strongest)))
}
