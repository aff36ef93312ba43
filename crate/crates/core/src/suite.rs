//! The full verification suite: every protocol, construction and bound
//! checked exhaustively at desk scale.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;

use crate::bounds::{closed_nkd, dimension_bound, lp_bound, mds_bound, Applicability, BoundReport};
use crate::budget::Budgets;
use crate::codes::{bits_for, CodeSpec, Word};
use crate::engine::{execute_adaptive, is_linear, LinearityMode};
use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::protocols::trivial::ROOT;
use crate::protocols::{
    build_f, cycle_protocols, parity_protocol, triangle_bit_budget, triangle_protocol, trivial_correct,
    trivial_detect,
};
use crate::rational::{self, int, ratio, Rational};
use crate::verify::{
    collision_check, compare_to_bounds, cut_mixing_check, exhaustive_correct_check, exhaustive_detect_check,
    induced_f_check, CheckOutcome,
};

/// Deliberate faults for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mutation {
    /// Remove the local check of `v1` from the triangle detection stage.
    DropTriangleCheck,
}

impl std::str::FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drop-triangle-check" => Ok(Mutation::DropTriangleCheck),
            other => Err(Error::param(format!("unknown mutation {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub budgets: Budgets,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub mutation: Option<Mutation>,
    /// Criteria to run (1..=9); `None` runs all.
    pub only: Option<Vec<u32>>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            budgets: Budgets::default(),
            threads: None,
            mutation: None,
            only: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl Criterion {
    fn new(id: u32, title: &str, checks: Vec<CheckOutcome>) -> Self {
        Criterion {
            id,
            title: title.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub criteria: Vec<Criterion>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let _ = writeln!(out, "[{}] criterion {}: {}", verdict(c.passed), c.id, c.title);
            for check in &c.checks {
                let _ = writeln!(out, "  {} {}: {}", verdict(check.passed), check.name, check.detail);
                for (k, v) in &check.metrics {
                    let _ = writeln!(out, "      {k} = {v}");
                }
                if let Some(cx) = &check.counterexample {
                    for line in cx.lines() {
                        let _ = writeln!(out, "      | {line}");
                    }
                }
            }
        }
        let _ = writeln!(out, "overall: {}", verdict(self.passed()));
        out
    }

    /// One row per check: `criterion,check,passed,detail`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("criterion,check,passed,detail\n");
        for c in &self.criteria {
            for check in &c.checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    c.id,
                    csv_field(&check.name),
                    check.passed,
                    csv_field(&check.detail)
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "criteria": self.criteria,
        })
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn expect(name: String, ok: bool, detail: String, counterexample: impl FnOnce() -> String) -> CheckOutcome {
    if ok {
        CheckOutcome::pass(name, detail)
    } else {
        CheckOutcome::fail(name, detail, counterexample())
    }
}

/// Runs the selected criteria on a pool of `config.threads` workers.
pub fn verify_all(config: &SuiteConfig) -> Result<SuiteReport> {
    let run = || -> Result<SuiteReport> {
        let selected = |id: u32| config.only.as_ref().is_none_or(|ids| ids.contains(&id));
        let b = &config.budgets;
        let mut criteria = Vec::new();
        let runners: [(u32, &dyn Fn() -> Result<Criterion>); 9] = [
            (1, &|| triangle_criterion(b, config.mutation)),
            (2, &|| cycle_criterion(b)),
            (3, &|| parity_criterion(b)),
            (4, &|| bounds_criterion(b)),
            (5, &|| collision_criterion(b)),
            (6, &|| mixing_criterion(b)),
            (7, &|| induced_criterion(b)),
            (8, &|| linearity_criterion(b)),
            (9, &|| trivial_correction_criterion(b)),
        ];
        for (id, runner) in runners {
            if selected(id) {
                criteria.push(runner()?);
            }
        }
        Ok(SuiteReport { criteria })
    };
    match config.threads {
        None => run(),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::param(format!("cannot build a pool of {threads} threads: {e}")))?
            .install(run),
    }
}

/// Triangle protocol for `m = 2..=6`: exhaustive detection and single-error
/// correction, exact detection cost, total within `⌈2.5m⌉ + 24`.
pub fn triangle_criterion(b: &Budgets, mutation: Option<Mutation>) -> Result<Criterion> {
    let g = Topology::cycle(3)?;
    let mut checks = Vec::new();
    for m in 2..=6 {
        let tri = triangle_protocol(m, b)?;
        let code = CodeSpec::repetition(3, m)?;
        let detect = match mutation {
            Some(Mutation::DropTriangleCheck) => tri.detect.without_decision(1),
            None => tri.detect.clone(),
        };
        let d = exhaustive_detect_check(&detect, &g, &code, b)?;
        let expected = 3 * bits_for(3 * tri.range.range) as u64;
        let measured = d.metric_u64("max_bits").unwrap_or(0);
        checks.push(d);
        checks.push(expect(
            format!("triangle m={m} detection cost"),
            measured == expected,
            format!("{measured} bits, expected 3*ceil(log2(3*{})) = {expected}", tri.range.range),
            || format!("measured {measured}"),
        ));
        let c = exhaustive_correct_check(&tri.correct, &g, &code, 1, b)?;
        let worst = c.metric_u64("max_total_bits").unwrap_or(u64::MAX);
        checks.push(c);
        let limit = triangle_bit_budget(m);
        checks.push(
            expect(
                format!("triangle m={m} total cost"),
                worst <= limit,
                format!("worst {worst} bits <= ceil(2.5m)+24 = {limit}"),
                || format!("worst case {worst} bits"),
            )
            .with_metric("measured_worst_bits", worst),
        );
        if m == 6 {
            let bounds = BoundReport::compute(&g, &code, b)?;
            checks.push(compare_to_bounds(
                "triangle detection m=6",
                &ratio(measured as i64, m as i64),
                false,
                &bounds,
            ));
        }
    }
    Ok(Criterion::new(1, "triangle protocol", checks))
}

const F_SIZES: [(usize, u32); 3] = [(3, 8), (4, 6), (5, 4)];
const CYCLE_SIZES: [(usize, u32); 3] = [(3, 6), (4, 4), (5, 3)];

/// `F` properties, and the cycle protocols with their worst-case cost.
pub fn cycle_criterion(b: &Budgets) -> Result<Criterion> {
    let mut checks = Vec::new();
    for (n, max_m) in F_SIZES {
        for m in 1..=max_m {
            let (f, _, _) = build_f(n, m, b)?;
            let props = f.verify_properties(b)?;
            checks.push(expect(
                format!("F(n={n}, m={m}) properties"),
                props.all_hold(),
                format!(
                    "(1) {} / (2) {} / (3) {}",
                    props.edge_disjoint.holds, props.unique_cycle_per_edge.holds, props.cycle_count.holds
                ),
                || {
                    format!(
                        "{}\n{}\n{}",
                        props.edge_disjoint.detail, props.unique_cycle_per_edge.detail, props.cycle_count.detail
                    )
                },
            ));
        }
    }
    for (n, max_m) in CYCLE_SIZES {
        let g = Topology::cycle(n)?;
        for m in 1..=max_m {
            let cp = cycle_protocols(&g, m, b)?;
            let code = CodeSpec::repetition(n, m)?;
            checks.push(exhaustive_detect_check(&cp.detect, &g, &code, b)?);
            let c = exhaustive_correct_check(&cp.correct, &g, &code, 1, b)?;
            let worst = c.metric_u64("max_total_bits").unwrap_or(u64::MAX) as usize;
            checks.push(c);
            let w = cp.labeled.widths();
            let sum: usize = w.iter().sum();
            let bound = sum + 2 * w.iter().max().copied().unwrap_or(0);
            let branch = sum + cp.labeled.worst_correction_bits();
            checks.push(expect(
                format!("cycle n={n} m={m} cost"),
                worst <= bound && worst == branch,
                format!("worst {worst} bits; widths {} give bound {bound}, worst branch {branch}", w.iter().join("+")),
                || format!("worst {worst}, bound {bound}, branch {branch}"),
            ));
        }
    }
    Ok(Criterion::new(2, "cycle protocols and F", checks))
}

/// XOR aggregation: exact cost, exhaustive detection, linearity.
pub fn parity_criterion(b: &Budgets) -> Result<Criterion> {
    let mut checks = Vec::new();
    for name in ["cycle:4", "complete:4", "path:5", "complete:5"] {
        let g = Topology::builtin(name)?;
        let n = g.n();
        for m in 1..=3 {
            let p = parity_protocol(&g, m)?;
            let code = CodeSpec::parity_check(n, m)?;
            let d = exhaustive_detect_check(&p, &g, &code, b)?;
            let (lo, hi) = (d.metric_u64("min_bits"), d.metric_u64("max_bits"));
            let want = ((n - 1) * m as usize) as u64;
            checks.push(d);
            checks.push(expect(
                format!("parity {name} m={m} cost"),
                lo == Some(want) && hi == Some(want),
                format!("{want} bits on every input"),
                || format!("min {lo:?}, max {hi:?}"),
            ));
            let lin = is_linear(&p, &g, LinearityMode::Exhaustive { budget: b.executions })?;
            checks.push(expect(
                format!("parity {name} m={m} linear"),
                lin.linear,
                format!("additive on all {} inputs", lin.tested),
                || format!("{:?}", lin.witness),
            ));
        }
    }
    Ok(Criterion::new(3, "parity protocol", checks))
}

fn applicable_value<T: Clone>(a: &Applicability<T>) -> Option<T> {
    a.value().cloned()
}

/// Exact bound values.
pub fn bounds_criterion(b: &Budgets) -> Result<Criterion> {
    let mut checks = Vec::new();
    let mut equal = |name: String, got: Option<Rational>, want: Rational| {
        let shown = got.as_ref().map(rational::format).unwrap_or_else(|| "inapplicable".into());
        checks.push(expect(
            name,
            got.as_ref() == Some(&want),
            format!("{shown} (expected {})", rational::format(&want)),
            || format!("got {shown}"),
        ));
    };
    for n in 3..=8 {
        let g = Topology::cycle(n)?;
        let lp = lp_bound(&g, &int(1), n, b.lp_cuts)?;
        equal(format!("lp(C_{n}, Rep)"), lp.value().map(|s| s.value.clone()), ratio(n as i64, 2));
    }
    for n in 3..=6 {
        let g = Topology::complete(n)?;
        let lp = lp_bound(&g, &int(1), n, b.lp_cuts)?;
        equal(format!("lp(K_{n}, Rep)"), lp.value().map(|s| s.value.clone()), ratio(n as i64, 2));
    }
    equal("closed_nkd(4,2,3)".into(), applicable_value(&closed_nkd(4, &int(2), 3)), int(3));
    equal("mds_bound(4,2)".into(), applicable_value(&mds_bound(4, 2)), int(3));
    for n in 3..=8 {
        let code = CodeSpec::parity_check(n, 2)?;
        equal(format!("dimension(ParityCheck({n}))"), Some(dimension_bound(&code)?), int(n as i64 - 1));
    }

    let mut instances = 0;
    let mut worst: Option<String> = None;
    for name in ["cycle:4", "cycle:5", "cycle:6", "complete:4", "complete:5", "complete:6", "path:4", "path:5", "star:5", "star:6"] {
        let g = Topology::builtin(name)?;
        let n = g.n();
        for d in 2..=n {
            for k in [int(1), int(2), ratio(3, 2)] {
                let lp = lp_bound(&g, &k, d, b.lp_cuts)?;
                let closed = closed_nkd(n, &k, d);
                if let (Some(lp), Some(closed)) = (lp.value(), closed.value()) {
                    instances += 1;
                    if lp.value < *closed && worst.is_none() {
                        worst = Some(format!(
                            "{name}, k={}, d={d}: lp {} < closed {}",
                            rational::format(&k),
                            rational::format(&lp.value),
                            rational::format(closed)
                        ));
                    }
                }
            }
        }
    }
    checks.push(expect(
        "lp >= closed_nkd".into(),
        worst.is_none(),
        format!("{instances} applicable instances"),
        || worst.clone().unwrap_or_default(),
    ));
    Ok(Criterion::new(4, "lower bounds", checks))
}

/// Transcript collisions of the triangle detection stage.
pub fn collision_criterion(b: &Budgets) -> Result<Criterion> {
    let g = Topology::cycle(3)?;
    let mut checks = Vec::new();
    for m in 1..=4 {
        let tri = triangle_protocol(m, b)?;
        let mut check = collision_check(&tri.detect, &g, &CodeSpec::repetition(3, m)?, b)?;
        check.name = format!("{} m={m}", check.name);
        checks.push(check);
    }
    Ok(Criterion::new(5, "transcript collisions", checks))
}

/// Cut mixing for XOR aggregation and triangle detection.
pub fn mixing_criterion(b: &Budgets) -> Result<Criterion> {
    let g = Topology::cycle(3)?;
    let mut checks = vec![
        cut_mixing_check(&parity_protocol(&g, 2)?, &g, b)?,
        cut_mixing_check(&triangle_protocol(3, b)?.detect, &g, b)?,
    ];
    checks[0].name.push_str(" n=3 m=2");
    checks[1].name.push_str(" m=3");
    Ok(Criterion::new(6, "cut mixing", checks))
}

/// Induced `F` of verified detection protocols on the triangle and `C_4`.
pub fn induced_criterion(b: &Budgets) -> Result<Criterion> {
    let mut checks = Vec::new();
    let triangle = Topology::cycle(3)?;
    for m in 1..=4 {
        let tri = triangle_protocol(m, b)?;
        let mut check = induced_f_check(&tri.detect, &triangle, Some(&tri.labeled.f), b)?;
        check.name = format!("{} m={m}", check.name);
        checks.push(check);
    }
    let c4 = Topology::cycle(4)?;
    for m in 1..=4 {
        let cp = cycle_protocols(&c4, m, b)?;
        let mut check = induced_f_check(&cp.detect, &c4, Some(&cp.labeled.f), b)?;
        check.name = format!("{} n=4 m={m}", check.name);
        checks.push(check);
    }
    Ok(Criterion::new(7, "induced partite graph", checks))
}

/// Linearity of triangle detection, forwarding and XOR aggregation.
pub fn linearity_criterion(b: &Budgets) -> Result<Criterion> {
    let mode = LinearityMode::Exhaustive { budget: b.executions };
    let mut checks = Vec::new();
    let triangle = Topology::cycle(3)?;
    let tri = triangle_protocol(4, b)?;
    let lin = is_linear(&tri.detect, &triangle, mode)?;
    checks.push(expect(
        "triangle detection m=4 is not linear".into(),
        !lin.linear,
        match &lin.witness {
            Some((a, c)) => format!("additivity fails on {a} and {c}"),
            None => "additive on every input".into(),
        },
        || "no additivity witness".into(),
    ));
    for n in [3, 4] {
        let g = Topology::complete(n)?;
        let m = 2;
        let rep = CodeSpec::repetition(n, m)?;
        let bounds = BoundReport::compute(&g, &rep, b)?;
        let forward = trivial_detect(&g, &rep)?;
        let parity = parity_protocol(&g, m)?;
        let parity_bounds = BoundReport::compute(&g, &CodeSpec::parity_check(n, m)?, b)?;
        for (p, bounds) in [(&forward, &bounds), (&parity, &parity_bounds)] {
            let lin = is_linear(p, &g, mode)?;
            let cost = ratio(p.total_bits() as i64, m as i64);
            checks.push(expect(
                format!("{} on K_{n} linear with cost n-1", p.name),
                lin.linear && cost == int(n as i64 - 1),
                format!("linear = {}, normalized cost {}", lin.linear, rational::format(&cost)),
                || format!("{:?}", lin.witness),
            ));
            checks.push(compare_to_bounds(&format!("{} on K_{n}", p.name), &cost, true, bounds));
        }
    }
    Ok(Criterion::new(8, "linearity", checks))
}

/// Forward-to-root correction on `K_3` and `K_4`: every single error is
/// repaired, with one extra message when the error is away from the root.
pub fn trivial_correction_criterion(b: &Budgets) -> Result<Criterion> {
    let mut checks = Vec::new();
    let m = 2;
    for n in [3, 4] {
        let g = Topology::complete(n)?;
        let code = CodeSpec::repetition(n, m)?;
        let p = trivial_correct(&g, &code, 1, b.codewords)?;
        checks.push(exhaustive_correct_check(&p, &g, &code, 1, b)?);
        let mut bad: Option<String> = None;
        let mut cases = 0u64;
        for c in code.enumerate(b.codewords)? {
            for v in 0..=n {
                for delta in 1..(1u64 << m) {
                    let y: Word = if v == 0 { c.clone() } else { c.with_symbol(v, c.values()[v - 1] ^ delta) };
                    let i = usize::from(v != 0 && v != ROOT);
                    let want = (n - 1 + i) * m as usize;
                    let got = execute_adaptive(&p, &g, &y)?.transcript.total_bits();
                    cases += 1;
                    if got != want && bad.is_none() {
                        bad = Some(format!("input {y}: {got} bits, expected {want}"));
                    }
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        checks.push(expect(
            format!("trivial correction K_{n} cost"),
            bad.is_none(),
            format!("{cases} inputs cost (n-1+i)m bits"),
            || bad.clone().unwrap_or_default(),
        ));
    }
    Ok(Criterion::new(9, "trivial correction", checks))
}
