//! Exact lower bounds on the normalized cost of static detection
//! protocols.

pub mod simplex;

use std::fmt::Write as _;

use num::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::budget::Budgets;
use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::graph::{binomial, Edge, Topology, VertexSet};
use crate::rational::{self, Rational};

/// A bound value, or the reason it does not apply.
#[derive(Debug, Clone, PartialEq)]
pub enum Applicability<T> {
    Applicable(T),
    Inapplicable(String),
}

impl<T> Applicability<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Applicability::Applicable(v) => Some(v),
            Applicability::Inapplicable(_) => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, Applicability::Applicable(_))
    }

    fn status(&self) -> String {
        match self {
            Applicability::Applicable(_) => "applicable".into(),
            Applicability::Inapplicable(why) => format!("inapplicable: {why}"),
        }
    }
}

/// `k`, the dimension of the code.
pub fn dimension_bound(code: &CodeSpec) -> Result<Rational> {
    if code.d() < 2 {
        return Err(Error::param("dimension bound needs minimum distance >= 2"));
    }
    Ok(code.dimension())
}

/// Optimal cut weights of the packing LP and the matching edge loads.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub side_size: usize,
    /// `g(S, S̄)` for every side `S` of the required size.
    pub weights: Vec<(VertexSet, Rational)>,
    /// Dual optimum scaled by `k`: `t(e)` with `Σ_{e ∈ cut} t(e) ≥ k`.
    pub edge_loads: Vec<(Edge, Rational)>,
}

fn lp_precondition(n: usize, d: usize) -> Option<String> {
    if d < 2 {
        Some(format!("d = {d} < 2"))
    } else if n > 2 * (d - 1) {
        Some(format!("n = {n} > 2(d-1) = {}", 2 * (d - 1)))
    } else if d > n {
        Some(format!("d = {d} > n = {n}"))
    } else {
        None
    }
}

/// `max k·Σ g(S)` over sides `|S| = n−d+1`, with `Σ_{S : e ∈ cut(S)} g(S) ≤ 1`
/// for every edge, solved exactly.
pub fn lp_bound(g: &Topology, k: &Rational, d: usize, cut_budget: u64) -> Result<Applicability<LpSolution>> {
    let n = g.n();
    if let Some(why) = lp_precondition(n, d) {
        return Ok(Applicability::Inapplicable(why));
    }
    let side_size = n - d + 1;
    let cuts = g.cuts_of_size(side_size, cut_budget)?;
    let edges = g.edges();
    let a: Vec<Vec<Rational>> = edges
        .iter()
        .map(|e| {
            cuts.iter()
                .map(|c| {
                    if c.cut_set.contains(e) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let b = vec![Rational::one(); edges.len()];
    let c = vec![Rational::one(); cuts.len()];
    let opt = simplex::maximize(&a, &b, &c)?;
    Ok(Applicability::Applicable(LpSolution {
        value: k * &opt.value,
        side_size,
        weights: cuts.iter().map(|c| c.side).zip(opt.primal).collect(),
        edge_loads: edges.iter().copied().zip(opt.dual.iter().map(|y| k * y)).collect(),
    }))
}

/// `k n (n−1) / (2 (n−d+1)(d−1))`, valid for `n ≤ 2(d−1)`.
pub fn closed_nkd(n: usize, k: &Rational, d: usize) -> Applicability<Rational> {
    if let Some(why) = lp_precondition(n, d) {
        return Applicability::Inapplicable(why);
    }
    let num = k * Rational::from_integer(((n * (n - 1)) as i64).into());
    let den = Rational::from_integer(((2 * (n - d + 1) * (d - 1)) as i64).into());
    Applicability::Applicable(num / den)
}

/// Uniform feasible weight from the closed form: `1 / (2·C(n−2, n−d))`.
pub fn uniform_weight(n: usize, d: usize) -> Rational {
    Rational::new(1.into(), ((2 * binomial(n - 2, n - d)) as i64).into())
}

/// `n (n−1) / (2 (n−k))` for MDS codes with `n ≥ 2k`.
pub fn mds_bound(n: usize, k: usize) -> Applicability<Rational> {
    if k == 0 || k >= n {
        return Applicability::Inapplicable(format!("k = {k} outside 1..n"));
    }
    if n < 2 * k {
        return Applicability::Inapplicable(format!("n = {n} < 2k = {}", 2 * k));
    }
    Applicability::Applicable(rational::ratio((n * (n - 1)) as i64, (2 * (n - k)) as i64))
}

/// `max{k, n(n−1)/(2(n−k))}`, the second term only when `n ≥ 2k`.
pub fn combined_bound(n: usize, k: usize) -> Rational {
    let dim = rational::int(k as i64);
    match mds_bound(n, k) {
        Applicability::Applicable(v) if v > dim => v,
        _ => dim,
    }
}

/// `n − 1`; binds linear static protocols only.
pub fn linear_bound(n: usize) -> Rational {
    rational::int(n as i64 - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub dimension: Rational,
    pub lp: Applicability<LpSolution>,
    pub closed_nkd: Applicability<Rational>,
    pub mds: Applicability<Rational>,
    /// Largest applicable bound among dimension, LP, closed form and MDS.
    pub combined: Rational,
    pub linear: Rational,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub bound: String,
    pub value: Option<String>,
    pub applicability: String,
}

fn is_cycle(g: &Topology) -> bool {
    g.n() >= 3 && g.edges().len() == g.n() && g.vertices().all(|v| g.neighbors(v).len() == 2)
}

impl BoundReport {
    pub fn compute(g: &Topology, code: &CodeSpec, budgets: &Budgets) -> Result<Self> {
        if g.n() != code.n() {
            return Err(Error::param(format!(
                "code length {} does not match graph size {}",
                code.n(),
                g.n()
            )));
        }
        let mut report = Self::from_params(g, &dimension_bound(code)?, code.d(), budgets)?;
        if !code.dimension_is_exact() {
            report.notes.insert(
                0,
                format!("|C| is not a power of two; k uses ceil(log2 |C|) = {} bits", code.size_bits()),
            );
        }
        Ok(report)
    }

    /// Bounds for any `(n, k, d)` code on `g`, with `n = |V(g)|`.
    pub fn from_params(g: &Topology, k: &Rational, d: usize, budgets: &Budgets) -> Result<Self> {
        let n = g.n();
        if d < 2 || d > n {
            return Err(Error::param(format!("minimum distance must be in 2..={n}, got {d}")));
        }
        if *k <= Rational::zero() {
            return Err(Error::param("dimension must be positive"));
        }
        let lp = lp_bound(g, k, d, budgets.lp_cuts)?;
        let closed = closed_nkd(n, k, d);
        let mds = if !k.is_integer() {
            Applicability::Inapplicable("dimension is not an integer".into())
        } else {
            let ki: usize = k.to_integer().try_into().unwrap_or(usize::MAX);
            if ki + d == n + 1 {
                mds_bound(n, ki)
            } else {
                Applicability::Inapplicable(format!("d = {d} != n-k+1"))
            }
        };
        let mut combined = k.clone();
        for v in [lp.value().map(|s| &s.value), closed.value(), mds.value()].into_iter().flatten() {
            if *v > combined {
                combined = v.clone();
            }
        }
        let mut notes = Vec::new();
        if is_cycle(g) && k.is_one() && d == n {
            notes.push("cycle with the repetition code: the true cost is > n/2, unquantified".into());
        }
        Ok(BoundReport {
            n,
            dimension: k.clone(),
            lp,
            closed_nkd: closed,
            mds,
            combined,
            linear: linear_bound(n),
            notes,
        })
    }

    pub fn rows(&self) -> Vec<BoundRow> {
        let row = |bound: &str, value: Option<&Rational>, applicability: String| BoundRow {
            bound: bound.into(),
            value: value.map(rational::format),
            applicability,
        };
        vec![
            row("dimension", Some(&self.dimension), "applicable".into()),
            row("lp", self.lp.value().map(|s| &s.value), self.lp.status()),
            row("closed_nkd", self.closed_nkd.value(), self.closed_nkd.status()),
            row("mds", self.mds.value(), self.mds.status()),
            row("combined", Some(&self.combined), "applicable".into()),
            row("linear", Some(&self.linear), "linear static protocols only".into()),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bound,value,applicability\n");
        for r in self.rows() {
            let _ = writeln!(
                out,
                "{},{},{}",
                r.bound,
                r.value.unwrap_or_default(),
                csv_field(&r.applicability)
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let rows = self.rows();
        let width = rows.iter().map(|r| r.value.as_deref().unwrap_or("-").len()).max().unwrap_or(1);
        let mut out = String::new();
        for r in &rows {
            let _ = writeln!(
                out,
                "{:<11} {:>width$}  {}",
                r.bound,
                r.value.as_deref().unwrap_or("-"),
                r.applicability
            );
        }
        if let Some(lp) = self.lp.value() {
            let _ = writeln!(out, "lp cut weights (|S| = {}):", lp.side_size);
            for (side, w) in lp.weights.iter().filter(|(_, w)| !w.is_zero()) {
                let _ = writeln!(out, "  g{side} = {}", rational::format(w));
            }
            let _ = writeln!(out, "lp edge loads:");
            for (e, t) in &lp.edge_loads {
                let _ = writeln!(out, "  t({e}) = {}", rational::format(t));
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let lp = self.lp.value().map(|lp| {
            json!({
                "side_size": lp.side_size,
                "weights": lp.weights.iter().map(|(s, w)| json!({
                    "side": s.iter().collect::<Vec<_>>(),
                    "weight": rational::format(w),
                })).collect::<Vec<_>>(),
                "edge_loads": lp.edge_loads.iter().map(|(e, t)| json!({
                    "edge": [e.0, e.1],
                    "load": rational::format(t),
                })).collect::<Vec<_>>(),
            })
        });
        json!({
            "bounds": self.rows(),
            "lp_solution": lp,
            "notes": self.notes,
        })
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    const CUTS: u64 = 1 << 16;

    fn lp_value(g: &Topology, k: i64, d: usize) -> Rational {
        lp_bound(g, &int(k), d, CUTS).unwrap().value().unwrap().value.clone()
    }

    #[test]
    fn repetition_on_cycles_and_cliques() {
        for n in 3..=8 {
            assert_eq!(lp_value(&Topology::cycle(n).unwrap(), 1, n), ratio(n as i64, 2));
        }
        for n in 3..=6 {
            assert_eq!(lp_value(&Topology::complete(n).unwrap(), 1, n), ratio(n as i64, 2));
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_nkd(4, &int(2), 3), Applicability::Applicable(int(3)));
        assert_eq!(mds_bound(4, 2), Applicability::Applicable(int(3)));
        assert_eq!(mds_bound(6, 2), Applicability::Applicable(ratio(15, 4)));
        assert_eq!(closed_nkd(6, &int(2), 5), Applicability::Applicable(ratio(15, 4)));
        assert_eq!(mds_bound(8, 4), Applicability::Applicable(int(7)));
        assert!(!mds_bound(3, 2).is_applicable());
        assert_eq!(combined_bound(3, 2), int(2));
        assert_eq!(combined_bound(4, 2), int(3));
        assert_eq!(combined_bound(10, 1), int(5));
        assert_eq!(linear_bound(3), int(2));
        for n in 3..=9 {
            assert_eq!(closed_nkd(n, &int(1), n).value(), Some(&ratio(n as i64, 2)));
        }
        assert!(!closed_nkd(5, &int(3), 2).is_applicable());
    }

    #[test]
    fn k4_mds_instance() {
        let k4 = Topology::complete(4).unwrap();
        assert_eq!(lp_value(&k4, 2, 3), int(3));
    }

    #[test]
    fn lp_dominates_closed_form_and_duality_holds() {
        let graphs = [
            Topology::cycle(5).unwrap(),
            Topology::complete(5).unwrap(),
            Topology::path(4).unwrap(),
            Topology::star(5).unwrap(),
            Topology::complete(6).unwrap(),
        ];
        for g in &graphs {
            let n = g.n();
            for d in 2..=n {
                let k = int(1);
                let lp = lp_bound(g, &k, d, CUTS).unwrap();
                let closed = closed_nkd(n, &k, d);
                assert_eq!(lp.is_applicable(), closed.is_applicable());
                let (Some(lp), Some(closed)) = (lp.value(), closed.value()) else {
                    continue;
                };
                assert!(lp.value >= *closed);
                let total: Rational = lp.edge_loads.iter().map(|(_, t)| t.clone()).sum();
                assert_eq!(total, lp.value);
                for cut in g.cuts_of_size(lp.side_size, CUTS).unwrap() {
                    let load: Rational = lp
                        .edge_loads
                        .iter()
                        .filter(|(e, _)| cut.cut_set.contains(e))
                        .map(|(_, t)| t.clone())
                        .sum();
                    assert!(load >= k);
                }
                // The uniform weight is feasible.
                let w = uniform_weight(n, d);
                for e in g.edges() {
                    let count = g
                        .cuts_of_size(lp.side_size, CUTS)
                        .unwrap()
                        .iter()
                        .filter(|c| c.cut_set.contains(e))
                        .count();
                    assert!(&w * int(count as i64) <= int(1));
                }
            }
        }
    }

    #[test]
    fn report_rows() {
        let g = Topology::complete(4).unwrap();
        let code = CodeSpec::mds(4, 2, 2, 1 << 20).unwrap();
        let report = BoundReport::compute(&g, &code, &Budgets::default()).unwrap();
        assert_eq!(report.combined, int(3));
        let csv = report.to_csv();
        assert!(csv.starts_with("bound,value,applicability\n"));
        assert!(csv.contains("lp,3,applicable"));
        assert!(csv.contains("mds,3,applicable"));
        assert!(csv.contains("linear,3,linear static protocols only"));

        let parity = CodeSpec::parity_check(4, 2).unwrap();
        let report = BoundReport::compute(&g, &parity, &Budgets::default()).unwrap();
        assert_eq!(report.dimension, int(3));
        assert!(!report.lp.is_applicable());
        assert_eq!(report.combined, int(3));

        let c5 = Topology::cycle(5).unwrap();
        let rep = CodeSpec::repetition(5, 2).unwrap();
        let report = BoundReport::compute(&c5, &rep, &Budgets::default()).unwrap();
        assert_eq!(report.combined, ratio(5, 2));
        assert_eq!(report.notes.len(), 1);
        assert!(report.to_text().contains("t(v1-v2) = 1/2"));
    }
}
