//! Detection and single-error correction for the repetition code on a
//! cycle (or on the Hamiltonian cycle of a larger graph).
//!
//! Position `i` of the cycle sends the part-`i` label of its symbol's
//! special cycle to position `i+1`, which compares it with the part-`i`
//! label of its own symbol. A single corrupted position makes one or two
//! consecutive checks fail; one or two extra labels then let the affected
//! vertices recover an edge of the correct special cycle.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::BitString;
use crate::budget::Budgets;
use crate::codes::{bits_for, Symbol};
use crate::engine::{
    AdaptiveProtocol, BranchInput, DecisionFn, DecisionSemantics, LocalView, Round, StaticSchedule,
};
use crate::error::{Error, Result};
use crate::freeset::RangeChoice;
use crate::graph::{Topology, Vertex};
use crate::protocols::partite::{build_f, PartiteGraphF};

/// The order in which a cycle visits the vertices of the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleLayout {
    /// `order[p-1]` is the vertex at position `p`.
    pub order: Vec<Vertex>,
    position: HashMap<Vertex, usize>,
}

impl CycleLayout {
    /// The lexicographically least Hamiltonian cycle of `g`.
    pub fn of(g: &Topology, budgets: &Budgets) -> Result<Self> {
        let order = g
            .hamiltonian_cycle(budgets.hamiltonian_vertices)?
            .ok_or_else(|| Error::param("graph has no Hamiltonian cycle"))?;
        Ok(Self::from_order(order))
    }

    pub fn from_order(order: Vec<Vertex>) -> Self {
        let position = order.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
        CycleLayout { order, position }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Vertex at position `p`, with positions taken cyclically.
    pub fn vertex(&self, p: usize) -> Vertex {
        let n = self.n();
        self.order[(p + n - 1) % n]
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.position[&v]
    }

    /// Position `p + k` reduced into `1..=n` (`k` may be negative).
    pub fn shift(&self, p: usize, k: isize) -> usize {
        let n = self.n() as isize;
        ((p as isize - 1 + k).rem_euclid(n) + 1) as usize
    }
}

/// How a part label is written on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LabelCodec {
    /// Index into the sorted part, `⌈log₂|I_i|⌉` bits.
    PartIndex,
    /// The integer label minus one, in a fixed number of bits.
    RawInteger { width: usize },
}

/// `F` together with the label encoding used by the cycle protocols.
#[derive(Debug, Clone)]
pub struct LabeledF {
    pub f: PartiteGraphF,
    pub codec: LabelCodec,
}

impl LabeledF {
    pub fn new(f: PartiteGraphF, codec: LabelCodec) -> Result<Self> {
        if let LabelCodec::RawInteger { width } = codec {
            let needed = bits_for(f.max_label());
            if width < needed || width > 63 {
                return Err(Error::param(format!(
                    "raw labels up to {} need {needed} bits, codec has {width}",
                    f.max_label()
                )));
            }
        }
        Ok(LabeledF { f, codec })
    }

    /// Bits on the wire for part `i`.
    pub fn width(&self, i: usize) -> usize {
        match self.codec {
            LabelCodec::PartIndex => bits_for(self.f.part(i).len() as u64),
            LabelCodec::RawInteger { width } => width,
        }
    }

    pub fn widths(&self) -> Vec<usize> {
        (1..=self.f.n()).map(|i| self.width(i)).collect()
    }

    /// Part-`i` label of symbol `x`, encoded.
    pub fn encode(&self, x: u64, i: usize) -> BitString {
        let label = self.f.label(x, i);
        match self.codec {
            LabelCodec::PartIndex => {
                let index = self.f.index_in_part(i, label).expect("label of its own part");
                BitString::from_uint(index as u64, self.width(i))
            }
            LabelCodec::RawInteger { width } => BitString::from_uint(label - 1, width),
        }
    }

    /// Inverse of [`LabeledF::encode`]; `None` for strings that name no label.
    pub fn decode(&self, bits: &BitString, i: usize) -> Option<u64> {
        let value = bits.to_uint()?;
        match self.codec {
            LabelCodec::PartIndex => self.f.part(i).get(value as usize).copied(),
            LabelCodec::RawInteger { .. } => Some(value + 1),
        }
    }

    /// Total bits of the detection stage.
    pub fn detection_bits(&self) -> usize {
        self.widths().iter().sum()
    }

    /// Largest correction-stage cost, `max_j (w_j + w_{j+2})`, over the
    /// branch shapes the protocol can take.
    pub fn worst_correction_bits(&self) -> usize {
        let w = self.widths();
        let n = w.len();
        (0..n).map(|j| w[j] + w[(j + 2) % n]).max().unwrap_or(0)
    }
}

fn own_symbol(view: &LocalView) -> u64 {
    view.own_input.value()
}

/// Detection stage: one label per cycle edge, one local check per vertex.
pub fn cycle_detect(lf: &Arc<LabeledF>, layout: &CycleLayout) -> Result<StaticSchedule> {
    let n = lf.f.n();
    if layout.n() != n {
        return Err(Error::param(format!(
            "special-cycle graph has {n} parts, cycle has {} vertices",
            layout.n()
        )));
    }
    let mut rounds = Vec::with_capacity(n);
    for i in 1..=n {
        let lf = Arc::clone(lf);
        rounds.push(Round::new(
            layout.vertex(i),
            layout.vertex(i + 1),
            lf.width(i),
            move |view: &LocalView| lf.encode(own_symbol(view), i),
        ));
    }
    let mut decisions: Vec<(Vertex, DecisionFn)> = Vec::with_capacity(n);
    for p in 1..=n {
        let lf = Arc::clone(lf);
        let part = layout.shift(p, -1);
        let from = layout.vertex(part);
        decisions.push((
            layout.vertex(p),
            Arc::new(move |view: &LocalView| {
                view.first_from(from) == Some(&lf.encode(own_symbol(view), part))
            }),
        ));
    }
    Ok(StaticSchedule {
        name: format!("cycle-detect(n={n})"),
        n,
        m: lf.f.m(),
        rounds,
        decisions,
        semantics: DecisionSemantics::Conjunction,
    })
}

/// Correction rounds for the failure pattern at the given positions.
fn correction_rounds(lf: &Arc<LabeledF>, layout: &CycleLayout, failed: &[usize]) -> Vec<Round> {
    let send = |from_pos: usize, to_pos: usize, part: usize| {
        let lf = Arc::clone(lf);
        Round::new(
            layout.vertex(from_pos),
            layout.vertex(to_pos),
            lf.width(part),
            move |view: &LocalView| lf.encode(own_symbol(view), part),
        )
    };
    match failed {
        // Checks fail at positions j and j+1: v_{j-1} sends part j to v_j.
        [a, b] => {
            let j = if layout.shift(*a, 1) == *b {
                *a
            } else if layout.shift(*b, 1) == *a {
                *b
            } else {
                return Vec::new();
            };
            vec![send(layout.shift(j, -1), j, j)]
        }
        // Only the check at j+1 fails: v_{j-1} sends part j to v_j, then
        // v_{j+2} sends part j+2 to v_{j+1}.
        [single] => {
            let j = layout.shift(*single, -1);
            vec![
                send(layout.shift(j, -1), j, j),
                send(layout.shift(j, 2), layout.shift(j, 1), layout.shift(j, 2)),
            ]
        }
        _ => Vec::new(),
    }
}

/// Detection followed by single-error correction.
pub fn cycle_correct(lf: &Arc<LabeledF>, layout: &CycleLayout) -> Result<AdaptiveProtocol> {
    let detection = cycle_detect(lf, layout)?;
    let n = layout.n();
    let branch_layout = layout.clone();
    let branch_lf = Arc::clone(lf);
    let continuation = move |b: &BranchInput<'_>| {
        let failed: Vec<usize> = b.failed().iter().map(|&v| branch_layout.position(v)).collect();
        correction_rounds(&branch_lf, &branch_layout, &failed)
    };
    let out_layout = layout.clone();
    let out_lf = Arc::clone(lf);
    let m = lf.f.m();
    let output = move |view: &LocalView| -> Symbol {
        let p = out_layout.position(view.vertex);
        let prev = out_layout.vertex(out_layout.shift(p, -1));
        let next = out_layout.vertex(out_layout.shift(p, 1));
        let correction = view.received.iter().find(|r| r.round > n);
        let decoded = correction.and_then(|r| {
            if r.from == prev {
                let left_part = out_layout.shift(p, -1);
                let left = out_lf.decode(view.first_from(prev)?, left_part)?;
                let right = out_lf.decode(&r.bits, p)?;
                out_lf.f.symbol_for_edge(left_part, left, right)
            } else if r.from == next {
                let left = out_lf.f.label(own_symbol(view), p);
                let right = out_lf.decode(&r.bits, out_layout.shift(p, 1))?;
                out_lf.f.symbol_for_edge(p, left, right)
            } else {
                None
            }
        });
        Symbol::new(decoded.unwrap_or(own_symbol(view)), m).expect("symbol of F")
    };
    Ok(AdaptiveProtocol {
        name: format!("cycle-correct(n={n})"),
        detection,
        coordinator: None,
        continuation: Arc::new(continuation),
        output: Arc::new(output),
    })
}

/// Everything needed to run the cycle protocols on a graph.
#[derive(Debug, Clone)]
pub struct CycleProtocols {
    pub labeled: Arc<LabeledF>,
    pub layout: CycleLayout,
    pub range: RangeChoice,
    pub detect: StaticSchedule,
    pub correct: AdaptiveProtocol,
}

/// Cycle protocols on `g` (cycle or Hamiltonian graph) for `m`-bit
/// symbols, labels written as part indices.
pub fn cycle_protocols(g: &Topology, m: u32, budgets: &Budgets) -> Result<CycleProtocols> {
    let layout = CycleLayout::of(g, budgets)?;
    let (f, _, range) = build_f(g.n(), m, budgets)?;
    let labeled = Arc::new(LabeledF::new(f, LabelCodec::PartIndex)?);
    assemble(labeled, layout, range)
}

fn assemble(labeled: Arc<LabeledF>, layout: CycleLayout, range: RangeChoice) -> Result<CycleProtocols> {
    let detect = cycle_detect(&labeled, &layout)?;
    let correct = cycle_correct(&labeled, &layout)?;
    Ok(CycleProtocols {
        labeled,
        layout,
        range,
        detect,
        correct,
    })
}

/// The triangle specialization: labels are the integers
/// `α_i + (i−1)β_i`, written in `⌈log₂(3N)⌉` bits.
pub fn triangle_protocol(m: u32, budgets: &Budgets) -> Result<CycleProtocols> {
    let g = Topology::cycle(3)?;
    let layout = CycleLayout::of(&g, budgets)?;
    let (f, _, range) = build_f(3, m, budgets)?;
    let width = bits_for(3 * range.range);
    let labeled = Arc::new(LabeledF::new(f, LabelCodec::RawInteger { width })?);
    let mut protocols = assemble(labeled, layout, range)?;
    protocols.detect.name = "triangle-detect".into();
    protocols.correct.name = "triangle-correct".into();
    protocols.correct.detection.name = "triangle-detect".into();
    Ok(protocols)
}

/// Bit budget for the triangle protocol: `⌈2.5m⌉ + 24`.
pub fn triangle_bit_budget(m: u32) -> u64 {
    (5 * m as u64).div_ceil(2) + 24
}
