//! Baselines: forward every symbol to a root, which decides (and, for
//! correction, sends repaired symbols back).

use std::sync::Arc;

use crate::bits::BitString;
use crate::codes::{CodeSpec, Symbol, Word};
use crate::engine::{
    AdaptiveProtocol, BranchInput, DecisionSemantics, LocalView, Round, StaticSchedule,
};
use crate::error::{Error, Result};
use crate::graph::{Topology, Vertex};

/// Root of the forwarding tree.
pub const ROOT: Vertex = 1;

/// Vertices whose symbols reach the root, in the order they arrive.
fn origins(g: &Topology) -> Result<Vec<Vertex>> {
    let tree = g.spanning_tree(ROOT)?;
    Ok(tree.bfs_order.iter().copied().filter(|&v| v != ROOT).collect())
}

/// Rebuilds the input word from the root's view.
fn gathered_word(view: &LocalView, order: &[Vertex], m: u32) -> Option<Word> {
    let mut values = vec![0u64; order.len() + 1];
    values[ROOT - 1] = view.own_input.value();
    let incoming: Vec<&BitString> = view.received.iter().map(|r| &r.bits).collect();
    if incoming.len() < order.len() {
        return None;
    }
    for (&v, bits) in order.iter().zip(incoming) {
        values[v - 1] = bits.to_uint()?;
    }
    Word::new(m, values).ok()
}

/// Each symbol travels hop by hop along the BFS tree to `v_1`, which
/// accepts iff the gathered word is a codeword. Costs `m · Σ depth(v)`.
pub fn trivial_detect(g: &Topology, code: &CodeSpec) -> Result<StaticSchedule> {
    if g.n() != code.n() {
        return Err(Error::param(format!(
            "code length {} does not match graph size {}",
            code.n(),
            g.n()
        )));
    }
    let m = code.m();
    let tree = g.spanning_tree(ROOT)?;
    let order = origins(g)?;
    let mut rounds = Vec::new();
    for &origin in &order {
        let path = tree.path_to_root(origin);
        for hop in path.windows(2) {
            let (from, to) = (hop[0], hop[1]);
            rounds.push(Round::new(from, to, m as usize, move |view: &LocalView| {
                if view.vertex == origin {
                    view.own_input.to_bits()
                } else {
                    view.received.last().expect("relay has a message").bits.clone()
                }
            }));
        }
    }
    let code = Arc::new(code.clone());
    let decide = move |view: &LocalView| {
        gathered_word(view, &order, m).is_some_and(|w| code.contains_unchecked(&w))
    };
    Ok(StaticSchedule {
        name: "trivial-detect".into(),
        n: g.n(),
        m,
        rounds,
        decisions: vec![(ROOT, Arc::new(decide))],
        semantics: DecisionSemantics::Consistent,
    })
}

/// Gather at `v_1`, decode to the nearest codeword and send each corrupted
/// vertex its repaired symbol. Needs `v_1` adjacent to every vertex and
/// `t ≤ ⌊(d−1)/2⌋`.
pub fn trivial_correct(g: &Topology, code: &CodeSpec, t: usize, budget: u64) -> Result<AdaptiveProtocol> {
    if let Some(v) = g.vertices().find(|&v| v != ROOT && !g.has_edge(ROOT, v)) {
        return Err(Error::param(format!("v1 is not adjacent to v{v}")));
    }
    if t > code.correction_radius() {
        return Err(Error::param(format!(
            "t = {t} exceeds the correction radius {} of a distance-{} code",
            code.correction_radius(),
            code.d()
        )));
    }
    // Fail early if decoding would exceed the budget.
    drop(code.enumerate(budget)?);
    let detection = trivial_detect(g, code)?;
    let order = origins(g)?;
    let m = code.m();
    let code = Arc::new(code.clone());

    let repaired = {
        let code = Arc::clone(&code);
        let order = order.clone();
        move |view: &LocalView| -> Option<Word> {
            let w = gathered_word(view, &order, m)?;
            code.nearest_codeword(&w, budget).ok().map(|(c, _)| c)
        }
    };
    let repaired = Arc::new(repaired);

    let continuation = {
        let repaired = Arc::clone(&repaired);
        let order = order.clone();
        move |b: &BranchInput<'_>| -> Vec<Round> {
            let Some(view) = b.coordinator else {
                return Vec::new();
            };
            if b.failed().is_empty() {
                return Vec::new();
            }
            let (Some(w), Some(c)) = (gathered_word(view, &order, m), repaired(view)) else {
                return Vec::new();
            };
            (1..=w.len())
                .filter(|&v| v != ROOT && w.values()[v - 1] != c.values()[v - 1])
                .map(|v| {
                    let repaired = Arc::clone(&repaired);
                    Round::new(ROOT, v, m as usize, move |view: &LocalView| {
                        let c = repaired(view).expect("decoded when scheduled");
                        c.at(v).to_bits()
                    })
                })
                .collect()
        }
    };

    let output = move |view: &LocalView| -> Symbol {
        if view.vertex == ROOT {
            if let Some(c) = repaired(view) {
                return c.at(ROOT);
            }
            return view.own_input;
        }
        match view.last_from(ROOT) {
            Some(bits) => Symbol::from_bits(bits).unwrap_or(view.own_input),
            None => view.own_input,
        }
    };

    Ok(AdaptiveProtocol {
        name: format!("trivial-correct(t={t})"),
        detection,
        coordinator: Some(ROOT),
        continuation: Arc::new(continuation),
        output: Arc::new(output),
    })
}
