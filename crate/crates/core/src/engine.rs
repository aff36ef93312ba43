//! Round-by-round protocol execution.
//!
//! A protocol is a fixed list of rounds; in each round one vertex sends a
//! bit string of predetermined length to a neighbour. The message is a
//! function of the sender's [`LocalView`] only. Adaptive protocols append a
//! continuation that is selected after a static detection stage.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::codes::{InputSpace, Symbol, Word};
use crate::error::{Error, Result};
use crate::graph::{Edge, Topology, Vertex};
use crate::rational::Rational;

/// One incoming message as seen by its receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Received {
    pub round: usize,
    pub from: Vertex,
    pub bits: BitString,
}

/// Everything a vertex knows: its own symbol and what it has received.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalView {
    pub vertex: Vertex,
    pub own_input: Symbol,
    pub received: Vec<Received>,
}

impl LocalView {
    pub fn new(vertex: Vertex, own_input: Symbol) -> Self {
        LocalView {
            vertex,
            own_input,
            received: Vec::new(),
        }
    }

    /// Messages from `from`, oldest first.
    pub fn from_vertex(&self, from: Vertex) -> impl Iterator<Item = &Received> + '_ {
        self.received.iter().filter(move |r| r.from == from)
    }

    pub fn first_from(&self, from: Vertex) -> Option<&BitString> {
        self.from_vertex(from).next().map(|r| &r.bits)
    }

    pub fn last_from(&self, from: Vertex) -> Option<&BitString> {
        self.from_vertex(from).last().map(|r| &r.bits)
    }
}

pub type MessageFn = Arc<dyn Fn(&LocalView) -> BitString + Send + Sync>;
pub type DecisionFn = Arc<dyn Fn(&LocalView) -> bool + Send + Sync>;
pub type OutputFn = Arc<dyn Fn(&LocalView) -> Symbol + Send + Sync>;
pub type ContinuationFn = Arc<dyn Fn(&BranchInput<'_>) -> Vec<Round> + Send + Sync>;

#[derive(Clone)]
pub struct Round {
    pub sender: Vertex,
    pub receiver: Vertex,
    pub bit_len: usize,
    pub message: MessageFn,
}

impl Round {
    pub fn new(
        sender: Vertex,
        receiver: Vertex,
        bit_len: usize,
        message: impl Fn(&LocalView) -> BitString + Send + Sync + 'static,
    ) -> Self {
        Round {
            sender,
            receiver,
            bit_len,
            message: Arc::new(message),
        }
    }
}

impl fmt::Debug for Round {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Round(v{}->v{}, {} bits)", self.sender, self.receiver, self.bit_len)
    }
}

/// How the verdicts of several decision vertices combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionSemantics {
    /// Every decision vertex must reach the same verdict; disagreement is a
    /// protocol fault.
    Consistent,
    /// Each decision vertex checks one local condition; the input is
    /// accepted iff every check passes.
    Conjunction,
}

#[derive(Clone)]
pub struct StaticSchedule {
    pub name: String,
    pub n: usize,
    pub m: u32,
    pub rounds: Vec<Round>,
    pub decisions: Vec<(Vertex, DecisionFn)>,
    pub semantics: DecisionSemantics,
}

impl fmt::Debug for StaticSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StaticSchedule")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("m", &self.m)
            .field("rounds", &self.rounds)
            .field(
                "decision_vertices",
                &self.decisions.iter().map(|d| d.0).collect::<Vec<_>>(),
            )
            .field("semantics", &self.semantics)
            .finish()
    }
}

impl StaticSchedule {
    pub fn total_bits(&self) -> usize {
        self.rounds.iter().map(|r| r.bit_len).sum()
    }

    pub fn decision_vertices(&self) -> Vec<Vertex> {
        self.decisions.iter().map(|d| d.0).collect()
    }

    /// Checks the schedule against `g`: adjacency of every round and at
    /// least one decision vertex.
    pub fn validate(&self, g: &Topology) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::param(format!(
                "protocol {} is built for n = {}, graph has {}",
                self.name,
                self.n,
                g.n()
            )));
        }
        check_rounds(&self.rounds, g)?;
        if self.decisions.is_empty() {
            return Err(Error::fault(format!("protocol {} has no decision vertex", self.name)));
        }
        if let Some((v, _)) = self.decisions.iter().find(|(v, _)| *v == 0 || *v > self.n) {
            return Err(Error::fault(format!("decision vertex v{v} is not in the graph")));
        }
        Ok(())
    }

    /// Copy with the decision rule of `vertex` replaced (added if absent).
    pub fn with_decision(&self, vertex: Vertex, rule: DecisionFn) -> StaticSchedule {
        let mut copy = self.clone();
        match copy.decisions.iter_mut().find(|(v, _)| *v == vertex) {
            Some(slot) => slot.1 = rule,
            None => copy.decisions.push((vertex, rule)),
        }
        copy
    }

    /// Copy without the decision rule of `vertex`.
    pub fn without_decision(&self, vertex: Vertex) -> StaticSchedule {
        let mut copy = self.clone();
        copy.decisions.retain(|(v, _)| *v != vertex);
        copy
    }
}

fn check_rounds(rounds: &[Round], g: &Topology) -> Result<()> {
    for (i, r) in rounds.iter().enumerate() {
        if !g.has_edge(r.sender, r.receiver) {
            return Err(Error::fault(format!(
                "round {}: v{} and v{} are not adjacent",
                i + 1,
                r.sender,
                r.receiver
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    pub sender: Vertex,
    pub receiver: Vertex,
    pub bits: BitString,
}

/// Transmission history of one execution.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    pub records: Vec<RoundRecord>,
}

impl Transcript {
    pub fn total_bits(&self) -> usize {
        self.records.iter().map(|r| r.bits.len()).sum()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// All messages in round order, concatenated.
    pub fn concatenated(&self) -> BitString {
        let mut out = BitString::new();
        for r in &self.records {
            out.append(&r.bits);
        }
        out
    }

    /// Messages carried by `e` (either direction) in round order.
    pub fn on_edge(&self, e: Edge) -> BitString {
        let mut out = BitString::new();
        for r in self.records.iter().filter(|r| Edge::new(r.sender, r.receiver) == e) {
            out.append(&r.bits);
        }
        out
    }

    /// One line per round: `round sender->receiver bits:<binary>`.
    pub fn dump(&self) -> String {
        self.records
            .iter()
            .map(|r| format!("{} {}->{} bits:{}\n", r.round, r.sender, r.receiver, r.bits))
            .collect()
    }
}

/// Messages on edge `e` of `g`; fails for non-edges.
pub fn transcript_on_edge(t: &Transcript, g: &Topology, e: Edge) -> Result<BitString> {
    if !g.has_edge(e.0, e.1) {
        return Err(Error::param(format!("{e} is not an edge of the graph")));
    }
    Ok(t.on_edge(e))
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub transcript: Transcript,
    /// Verdict per decision vertex, in declaration order.
    pub decisions: Vec<(Vertex, bool)>,
    pub accepted: bool,
    /// Final views, indexed by vertex (index 0 unused).
    pub views: Vec<LocalView>,
}

fn check_input(n: usize, m: u32, x: &Word) -> Result<()> {
    if x.len() != n || x.width() != m {
        return Err(Error::param(format!(
            "input has n = {}, m = {}; protocol expects n = {n}, m = {m}",
            x.len(),
            x.width()
        )));
    }
    Ok(())
}

fn initial_views(x: &Word) -> Vec<LocalView> {
    let mut views = Vec::with_capacity(x.len() + 1);
    views.push(LocalView::new(0, Symbol::zero(x.width()).expect("width checked")));
    views.extend((1..=x.len()).map(|v| LocalView::new(v, x.at(v))));
    views
}

fn run_rounds(
    rounds: &[Round],
    first_index: usize,
    views: &mut [LocalView],
    transcript: &mut Transcript,
) -> Result<()> {
    for (offset, round) in rounds.iter().enumerate() {
        let index = first_index + offset;
        let bits = (round.message)(&views[round.sender]);
        if bits.len() != round.bit_len {
            return Err(Error::fault(format!(
                "round {index}: v{} emitted {} bits, schedule fixes {}",
                round.sender,
                bits.len(),
                round.bit_len
            )));
        }
        views[round.receiver].received.push(Received {
            round: index,
            from: round.sender,
            bits: bits.clone(),
        });
        transcript.records.push(RoundRecord {
            round: index,
            sender: round.sender,
            receiver: round.receiver,
            bits,
        });
    }
    Ok(())
}

fn combine(
    semantics: DecisionSemantics,
    decisions: &[(Vertex, bool)],
    x: &Word,
    name: &str,
) -> Result<bool> {
    let all = decisions.iter().all(|d| d.1);
    if semantics == DecisionSemantics::Consistent && !all && decisions.iter().any(|d| d.1) {
        return Err(Error::fault(format!(
            "protocol {name}: decision vertices disagree on input {x}: {}",
            decisions
                .iter()
                .map(|(v, b)| format!("v{v}={}", if *b { "accept" } else { "reject" }))
                .collect::<Vec<_>>()
                .join(" ")
        )));
    }
    Ok(all)
}

fn run_detection(p: &StaticSchedule, g: &Topology, x: &Word) -> Result<Execution> {
    p.validate(g)?;
    check_input(p.n, p.m, x)?;
    let mut views = initial_views(x);
    let mut transcript = Transcript::default();
    run_rounds(&p.rounds, 1, &mut views, &mut transcript)?;
    let decisions: Vec<(Vertex, bool)> =
        p.decisions.iter().map(|(v, f)| (*v, f(&views[*v]))).collect();
    let accepted = combine(p.semantics, &decisions, x, &p.name)?;
    Ok(Execution {
        transcript,
        decisions,
        accepted,
        views,
    })
}

/// Runs every round in order, then evaluates the decision rules.
pub fn execute_static(p: &StaticSchedule, g: &Topology, x: &Word) -> Result<Execution> {
    run_detection(p, g, x)
}

/// What the continuation of an adaptive protocol may inspect.
#[derive(Debug)]
pub struct BranchInput<'a> {
    pub transcript: &'a Transcript,
    /// Local verdicts of the detection stage.
    pub decisions: &'a [(Vertex, bool)],
    /// View of the designated coordinator vertex, if the protocol has one.
    pub coordinator: Option<&'a LocalView>,
}

impl BranchInput<'_> {
    /// Decision vertices whose local check failed, in declaration order.
    pub fn failed(&self) -> Vec<Vertex> {
        self.decisions.iter().filter(|d| !d.1).map(|d| d.0).collect()
    }
}

/// A static detection stage followed by rounds chosen from its outcome.
#[derive(Clone)]
pub struct AdaptiveProtocol {
    pub name: String,
    pub detection: StaticSchedule,
    pub coordinator: Option<Vertex>,
    pub continuation: ContinuationFn,
    pub output: OutputFn,
}

impl fmt::Debug for AdaptiveProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdaptiveProtocol")
            .field("name", &self.name)
            .field("detection", &self.detection)
            .field("coordinator", &self.coordinator)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub struct AdaptiveExecution {
    pub transcript: Transcript,
    pub detection_bits: usize,
    pub decisions: Vec<(Vertex, bool)>,
    pub accepted: bool,
    pub output: Word,
}

impl AdaptiveExecution {
    pub fn correction_bits(&self) -> usize {
        self.transcript.total_bits() - self.detection_bits
    }
}

pub fn execute_adaptive(p: &AdaptiveProtocol, g: &Topology, x: &Word) -> Result<AdaptiveExecution> {
    let Execution {
        mut transcript,
        decisions,
        accepted,
        mut views,
    } = run_detection(&p.detection, g, x)?;
    let detection_bits = transcript.total_bits();
    let rounds = {
        let branch = BranchInput {
            transcript: &transcript,
            decisions: &decisions,
            coordinator: p.coordinator.map(|v| &views[v]),
        };
        (p.continuation)(&branch)
    };
    check_rounds(&rounds, g)?;
    let next = transcript.len() + 1;
    run_rounds(&rounds, next, &mut views, &mut transcript)?;
    let outputs: Vec<Symbol> = (1..=x.len()).map(|v| (p.output)(&views[v])).collect();
    if let Some(bad) = outputs.iter().find(|s| s.width() != x.width()) {
        return Err(Error::fault(format!(
            "protocol {}: output symbol of width {} for m = {}",
            p.name,
            bad.width(),
            x.width()
        )));
    }
    Ok(AdaptiveExecution {
        transcript,
        detection_bits,
        decisions,
        accepted,
        output: Word::from_symbols(&outputs)?,
    })
}

/// Normalized cost of a static schedule: transcript length on `x`, over `m`.
pub fn normalized_cost_static(p: &StaticSchedule, g: &Topology, x: &Word) -> Result<Rational> {
    let run = execute_static(p, g, x)?;
    Ok(Rational::new(
        (run.transcript.total_bits() as i64).into(),
        (p.m as i64).into(),
    ))
}

#[derive(Debug, Clone)]
pub struct WorstCase {
    pub bits: usize,
    pub normalized: Rational,
    /// First input (in iteration order) attaining the maximum.
    pub witness: Option<Word>,
    pub inputs: u64,
}

/// Maximum total bits over `inputs`, normalized by `m`.
pub fn normalized_cost_adaptive(
    p: &AdaptiveProtocol,
    g: &Topology,
    inputs: impl IntoIterator<Item = Word>,
) -> Result<WorstCase> {
    let mut best = 0usize;
    let mut witness = None;
    let mut count = 0u64;
    for x in inputs {
        let bits = execute_adaptive(p, g, &x)?.transcript.total_bits();
        if witness.is_none() || bits > best {
            best = bits;
            witness = Some(x);
        }
        count += 1;
    }
    Ok(WorstCase {
        bits: best,
        normalized: Rational::new((best as i64).into(), (p.detection.m as i64).into()),
        witness,
        inputs: count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearityMode {
    /// Every input in `Q^n`; exact.
    Exhaustive { budget: u64 },
    /// Random pairs `(a, b)` drawn from a seeded generator.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityReport {
    pub linear: bool,
    pub tested: u64,
    /// A pair `(a, b)` with `h(a ⊕ b) ≠ h(a) ⊕ h(b) ⊕ h(0)`.
    pub witness: Option<(Word, Word)>,
}

pub fn xor_words(a: &Word, b: &Word) -> Word {
    let values = a.values().iter().zip(b.values()).map(|(x, y)| x ^ y).collect();
    Word::new(a.width(), values).expect("same shape")
}

/// Tests whether every transmitted bit is an affine function of the input
/// over GF(2). In exhaustive mode `h(x)` is compared against the affine
/// extension from the unit vectors, which is equivalent to additivity on
/// all pairs; a failing `x` yields the witness pair `(x ⊕ e_b, e_b)` for
/// the lowest set bit `b` that first breaks additivity.
pub fn is_linear(p: &StaticSchedule, g: &Topology, mode: LinearityMode) -> Result<LinearityReport> {
    let space = InputSpace::new(p.n, p.m)?;
    let h = |x: &Word| -> Result<BitString> { Ok(execute_static(p, g, x)?.transcript.concatenated()) };
    let zero = Word::constant(p.n, p.m, 0)?;
    let h0 = h(&zero)?;
    match mode {
        LinearityMode::Exhaustive { budget } => {
            let size = space.ensure_enumerable(budget)?;
            let total = p.n * p.m as usize;
            // basis[b] is the unit vector whose index has bit b set.
            let basis: Vec<Word> = (0..total).map(|b| space.word(1u64 << b)).collect();
            let deltas: Vec<BitString> = basis
                .iter()
                .map(|e| Ok(h(e)?.xor(&h0).expect("static length")))
                .collect::<Result<_>>()?;
            let predicted = |index: u64| -> BitString {
                let mut acc = h0.clone();
                for (b, d) in deltas.iter().enumerate() {
                    if (index >> b) & 1 == 1 {
                        acc = acc.xor(d).expect("static length");
                    }
                }
                acc
            };
            let bad = (0..size)
                .into_par_iter()
                .map(|i| -> Result<Option<u64>> {
                    let x = space.word(i);
                    Ok((h(&x)? != predicted(i)).then_some(i))
                })
                .find_first(|r| !matches!(r, Ok(None)));
            let witness = match bad {
                None => None,
                Some(Err(e)) => return Err(e),
                Some(Ok(None)) => unreachable!(),
                Some(Ok(Some(index))) => Some(additivity_witness(&space, index, &h)?),
            };
            Ok(LinearityReport {
                linear: witness.is_none(),
                tested: size,
                witness,
            })
        }
        LinearityMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (n, m) = (p.n, p.m);
            let draw = |rng: &mut ChaCha8Rng| -> Word {
                let values = (0..n).map(|_| rng.gen_range(0..1u64 << m)).collect();
                Word::new(m, values).expect("in range")
            };
            for _ in 0..samples {
                let a = draw(&mut rng);
                let b = draw(&mut rng);
                let lhs = h(&xor_words(&a, &b))?;
                let rhs = h(&a)?.xor(&h(&b)?).and_then(|s| s.xor(&h0)).expect("static length");
                if lhs != rhs {
                    return Ok(LinearityReport {
                        linear: false,
                        tested: samples,
                        witness: Some((a, b)),
                    });
                }
            }
            Ok(LinearityReport {
                linear: true,
                tested: samples,
                witness: None,
            })
        }
    }
}

/// Peels unit vectors off `index` until additivity fails on a pair.
fn additivity_witness(
    space: &InputSpace,
    index: u64,
    h: &impl Fn(&Word) -> Result<BitString>,
) -> Result<(Word, Word)> {
    let h0 = h(&space.word(0))?;
    let mut rest = index;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        let a = space.word(rest ^ bit);
        let b = space.word(bit);
        let lhs = h(&space.word(rest))?;
        let rhs = h(&a)?.xor(&h(&b)?).and_then(|s| s.xor(&h0)).expect("static length");
        if lhs != rhs {
            return Ok((a, b));
        }
        rest ^= bit;
    }
    unreachable!("a non-affine point always breaks additivity along its unit decomposition")
}
