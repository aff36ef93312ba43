//! Deterministic simulation of communication protocols that detect and
//! correct errors in codewords spread across the vertices of a graph.
//!
//! Every vertex `v_i` of a connected graph holds one `m`-bit symbol `x_i`;
//! together the symbols form a [`Word`]. Protocols exchange bit strings over
//! the edges and must decide whether the word belongs to a code
//! ([`CodeSpec`]), or repair a single corrupted symbol. The crate provides:
//!
//! * [`codes`] and [`graph`]: alphabets, code families, topologies, cuts.
//! * [`engine`]: static and adaptive protocol execution with per-edge
//!   transcripts and cost accounting.
//! * [`freeset`]: progression-free integer sets and the symbol encoder used
//!   by the cycle protocols.
//! * [`protocols`]: concrete protocols (spanning-tree forwarding, XOR
//!   aggregation, special-cycle detection and correction).
//! * [`bounds`]: exact rational lower bounds, including a cut-packing LP.
//! * [`verify`]: exhaustive desk-scale checks and the [`suite`] that runs
//!   them all.

pub mod bits;
pub mod bounds;
pub mod budget;
pub mod codes;
pub mod engine;
pub mod error;
pub mod freeset;
pub mod graph;
pub mod protocols;
pub mod rational;
pub mod suite;
pub mod verify;

pub use bits::BitString;
pub use budget::Budgets;
pub use codes::{CodeSpec, Symbol, Word};
pub use engine::{AdaptiveProtocol, StaticSchedule, Transcript};
pub use error::{Error, Result};
pub use graph::Topology;
pub use rational::Rational;
