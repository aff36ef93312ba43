//! Concrete protocols.

pub mod cycle;
pub mod parity;
pub mod partite;
pub mod trivial;

pub use cycle::{
    cycle_correct, cycle_detect, cycle_protocols, triangle_bit_budget, triangle_protocol,
    CycleLayout, CycleProtocols, LabelCodec, LabeledF,
};
pub use parity::parity_protocol;
pub use partite::{build_f, PartiteGraphF, PropertyReport};
pub use trivial::{trivial_correct, trivial_detect};
