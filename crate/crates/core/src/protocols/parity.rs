//! XOR aggregation up a spanning tree for the parity-check code.

use std::sync::Arc;

use crate::bits::BitString;
use crate::engine::{DecisionSemantics, LocalView, Round, StaticSchedule};
use crate::error::Result;
use crate::graph::Topology;

fn xor_all(view: &LocalView) -> u64 {
    view.received
        .iter()
        .fold(view.own_input.value(), |acc, r| acc ^ r.bits.to_uint().unwrap_or(0))
}

/// Every non-root vertex, deepest first, sends its parent the XOR of its
/// own symbol and everything received from its children. The root
/// (`v_1`) accepts iff the final XOR is zero. One `m`-bit message per tree
/// edge.
pub fn parity_protocol(g: &Topology, m: u32) -> Result<StaticSchedule> {
    let tree = g.spanning_tree(1)?;
    let rounds = tree
        .bfs_order
        .iter()
        .rev()
        .filter_map(|&v| tree.parent[v].map(|p| (v, p)))
        .map(|(v, p)| {
            Round::new(v, p, m as usize, move |view: &LocalView| {
                BitString::from_uint(xor_all(view), m as usize)
            })
        })
        .collect();
    Ok(StaticSchedule {
        name: "parity-xor".into(),
        n: g.n(),
        m,
        rounds,
        decisions: vec![(1, Arc::new(|view: &LocalView| xor_all(view) == 0))],
        semantics: DecisionSemantics::Consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{CodeSpec, InputSpace};
    use crate::engine::execute_static;

    #[test]
    fn accepts_exactly_parity_words() {
        for g in [Topology::path(4).unwrap(), Topology::star(4).unwrap(), Topology::cycle(5).unwrap()] {
            let n = g.n();
            let p = parity_protocol(&g, 2).unwrap();
            assert_eq!(p.total_bits(), (n - 1) * 2);
            let code = CodeSpec::parity_check(n, 2).unwrap();
            let space = InputSpace::new(n, 2).unwrap();
            for i in 0..space.size() as u64 {
                let x = space.word(i);
                assert_eq!(execute_static(&p, &g, &x).unwrap().accepted, code.contains(&x).unwrap());
            }
        }
    }
}
