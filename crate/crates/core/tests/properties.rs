//! Property tests for the invariants of each layer, run through the public
//! API only.

mod common;

use std::collections::BTreeSet;

use netcode_core::bounds::{closed_nkd, lp_bound};
use netcode_core::codes::{hamming_distance, InputSpace};
use netcode_core::engine::{execute_static, DecisionSemantics, StaticSchedule};
use netcode_core::freeset::{build_encoder, exact_max_free_set, is_free, verify_free};
use netcode_core::graph::{mix, VertexSet};
use netcode_core::protocols::{
    build_f, cycle_protocols, parity_protocol, triangle_protocol, trivial_detect, CycleLayout,
};
use netcode_core::rational::{int, Rational};
use netcode_core::verify::exhaustive_detect_check;
use netcode_core::{Budgets, CodeSpec, Error, Topology, Word};
use proptest::prelude::*;

/// A connected graph on `n` vertices: a random tree plus extra edges.
fn connected_graph() -> impl Strategy<Value = Topology> {
    (3usize..=7).prop_flat_map(|n| {
        let parents: Vec<_> = (2..=n).map(|v| 1..v).collect();
        let extras = proptest::collection::vec((1..=n, 1..=n), 0..n);
        (Just(n), parents, extras).prop_map(|(n, parents, extras)| {
            let mut edges: BTreeSet<(usize, usize)> =
                parents.iter().enumerate().map(|(i, &p)| (p, i + 2)).collect();
            for (a, b) in extras {
                if a != b {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            Topology::new(n, edges).unwrap()
        })
    })
}

fn word(n: usize, m: u32) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..1u64 << m, n).prop_map(move |v| Word::new(m, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn min_distance_matches_pairwise_minimum(
        raw in proptest::collection::btree_set(0u64..64, 2..12),
    ) {
        let space = InputSpace::new(3, 2).unwrap();
        let words: Vec<Word> = raw.iter().map(|&i| space.word(i)).collect();
        let mut brute = usize::MAX;
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                brute = brute.min(hamming_distance(a, b).unwrap());
            }
        }
        match CodeSpec::explicit(3, 2, words, 1 << 12) {
            Ok(code) => {
                prop_assert!(brute >= 2);
                prop_assert_eq!(code.d(), brute);
                prop_assert_eq!(code.min_distance(1 << 12).unwrap(), brute);
            }
            Err(_) => prop_assert!(brute < 2),
        }
    }

    #[test]
    fn membership_is_distance_zero(w in word(4, 2), family in 0usize..3) {
        let code = match family {
            0 => CodeSpec::repetition(4, 2).unwrap(),
            1 => CodeSpec::parity_check(4, 2).unwrap(),
            _ => CodeSpec::mds(4, 2, 2, 1 << 12).unwrap(),
        };
        let (_, dist) = code.nearest_codeword(&w, 1 << 12).unwrap();
        prop_assert_eq!(code.contains(&w).unwrap(), dist == 0);
    }

    #[test]
    fn cuts_partition_edges(g in connected_graph()) {
        for cut in g.all_cuts(1 << 10).unwrap() {
            prop_assert!(!cut.cut_set.is_empty());
            let internal = g
                .edges()
                .iter()
                .filter(|e| cut.side.contains(e.0) == cut.side.contains(e.1))
                .count();
            prop_assert_eq!(internal + cut.cut_set.len(), g.edges().len());
        }
    }

    #[test]
    fn mixing_is_complement_symmetric(
        (x, y) in (word(6, 3), word(6, 3)),
        mask in 1u64..63,
    ) {
        let side = VertexSet::from_mask(mask << 1);
        let other = side.complement(6);
        prop_assert_eq!(mix(&x, &y, side, false).unwrap(), mix(&y, &x, other, false).unwrap());
    }

    #[test]
    fn spanning_trees_span(g in connected_graph(), root_pick in 0usize..7) {
        let root = root_pick % g.n() + 1;
        let tree = g.spanning_tree(root).unwrap();
        let edges = tree.edges();
        prop_assert_eq!(edges.len(), g.n() - 1);
        prop_assert!(edges.iter().all(|e| g.has_edge(e.0, e.1)));
        prop_assert_eq!(tree.bfs_order.iter().copied().collect::<BTreeSet<_>>().len(), g.n());
    }

    #[test]
    fn free_set_check_agrees_with_brute_force(members in proptest::collection::btree_set(1u64..=24, 0..9)) {
        let members: Vec<u64> = members.into_iter().collect();
        let brute = !members.iter().any(|&a| {
            members.iter().any(|&d| d > a && members.contains(&(2 * d - a)))
        });
        prop_assert_eq!(verify_free(&members, 3, 1 << 20).unwrap(), brute);
        prop_assert_eq!(is_free(&members, 3), brute);
    }

    #[test]
    fn execution_is_deterministic(g in connected_graph(), x_seed in any::<u64>()) {
        let code = CodeSpec::repetition(g.n(), 2).unwrap();
        let p = trivial_detect(&g, &code).unwrap();
        let space = InputSpace::new(g.n(), 2).unwrap();
        let x = space.word(x_seed % space.size() as u64);
        let a = execute_static(&p, &g, &x).unwrap();
        let b = execute_static(&p, &g, &x).unwrap();
        prop_assert_eq!(a.transcript, b.transcript);
        prop_assert_eq!(a.decisions, b.decisions);
    }

    #[test]
    fn lp_dominates_closed_form(g in connected_graph(), d_pick in 0usize..8, k_num in 1i64..4) {
        let n = g.n();
        let d = 2 + d_pick % (n - 1);
        let k = Rational::new(k_num.into(), 2.into());
        let lp = lp_bound(&g, &k, d, 1 << 12).unwrap();
        let closed = closed_nkd(n, &k, d);
        prop_assert_eq!(lp.is_applicable(), closed.is_applicable());
        if let (Some(lp), Some(closed)) = (lp.value(), closed.value()) {
            prop_assert!(lp.value >= *closed);
            prop_assert!(*closed >= int(0));
        }
    }
}

fn protocols_under_test() -> Vec<(StaticSchedule, Topology, CodeSpec)> {
    let b = Budgets::default();
    let mut out = Vec::new();
    for name in ["path:3", "cycle:4", "star:4", "complete:4"] {
        let g = Topology::builtin(name).unwrap();
        let n = g.n();
        for m in 1..=2 {
            let rep = CodeSpec::repetition(n, m).unwrap();
            let parity = CodeSpec::parity_check(n, m).unwrap();
            out.push((trivial_detect(&g, &rep).unwrap(), g.clone(), rep.clone()));
            out.push((trivial_detect(&g, &parity).unwrap(), g.clone(), parity.clone()));
            out.push((parity_protocol(&g, m).unwrap(), g.clone(), parity));
        }
    }
    let c3 = Topology::cycle(3).unwrap();
    let c4 = Topology::cycle(4).unwrap();
    for m in 1..=3 {
        out.push((triangle_protocol(m, &b).unwrap().detect, c3.clone(), CodeSpec::repetition(3, m).unwrap()));
        out.push((cycle_protocols(&c3, m, &b).unwrap().detect, c3.clone(), CodeSpec::repetition(3, m).unwrap()));
    }
    for m in 1..=2 {
        out.push((cycle_protocols(&c4, m, &b).unwrap().detect, c4.clone(), CodeSpec::repetition(4, m).unwrap()));
    }
    out
}

#[test]
fn transcript_length_is_input_independent() {
    for (p, g, _) in protocols_under_test() {
        let space = InputSpace::new(p.n, p.m).unwrap();
        let lengths: BTreeSet<usize> = (0..space.size() as u64)
            .map(|i| execute_static(&p, &g, &space.word(i)).unwrap().transcript.total_bits())
            .collect();
        assert_eq!(lengths.len(), 1, "{}", p.name);
    }
}

#[test]
fn decision_vertices_agree_on_correct_protocols() {
    for (p, g, code) in protocols_under_test() {
        assert!(exhaustive_detect_check(&p, &g, &code, &Budgets::default()).unwrap().passed);
        let space = InputSpace::new(p.n, p.m).unwrap();
        for i in 0..space.size() as u64 {
            let x = space.word(i);
            let run = execute_static(&p, &g, &x).unwrap();
            match p.semantics {
                DecisionSemantics::Consistent => {
                    assert!(run.decisions.iter().all(|(_, d)| *d == run.accepted), "{} on {x}", p.name)
                }
                // Local checks: every vertex passes exactly on codewords.
                DecisionSemantics::Conjunction => {
                    assert_eq!(run.accepted, run.decisions.iter().all(|(_, d)| *d));
                    if run.accepted {
                        assert!(run.decisions.iter().all(|(_, d)| *d));
                    }
                }
            }
        }
    }
}

#[test]
fn parity_dimension_is_exact() {
    for n in 2..=4 {
        for m in 1..=2 {
            let code = CodeSpec::parity_check(n, m).unwrap();
            assert_eq!(code.size(), Some(1u128 << (m as usize * (n - 1))));
            assert_eq!(code.dimension(), int(n as i64 - 1));
            assert_eq!(code.enumerate(1 << 12).unwrap().count() as u128, code.size().unwrap());
        }
    }
}

#[test]
fn low_distance_codes_are_rejected() {
    let w = |v: Vec<u64>| Word::new(2, v).unwrap();
    let words = vec![w(vec![0, 0, 0]), w(vec![0, 0, 1])];
    assert!(CodeSpec::explicit(3, 2, words, 1 << 10).is_err());
}

#[test]
fn encoder_tuples_are_progressions_and_edge_disjoint() {
    let b = Budgets::default();
    for m in 1..=8 {
        let (t, _) = build_encoder(m, 3, &b).unwrap();
        let mut seen = BTreeSet::new();
        for x in 0..1u64 << m {
            let tuple = t.tuple(x);
            let (alpha, beta) = t.pair(x);
            for (i, &e) in tuple.iter().enumerate() {
                assert_eq!(e, alpha + i as u64 * beta);
            }
            assert_eq!(tuple[1] - tuple[0], tuple[2] - tuple[1]);
            for i in 0..3 {
                assert!(seen.insert((i, tuple[i], tuple[(i + 1) % 3])), "m={m}: edge shared");
            }
        }
    }
}

#[test]
fn exact_free_sets_verify() {
    for range in 1..=20 {
        let set = exact_max_free_set(range, 3, 60).unwrap();
        assert!(verify_free(&set.members, 3, 1 << 20).unwrap());
        assert_eq!(set.members.len(), common::max_ap3_free(range));
    }
}

#[test]
fn one_edge_determines_the_symbol() {
    let b = Budgets::default();
    for (n, max_m) in [(3, 8), (4, 5)] {
        for m in 1..=max_m {
            let (f, _, _) = build_f(n, m, &b).unwrap();
            for x in 0..1u64 << m {
                for i in 1..=n {
                    let a = f.label(x, i);
                    let next = f.label(x, i % n + 1);
                    assert_eq!(f.symbol_for_edge(i, a, next), Some(x), "n={n} m={m}");
                }
            }
        }
    }
}

#[test]
fn single_errors_fail_adjacent_checks() {
    let b = Budgets::default();
    for (n, max_m) in [(3usize, 4u32), (4, 3), (5, 2)] {
        let g = Topology::cycle(n).unwrap();
        let cp = cycle_protocols(&g, max_m, &b).unwrap();
        let layout: &CycleLayout = &cp.layout;
        for a in 0..1u64 << max_m {
            let c = Word::constant(n, max_m, a).unwrap();
            for j in 1..=n {
                for delta in 1..1u64 << max_m {
                    let y = c.with_symbol(layout.vertex(j), a ^ delta);
                    let run = execute_static(&cp.detect, &g, &y).unwrap();
                    let failed: BTreeSet<usize> = run
                        .decisions
                        .iter()
                        .filter(|(_, ok)| !ok)
                        .map(|(v, _)| layout.position(*v))
                        .collect();
                    let allowed: BTreeSet<usize> = [j, layout.shift(j, 1)].into();
                    assert!(!failed.is_empty(), "n={n}: error at {j} undetected");
                    assert!(failed.is_subset(&allowed), "n={n}: error at {j} failed {failed:?}");
                }
            }
        }
    }
}

#[test]
fn measured_loads_satisfy_the_cut_lp() {
    // Per-edge bits over m of a correct protocol are a feasible load, so
    // their sum bounds k·Σg from above.
    for name in ["cycle:4", "cycle:5", "complete:4", "complete:5", "path:4"] {
        let g = Topology::builtin(name).unwrap();
        let n = g.n();
        let m = 2u32;
        let code = CodeSpec::repetition(n, m).unwrap();
        let p = trivial_detect(&g, &code).unwrap();
        let run = execute_static(&p, &g, &Word::constant(n, m, 0).unwrap()).unwrap();
        let loads: Vec<_> = g
            .edges()
            .iter()
            .map(|&e| (e, Rational::new((run.transcript.on_edge(e).len() as i64).into(), (m as i64).into())))
            .collect();
        let lp = lp_bound(&g, &int(1), n, 1 << 12).unwrap();
        let lp = lp.value().unwrap();
        for cut in g.cuts_of_size(1, 1 << 12).unwrap() {
            let load: Rational = loads.iter().filter(|(e, _)| cut.cut_set.contains(e)).map(|(_, t)| t.clone()).sum();
            assert!(load >= int(1), "{name}");
        }
        let total: Rational = loads.iter().map(|(_, t)| t.clone()).sum();
        assert!(lp.value <= total, "{name}");
    }
}

#[test]
fn budgets_fail_before_enumerating() {
    let g = Topology::cycle(3).unwrap();
    let b = Budgets::default();
    let tri = triangle_protocol(6, &b).unwrap();
    let tight = Budgets {
        executions: 1 << 10,
        ..Budgets::default()
    };
    let start = std::time::Instant::now();
    let err = exhaustive_detect_check(&tri.detect, &g, &CodeSpec::repetition(3, 6).unwrap(), &tight).unwrap_err();
    assert!(matches!(err, Error::Capacity { required, budget: 1024, .. } if required == 1 << 18));
    assert!(start.elapsed() < std::time::Duration::from_millis(100));
}
