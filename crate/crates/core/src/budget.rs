//! Enumeration budgets. Every exhaustive routine checks its budget before
//! starting and fails with [`crate::Error::Capacity`] instead of running
//! unbounded.

use serde::Serialize;

/// Environment variable that overrides [`Budgets::executions`].
pub const BUDGET_ENV: &str = "NETCODE_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Protocol executions per exhaustive check.
    pub executions: u64,
    /// Codewords materialized by an enumeration.
    pub codewords: u64,
    /// Largest range searched by the exact free-set searcher.
    pub free_set_range: u64,
    /// Largest range scanned with the Behrend construction.
    pub behrend_range: u64,
    /// Tuples enumerated by the brute-force freeness check.
    pub free_set_tuples: u64,
    /// Vertex cap for Hamiltonian-cycle backtracking.
    pub hamiltonian_vertices: usize,
    /// Cuts (LP columns) enumerated for the cut-set LP.
    pub lp_cuts: u64,
    /// Partial walks explored while enumerating special cycles.
    pub cycle_walks: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            executions: 1 << 24,
            codewords: 1 << 20,
            free_set_range: 60,
            behrend_range: 1 << 20,
            free_set_tuples: 1 << 24,
            hamiltonian_vertices: 12,
            lp_cuts: 1 << 16,
            cycle_walks: 1 << 24,
        }
    }
}

impl Budgets {
    /// Defaults, with the execution budget taken from `NETCODE_BUDGET` when
    /// it holds a positive integer.
    pub fn from_env() -> Self {
        let mut budgets = Budgets::default();
        if let Some(value) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|v| *v > 0)
        {
            budgets.executions = value;
        }
        budgets
    }
}
