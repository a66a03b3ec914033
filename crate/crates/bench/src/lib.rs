//! Shared inputs for the benchmarks.

use oaforge_core::algebraic::{q4_oa, sylvester_oa3};
use oaforge_core::diffmatrix::{develop_chai1, dm_for};
use oaforge_core::{expand_shift, LargeSet, Result, SymbolMatrix};

/// A named array and the strength to check it at.
pub struct Workload {
    pub name: &'static str,
    pub array: SymbolMatrix,
    pub t: usize,
}

/// Strength-check inputs, smallest first.
pub fn strength_workloads() -> Result<Vec<Workload>> {
    Ok(vec![
        Workload { name: "sylvester3 n=4 k=16", array: sylvester_oa3(4, 16)?.0, t: 3 },
        Workload { name: "q4t3 q=4 k=17", array: q4_oa(4, 17)?.0, t: 3 },
        Workload { name: "chai1 v=7", array: develop_chai1(&dm_for(7)?)?.0, t: 2 },
    ])
}

/// The `LOA(81, 10, 3, 3)` partition of `3^10`.
pub fn q4_large_set() -> Result<LargeSet> {
    let (a, p) = q4_oa(3, 10)?;
    expand_shift(&a, &p)
}
