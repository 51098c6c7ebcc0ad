//! Shared inputs for the kernel benchmarks.

use hibireg_core::{fixtures, DistLattice, Poset};

/// Named posets covering the planar, Boolean and general cases.
pub fn workloads() -> Vec<(&'static str, Poset)> {
    vec![
        ("boolean-6", fixtures::boolean(6).expect("fixture")),
        ("grid-6x6", fixtures::grid(6, 6).expect("fixture")),
        ("cyclic-8", fixtures::cyclic(8, 1).expect("fixture")),
        ("example", fixtures::example()),
    ]
}

pub fn lattice(p: &Poset) -> DistLattice {
    DistLattice::birkhoff(p).expect("bench lattices are small")
}
