//! Shared fixtures for the criterion benchmarks.

use spinvar_core::{random_state, spin_operators, HalfInteger, OperatorTriple, QuantumState, RandomKind};

/// Spin operators and a seeded random state of the given kind at `2j`.
pub fn fixture(two_j: i32, kind: RandomKind) -> (OperatorTriple, QuantumState) {
    let j = HalfInteger::from_twice(two_j);
    let ops = spin_operators(j).expect("spin operators");
    let state = random_state(j, 0x5eed, kind).expect("random state");
    (ops, state)
}
