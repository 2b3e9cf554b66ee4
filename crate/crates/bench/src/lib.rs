//! Benchmark fixtures.

use hdx_core::random::{counterexample_y, linial_meshulam};
use hdx_core::{SimplicialComplex, Z2Cochain};

pub const SEED: u64 = 0x5eed;

/// `X^2(n, p)` from the fixed benchmark seed.
pub fn random_two_complex(n: usize, p: f64) -> SimplicialComplex {
    linial_meshulam(n, 2, p, SEED).expect("valid parameters")
}

/// `Y^2(n, 1)` with its planted cochain.
pub fn counterexample(n: usize) -> (SimplicialComplex, Z2Cochain) {
    let s = counterexample_y(n, 2, 1.0, SEED).expect("valid parameters");
    (s.complex, s.a)
}

pub fn cycle(n: usize) -> SimplicialComplex {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimplicialComplex::graph(n, &edges).expect("valid cycle")
}
