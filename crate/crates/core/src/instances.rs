//! Seeded random instances for every problem kind.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MrcError, Result};
use crate::graph::WeightedDigraph;
use crate::kernels::{BitVector, VectorList};
use crate::matrix::{Matrix, Tropical};
use crate::oracles::bellman_ford_validate;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Three lists of `n` integers drawn from `[-range, range]`.
pub fn int_lists(n: usize, range: i64, seed: u64) -> [Vec<i64>; 3] {
    let mut r = rng(seed);
    let mut draw = || (0..n).map(|_| r.gen_range(-range..=range)).collect::<Vec<_>>();
    [draw(), draw(), draw()]
}

/// Two lists of `n` vectors of dimension `d`, each bit set with probability `density`.
pub fn vector_lists(n: usize, d: usize, density: f64, seed: u64) -> (VectorList, VectorList) {
    let mut r = rng(seed);
    let mut list = || {
        let vs = (0..n)
            .map(|_| BitVector::from_bools(&(0..d).map(|_| r.gen_bool(density)).collect::<Vec<_>>()))
            .collect();
        VectorList::new(vs).expect("equal dimensions")
    };
    let a = list();
    let b = list();
    (a, b)
}

pub fn int_matrix(rows: usize, cols: usize, lo: i64, hi: i64, seed: u64) -> Matrix<i64> {
    let mut r = rng(seed);
    Matrix::from_fn(rows, cols, |_, _| r.gen_range(lo..=hi))
}

/// Entries uniform in `[lo, hi]`, ∞ with probability `inf`.
pub fn tropical_matrix(rows: usize, cols: usize, lo: i64, hi: i64, inf: f64, seed: u64) -> Matrix<Tropical> {
    let mut r = rng(seed);
    Matrix::from_fn(rows, cols, |_, _| {
        if r.gen_bool(inf) {
            Tropical::Inf
        } else {
            Tropical::Finite(r.gen_range(lo..=hi))
        }
    })
}

/// Each ordered pair is an edge with probability `p`, weight uniform in `[lo, hi]`.
/// With `reject_negative_cycles`, redraws until Bellman-Ford finds no negative cycle.
pub fn digraph(n: usize, p: f64, lo: i64, hi: i64, seed: u64, reject_negative_cycles: bool) -> Result<WeightedDigraph> {
    let mut r = rng(seed);
    for _ in 0..1000 {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && r.gen_bool(p) {
                    edges.push((u, v, r.gen_range(lo..=hi)));
                }
            }
        }
        let g = WeightedDigraph::new(n, edges)?;
        if !reject_negative_cycles || bellman_ford_validate(&g).is_none() {
            return Ok(g);
        }
    }
    Err(MrcError::InvalidInput("no draw without a negative cycle in 1000 attempts".into()))
}

/// Weights in `{-1, 0, 1}` with no negative cycle: every vertex gets a random
/// potential in `{0, 1}` and edges with negative reduced weight are dropped.
pub fn signed_unit_digraph(n: usize, p: f64, seed: u64) -> Result<WeightedDigraph> {
    let mut r = rng(seed);
    let phi: Vec<i64> = (0..n).map(|_| r.gen_range(0..=1)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && r.gen_bool(p) {
                let w = r.gen_range(-1..=1);
                if w + phi[u] - phi[v] >= 0 {
                    edges.push((u, v, w));
                }
            }
        }
    }
    WeightedDigraph::new(n, edges)
}

/// A Hamiltonian cycle plus random edges: strongly connected.
pub fn strongly_connected(n: usize, p: f64, lo: i64, hi: i64, seed: u64) -> Result<WeightedDigraph> {
    let mut r = rng(seed);
    let mut edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n, r.gen_range(lo..=hi))).collect();
    for u in 0..n {
        for v in 0..n {
            if u != v && r.gen_bool(p) {
                edges.push((u, v, r.gen_range(lo..=hi)));
            }
        }
    }
    WeightedDigraph::new(n, edges)
}

/// Real and imaginary parts uniform in `[-1, 1]`.
pub fn signal(n: usize, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| Complex64::new(r.gen_range(-1.0..=1.0), r.gen_range(-1.0..=1.0)))
        .collect()
}
