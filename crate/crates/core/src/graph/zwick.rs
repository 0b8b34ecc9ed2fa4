use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::WeightedDigraph;
use crate::engine::{Engine, ResourceReport, Words};
use crate::error::{MrcError, Result};
use crate::matrix::{Matrix, Tropical};
use crate::minplus::{bounded_distance_product, distance_product_in};
use crate::num::{ceil_tol, floor_tol};
use crate::oracles::bellman_ford_validate;

/// `⌈log_{3/2} n⌉` iterations.
pub fn zwick_iterations(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        ceil_tol((n as f64).ln() / 1.5f64.ln()) as usize
    }
}

/// `min(n, ⌈9 n ln n / (3/2)^i⌉)`.
pub fn sample_size(n: usize, i: usize) -> usize {
    if n <= 1 {
        return n;
    }
    let s = ceil_tol(9.0 * n as f64 * (n as f64).ln() / 1.5f64.powi(i as i32)) as usize;
    s.clamp(1, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZwickStep {
    pub iteration: usize,
    /// `log_n (3/2)^i`.
    pub y: f64,
    pub range: i64,
    pub sample: Vec<usize>,
    pub bounded: bool,
}

#[derive(Clone, Debug)]
pub struct ZwickOutcome {
    pub dist: Matrix<Tropical>,
    pub report: ResourceReport,
    pub steps: Vec<ZwickStep>,
    /// The matrix after each iteration (kept only when requested).
    pub history: Vec<Matrix<Tropical>>,
}

fn clamp(v: Tropical, r: i64) -> Tropical {
    match v {
        Tropical::Finite(x) if x.abs() <= r => v,
        _ => Tropical::Inf,
    }
}

/// Sampled APSP for weights in `{−1, 0, 1}`: `S ← min(S, S[:,W] ⋆ S[W,:])` with
/// entries of magnitude above `⌊(3/2)^i⌋` dropped to ∞.
pub fn zwick_apsp(g: &WeightedDigraph, eps: f64, seed: u64, engine: &Engine, keep_history: bool) -> Result<ZwickOutcome> {
    if let Some(&(u, v, w)) = g.edges().iter().find(|e| !(-1..=1).contains(&e.2)) {
        return Err(MrcError::DomainError(format!("edge ({u},{v}) has weight {w} outside {{-1,0,1}}")));
    }
    if let Some(v) = bellman_ford_validate(g) {
        return Err(MrcError::NegativeCycle(v));
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = g.adjacency();
    let mut report = ResourceReport::default();
    let mut steps = Vec::new();
    let mut history = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for i in 1..=zwick_iterations(n) {
        let size = sample_size(n, i);
        order.sort_unstable();
        let (picked, _) = order.partial_shuffle(&mut rng, size);
        let mut w = picked.to_vec();
        w.sort_unstable();
        let cap = 1.5f64.powi(i as i32);
        let range = floor_tol(cap) as i64;
        let y = cap.ln() / (n as f64).ln();
        let rows: Vec<usize> = (0..n).collect();
        let s1 = s.select(&rows, &w).map(|&v| clamp(v, range));
        let s2 = s.select(&w, &rows).map(|&v| clamp(v, range));
        let bounded = eps >= y;
        let prod = if bounded {
            let out = bounded_distance_product(&s1, &s2, range, eps, engine)?;
            report.append(out.report);
            out.c
        } else {
            let mut sess = engine.session();
            let (c, ..) = distance_product_in(&mut sess, &s1, &s2, eps, &())?;
            report.append(sess.finish());
            c
        };
        s = Matrix::from_fn(n, n, |a, b| (*s.get(a, b)).min(*prod.get(a, b)));
        steps.push(ZwickStep {
            iteration: i,
            y,
            range,
            sample: w,
            bounded,
        });
        if keep_history {
            history.push(s.clone());
        }
    }
    report.baseline_words = Some(g.words() + (n * n) as u64);
    Ok(ZwickOutcome {
        dist: s,
        report,
        steps,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Enforcement, MachineBudget};
    use crate::oracles::{bfs_hops, floyd_warshall};

    fn eng(n: usize) -> Engine {
        Engine::new(MachineBudget::for_size(n, 1.0, 8.0, Enforcement::RecordOnly))
    }

    #[test]
    fn sample_size_n8_first_iteration() {
        // 9·8·ln 8 / 1.5 ≈ 99.8, capped at 8
        assert_eq!(sample_size(8, 1), 8);
        assert_eq!(zwick_iterations(8), 6);
    }

    #[test]
    fn zero_weights_connected() {
        let edges: Vec<_> = (0..6).flat_map(|v| [(v, (v + 1) % 6, 0), ((v + 1) % 6, v, 0)]).collect();
        let g = WeightedDigraph::new(6, edges).unwrap();
        let out = zwick_apsp(&g, 1.0, 7, &eng(6), false).unwrap();
        assert!(out.dist.entries().iter().all(|&d| d == Tropical::Finite(0)));
    }

    #[test]
    fn unweighted_cycle_hops() {
        let g = WeightedDigraph::new(8, (0..8).map(|v| (v, (v + 1) % 8, 1))).unwrap();
        let out = zwick_apsp(&g, 1.0, 3, &eng(8), false).unwrap();
        for u in 0..8 {
            let h = bfs_hops(&g, u);
            for v in 0..8 {
                assert_eq!(out.dist.get(u, v).finite(), h[v].map(|x| x as i64));
            }
        }
    }

    #[test]
    fn signed_weights_small_eps() {
        let g = WeightedDigraph::new(
            6,
            [(0, 1, 1), (1, 2, -1), (2, 3, 1), (3, 4, -1), (4, 5, 0), (5, 0, 1), (0, 3, 1), (2, 5, 0)],
        )
        .unwrap();
        for eps in [0.3, 1.0] {
            let out = zwick_apsp(&g, eps, 11, &eng(6), true).unwrap();
            assert_eq!(out.dist, floyd_warshall(&g), "eps {eps}");
        }
    }

    #[test]
    fn rejects_heavy_weights() {
        let g = WeightedDigraph::new(2, [(0, 1, 2)]).unwrap();
        assert!(matches!(zwick_apsp(&g, 1.0, 0, &eng(2), false), Err(MrcError::DomainError(_))));
    }
}
