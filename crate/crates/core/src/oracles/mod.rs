//! Sequential reference implementations. None of these call into the simulator.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::graph::WeightedDigraph;
use crate::kernels::VectorList;
use crate::matrix::{Matrix, Semiring, Tropical};

/// Lexicographically smallest orthogonal pair by checking every dot product.
pub fn brute_ov(a: &VectorList, b: &VectorList) -> Option<(usize, usize)> {
    for (i, x) in a.vectors().iter().enumerate() {
        for (j, y) in b.vectors().iter().enumerate() {
            if (0..x.dim()).all(|t| !(x.get(t) && y.get(t))) {
                return Some((i, j));
            }
        }
    }
    None
}

fn sorted_unique(v: &[i64]) -> Vec<i64> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Lexicographically smallest `(a, b, c)` with `a + b = c`, one two-pointer pass per `a`.
pub fn two_pointer_3sum(a: &[i64], b: &[i64], c: &[i64]) -> Option<(i64, i64, i64)> {
    let (a, b, c) = (sorted_unique(a), sorted_unique(b), sorted_unique(c));
    for &x in &a {
        let (mut pb, mut pc) = (0, 0);
        while pb < b.len() && pc < c.len() {
            let s = x + b[pb];
            if s == c[pc] {
                return Some((x, b[pb], c[pc]));
            } else if s < c[pc] {
                pb += 1;
            } else {
                pc += 1;
            }
        }
    }
    None
}

/// Every triple, smallest match.
pub fn cubic_3sum(a: &[i64], b: &[i64], c: &[i64]) -> Option<(i64, i64, i64)> {
    let mut best = None;
    for &x in a {
        for &y in b {
            for &z in c {
                if x + y == z && best.is_none_or(|t| (x, y, z) < t) {
                    best = Some((x, y, z));
                }
            }
        }
    }
    best
}

/// Triple loop in the entry semiring.
pub fn naive_matmul<T: Semiring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = T::zero();
        for k in 0..a.cols() {
            acc = acc.add(&a.get(i, k).mul(b.get(k, j)));
        }
        acc
    })
}

/// Triple loop over (min,+) written out on integers.
pub fn naive_tropical(a: &Matrix<Tropical>, b: &Matrix<Tropical>) -> Matrix<Tropical> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut best: Option<i64> = None;
        for k in 0..a.cols() {
            if let (Tropical::Finite(x), Tropical::Finite(y)) = (a.get(i, k), b.get(k, j)) {
                best = Some(best.map_or(x + y, |v| v.min(x + y)));
            }
        }
        best.map_or(Tropical::Inf, Tropical::Finite)
    })
}

/// All-pairs distances; the caller must rule out negative cycles first.
pub fn floyd_warshall(g: &WeightedDigraph) -> Matrix<Tropical> {
    let n = g.n();
    let mut d: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(u, v, w) in g.edges() {
        d[u][v] = Some(d[u][v].map_or(w, |x| x.min(w)));
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|x| ik + kj < x) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    Matrix::from_fn(n, n, |i, j| d[i][j].map_or(Tropical::Inf, Tropical::Finite))
}

/// A vertex on a negative cycle, if any (Bellman-Ford from a virtual source).
pub fn bellman_ford_validate(g: &WeightedDigraph) -> Option<usize> {
    let n = g.n();
    let mut d = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in g.edges() {
            if d[u] + w < d[v] {
                d[v] = d[u] + w;
                changed = true;
            }
        }
        if !changed {
            return None;
        }
    }
    g.edges().iter().find(|&&(u, v, w)| d[u] + w < d[v]).map(|&(_, v, _)| v)
}

/// Hop distances from `s` ignoring weights.
pub fn bfs_hops(g: &WeightedDigraph, s: usize) -> Vec<Option<usize>> {
    let mut d = vec![None; g.n()];
    d[s] = Some(0);
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &(v, _) in g.out_edges(u) {
            if d[v].is_none() {
                d[v] = Some(d[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    d
}

/// `X_k = Σ_j x_j e^{−2πi kj/n}` summed directly.
pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let ang = -2.0 * std::f64::consts::PI * ((k * j) % n) as f64 / n as f64;
                    v * Complex64::new(ang.cos(), ang.sin())
                })
                .sum()
        })
        .collect()
}

/// Dijkstra from `s` skipping `banned_edge` and the vertices flagged in `banned`.
/// Weights must be nonnegative. Returns distances and parents.
pub fn dijkstra(
    g: &WeightedDigraph,
    s: usize,
    banned_edge: Option<(usize, usize)>,
    banned: &[bool],
) -> (Vec<Option<i64>>, Vec<Option<usize>>) {
    let n = g.n();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0i64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u] != Some(d) {
            continue;
        }
        for &(v, w) in g.out_edges(u) {
            if banned_edge == Some((u, v)) || banned.get(v).copied().unwrap_or(false) {
                continue;
            }
            let nd = d + w;
            if dist[v].is_none_or(|x| nd < x) {
                dist[v] = Some(nd);
                parent[v] = Some(u);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    (dist, parent)
}

/// Length of the shortest `s → t` path avoiding edge `e`.
pub fn oracle_replacement(g: &WeightedDigraph, s: usize, t: usize, e: (usize, usize)) -> Option<i64> {
    dijkstra(g, s, Some(e), &[]).0[t]
}

/// Shortest `u → v` path whose interior avoids every vertex of `path` and which
/// uses no edge of `path`.
pub fn oracle_detour(g: &WeightedDigraph, path: &[usize], u: usize, v: usize) -> Option<i64> {
    let mut banned = vec![false; g.n()];
    for &p in path {
        if p != u && p != v {
            banned[p] = true;
        }
    }
    let mut best = None;
    // single hops are checked against the path edges; longer routes never use them
    if let Some(w) = g.weight(u, v) {
        let on_path = path.windows(2).any(|e| e[0] == u && e[1] == v);
        if !on_path {
            best = Some(w);
        }
    }
    for &(x, w) in g.out_edges(u) {
        if banned[x] || x == v || x == u {
            continue;
        }
        let mut ban = banned.clone();
        ban[u] = true;
        if let Some(d) = dijkstra(g, x, None, &ban).0[v] {
            if best.is_none_or(|b| w + d < b) {
                best = Some(w + d);
            }
        }
    }
    best
}

/// Length of the second simple `s → t` path by exhaustive search: the second
/// smallest length over all distinct simple paths (equal to the first on ties).
pub fn oracle_second_path(g: &WeightedDigraph, s: usize, t: usize) -> Option<i64> {
    let mut best: [Option<i64>; 2] = [None, None];
    let mut on = vec![false; g.n()];
    on[s] = true;
    dfs_two_best(g, s, t, 0, &mut on, &mut best);
    best[1]
}

fn dfs_two_best(g: &WeightedDigraph, u: usize, t: usize, len: i64, on: &mut [bool], best: &mut [Option<i64>; 2]) {
    if u == t {
        if best[0].is_none_or(|b| len < b) {
            best[1] = best[0];
            best[0] = Some(len);
        } else if best[1].is_none_or(|b| len < b) {
            best[1] = Some(len);
        }
        return;
    }
    // nonnegative weights: a prefix already past the second best cannot help
    if best[1].is_some_and(|b| len >= b) {
        return;
    }
    for &(v, w) in g.out_edges(u) {
        if !on[v] {
            on[v] = true;
            dfs_two_best(g, v, t, len + w, on, best);
            on[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::BitVector;
    use Tropical::{Finite as F, Inf};

    #[test]
    fn three_sum_simple() {
        assert_eq!(two_pointer_3sum(&[0], &[0], &[0]), Some((0, 0, 0)));
        assert_eq!(two_pointer_3sum(&[1], &[1], &[5]), None);
        assert_eq!(two_pointer_3sum(&[3, 1], &[2, 4], &[5, 7]), Some((1, 4, 5)));
        assert_eq!(cubic_3sum(&[3, 1], &[2, 4], &[5, 7]), Some((1, 4, 5)));
    }

    #[test]
    fn ov_small() {
        let v = |s: &str| BitVector::parse(s).unwrap();
        let a = VectorList::new(vec![v("110"), v("011")]).unwrap();
        let b = VectorList::new(vec![v("111"), v("100")]).unwrap();
        assert_eq!(brute_ov(&a, &b), Some((1, 1)));
    }

    #[test]
    fn naive_products() {
        let a = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(vec![vec![5i64, 6], vec![7, 8]]).unwrap();
        assert_eq!(naive_matmul(&a, &b), Matrix::from_rows(vec![vec![19, 22], vec![43, 50]]).unwrap());
        let t = Matrix::from_rows(vec![vec![F(0), F(1)], vec![Inf, F(0)]]).unwrap();
        assert_eq!(naive_tropical(&t, &t), t);
        assert_eq!(naive_matmul(&t, &t), t);
    }

    #[test]
    fn path_graph_and_negative_cycle() {
        let g = WeightedDigraph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let d = floyd_warshall(&g);
        assert_eq!(d.get(0, 2), &F(2));
        assert_eq!(d.get(2, 0), &Inf);
        assert_eq!(bellman_ford_validate(&g), None);
        let c = WeightedDigraph::new(3, [(0, 1, 1), (1, 2, -1), (2, 0, -1)]).unwrap();
        assert!(bellman_ford_validate(&c).is_some());
    }

    #[test]
    fn dft_impulse_and_constant() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let x = naive_dft(&[one, zero, zero, zero]);
        assert!(x.iter().all(|v| (v - one).norm() < 1e-12));
        let y = naive_dft(&[one; 4]);
        assert!((y[0] - 4.0 * one).norm() < 1e-12 && y[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn replacement_triangle() {
        // s=0, a=1, t=2
        let g = WeightedDigraph::new(3, [(0, 2, 1), (0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(oracle_replacement(&g, 0, 2, (0, 2)), Some(2));
        assert_eq!(oracle_second_path(&g, 0, 2), Some(2));
        let single = WeightedDigraph::new(2, [(0, 1, 3)]).unwrap();
        assert_eq!(oracle_replacement(&single, 0, 1, (0, 1)), None);
        assert_eq!(oracle_second_path(&single, 0, 1), None);
    }

    #[test]
    fn detour_skips_path_vertices() {
        // path 0-1-2-3, chord 0->2 and a detour 0->4->3
        let g = WeightedDigraph::new(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 2, 5), (0, 4, 2), (4, 3, 2), (4, 1, 0)]).unwrap();
        let p = [0, 1, 2, 3];
        assert_eq!(oracle_detour(&g, &p, 0, 2), Some(5));
        assert_eq!(oracle_detour(&g, &p, 0, 3), Some(4));
        assert_eq!(oracle_detour(&g, &p, 0, 1), Some(2));
        assert_eq!(oracle_detour(&g, &p, 1, 2), None);
    }
}
