use mrc::engine::{Enforcement, Engine, MachineBudget};
use mrc::graph::{apsp_mrc, diameter_center, negative_triangle, sample_size, zwick_apsp, WeightedDigraph};
use mrc::instances as inst;
use mrc::matrix::Tropical;
use mrc::minplus::distance_product_mrc;
use mrc::oracles::{bellman_ford_validate, floyd_warshall};
use mrc::MrcError;
use proptest::prelude::*;

fn strict(n: usize, eps: f64) -> Engine {
    Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::Strict))
}

fn record(n: usize, eps: f64) -> Engine {
    Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::RecordOnly))
}

/// Fewest edges over all shortest paths, by a lexicographic Floyd-Warshall.
fn min_hops(g: &WeightedDigraph) -> Vec<Vec<Option<(i64, usize)>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some((0, 0));
    }
    for &(u, v, w) in g.edges() {
        if d[u][v].is_none_or(|x: (i64, usize)| (w, 1) < x) {
            d[u][v] = Some((w, 1));
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    let c = (a.0 + b.0, a.1 + b.1);
                    if d[i][j].is_none_or(|x| c < x) {
                        d[i][j] = Some(c);
                    }
                }
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn apsp_matches_floyd_warshall_and_is_idempotent(
        n in 1usize..24, p in 0.05f64..0.4, seed in any::<u64>(), eps in 0.4f64..=2.0,
    ) {
        let g = inst::digraph(n, p, 0, 10, seed, false).unwrap();
        let out = apsp_mrc(&g, eps, &strict(n, eps)).unwrap();
        prop_assert_eq!(&out.dist, &floyd_warshall(&g));
        let again = distance_product_mrc(&out.dist, &out.dist, eps, &strict(n, eps)).unwrap().c;
        prop_assert_eq!(again, out.dist);
    }

    #[test]
    fn negative_cycles_are_rejected(n in 2usize..12, seed in any::<u64>()) {
        let g = inst::digraph(n, 0.4, -5, 3, seed, false).unwrap();
        let res = apsp_mrc(&g, 1.0, &strict(n, 1.0));
        match bellman_ford_validate(&g) {
            Some(_) => prop_assert!(matches!(res, Err(MrcError::NegativeCycle(_)))),
            None => prop_assert_eq!(res.unwrap().dist, floyd_warshall(&g)),
        }
    }

    #[test]
    fn diameter_and_center_match_scan(n in 1usize..20, seed in any::<u64>()) {
        let g = inst::strongly_connected(n, 0.1, 1, 9, seed).unwrap();
        let fw = floyd_warshall(&g);
        let ecc: Vec<i64> = (0..n).map(|i| (0..n).map(|j| fw.get(i, j).finite().unwrap()).max().unwrap()).collect();
        let out = diameter_center(&fw, 0.5, &strict(n, 0.5)).unwrap();
        prop_assert_eq!(out.diameter, *ecc.iter().max().unwrap());
        prop_assert_eq!(out.center, (0..n).min_by_key(|&v| (ecc[v], v)).unwrap());
        prop_assert_eq!(out.radius, ecc[out.center]);
    }

    #[test]
    fn negative_triangle_matches_brute_force(n in 3usize..17, seed in any::<u64>()) {
        let g = inst::digraph(n, 0.3, -6, 10, seed, false).unwrap();
        let brute = (0..n).any(|i| (0..n).any(|j| (0..n).any(|k| {
            i != j && j != k && k != i && matches!(
                (g.weight(i, j), g.weight(j, k), g.weight(k, i)),
                (Some(x), Some(y), Some(z)) if x + y + z < 0
            )
        })));
        prop_assert_eq!(negative_triangle(&g, 1.0, &strict(n, 1.0)).unwrap().found, brute);
    }

    #[test]
    fn zwick_iterations_are_monotone_and_sound(n in 2usize..20, seed in any::<u64>(), signed in any::<bool>()) {
        let g = if signed {
            inst::signed_unit_digraph(n, 0.2, seed).unwrap()
        } else {
            inst::digraph(n, 0.2, 0, 1, seed, false).unwrap()
        };
        let fw = floyd_warshall(&g);
        let out = zwick_apsp(&g, 0.5, seed, &record(n, 0.5), true).unwrap();
        let hops = (!signed).then(|| min_hops(&g));
        let mut prev = g.adjacency();
        for (i, s) in out.history.iter().enumerate() {
            let cap = 1.5f64.powi(i as i32 + 1);
            for a in 0..n {
                for b in 0..n {
                    prop_assert!(s.get(a, b) <= prev.get(a, b));
                    prop_assert!(s.get(a, b) >= fw.get(a, b));
                    if let Some(h) = &hops {
                        if h[a][b].is_some_and(|(_, l)| l as f64 <= cap) {
                            prop_assert_eq!(s.get(a, b), fw.get(a, b));
                        }
                    }
                }
            }
            prev = s.clone();
        }
        // below 24 vertices every sample is the full vertex set
        prop_assert_eq!(&out.dist, &fw);
    }
}

#[test]
fn small_graph_examples() {
    let path = WeightedDigraph::new(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
    let d = apsp_mrc(&path, 1.0, &strict(3, 1.0)).unwrap().dist;
    assert_eq!(*d.get(0, 2), Tropical::Finite(2));
    assert_eq!(*d.get(2, 0), Tropical::Inf);
    let dc = diameter_center(&floyd_warshall(&WeightedDigraph::new(1, []).unwrap()), 1.0, &strict(1, 1.0)).unwrap();
    assert_eq!((dc.diameter, dc.center), (0, 0));
    let mut inf = floyd_warshall(&path);
    inf.set(0, 0, Tropical::Finite(0));
    assert!(matches!(diameter_center(&inf, 1.0, &strict(3, 1.0)), Err(MrcError::Disconnected)));
    let tri = WeightedDigraph::new(3, [(0, 1, -1), (1, 2, -1), (2, 0, 1)]).unwrap();
    assert!(negative_triangle(&tri, 1.0, &strict(3, 1.0)).unwrap().found);
    let pos = WeightedDigraph::new(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
    assert!(!negative_triangle(&pos, 1.0, &strict(3, 1.0)).unwrap().found);
    assert_eq!(sample_size(8, 1), 8);
}

#[test]
fn hundred_random_digraphs_n32() {
    for seed in 0..100 {
        let g = inst::digraph(32, 0.1, 1, 10, seed, false).unwrap();
        assert_eq!(apsp_mrc(&g, 1.0, &strict(32, 1.0)).unwrap().dist, floyd_warshall(&g), "seed {seed}");
    }
}
