use mrc::engine::{Enforcement, Engine, MachineBudget};
use mrc::graph::WeightedDigraph;
use mrc::instances as inst;
use mrc::oracles::{floyd_warshall, oracle_detour, oracle_replacement};
use mrc::paths::{
    apsp_with_summaries, detour_table, reconstruct_path, replacement_path, with_retries, PathSummary,
};
use mrc::MrcError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn strict(n: usize, eps: f64) -> Engine {
    Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::Strict))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn samples_lie_on_shortest_paths(n in 2usize..17, p in 0.1f64..0.4, seed in any::<u64>()) {
        let g = inst::digraph(n, p, 0, 9, seed, false).unwrap();
        let fw = floyd_warshall(&g);
        let out = apsp_with_summaries(&g, 1.0, seed, &strict(n, 1.0), None).unwrap();
        prop_assert_eq!(out.dist(), fw.clone());
        let d = |a: usize, b: usize| fw.get(a, b).finite();
        for u in 0..n {
            for v in 0..n {
                let sm = out.summaries.get(u, v);
                let Some(duv) = d(u, v) else { continue };
                if u != v {
                    prop_assert!(sm.hops >= 1);
                }
                for &(w, pos) in &sm.samples {
                    let w = w as usize;
                    prop_assert!(pos <= sm.hops);
                    prop_assert_eq!(d(u, w).zip(d(w, v)).map(|(a, b)| a + b), Some(duv));
                }
            }
        }
    }

    #[test]
    fn reconstruction_verifies_or_fails(n in 2usize..25, seed in any::<u64>()) {
        let g = inst::strongly_connected(n, 0.15, 0, 9, seed).unwrap();
        let fw = floyd_warshall(&g);
        let out = apsp_with_summaries(&g, 1.0, seed, &strict(n, 1.0), None).unwrap();
        for u in 0..n {
            let v = (u * 7 + 3) % n;
            match reconstruct_path(&out.summaries, &g, u, v) {
                Ok(path) => {
                    prop_assert_eq!(path.first(), Some(&u));
                    prop_assert_eq!(path.last(), Some(&v));
                    prop_assert_eq!(g.path_weight(&path), fw.get(u, v).finite());
                }
                Err(MrcError::ReconstructionFailure(_)) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }

    #[test]
    fn detours_match_oracle_and_replacements_dominate(n in 3usize..14, seed in any::<u64>()) {
        let g = inst::digraph(n, 0.3, 1, 9, seed, false).unwrap();
        let (s, t) = (0, n - 1);
        let e = strict(2 * n, 1.0);
        let tab = match with_retries(seed, 10, |sd| detour_table(&g, s, t, 1.0, sd, &e)) {
            Ok(tab) => tab,
            Err(MrcError::NoReplacement) => return Ok(()),
            Err(other) => return Err(TestCaseError::fail(other.to_string())),
        };
        let sg = &tab.split;
        for j in 0..tab.path.len() {
            for l in j + 1..tab.path.len() {
                let got = tab.split_summaries.get(sg.out_id(j), sg.in_id(l)).dist.finite();
                prop_assert_eq!(got, oracle_detour(&g, &tab.path, tab.path[j], tab.path[l]));
            }
        }
        for w in tab.path.windows(2) {
            let ed = (w[0], w[1]);
            match with_retries(seed + 1, 10, |sd| replacement_path(&g, s, t, ed, 1.0, sd, &e)) {
                Ok(ans) => {
                    prop_assert!(ans.length >= tab.length);
                    prop_assert_eq!(Some(ans.length), oracle_replacement(&g, s, t, ed));
                    prop_assert!(!ans.path.windows(2).any(|x| (x[0], x[1]) == ed));
                }
                Err(MrcError::NoReplacement) => prop_assert_eq!(oracle_replacement(&g, s, t, ed), None),
                Err(other) => prop_assert!(false, "{other}"),
            }
        }
    }
}

#[test]
fn merge_keeps_first_with_probability_a_third() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = 30_000;
    let p1 = PathSummary::edge(0, 1, 1, samples, &mut rng);
    let p2 = PathSummary::merge(
        &PathSummary::edge(1, 2, 1, samples, &mut rng),
        &PathSummary::edge(2, 3, 1, samples, &mut rng),
        2,
        &mut rng,
    );
    let m = PathSummary::merge(&p1, &p2, 1, &mut rng);
    assert_eq!(m.hops, 3);
    let (mut first, mut differ) = (0, 0);
    for i in 0..samples {
        let (v, pos) = p2.samples[i];
        let shifted = (v, pos + 1);
        if p1.samples[i] != shifted {
            differ += 1;
            first += usize::from(m.samples[i] == p1.samples[i]);
        }
    }
    let frac = first as f64 / differ as f64;
    assert!((frac - 1.0 / 3.0).abs() < 0.02, "{frac}");
}

#[test]
fn path_graph_rebuilds_the_path() {
    let g = WeightedDigraph::new(8, (0..7).map(|v| (v, v + 1, 2))).unwrap();
    let out = apsp_with_summaries(&g, 1.0, 5, &strict(8, 1.0), None).unwrap();
    assert_eq!(reconstruct_path(&out.summaries, &g, 0, 7).unwrap(), (0..8).collect::<Vec<_>>());
    assert_eq!(reconstruct_path(&out.summaries, &g, 3, 4).unwrap(), vec![3, 4]);
}

#[test]
fn hundred_instances_every_path_edge_n24() {
    let e = strict(48, 1.0);
    for seed in 0..100u64 {
        let g = inst::digraph(24, 0.12, 1, 9, seed + 300, false).unwrap();
        let Ok(tab) = with_retries(seed, 10, |sd| detour_table(&g, 0, 23, 1.0, sd, &e)) else { continue };
        for (i, w) in tab.path.windows(2).enumerate() {
            assert_eq!(tab.best[i].map(|b| b.0), oracle_replacement(&g, 0, 23, (w[0], w[1])), "seed {seed} edge {i}");
        }
    }
}
