use mrc::graph::WeightedDigraph;
use mrc::instances as inst;
use mrc::matrix::{Matrix, Tropical};
use mrc::oracles::*;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_pointer_agrees_with_cubic(
        a in prop::collection::vec(-25i64..25, 0..15),
        b in prop::collection::vec(-25i64..25, 0..15),
        c in prop::collection::vec(-25i64..25, 0..15),
    ) {
        prop_assert_eq!(two_pointer_3sum(&a, &b, &c), cubic_3sum(&a, &b, &c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn floyd_warshall_matches_repeated_squaring(n in 1usize..14, seed in any::<u64>()) {
        let g = inst::digraph(n, 0.3, -2, 9, seed, true).unwrap();
        let mut s = g.adjacency();
        let mut len = 1;
        while len < n {
            s = naive_tropical(&s, &s);
            len *= 2;
        }
        prop_assert_eq!(floyd_warshall(&g), s);
    }

    #[test]
    fn real_input_spectrum_is_conjugate_symmetric(n in 1usize..40, seed in any::<u64>()) {
        let x: Vec<Complex64> = inst::signal(n, seed).iter().map(|v| Complex64::new(v.re, 0.0)).collect();
        let f = naive_dft(&x);
        for k in 1..n {
            prop_assert!((f[k] - f[n - k].conj()).norm() < 1e-9);
        }
    }

    #[test]
    fn dijkstra_matches_floyd_warshall(n in 1usize..16, seed in any::<u64>()) {
        let g = inst::digraph(n, 0.3, 0, 9, seed, false).unwrap();
        let fw = floyd_warshall(&g);
        for s in 0..n {
            let (d, _) = dijkstra(&g, s, None, &[]);
            for t in 0..n {
                prop_assert_eq!(d[t], fw.get(s, t).finite());
            }
        }
    }
}

#[test]
fn worked_oracle_cases() {
    let m = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
    let n = Matrix::from_rows(vec![vec![5i64, 6], vec![7, 8]]).unwrap();
    assert_eq!(naive_matmul(&m, &n), Matrix::from_rows(vec![vec![19, 22], vec![43, 50]]).unwrap());
    assert_eq!(naive_matmul(&Matrix::identity(2), &n), n);
    let path = WeightedDigraph::new(3, [(0, 1, 4), (1, 2, 5)]).unwrap();
    assert_eq!(*floyd_warshall(&path).get(0, 2), Tropical::Finite(9));
    let neg = WeightedDigraph::new(3, [(0, 1, 1), (1, 2, -3), (2, 0, 1)]).unwrap();
    assert!(bellman_ford_validate(&neg).is_some());
    let tri = WeightedDigraph::new(3, [(0, 2, 1), (0, 1, 1), (1, 2, 1)]).unwrap();
    assert_eq!(oracle_replacement(&tri, 0, 2, (0, 2)), Some(2));
    assert_eq!(oracle_replacement(&tri, 0, 1, (0, 1)), None);
    assert_eq!(oracle_second_path(&tri, 0, 2), Some(2));
    assert_eq!(two_pointer_3sum(&[1, 2], &[1, 2], &[10]), None);
}
