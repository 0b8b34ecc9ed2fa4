use mrc::engine::{Enforcement, Engine, MachineBudget};
use mrc::instances as inst;
use mrc::matmul::{load_schoolbook, load_strassen, mrc_matmul, mrc_matmul_rect, mrc_matmul_with_threshold};
use mrc::matrix::Matrix;
use mrc::oracles::naive_matmul;
use num_bigint::BigInt;
use proptest::prelude::*;

fn strict(n: usize, eps: f64) -> Engine {
    Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::Strict))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn square_product_is_exact(n in 1usize..40, eps in 0.3f64..=2.0, seed in any::<u64>()) {
        let dec = load_strassen().unwrap();
        let a = inst::int_matrix(n, n, -1000, 1000, seed);
        let b = inst::int_matrix(n, n, -1000, 1000, seed ^ 1);
        let out = mrc_matmul(&a, &b, eps, &strict(n, eps), &dec).unwrap();
        prop_assert_eq!(&out.c, &naive_matmul(&a, &b));
        let phases = out.schedule.phases as usize;
        prop_assert!(out.report.rounds <= 2 * phases + 2);
        let t = out.schedule.threshold as u64;
        prop_assert_eq!(out.scalar_mults, 7u64.pow(phases as u32) * t * t * t);
    }

    #[test]
    fn rectangular_product_is_exact(
        r in 1usize..24, m in 1usize..24, c in 1usize..24,
        eps in 0.4f64..=1.5, seed in any::<u64>(),
    ) {
        let dec = load_strassen().unwrap();
        let a = inst::int_matrix(r, m, -50, 50, seed);
        let b = inst::int_matrix(m, c, -50, 50, seed ^ 7);
        let n = r.max(m).max(c);
        let out = mrc_matmul_rect(&a, &b, eps, &strict(n, eps), &dec).unwrap();
        prop_assert_eq!(out.c, naive_matmul(&a, &b));
    }

    #[test]
    fn big_integers_and_schoolbook(n in 1usize..12, seed in any::<u64>()) {
        let a = inst::int_matrix(n, n, -9, 9, seed).map(|&v| BigInt::from(v) << 80);
        let b = inst::int_matrix(n, n, -9, 9, seed ^ 3).map(|&v| BigInt::from(v));
        let e = Engine::new(MachineBudget::unlimited());
        let out = mrc_matmul(&a, &b, 1.0, &e, &load_strassen().unwrap()).unwrap();
        prop_assert_eq!(&out.c, &naive_matmul(&a, &b));
        let school = mrc_matmul(&a, &b, 1.0, &e, &load_schoolbook(2).unwrap()).unwrap();
        prop_assert_eq!(&school.c, &out.c);
    }
}

#[test]
fn worked_two_by_two() {
    let a = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
    let b = Matrix::from_rows(vec![vec![5i64, 6], vec![7, 8]]).unwrap();
    let e = Engine::new(MachineBudget::unlimited());
    let dec = load_strassen().unwrap();
    let out = mrc_matmul_with_threshold(&a, &b, 1, &e, &dec).unwrap();
    assert_eq!(out.c, Matrix::from_rows(vec![vec![19, 22], vec![43, 50]]).unwrap());
    assert_eq!(out.scalar_mults, 7);
    let id = Matrix::<i64>::identity(2);
    let out = mrc_matmul_with_threshold(&id, &b, 2, &e, &dec).unwrap();
    assert_eq!((out.c, out.schedule.phases), (b, 0));
}

#[test]
fn multiplication_count_law() {
    let dec = load_strassen().unwrap();
    for k in 2..=6u32 {
        let n = 1usize << k;
        let a = inst::int_matrix(n, n, -3, 3, k as u64);
        let out = mrc_matmul_with_threshold(&a, &a, 2, &Engine::new(MachineBudget::unlimited()), &dec).unwrap();
        assert_eq!(out.scalar_mults, 7u64.pow(k - 1) * 8);
        assert_eq!(out.c, naive_matmul(&a, &a));
    }
}

#[test]
fn n64_half_eps_twenty_instances() {
    let dec = load_strassen().unwrap();
    for seed in 0..20 {
        let a = inst::int_matrix(64, 64, -100, 100, seed);
        let b = inst::int_matrix(64, 64, -100, 100, seed + 100);
        assert_eq!(mrc_matmul(&a, &b, 0.5, &strict(64, 0.5), &dec).unwrap().c, naive_matmul(&a, &b));
    }
}

#[test]
fn rounds_grow_logarithmically() {
    let dec = load_strassen().unwrap();
    for &eps in &[0.5, 1.0] {
        let mut prev = None;
        for k in 2..=8u32 {
            let n = 1usize << k;
            let a = inst::int_matrix(n, n, -2, 2, 5);
            let r = mrc_matmul(&a, &a, eps, &strict(n, eps), &dec).unwrap().report.rounds;
            if let Some(p) = prev {
                assert!(r <= p + 3, "eps {eps}: {p} -> {r} rounds at n={n}");
            }
            prev = Some(r);
        }
    }
}

#[test]
fn rank_one_and_square_rect() {
    let dec = load_strassen().unwrap();
    let e = Engine::new(MachineBudget::unlimited());
    let col = inst::int_matrix(9, 1, -5, 5, 1);
    let row = inst::int_matrix(1, 9, -5, 5, 2);
    let outer = mrc_matmul_rect(&col, &row, 1.0, &e, &dec).unwrap().c;
    for i in 0..9 {
        for j in 0..9 {
            assert_eq!(*outer.get(i, j), col.get(i, 0) * row.get(0, j));
        }
    }
    let a = inst::int_matrix(8, 8, -5, 5, 3);
    assert_eq!(
        mrc_matmul_rect(&a, &a, 1.0, &e, &dec).unwrap().c,
        mrc_matmul(&a, &a, 1.0, &e, &dec).unwrap().c
    );
}
