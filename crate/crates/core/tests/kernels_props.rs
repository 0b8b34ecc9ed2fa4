use mrc::engine::{Enforcement, Engine, MachineBudget};
use mrc::instances as inst;
use mrc::kernels::{
    nontrivial_subtasks, ov_dimension, ov_mrc, three_sum_budget, three_sum_mrc, BitVector, HeadsTails, SortedTriple,
    VectorList,
};
use mrc::num::ceil_pow;
use mrc::oracles::{brute_ov, cubic_3sum, two_pointer_3sum};
use proptest::prelude::*;

fn lists(n: usize, range: i64) -> impl Strategy<Value = [Vec<i64>; 3]> {
    let l = || prop::collection::vec(-range..=range, n);
    (l(), l(), l()).prop_map(|(a, b, c)| [a, b, c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ov_matches_brute_force_in_one_round(
        n in 1usize..40,
        density in 0.2f64..0.8,
        seed in any::<u64>(),
        eps in 0.3f64..=1.0,
    ) {
        let (a, b) = inst::vector_lists(n, ov_dimension(n, 2.0), density, seed);
        let e = Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::Strict));
        let out = ov_mrc(&a, &b, eps, &e).unwrap();
        prop_assert_eq!(out.witness, brute_ov(&a, &b));
        prop_assert_eq!(out.found, out.witness.is_some());
        prop_assert_eq!(out.report.rounds, 1);
        let q = ceil_pow(n, eps);
        prop_assert_eq!(out.report.peak_machines, (n.div_ceil(q) * n.div_ceil(q)) as u64);
    }

    #[test]
    fn three_sum_matches_oracles_in_two_rounds(
        [a, b, c] in (1usize..48).prop_flat_map(|n| lists(n, 40)),
        eps in 0.5f64..=1.0,
    ) {
        let n = a.len();
        let e = Engine::new(three_sum_budget(n, eps, 8.0, Enforcement::Strict));
        let out = three_sum_mrc(&a, &b, &c, eps, &e).unwrap();
        prop_assert_eq!(out.solution, two_pointer_3sum(&a, &b, &c));
        prop_assert_eq!(out.solution, cubic_3sum(&a, &b, &c));
        prop_assert_eq!(out.report.rounds, 2);
    }

    #[test]
    fn subtask_filter_is_complete(
        [a, b, c] in (2usize..40).prop_flat_map(|n| lists(n, 30)),
        len in 1usize..8,
    ) {
        let st = SortedTriple::new(&a, &b, &c);
        let [la, lb, lc] = &st.lists;
        let ht = HeadsTails::from_lists(la, lb, lc, len);
        let subs = nontrivial_subtasks(&ht);
        // exactly the triples passing both inequalities
        let mut brute = Vec::new();
        for (i, &(ha, ta)) in ht.a.iter().enumerate() {
            for (j, &(hb, tb)) in ht.b.iter().enumerate() {
                for (k, &(hc, tc)) in ht.c.iter().enumerate() {
                    if ha + hb <= tc && ta + tb >= hc {
                        brute.push((i, j, k));
                    }
                }
            }
        }
        prop_assert_eq!(&subs, &brute);
        for (x, &va) in la.iter().enumerate() {
            for (y, &vb) in lb.iter().enumerate() {
                if let Ok(z) = lc.binary_search(&(va + vb)) {
                    prop_assert!(subs.contains(&(x / len, y / len, z / len)));
                }
            }
        }
    }
}

#[test]
fn three_sum_small_cases() {
    let e = Engine::new(MachineBudget::unlimited());
    assert_eq!(three_sum_mrc(&[1, 2, 3], &[4, 5, 6], &[10], 1.0, &e).unwrap().solution, None);
    let (x, y, z) = three_sum_mrc(&[1, 2, 3], &[4, 5, 6], &[8], 1.0, &e).unwrap().solution.unwrap();
    assert_eq!((x + y, z), (8, 8));
}

#[test]
fn ov_worked_cases() {
    let v = |bits: &[bool]| VectorList::new(vec![BitVector::from_bools(bits)]).unwrap();
    let e = Engine::new(MachineBudget::unlimited());
    assert!(ov_mrc(&v(&[true, false]), &v(&[false, true]), 1.0, &e).unwrap().found);
    assert!(!ov_mrc(&v(&[true, true]), &v(&[true, false]), 1.0, &e).unwrap().found);
}

#[test]
fn machine_counts_track_the_power_law() {
    for &eps in &[0.5, 0.75] {
        let ratios: Vec<f64> = [64usize, 128, 256, 512]
            .iter()
            .flat_map(|&n| {
                let (a, b) = inst::vector_lists(n, ov_dimension(n, 2.0), 0.5, n as u64);
                let e = Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::Strict));
                let ov = ov_mrc(&a, &b, eps, &e).unwrap().report.peak_machines as f64;
                let [x, y, z] = inst::int_lists(n, 1 << 30, n as u64);
                let e = Engine::new(three_sum_budget(n, eps, 8.0, Enforcement::Strict));
                let ts = three_sum_mrc(&x, &y, &z, eps, &e).unwrap().report.peak_machines as f64;
                let scale = (n as f64).powf(2.0 * (1.0 - eps));
                [ov / scale, ts / scale]
            })
            .collect();
        for pick in 0..2 {
            let sel: Vec<f64> = ratios.iter().skip(pick).step_by(2).copied().collect();
            let hi = sel.iter().cloned().fold(f64::MIN, f64::max);
            let lo = sel.iter().cloned().fold(f64::MAX, f64::min);
            assert!(hi / lo <= 4.0, "eps {eps} kernel {pick}: {sel:?}");
        }
    }
}
