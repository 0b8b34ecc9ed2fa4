use mrc::engine::{memory_price, Emitter, Enforcement, Engine, KeyValue, MachineBudget, ResourceReport, Round};
use mrc::instances as inst;
use mrc::kernels::{ov_dimension, ov_mrc};
use mrc::key;
use num_rational::Ratio;
use proptest::prelude::*;

fn bucket_job(input: &[(i64, i64)], buckets: i64, engine: &Engine) -> (Vec<KeyValue<i64>>, ResourceReport) {
    let kvs: Vec<KeyValue<i64>> = input.iter().map(|&(k, v)| KeyValue::new(key!("in", k), v)).collect();
    let spread = Round::new(
        move |kv: KeyValue<i64>, e: &mut Emitter<i64>| {
            e.emit(key!("b", kv.value.rem_euclid(buckets)), kv.value);
            e.emit(key!("all"), kv.value);
        },
        |k, vs, e| {
            e.charge(vs.len() as u64);
            e.emit(k.clone(), vs.iter().sum());
        },
    );
    engine.run_job(&[spread, Round::identity()], kvs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deterministic_across_workers(
        input in prop::collection::vec((0i64..50, -1000i64..1000), 0..200),
        buckets in 1i64..9,
    ) {
        let single = bucket_job(&input, buckets, &Engine::new(MachineBudget::unlimited()));
        let pooled = bucket_job(&input, buckets, &Engine::new(MachineBudget::unlimited()).with_workers(4));
        let again = bucket_job(&input, buckets, &Engine::new(MachineBudget::unlimited()).with_workers(3));
        prop_assert_eq!(&single, &pooled);
        prop_assert_eq!(&single, &again);
    }

    #[test]
    fn conservation_and_trace_bounds(
        input in prop::collection::vec((0i64..50, -1000i64..1000), 1..200),
        buckets in 1i64..9,
    ) {
        let (out, rep) = bucket_job(&input, buckets, &Engine::new(MachineBudget::unlimited()));
        let t = &rep.traces[0];
        // every input reaches its bucket and the "all" machine
        prop_assert_eq!(t.shuffled_words, 2 * input.len() as u64);
        prop_assert_eq!(t.total_machine_words, t.shuffled_words);
        let distinct: std::collections::BTreeSet<i64> = input.iter().map(|&(_, v)| v.rem_euclid(buckets)).collect();
        prop_assert_eq!(t.machines_used, distinct.len() as u64 + 1);
        prop_assert_eq!(rep.rounds, rep.traces.len());
        for tr in &rep.traces {
            prop_assert!(tr.machines_used >= 1);
            prop_assert!(tr.shuffled_words <= tr.machines_used * tr.peak_machine_words);
        }
        let total: i64 = input.iter().map(|p| p.1).sum();
        let all = out.iter().find(|kv| kv.key == key!("all")).unwrap();
        prop_assert_eq!(all.value, total);
        // output in ascending key order
        prop_assert!(out.windows(2).all(|w| w[0].key < w[1].key));
    }

    #[test]
    fn metering_matches_known_footprints(
        sizes in prop::collection::vec(1usize..20, 1..12),
        scratch in prop::collection::vec(0u64..30, 12),
    ) {
        let mut input = Vec::new();
        for (m, &s) in sizes.iter().enumerate() {
            for i in 0..s {
                input.push(KeyValue::new(key!("x", m, i), m as i64));
            }
        }
        let sc = scratch.clone();
        let round = Round::new(
            |kv: KeyValue<i64>, e: &mut Emitter<i64>| e.emit(key!("m", kv.value), kv.value),
            move |k, vs, e| {
                e.scratch(sc[k.int(1) as usize]);
                e.emit(k.clone(), vs.len() as i64);
            },
        );
        let (_, rep) = Engine::new(MachineBudget::unlimited()).run_job(&[round], input).unwrap();
        let want_peak = sizes.iter().enumerate().map(|(m, &s)| s as u64 + scratch[m]).max().unwrap();
        let want_total: u64 = sizes.iter().enumerate().map(|(m, &s)| s as u64 + scratch[m]).sum();
        prop_assert_eq!(rep.peak_machine_words, want_peak);
        prop_assert_eq!(rep.peak_total_memory_words, want_total);
        prop_assert_eq!(rep.peak_machines, sizes.len() as u64);
    }

    #[test]
    fn strict_cap_is_exact(words in 1u64..40, cap in 1u64..40) {
        let input: Vec<KeyValue<i64>> = (0..words as i64).map(|i| KeyValue::new(key!("x", i), i)).collect();
        let gather = Round::new(
            |kv: KeyValue<i64>, e: &mut Emitter<i64>| e.emit(key!("one"), kv.value),
            |k, vs, e| e.emit(k.clone(), vs.len() as i64),
        );
        let res = Engine::new(MachineBudget::new(cap, Enforcement::Strict)).run_job(&[gather], input);
        prop_assert_eq!(res.is_ok(), words <= cap);
    }
}

#[test]
fn ov_job_is_one_round() {
    let (a, b) = inst::vector_lists(16, ov_dimension(16, 2.0), 0.5, 3);
    let e = Engine::new(MachineBudget::for_size(16, 2.0 / 3.0, 8.0, Enforcement::Strict));
    let rep = ov_mrc(&a, &b, 2.0 / 3.0, &e).unwrap().report;
    assert_eq!(rep.rounds, 1);
    assert!(rep.memory_price().unwrap() >= 1.0);
}

#[test]
fn memory_price_quotient_cases() {
    let rep = ResourceReport {
        peak_total_memory_words: 8 * 100,
        ..Default::default()
    };
    assert_eq!(memory_price(&rep, 100), Ratio::from_integer(8));
    assert_eq!(memory_price(&rep, 800), Ratio::from_integer(1));
}
