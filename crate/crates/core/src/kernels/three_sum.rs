use std::collections::BTreeMap;

use crate::engine::{Emitter, Enforcement, Engine, KeyValue, MachineBudget, ResourceReport, Words};
use crate::error::{MrcError, Result};
use crate::key;
use crate::num::ceil_pow;

/// Three strictly ascending lists with a map back to the caller's indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedTriple {
    pub lists: [Vec<i64>; 3],
    /// For each list and deduplicated position, the first original index holding that value.
    pub origin: [Vec<usize>; 3],
    pub duplicates_removed: usize,
}

impl SortedTriple {
    pub fn new(a: &[i64], b: &[i64], c: &[i64]) -> Self {
        let mut dups = 0;
        let mut prep = |xs: &[i64]| {
            let mut idx: Vec<usize> = (0..xs.len()).collect();
            idx.sort_by_key(|&i| (xs[i], i));
            let mut vals = Vec::new();
            let mut orig = Vec::new();
            for i in idx {
                if vals.last() == Some(&xs[i]) {
                    dups += 1;
                } else {
                    vals.push(xs[i]);
                    orig.push(i);
                }
            }
            (vals, orig)
        };
        let (la, oa) = prep(a);
        let (lb, ob) = prep(b);
        let (lc, oc) = prep(c);
        SortedTriple {
            lists: [la, lb, lc],
            origin: [oa, ob, oc],
            duplicates_removed: dups,
        }
    }

    /// Original index of `value` in list `which`.
    pub fn original_index(&self, which: usize, value: i64) -> Option<usize> {
        self.lists[which]
            .binary_search(&value)
            .ok()
            .map(|p| self.origin[which][p])
    }
}

/// `(head, tail)` of every sublist, per list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeadsTails {
    pub a: Vec<(i64, i64)>,
    pub b: Vec<(i64, i64)>,
    pub c: Vec<(i64, i64)>,
}

impl HeadsTails {
    pub fn from_lists(a: &[i64], b: &[i64], c: &[i64], len: usize) -> Self {
        let ht = |xs: &[i64]| {
            xs.chunks(len)
                .map(|ch| (ch[0], ch[ch.len() - 1]))
                .collect::<Vec<_>>()
        };
        HeadsTails {
            a: ht(a),
            b: ht(b),
            c: ht(c),
        }
    }
}

/// Triples `(i, j, k)` with `H(A_i)+H(B_j) ≤ T(C_k)` and `T(A_i)+T(B_j) ≥ H(C_k)`,
/// in lexicographic order. For fixed `i` both bounds on `k` move monotonically in `j`.
pub fn nontrivial_subtasks(ht: &HeadsTails) -> Vec<(usize, usize, usize)> {
    let nc = ht.c.len();
    let mut out = Vec::new();
    for (i, &(ha, ta)) in ht.a.iter().enumerate() {
        let (mut lo, mut hi) = (0, 0);
        for (j, &(hb, tb)) in ht.b.iter().enumerate() {
            while lo < nc && ht.c[lo].1 < ha + hb {
                lo += 1;
            }
            while hi < nc && ht.c[hi].0 <= ta + tb {
                hi += 1;
            }
            for k in lo..hi.max(lo) {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Cap of `⌈c · 3⌈n^ε⌉⌉` words.
pub fn three_sum_budget(n: usize, eps: f64, c: f64, enforcement: Enforcement) -> MachineBudget {
    let w = (c * 3.0 * ceil_pow(n, eps) as f64).ceil() as u64;
    MachineBudget::new(w.max(1), enforcement)
}

#[derive(Clone, Debug)]
pub struct ThreeSumOutcome {
    /// Lexicographically smallest `(a, b, c)` with `a + b = c`.
    pub solution: Option<(i64, i64, i64)>,
    pub subtasks: usize,
    pub duplicates_removed: usize,
    pub report: ResourceReport,
}

#[derive(Clone, Copy)]
struct Elem {
    list: u8,
    sub: usize,
    val: i64,
}

// value plus sublist id
impl Words for Elem {
    fn words(&self) -> u64 {
        2
    }
}

#[derive(Clone, Copy)]
struct Bound {
    list: u8,
    sub: usize,
    head: bool,
    val: i64,
}

impl Words for Bound {
    fn words(&self) -> u64 {
        2
    }
}

/// First `(b, c)` with `a + b = c` scanning both lists upward, and the comparisons used.
fn scan_pair(a: i64, bs: &[i64], cs: &[i64]) -> (Option<(i64, i64)>, u64) {
    let (mut pb, mut pc, mut ops) = (0, 0, 0);
    while pb < bs.len() && pc < cs.len() {
        ops += 1;
        let s = a + bs[pb];
        match s.cmp(&cs[pc]) {
            std::cmp::Ordering::Equal => return (Some((bs[pb], cs[pc])), ops),
            std::cmp::Ordering::Less => pb += 1,
            std::cmp::Ordering::Greater => pc += 1,
        }
    }
    (None, ops)
}

/// Two-round 3-SUM over sublists of length `⌈n^ε⌉`.
pub fn three_sum_mrc(a: &[i64], b: &[i64], c: &[i64], eps: f64, engine: &Engine) -> Result<ThreeSumOutcome> {
    if !(0.5..=1.0).contains(&eps) {
        return Err(MrcError::EpsilonOutOfRange { eps, lo: 0.5, hi: 1.0 });
    }
    let n = a.len().max(b.len()).max(c.len());
    let triple = SortedTriple::new(a, b, c);
    let len = ceil_pow(n, eps);

    let mut elems = Vec::new();
    for (l, xs) in triple.lists.iter().enumerate() {
        for (p, &val) in xs.iter().enumerate() {
            let e = Elem {
                list: l as u8,
                sub: p / len,
                val,
            };
            elems.push(KeyValue::new(key!("in", l, p), (e, p, xs.len())));
        }
    }
    let elems_plain: Vec<KeyValue<Elem>> = elems
        .iter()
        .map(|kv| KeyValue::new(kv.key.clone(), kv.value.0))
        .collect();

    let mut s = engine.session();
    s.set_baseline(3 * n as u64);

    // round 1: heads and tails meet on one machine, which plans the subtasks
    let plan = s.round(
        elems,
        |kv: KeyValue<(Elem, usize, usize)>, e: &mut Emitter<Bound>| {
            let (x, p, total) = kv.value;
            let b = |head| Bound {
                list: x.list,
                sub: x.sub,
                head,
                val: x.val,
            };
            if p % len == 0 {
                e.emit(key!("plan"), b(true));
            }
            if p % len == len - 1 || p + 1 == total {
                e.emit(key!("plan"), b(false));
            }
        },
        |_, bounds: Vec<Bound>, e: &mut Emitter<()>| {
            let mut ht = [Vec::new(), Vec::new(), Vec::new()];
            for bd in &bounds {
                let v = &mut ht[bd.list as usize];
                if v.len() <= bd.sub {
                    v.resize(bd.sub + 1, (0, 0));
                }
                if bd.head {
                    v[bd.sub].0 = bd.val;
                } else {
                    v[bd.sub].1 = bd.val;
                }
            }
            let [ha, hb, hc] = ht;
            let tasks = nontrivial_subtasks(&HeadsTails { a: ha, b: hb, c: hc });
            e.charge(bounds.len() as u64 + tasks.len() as u64);
            for (i, j, k) in tasks {
                e.emit(key!("task", i, j, k), ());
            }
        },
    )?;

    let mut member: [BTreeMap<usize, Vec<(usize, usize, usize)>>; 3] = Default::default();
    for kv in &plan {
        let t = (kv.key.int(1) as usize, kv.key.int(2) as usize, kv.key.int(3) as usize);
        member[0].entry(t.0).or_default().push(t);
        member[1].entry(t.1).or_default().push(t);
        member[2].entry(t.2).or_default().push(t);
    }
    let subtasks = plan.len();

    // round 2: one machine per non-trivial subtask
    let hits = s.round(
        elems_plain,
        |kv: KeyValue<Elem>, e: &mut Emitter<Elem>| {
            let x = kv.value;
            if let Some(ts) = member[x.list as usize].get(&x.sub) {
                for &(i, j, k) in ts {
                    e.emit(key!("t", i, j, k), x);
                }
            }
        },
        |_, xs: Vec<Elem>, e: &mut Emitter<(i64, i64, i64)>| {
            let mut lists = [Vec::new(), Vec::new(), Vec::new()];
            for x in xs {
                lists[x.list as usize].push(x.val);
            }
            let mut ops = 0;
            for &av in &lists[0] {
                let (hit, o) = scan_pair(av, &lists[1], &lists[2]);
                ops += o;
                if let Some((bv, cv)) = hit {
                    e.emit(key!("hit"), (av, bv, cv));
                    break;
                }
            }
            e.charge(ops);
        },
    )?;

    Ok(ThreeSumOutcome {
        solution: hits.into_iter().map(|kv| kv.value).min(),
        subtasks,
        duplicates_removed: triple.duplicates_removed,
        report: s.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(n: usize, eps: f64) -> Engine {
        Engine::new(three_sum_budget(n, eps, 8.0, Enforcement::Strict))
    }

    #[test]
    fn zeros() {
        let out = three_sum_mrc(&[0], &[0], &[0], 0.5, &engine(1, 0.5)).unwrap();
        assert_eq!(out.solution, Some((0, 0, 0)));
        assert_eq!(out.report.rounds, 2);
    }

    #[test]
    fn no_solution_above_max_sum() {
        let out = three_sum_mrc(&[1, 2, 3], &[4, 5, 6], &[10], 1.0, &engine(3, 1.0)).unwrap();
        assert_eq!(out.solution, None);
        assert_eq!(out.report.rounds, 2);
    }

    #[test]
    fn finds_eight() {
        let out = three_sum_mrc(&[1, 2, 3], &[4, 5, 6], &[8], 0.5, &engine(3, 0.5)).unwrap();
        let (x, y, z) = out.solution.unwrap();
        assert_eq!((x + y, z), (8, 8));
        assert_eq!(out.solution, Some((2, 6, 8)));
    }

    #[test]
    fn single_sublist_per_list() {
        let ht = HeadsTails {
            a: vec![(1, 3)],
            b: vec![(4, 6)],
            c: vec![(10, 12)],
        };
        assert!(nontrivial_subtasks(&ht).is_empty());
        let ht = HeadsTails {
            a: vec![(1, 3)],
            b: vec![(4, 6)],
            c: vec![(9, 12)],
        };
        assert_eq!(nontrivial_subtasks(&ht), vec![(0, 0, 0)]);
    }

    #[test]
    fn worked_subtask_set() {
        let a = [1, 2, 3, 4];
        let c = [2, 4, 6, 8];
        let ht = HeadsTails::from_lists(&a, &a, &c, 2);
        // brute force over the 8 combinations
        let mut want = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    if ht.a[i].0 + ht.b[j].0 <= ht.c[k].1 && ht.a[i].1 + ht.b[j].1 >= ht.c[k].0 {
                        want.push((i, j, k));
                    }
                }
            }
        }
        assert_eq!(want, vec![(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 1)]);
        assert_eq!(nontrivial_subtasks(&ht), want);
    }

    #[test]
    fn dedup_keeps_index_map() {
        let t = SortedTriple::new(&[5, 1, 5, 3], &[2, 2], &[]);
        assert_eq!(t.lists[0], vec![1, 3, 5]);
        assert_eq!(t.origin[0], vec![1, 3, 0]);
        assert_eq!(t.duplicates_removed, 2);
        assert_eq!(t.original_index(1, 2), Some(0));
    }

    #[test]
    fn eps_below_half_rejected() {
        let err = three_sum_mrc(&[0], &[0], &[0], 0.4, &engine(1, 0.5)).unwrap_err();
        assert!(matches!(err, MrcError::EpsilonOutOfRange { .. }));
    }
}
