use super::{EngineError, Session, Words};
use crate::key;
use crate::engine::KeyValue;

/// Shape of a tree reduction.
#[derive(Clone, Copy, Debug)]
pub struct FoldPlan {
    /// Values combined per group per machine in one round.
    pub fan_in: usize,
    /// Groups sharing one machine.
    pub pack: usize,
    /// Run exactly this many rounds (groups that are already reduced are carried
    /// along); `None` runs `⌈log_fan_in(max group size)⌉` rounds.
    pub rounds: Option<usize>,
}

impl FoldPlan {
    pub fn fan_in(fan_in: usize) -> Self {
        FoldPlan {
            fan_in,
            pack: 1,
            rounds: None,
        }
    }
}

#[derive(Clone)]
struct Item<T> {
    group: usize,
    idx: usize,
    value: T,
}

impl<T: Words> Words for Item<T> {
    // the value plus its group id
    fn words(&self) -> u64 {
        self.value.words() + 1
    }
}

/// Folds every group to one value with `combine` in rounds of fan-in `plan.fan_in`.
/// Values are combined left to right in their original order. Empty groups give `None`.
pub fn tree_fold<T, F>(
    session: &mut Session<'_>,
    groups: Vec<Vec<T>>,
    plan: FoldPlan,
    combine: F,
) -> Result<Vec<Option<T>>, EngineError>
where
    T: Words + Clone + Send + Sync,
    F: Fn(T, T) -> T + Sync,
{
    assert!(plan.fan_in >= 2, "fan_in must be at least 2");
    let pack = plan.pack.max(1);
    let fan = plan.fan_in;
    let mut result: Vec<Option<T>> = vec![None; groups.len()];
    let mut sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let mut live: Vec<KeyValue<Item<T>>> = Vec::new();
    let forced = plan.rounds.is_some_and(|t| t > 0);
    if let Some(total) = plan.rounds {
        let deepest = sizes.iter().map(|&s| crate::num::tree_depth(s, fan)).max().unwrap_or(0);
        assert!(deepest <= total, "{total} rounds cannot reduce groups needing {deepest}");
    }
    for (g, vals) in groups.into_iter().enumerate() {
        if vals.len() == 1 && !forced {
            result[g] = vals.into_iter().next();
            continue;
        }
        for (idx, value) in vals.into_iter().enumerate() {
            live.push(KeyValue::new(key!("part", g, idx), Item { group: g, idx, value }));
        }
    }

    let mut r = 0;
    loop {
        let more = match plan.rounds {
            Some(total) => r < total,
            None => !live.is_empty(),
        };
        if !more {
            break;
        }
        let out = session.round(
            std::mem::take(&mut live),
            |kv: KeyValue<Item<T>>, e| {
                let it = kv.value;
                e.emit(key!("fold", it.group / pack, it.idx / fan), it);
            },
            |_, items: Vec<Item<T>>, e: &mut super::Emitter<Item<T>>| {
                let mut acc: Vec<Item<T>> = Vec::new();
                let mut ops = 0;
                for it in items {
                    match acc.iter_mut().find(|a| a.group == it.group) {
                        Some(a) => {
                            let prev = a.value.clone();
                            a.value = combine(prev, it.value);
                            ops += 1;
                        }
                        None => acc.push(Item {
                            group: it.group,
                            idx: it.idx / fan,
                            value: it.value,
                        }),
                    }
                }
                e.charge(ops);
                for it in acc {
                    e.emit(key!("part", it.group, it.idx), it);
                }
            },
        )?;
        r += 1;
        for s in sizes.iter_mut() {
            *s = s.div_ceil(fan);
        }
        for kv in out {
            let g = kv.value.group;
            let done = match plan.rounds {
                Some(total) => r >= total,
                None => sizes[g] <= 1,
            };
            if done {
                result[g] = Some(kv.value.value);
            } else {
                live.push(kv);
            }
        }
    }
    Ok(result)
}
