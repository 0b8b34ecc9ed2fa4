//! Deterministic MRC simulator.
//!
//! A job is a sequence of synchronous rounds. In each round the mapper is applied to
//! every input pair, the emitted pairs are grouped by key, and one virtual machine per
//! distinct key runs the reducer on its values. Machines are processed in ascending key
//! order and every machine's resident words are metered against a [`MachineBudget`].

mod key;
mod report;
mod tree;
mod words;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use key::{Key, KeyPart, MAX_TAG_LEN};
pub use report::{memory_price, ResourceReport, RoundTrace};
pub use tree::{tree_fold, FoldPlan};
pub use words::Words;

use crate::num::ceil_tol;

/// A keyed message.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyValue<V> {
    pub key: Key,
    pub value: V,
}

impl<V> KeyValue<V> {
    pub fn new(key: Key, value: V) -> Self {
        KeyValue { key, value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Enforcement {
    Strict,
    RecordOnly,
}

/// Per-machine memory cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineBudget {
    pub memory_words: u64,
    pub enforcement: Enforcement,
}

/// Default constant in front of `n^ε`.
pub const DEFAULT_BUDGET_CONST: f64 = 8.0;

impl MachineBudget {
    pub fn new(memory_words: u64, enforcement: Enforcement) -> Self {
        assert!(memory_words > 0, "memory_words must be positive");
        MachineBudget {
            memory_words,
            enforcement,
        }
    }

    /// `⌈c·n^ε⌉` words.
    pub fn for_size(n: usize, eps: f64, c: f64, enforcement: Enforcement) -> Self {
        let w = ceil_tol(c * (n.max(1) as f64).powf(eps)).max(1.0) as u64;
        Self::new(w, enforcement)
    }

    /// Same enforcement, cap multiplied by `factor` (for multi-word entries).
    pub fn scaled(&self, factor: u64) -> Self {
        Self::new(self.memory_words.saturating_mul(factor.max(1)), self.enforcement)
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX / 4, Enforcement::RecordOnly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("round {round}: machine {key} needs {words_needed} words, cap is {limit}")]
    BudgetExceeded {
        round: usize,
        key: String,
        words_needed: u64,
        limit: u64,
    },
    #[error("round {round}: mapper emitted malformed key {key}")]
    NonDeterministicKey { round: usize, key: String },
}

/// Collects the pairs a mapper or reducer emits, plus its metered work and scratch.
pub struct Emitter<V> {
    out: Vec<KeyValue<V>>,
    work: u64,
    scratch: u64,
}

impl<V> Emitter<V> {
    fn new() -> Self {
        Emitter {
            out: Vec::new(),
            work: 0,
            scratch: 0,
        }
    }

    pub fn emit(&mut self, key: Key, value: V) {
        self.out.push(KeyValue { key, value });
    }

    /// Records `ops` primitive operations.
    pub fn charge(&mut self, ops: u64) {
        self.work += ops;
    }

    /// Declares `words` of working memory held alongside the machine's input.
    pub fn scratch(&mut self, words: u64) {
        self.scratch += words;
    }
}

type MapFn<'a, V> = Box<dyn Fn(KeyValue<V>, &mut Emitter<V>) + Sync + 'a>;
type ReduceFn<'a, V> = Box<dyn Fn(&Key, Vec<V>, &mut Emitter<V>) + Sync + 'a>;

/// One (mapper, reducer) pair of a homogeneous job.
pub struct Round<'a, V> {
    mapper: MapFn<'a, V>,
    reducer: ReduceFn<'a, V>,
}

impl<'a, V> Round<'a, V> {
    pub fn new(
        mapper: impl Fn(KeyValue<V>, &mut Emitter<V>) + Sync + 'a,
        reducer: impl Fn(&Key, Vec<V>, &mut Emitter<V>) + Sync + 'a,
    ) -> Self {
        Round {
            mapper: Box::new(mapper),
            reducer: Box::new(reducer),
        }
    }

    pub fn identity() -> Self {
        Round::new(
            |kv, out| out.emit(kv.key, kv.value),
            |k, vs, out| {
                for v in vs {
                    out.emit(k.clone(), v);
                }
            },
        )
    }
}

struct MachineOutcome<O> {
    out: Vec<KeyValue<O>>,
    input_words: u64,
    resident: u64,
    work: u64,
}

/// The simulator. Cheap to clone; the worker pool is shared.
#[derive(Clone)]
pub struct Engine {
    budget: MachineBudget,
    workers: usize,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Engine {
    pub fn new(budget: MachineBudget) -> Self {
        Engine {
            budget,
            workers: 1,
            pool: None,
        }
    }

    /// Runs machines on `workers` threads. Outputs and metering do not depend on it.
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self.pool = if self.workers > 1 {
            Some(Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(self.workers)
                    .build()
                    .expect("thread pool"),
            ))
        } else {
            None
        };
        self
    }

    pub fn budget(&self) -> MachineBudget {
        self.budget
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Same workers, different cap.
    pub fn with_budget(&self, budget: MachineBudget) -> Engine {
        Engine {
            budget,
            workers: self.workers,
            pool: self.pool.clone(),
        }
    }

    pub fn session(&self) -> Session<'_> {
        Session {
            engine: self,
            traces: Vec::new(),
            notes: Vec::new(),
            baseline: None,
        }
    }

    /// Executes one round.
    pub fn run_round<I, M, O, FM, FR>(
        &self,
        round_index: usize,
        input: Vec<KeyValue<I>>,
        mapper: FM,
        reducer: FR,
    ) -> Result<(Vec<KeyValue<O>>, RoundTrace), EngineError>
    where
        I: Send,
        M: Words + Send,
        O: Send,
        FM: Fn(KeyValue<I>, &mut Emitter<M>) + Sync,
        FR: Fn(&Key, Vec<M>, &mut Emitter<O>) + Sync,
    {
        match &self.pool {
            Some(pool) => pool.install(|| self.round_inner(round_index, input, &mapper, &reducer)),
            None => self.round_inner(round_index, input, &mapper, &reducer),
        }
    }

    fn round_inner<I, M, O, FM, FR>(
        &self,
        round_index: usize,
        input: Vec<KeyValue<I>>,
        mapper: &FM,
        reducer: &FR,
    ) -> Result<(Vec<KeyValue<O>>, RoundTrace), EngineError>
    where
        I: Send,
        M: Words + Send,
        O: Send,
        FM: Fn(KeyValue<I>, &mut Emitter<M>) + Sync,
        FR: Fn(&Key, Vec<M>, &mut Emitter<O>) + Sync,
    {
        let run_map = |kv: KeyValue<I>| {
            let mut e = Emitter::new();
            mapper(kv, &mut e);
            e
        };
        let mapped: Vec<Emitter<M>> = if self.pool.is_some() {
            input.into_par_iter().map(run_map).collect()
        } else {
            input.into_iter().map(run_map).collect()
        };

        let mut map_work = 0u64;
        let mut pairs: Vec<(Key, M)> = Vec::new();
        for e in mapped {
            map_work += e.work;
            for kv in e.out {
                if !kv.key.is_well_formed() {
                    return Err(EngineError::NonDeterministicKey {
                        round: round_index,
                        key: kv.key.to_string(),
                    });
                }
                pairs.push((kv.key, kv.value));
            }
        }
        let shuffled_words: u64 = pairs.iter().map(|(_, v)| v.words()).sum();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));

        let mut groups: Vec<(Key, Vec<M>)> = Vec::new();
        for (k, v) in pairs {
            match groups.last_mut() {
                Some((last, vs)) if *last == k => vs.push(v),
                _ => groups.push((k, vec![v])),
            }
        }

        let limit = self.budget.memory_words;
        let strict = self.budget.enforcement == Enforcement::Strict;
        if strict {
            for (k, vs) in &groups {
                let w: u64 = vs.iter().map(Words::words).sum();
                if w > limit {
                    return Err(EngineError::BudgetExceeded {
                        round: round_index,
                        key: k.to_string(),
                        words_needed: w,
                        limit,
                    });
                }
            }
        }

        let run_reduce = |(k, vs): (Key, Vec<M>)| -> (Key, MachineOutcome<O>) {
            let input_words: u64 = vs.iter().map(Words::words).sum();
            let mut e = Emitter::new();
            reducer(&k, vs, &mut e);
            let outcome = MachineOutcome {
                out: e.out,
                input_words,
                resident: input_words + e.scratch,
                work: e.work,
            };
            (k, outcome)
        };
        let outcomes: Vec<(Key, MachineOutcome<O>)> = if self.pool.is_some() {
            groups.into_par_iter().map(run_reduce).collect()
        } else {
            groups.into_iter().map(run_reduce).collect()
        };

        let mut trace = RoundTrace {
            round_index,
            machines_used: outcomes.len() as u64,
            shuffled_words,
            work_ops: map_work,
            ..Default::default()
        };
        let mut output = Vec::new();
        let mut received = 0u64;
        for (k, m) in outcomes {
            if m.resident > limit {
                if strict {
                    return Err(EngineError::BudgetExceeded {
                        round: round_index,
                        key: k.to_string(),
                        words_needed: m.resident,
                        limit,
                    });
                }
                trace.over_budget_machines += 1;
            }
            received += m.input_words;
            trace.peak_machine_words = trace.peak_machine_words.max(m.resident);
            trace.total_machine_words += m.resident;
            trace.work_ops += m.work;
            output.extend(m.out);
        }
        debug_assert_eq!(received, shuffled_words);
        Ok((output, trace))
    }

    /// Chains `rounds`; errors carry the failing round index.
    pub fn run_job<V: Words + Send>(
        &self,
        rounds: &[Round<'_, V>],
        input: Vec<KeyValue<V>>,
    ) -> Result<(Vec<KeyValue<V>>, ResourceReport), EngineError> {
        let mut s = self.session();
        let mut data = input;
        for r in rounds {
            data = s.round(data, &r.mapper, &r.reducer)?;
        }
        Ok((data, s.finish()))
    }
}

/// A job driven round by round; later rounds may be configured from earlier outputs.
pub struct Session<'e> {
    engine: &'e Engine,
    traces: Vec<RoundTrace>,
    notes: Vec<String>,
    baseline: Option<u64>,
}

impl<'e> Session<'e> {
    pub fn engine(&self) -> &'e Engine {
        self.engine
    }

    pub fn budget(&self) -> MachineBudget {
        self.engine.budget
    }

    pub fn rounds(&self) -> usize {
        self.traces.len()
    }

    pub fn round<I, M, O, FM, FR>(
        &mut self,
        input: Vec<KeyValue<I>>,
        mapper: FM,
        reducer: FR,
    ) -> Result<Vec<KeyValue<O>>, EngineError>
    where
        I: Send,
        M: Words + Send,
        O: Send,
        FM: Fn(KeyValue<I>, &mut Emitter<M>) + Sync,
        FR: Fn(&Key, Vec<M>, &mut Emitter<O>) + Sync,
    {
        let (out, trace) = self
            .engine
            .run_round(self.traces.len(), input, mapper, reducer)?;
        self.traces.push(trace);
        Ok(out)
    }

    /// Appends the rounds of a sub-job that ran on its own engine.
    pub fn absorb(&mut self, report: ResourceReport) {
        let offset = self.traces.len();
        for mut t in report.traces {
            t.round_index += offset;
            self.traces.push(t);
        }
        self.notes.extend(report.notes);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn set_baseline(&mut self, words: u64) {
        self.baseline = Some(words);
    }

    pub fn finish(self) -> ResourceReport {
        let mut r = ResourceReport::from_traces(self.traces, self.engine.budget.memory_words);
        r.notes = self.notes;
        r.baseline_words = self.baseline;
        r
    }
}
