use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Metering of one round.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round_index: usize,
    /// Distinct reducer keys.
    pub machines_used: u64,
    pub peak_machine_words: u64,
    pub shuffled_words: u64,
    pub work_ops: u64,
    /// Sum over machines of resident words.
    pub total_machine_words: u64,
    /// Machines over the cap (only non-zero under `RecordOnly`).
    pub over_budget_machines: u64,
}

/// Aggregate of all rounds of a job.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub rounds: usize,
    pub peak_machines: u64,
    pub peak_machine_words: u64,
    /// Σ over rounds of the per-round machine totals.
    pub total_memory_words: u64,
    /// Max over rounds of the per-round machine totals.
    pub peak_total_memory_words: u64,
    pub total_work_ops: u64,
    pub total_shuffled_words: u64,
    pub budget_words: u64,
    pub over_budget_machines: u64,
    pub baseline_words: Option<u64>,
    pub traces: Vec<RoundTrace>,
    /// Deviations the algorithm had to make from its nominal schedule.
    pub notes: Vec<String>,
}

impl ResourceReport {
    pub fn from_traces(traces: Vec<RoundTrace>, budget_words: u64) -> Self {
        let mut r = ResourceReport {
            budget_words,
            ..Default::default()
        };
        for t in traces {
            r.push(t);
        }
        r
    }

    fn push(&mut self, t: RoundTrace) {
        self.rounds += 1;
        self.peak_machines = self.peak_machines.max(t.machines_used);
        self.peak_machine_words = self.peak_machine_words.max(t.peak_machine_words);
        self.total_memory_words += t.total_machine_words;
        self.peak_total_memory_words = self.peak_total_memory_words.max(t.total_machine_words);
        self.total_work_ops += t.work_ops;
        self.total_shuffled_words += t.shuffled_words;
        self.over_budget_machines += t.over_budget_machines;
        self.traces.push(t);
    }

    /// Sequential composition: `other`'s rounds run after ours.
    pub fn append(&mut self, other: ResourceReport) {
        let offset = self.rounds;
        for mut t in other.traces {
            t.round_index += offset;
            self.push(t);
        }
        self.budget_words = self.budget_words.max(other.budget_words);
        self.notes.extend(other.notes);
    }

    pub fn memory_price(&self) -> Option<f64> {
        self.baseline_words
            .filter(|&b| b > 0)
            .map(|b| self.peak_total_memory_words as f64 / b as f64)
    }

    /// Trace export with the fixed field names.
    pub fn trace_json(&self) -> Value {
        let rounds: Vec<Value> = self
            .traces
            .iter()
            .map(|t| {
                json!({
                    "round": t.round_index,
                    "machines": t.machines_used,
                    "peak_words": t.peak_machine_words,
                    "shuffled_words": t.shuffled_words,
                    "work_ops": t.work_ops,
                })
            })
            .collect();
        json!({
            "rounds": rounds,
            "peak_machines": self.peak_machines,
            "peak_machine_words": self.peak_machine_words,
            "total_work": self.total_work_ops,
            "memory_price": self.memory_price(),
        })
    }
}

/// Peak total memory over rounds divided by the sequential baseline.
pub fn memory_price(report: &ResourceReport, sequential_baseline_words: u64) -> Ratio<u64> {
    assert!(sequential_baseline_words > 0, "baseline must be positive");
    Ratio::new(report.peak_total_memory_words, sequential_baseline_words)
}
