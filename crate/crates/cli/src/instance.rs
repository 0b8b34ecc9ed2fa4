use clap::{Args, ValueEnum};
use mrc::fft::ComplexSignal;
use mrc::instances as inst;
use mrc::kernels::{ov_dimension, write_int_lists, write_vector_lists};
use mrc::matrix::write_matrix;
use mrc::{MrcError, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    #[value(name = "3sum")]
    #[serde(rename = "3sum")]
    ThreeSum,
    Ov,
    Matrix,
    Tropical,
    Graph,
    Signal,
}

/// Knobs shared by `gen` and `run`; unset values take per-kind defaults.
#[derive(Args, Clone, Debug, Serialize)]
pub struct InstanceArgs {
    /// Instance size
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Value bound: 3sum values, matrix entries, graph max weight, or R for the bounded product
    #[arg(long, allow_negative_numbers = true)]
    pub range: Option<i64>,
    /// Inner-dimension exponent of the rectangular products (inner side n^x)
    #[arg(long)]
    pub x: Option<f64>,
    /// Lowest weight or entry
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<i64>,
    /// Edge probability
    #[arg(long)]
    pub p: Option<f64>,
    /// Bit density of OV vectors
    #[arg(long)]
    pub density: Option<f64>,
    /// Probability of an infinite tropical entry
    #[arg(long)]
    pub inf: Option<f64>,
    /// Redraw graphs until no negative cycle remains
    #[arg(long)]
    pub reject_neg_cycles: bool,
    /// Graphs with weights in {-1, 0, 1} and no negative cycle
    #[arg(long)]
    pub signed_unit: bool,
}

impl InstanceArgs {
    pub fn inner(&self) -> usize {
        match self.x {
            Some(x) => ((self.n as f64).powf(x).round() as usize).max(1),
            None => self.n,
        }
    }

    fn check(&self) -> Result<()> {
        let unit = |name: &str, v: Option<f64>| match v {
            Some(p) if !(0.0..=1.0).contains(&p) => Err(MrcError::DomainError(format!("--{name} {p} outside [0, 1]"))),
            _ => Ok(()),
        };
        unit("p", self.p)?;
        unit("density", self.density)?;
        unit("inf", self.inf)?;
        if self.n == 0 {
            return Err(MrcError::DomainError("--n must be positive".into()));
        }
        if self.x.is_some_and(|x| !(0.0..=4.0).contains(&x)) {
            return Err(MrcError::DomainError("--x outside [0, 4]".into()));
        }
        Ok(())
    }
}

/// Instance text for `kind`; a pure function of the arguments.
pub fn generate(kind: Kind, a: &InstanceArgs) -> Result<String> {
    a.check()?;
    let n = a.n;
    let text = match kind {
        Kind::ThreeSum => {
            let range = a.range.unwrap_or((n * n).max(16) as i64);
            write_int_lists(&inst::int_lists(n, range.max(0), a.seed))
        }
        Kind::Ov => {
            let (x, y) = inst::vector_lists(n, ov_dimension(n, 2.0), a.density.unwrap_or(0.5), a.seed);
            write_vector_lists(&x, &y)
        }
        Kind::Matrix => {
            let hi = a.range.unwrap_or(100);
            let lo = a.lo.unwrap_or(-hi);
            let m = a.inner();
            pair(
                write_matrix(&inst::int_matrix(n, m, lo, hi, a.seed)),
                write_matrix(&inst::int_matrix(m, n, lo, hi, a.seed ^ 1)),
            )
        }
        Kind::Tropical => {
            let hi = a.range.unwrap_or(100);
            let lo = a.lo.unwrap_or(-hi);
            let (m, inf) = (a.inner(), a.inf.unwrap_or(0.1));
            pair(
                write_matrix(&inst::tropical_matrix(n, m, lo, hi, inf, a.seed)),
                write_matrix(&inst::tropical_matrix(m, n, lo, hi, inf, a.seed ^ 1)),
            )
        }
        Kind::Graph => {
            let p = a.p.unwrap_or_else(|| (2.0 * (n as f64).ln().max(1.0) / n as f64).min(1.0));
            if a.signed_unit {
                return Ok(inst::signed_unit_digraph(n, p, a.seed)?.write());
            }
            let hi = a.range.unwrap_or(10);
            inst::digraph(n, p, a.lo.unwrap_or(0), hi, a.seed, a.reject_neg_cycles)?.write()
        }
        Kind::Signal => ComplexSignal::write(&inst::signal(n, a.seed)),
    };
    Ok(text)
}

fn pair(a: String, b: String) -> String {
    format!("{a}\n{b}")
}

/// Splits a two-matrix file at its blank separator line.
pub fn split_pair(text: &str) -> Result<(String, String)> {
    let mut blocks: Vec<String> = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.is_empty() {
                blocks.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.is_empty() {
        blocks.push(cur);
    }
    match <[String; 2]>::try_from(blocks) {
        Ok([a, b]) => Ok((a, b)),
        Err(v) => Err(MrcError::Parse(format!("expected two matrices separated by a blank line, found {}", v.len()))),
    }
}
