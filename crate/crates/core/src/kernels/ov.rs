use std::fmt;

use crate::engine::{Emitter, Engine, KeyValue, ResourceReport, Words};
use crate::error::{MrcError, Result};
use crate::key;
use crate::num::{ceil_pow, ceil_tol};

/// 0/1 vector packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVector {
    dim: usize,
    bits: Vec<u64>,
}

impl BitVector {
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        BitVector {
            dim: bits.len(),
            bits: words,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| BitVector::from_bools(&b))
            .ok_or_else(|| MrcError::Parse(format!("bad bitstring {s:?}")))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// True when the supports are disjoint.
    pub fn orthogonal(&self, other: &BitVector) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl Words for BitVector {
    fn words(&self) -> u64 {
        self.bits.len() as u64
    }
}

/// Vectors sharing one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorList {
    dim: usize,
    vectors: Vec<BitVector>,
}

impl VectorList {
    pub fn new(vectors: Vec<BitVector>) -> Result<Self> {
        let dim = vectors.first().map_or(0, BitVector::dim);
        if vectors.iter().any(|v| v.dim() != dim) {
            return Err(MrcError::DimensionError("vectors of mixed dimension".into()));
        }
        Ok(VectorList { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }
}

/// `⌈c_d · log₂ n⌉`, at least 1.
pub fn ov_dimension(n: usize, c_d: f64) -> usize {
    (ceil_tol(c_d * (n.max(2) as f64).log2()) as usize).max(1)
}

#[derive(Clone, Debug)]
pub struct OvOutcome {
    pub found: bool,
    /// Lexicographically smallest orthogonal pair `(i, j)`.
    pub witness: Option<(usize, usize)>,
    pub report: ResourceReport,
}

#[derive(Clone)]
struct Tagged {
    side: u8,
    idx: usize,
    v: BitVector,
}

impl Words for Tagged {
    fn words(&self) -> u64 {
        1 + self.v.words()
    }
}

/// One-round OV: vector blocks of size `q = ⌈n^ε⌉`, one machine per block pair.
pub fn ov_mrc(a: &VectorList, b: &VectorList, eps: f64, engine: &Engine) -> Result<OvOutcome> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(MrcError::EpsilonOutOfRange { eps, lo: 0.0, hi: 1.0 });
    }
    if a.len() != b.len() {
        return Err(MrcError::DimensionError(format!("|A|={} but |B|={}", a.len(), b.len())));
    }
    if a.dim() != b.dim() && !a.is_empty() {
        return Err(MrcError::DimensionError("A and B differ in dimension".into()));
    }
    let n = a.len();
    let q = ceil_pow(n, eps);
    let blocks = n.div_ceil(q);

    let mut input = Vec::with_capacity(2 * n);
    for (side, list) in [(0u8, a), (1u8, b)] {
        for (idx, v) in list.vectors().iter().enumerate() {
            input.push(KeyValue::new(key!("in", side, idx), Tagged { side, idx, v: v.clone() }));
        }
    }

    let mut s = engine.session();
    s.set_baseline(input.iter().map(|kv| kv.value.words()).sum());
    let out = s.round(
        input,
        |kv: KeyValue<Tagged>, e: &mut Emitter<Tagged>| {
            let t = kv.value;
            let c = t.idx / q;
            for j in 0..blocks {
                let k = if t.side == 0 { key!("m", c, j) } else { key!("m", j, c) };
                e.emit(k, t.clone());
            }
        },
        |_, vals: Vec<Tagged>, e: &mut Emitter<(usize, usize)>| {
            let (xs, ys): (Vec<Tagged>, Vec<Tagged>) = vals.into_iter().partition(|t| t.side == 0);
            let mut ops = 0;
            'scan: for x in &xs {
                for y in &ys {
                    ops += x.v.words();
                    if x.v.orthogonal(&y.v) {
                        e.emit(key!("hit"), (x.idx, y.idx));
                        break 'scan;
                    }
                }
            }
            e.charge(ops);
        },
    )?;
    let witness = out.into_iter().map(|kv| kv.value).min();
    Ok(OvOutcome {
        found: witness.is_some(),
        witness,
        report: s.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Enforcement, MachineBudget};

    fn list(bits: &[&str]) -> VectorList {
        VectorList::new(bits.iter().map(|b| BitVector::parse(b).unwrap()).collect()).unwrap()
    }

    fn engine(n: usize, eps: f64) -> Engine {
        Engine::new(MachineBudget::for_size(n, eps, 8.0, Enforcement::Strict))
    }

    #[test]
    fn disjoint_supports() {
        let out = ov_mrc(&list(&["10"]), &list(&["01"]), 1.0, &engine(1, 1.0)).unwrap();
        assert!(out.found);
        assert_eq!(out.witness, Some((0, 0)));
        assert_eq!(out.report.rounds, 1);
    }

    #[test]
    fn overlapping_supports() {
        let out = ov_mrc(&list(&["11"]), &list(&["10"]), 1.0, &engine(1, 1.0)).unwrap();
        assert!(!out.found);
    }

    #[test]
    fn machine_grid() {
        let a = list(&["1000", "0100", "0010", "0001", "1100"]);
        let b = list(&["1000", "1000", "0100", "1111", "0011"]);
        let out = ov_mrc(&a, &b, 0.5, &engine(5, 0.5)).unwrap();
        // q = 3, two blocks per side
        assert_eq!(out.report.traces[0].machines_used, 4);
        assert_eq!(out.witness, Some((0, 2)));
    }

    #[test]
    fn dimension_default() {
        assert_eq!(ov_dimension(128, 2.0), 14);
        assert_eq!(ov_dimension(100, 2.0), 14);
    }

    #[test]
    fn rejects_bad_eps() {
        assert!(ov_mrc(&list(&["1"]), &list(&["1"]), 0.0, &engine(1, 1.0)).is_err());
        assert!(ov_mrc(&list(&["1"]), &list(&["1"]), 1.5, &engine(1, 1.0)).is_err());
    }
}
