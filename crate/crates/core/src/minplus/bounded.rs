use num_bigint::BigInt;
use num_traits::Zero;

use crate::engine::{Engine, ResourceReport, Words};
use crate::error::{MrcError, Result};
use crate::matmul::{load_strassen, mrc_matmul_rect};
use crate::matrix::{Matrix, Tropical};

/// Entry encoding `a ↦ base^{a + shift}` for the ring reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedEncoding {
    pub range: i64,
    pub base: u64,
    /// Added to every finite entry of each factor.
    pub shift: i64,
    /// Exponent used for ∞.
    pub inf_exponent: u32,
    /// Largest exponent a finite product entry can have.
    pub max_finite: u32,
}

impl BoundedEncoding {
    /// With `signed == false` entries lie in `[0, R]` and ∞ is `2R+1`. Signed inputs
    /// shift each factor by `R`, so finite sums reach `4R` and ∞ moves to `4R+1`.
    pub fn new(range: i64, base: u64, signed: bool) -> Self {
        let shift = if signed { range } else { 0 };
        let max_finite = (2 * (range + shift)) as u32;
        BoundedEncoding {
            range,
            base,
            shift,
            inf_exponent: max_finite + 1,
            max_finite,
        }
    }

    pub fn exponent(&self, v: Tropical) -> Result<u32> {
        match v {
            Tropical::Inf => Ok(self.inf_exponent),
            Tropical::Finite(x) => {
                if x.abs() > self.range || x + self.shift < 0 {
                    Err(MrcError::RangeExceeded {
                        value: x,
                        bound: self.range,
                    })
                } else {
                    Ok((x + self.shift) as u32)
                }
            }
        }
    }

    pub fn encode(&self, v: Tropical) -> Result<BigInt> {
        Ok(BigInt::from(self.base).pow(self.exponent(v)?))
    }

    /// Lowest nonzero base digit, un-shifted; anything above the finite range is ∞.
    pub fn decode(&self, c: &BigInt) -> (Tropical, u64) {
        let base = BigInt::from(self.base);
        let mut rest = c.clone();
        let mut t = 0u32;
        let mut ops = 0;
        while !rest.is_zero() && t <= self.max_finite {
            ops += 1;
            if !(&rest % &base).is_zero() {
                return (Tropical::Finite(t as i64 - 2 * self.shift), ops);
            }
            rest /= &base;
            t += 1;
        }
        (Tropical::Inf, ops)
    }

    /// Words of the largest value a product entry can reach with `inner` terms.
    pub fn entry_words(&self, inner: usize) -> u64 {
        let top = BigInt::from(self.base).pow(2 * self.inf_exponent) * BigInt::from(inner.max(1));
        top.words()
    }
}

#[derive(Clone, Debug)]
pub struct BoundedOutcome {
    pub c: Matrix<Tropical>,
    pub report: ResourceReport,
    pub encoding: BoundedEncoding,
}

/// Tropical product of matrices with finite entries in `[−R, R]` through one
/// arbitrary-precision ring product. Rectangular shapes are accepted.
pub fn bounded_distance_product(
    a: &Matrix<Tropical>,
    b: &Matrix<Tropical>,
    range: i64,
    eps: f64,
    engine: &Engine,
) -> Result<BoundedOutcome> {
    if range < 0 {
        return Err(MrcError::DomainError(format!("range {range} is negative")));
    }
    if a.cols() != b.rows() {
        return Err(MrcError::DimensionError(format!(
            "inner dimensions differ: {} vs {}",
            a.cols(),
            b.rows()
        )));
    }
    let signed = a
        .entries()
        .iter()
        .chain(b.entries())
        .any(|v| matches!(v, Tropical::Finite(x) if *x < 0));
    let n = a.rows().max(a.cols()).max(b.cols());
    let enc = BoundedEncoding::new(range, n as u64 + 1, signed);
    let ea = encode_all(a, &enc)?;
    let eb = encode_all(b, &enc)?;

    let width = enc.entry_words(a.cols());
    let sub = engine.with_budget(engine.budget().scaled(width));
    let out = mrc_matmul_rect(&ea, &eb, eps, &sub, &load_strassen()?)?;
    let mut report = out.report;
    report.baseline_words = Some(a.words() + b.words() + (a.rows() * b.cols()) as u64);
    let mut work = 0;
    let c = out.c.map(|v| {
        let (d, ops) = enc.decode(v);
        work += ops;
        d
    });
    report.notes.push(format!("decoded with {work} digit steps"));
    Ok(BoundedOutcome {
        c,
        report,
        encoding: enc,
    })
}

fn encode_all(m: &Matrix<Tropical>, enc: &BoundedEncoding) -> Result<Matrix<BigInt>> {
    let mut cells = Vec::with_capacity(m.entries().len());
    for &v in m.entries() {
        cells.push(enc.encode(v)?);
    }
    Matrix::new(m.rows(), m.cols(), cells)
}
