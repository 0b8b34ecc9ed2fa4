use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;

use super::{Matrix, Semiring, Tropical};
use crate::error::{MrcError, Result};

/// Entry formatting for the matrix text format.
pub trait TextEntry: Sized {
    fn write_entry(&self, out: &mut String);
    fn parse_entry(s: &str) -> Option<Self>;
}

impl TextEntry for i64 {
    fn write_entry(&self, out: &mut String) {
        let _ = write!(out, "{self}");
    }
    fn parse_entry(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl TextEntry for Tropical {
    fn write_entry(&self, out: &mut String) {
        match self {
            Tropical::Finite(v) => {
                let _ = write!(out, "{v}");
            }
            Tropical::Inf => out.push_str("inf"),
        }
    }
    fn parse_entry(s: &str) -> Option<Self> {
        if s == "inf" {
            Some(Tropical::Inf)
        } else {
            s.parse().ok().map(Tropical::Finite)
        }
    }
}

impl TextEntry for BigInt {
    fn write_entry(&self, out: &mut String) {
        let _ = write!(out, "{self}");
    }
    fn parse_entry(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

/// Complex entries are written `re,im`.
impl TextEntry for Complex64 {
    fn write_entry(&self, out: &mut String) {
        let _ = write!(out, "{:e},{:e}", self.re, self.im);
    }
    fn parse_entry(s: &str) -> Option<Self> {
        let (re, im) = s.split_once(',')?;
        Some(Complex64::new(re.parse().ok()?, im.parse().ok()?))
    }
}

/// `rows cols algebra` header, then one line per row.
pub fn write_matrix<T: Semiring + TextEntry>(m: &Matrix<T>) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), T::ALGEBRA.name());
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            v.write_entry(&mut out);
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix<T: Semiring + TextEntry>(text: &str) -> Result<Matrix<T>> {
    let bad = |m: String| MrcError::Parse(m);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty matrix file".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 {
        return Err(bad(format!("bad header {header:?}")));
    }
    let rows: usize = h[0].parse().map_err(|_| bad(format!("bad rows {:?}", h[0])))?;
    let cols: usize = h[1].parse().map_err(|_| bad(format!("bad cols {:?}", h[1])))?;
    if h[2] != T::ALGEBRA.name() {
        return Err(bad(format!("expected algebra {}, found {}", T::ALGEBRA.name(), h[2])));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        let before = data.len();
        for tok in line.split_whitespace() {
            data.push(T::parse_entry(tok).ok_or_else(|| bad(format!("bad entry {tok:?} on row {i}")))?);
        }
        if data.len() - before != cols {
            return Err(bad(format!("row {i} has {} entries", data.len() - before)));
        }
    }
    Matrix::new(rows, cols, data)
}
