//! Radix-2 FFT: a routing round, local transforms of length `2^{⌊ε log₂ n⌋}`, then one
//! butterfly round per remaining doubling.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::engine::{Emitter, Engine, KeyValue, ResourceReport, Words};
use crate::error::{MrcError, Result};
use crate::key;
use crate::num::floor_tol;

/// Samples zero-padded to a power of two; `len` is the length before padding.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSignal {
    pub samples: Vec<Complex64>,
    pub len: usize,
}

impl ComplexSignal {
    pub fn new(mut samples: Vec<Complex64>) -> Self {
        let len = samples.len();
        samples.resize(len.max(1).next_power_of_two(), Complex64::new(0.0, 0.0));
        ComplexSignal { samples, len }
    }

    pub fn padded(&self) -> bool {
        self.samples.len() != self.len
    }

    /// One `re im` pair per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.is_empty() {
                continue;
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| MrcError::Parse(format!("line {}: bad number {s:?}", no + 1)))
            };
            match t.as_slice() {
                [re, im] => out.push(Complex64::new(num(re)?, num(im)?)),
                _ => return Err(MrcError::Parse(format!("line {}: expected 're im'", no + 1))),
            }
        }
        Ok(ComplexSignal::new(out))
    }

    pub fn write(samples: &[Complex64]) -> String {
        samples.iter().map(|v| format!("{:?} {:?}\n", v.re, v.im)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct FftOutcome {
    pub spectrum: Vec<Complex64>,
    pub report: ResourceReport,
    pub leaf: usize,
    pub merge_rounds: usize,
}

/// `2^{⌊ε log₂ n⌋}`, at least 1 and at most `n`.
pub fn leaf_size(n: usize, eps: f64) -> usize {
    let lg = n.max(1).trailing_zeros() as f64;
    let e = floor_tol(eps * lg).clamp(0.0, lg) as u32;
    1 << e
}

#[derive(Clone, Copy, Debug)]
struct Sample {
    idx: usize,
    odd: bool,
    v: Complex64,
}

// index plus the complex value
impl Words for Sample {
    fn words(&self) -> u64 {
        3
    }
}

fn twiddle(k: usize, len: usize) -> Complex64 {
    let a = -2.0 * PI * k as f64 / len as f64;
    Complex64::new(a.cos(), a.sin())
}

/// In-place iterative transform; returns the butterflies performed.
fn local_fft(a: &mut [Complex64]) -> u64 {
    let n = a.len();
    if n <= 1 {
        return 0;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            a.swap(i, j);
        }
    }
    let mut ops = 0;
    let mut len = 2;
    while len <= n {
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddle(k, len);
                let (e, o) = (a[start + k], a[start + k + len / 2] * w);
                a[start + k] = e + o;
                a[start + k + len / 2] = e - o;
                ops += 1;
            }
        }
        len <<= 1;
    }
    ops
}

fn check(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(MrcError::EpsilonOutOfRange { eps, lo: 0.0, hi: 1.0 })
    }
}

/// Forward transform `X_k = Σ_j x_j e^{−2πi kj/n}` of the padded signal.
pub fn mrc_fft(x: &ComplexSignal, eps: f64, engine: &Engine) -> Result<FftOutcome> {
    check(eps)?;
    let n = x.samples.len();
    let leaf = leaf_size(n, eps);
    let m = n / leaf;
    let levels = m.trailing_zeros() as usize;
    let h = (leaf / 2).max(1);
    // the leaf for residue r feeds level levels-1 at residue r mod m/2
    let route_leaf = move |r: usize, k: usize| {
        if levels == 0 {
            key!("out", k)
        } else {
            key!("bfly", levels - 1, r % (m / 2), k / h)
        }
    };

    let mut s = engine.session();
    s.set_baseline(2 * 2 * n as u64);
    let input: Vec<KeyValue<Sample>> = x
        .samples
        .iter()
        .enumerate()
        .map(|(j, &v)| KeyValue::new(key!("x", j), Sample { idx: j, odd: false, v }))
        .collect();

    let routed = s.round(
        input,
        |kv: KeyValue<Sample>, e: &mut Emitter<Sample>| e.emit(key!("in", kv.value.idx / leaf), kv.value),
        |_, items: Vec<Sample>, e: &mut Emitter<Sample>| {
            for it in items {
                // x_{q·m + r} goes to leaf r at position q
                e.emit(
                    key!("leaf", it.idx % m),
                    Sample {
                        idx: it.idx / m,
                        ..it
                    },
                );
            }
        },
    )?;

    let mut data = s.round(
        routed,
        |kv: KeyValue<Sample>, e: &mut Emitter<Sample>| e.emit(kv.key, kv.value),
        |k, items: Vec<Sample>, e: &mut Emitter<Sample>| {
            let r = k.int(1) as usize;
            let mut buf = vec![Complex64::new(0.0, 0.0); leaf];
            for it in items {
                buf[it.idx] = it.v;
            }
            e.charge(local_fft(&mut buf));
            let odd = levels > 0 && r >= m / 2;
            for (kk, v) in buf.into_iter().enumerate() {
                e.emit(route_leaf(r, kk), Sample { idx: kk, odd, v });
            }
        },
    )?;

    for d in (0..levels).rev() {
        let half = n >> (d + 1);
        let len = 2 * half;
        data = s.round(
            data,
            |kv: KeyValue<Sample>, e: &mut Emitter<Sample>| e.emit(kv.key, kv.value),
            |k, items: Vec<Sample>, e: &mut Emitter<Sample>| {
                let r = k.int(2) as usize;
                let base = k.int(3) as usize * h;
                let width = h.min(half);
                let mut ev = vec![Complex64::new(0.0, 0.0); width];
                let mut od = ev.clone();
                for it in items {
                    let slot = it.idx - base;
                    if it.odd {
                        od[slot] = it.v;
                    } else {
                        ev[slot] = it.v;
                    }
                }
                let odd = d > 0 && r >= (1 << (d - 1));
                for t in 0..width {
                    let kk = base + t;
                    let o = od[t] * twiddle(kk, len);
                    for (idx, v) in [(kk, ev[t] + o), (kk + half, ev[t] - o)] {
                        let key = if d == 0 {
                            key!("out", idx)
                        } else {
                            key!("bfly", d - 1, r % (1 << (d - 1)), idx / h)
                        };
                        e.emit(key, Sample { idx, odd, v });
                    }
                }
                e.charge(width as u64);
            },
        )?;
    }

    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for kv in data {
        spectrum[kv.value.idx] = kv.value.v;
    }
    if x.padded() {
        s.note(format!("padded {} samples to {n}", x.len));
    }
    Ok(FftOutcome {
        spectrum,
        report: s.finish(),
        leaf,
        merge_rounds: levels,
    })
}

/// Inverse transform through conjugation: `x = conj(F(conj X)) / n`.
pub fn mrc_ifft(spectrum: &ComplexSignal, eps: f64, engine: &Engine) -> Result<FftOutcome> {
    let conj = ComplexSignal {
        samples: spectrum.samples.iter().map(|v| v.conj()).collect(),
        len: spectrum.len,
    };
    let mut out = mrc_fft(&conj, eps, engine)?;
    let n = out.spectrum.len() as f64;
    for v in out.spectrum.iter_mut() {
        *v = v.conj() / n;
    }
    Ok(out)
}
