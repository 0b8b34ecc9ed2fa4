//! Small numeric helpers shared by the schedules.

const TOL: f64 = 1e-9;

/// Ceiling that ignores floating noise just above an integer.
pub fn ceil_tol(x: f64) -> f64 {
    (x - TOL).ceil()
}

/// Floor that ignores floating noise just below an integer.
pub fn floor_tol(x: f64) -> f64 {
    (x + TOL).floor()
}

/// `⌈n^e⌉` as an integer, at least 1.
pub fn ceil_pow(n: usize, e: f64) -> usize {
    (ceil_tol((n as f64).powf(e)) as usize).max(1)
}

/// `⌊n^e⌋` as an integer, at least 1.
pub fn floor_pow(n: usize, e: f64) -> usize {
    (floor_tol((n as f64).powf(e)) as usize).max(1)
}

/// `⌈a / b⌉` for positive `b`.
pub fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Smallest `k` with `2^k >= n`.
pub fn log2_ceil(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Largest power of `base` not exceeding `x` (at least 1).
pub fn pow_floor(x: usize, base: usize) -> usize {
    let mut p = 1;
    while p * base <= x {
        p *= base;
    }
    p
}

/// Number of fan-in-`f` levels needed to reduce `size` items to one.
pub fn tree_depth(size: usize, f: usize) -> usize {
    let mut levels = 0;
    let mut s = size;
    while s > 1 {
        s = s.div_ceil(f);
        levels += 1;
    }
    levels
}
