//! Recursive bilinear matrix multiplication on the simulator.
//!
//! Matrices are cut into base tiles of side `t` (the threshold). Each recursion level
//! is one round forming the α/β combinations of all children, the base products take
//! one round, and each level is folded back in one round: `2·phases + 1` rounds.

mod decomposition;
mod strassen;

pub use decomposition::{load_schoolbook, load_strassen, BilinearDecomposition, BilinearTerm};

use crate::engine::{tree_fold, Engine, FoldPlan, ResourceReport, Session, Words};
use crate::error::{MrcError, Result};
use crate::matrix::{crop, Matrix, Ring};
use crate::num::{ceil_pow, floor_pow, pow_floor};
use strassen::{bilinear_batch, TileGrid};

/// One recursion level of the schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseLevel {
    /// Side of each subproblem at this level.
    pub side: usize,
    pub subproblems: usize,
    /// Machines of the round that processes this level.
    pub machines: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSchedule {
    pub n0: usize,
    pub padded: usize,
    pub threshold: usize,
    pub phases: u32,
    pub levels: Vec<PhaseLevel>,
    /// Largest machine footprint in entries (the same at every level).
    pub memory_entries: usize,
}

impl PhaseSchedule {
    /// Schedule for one `padded x padded` product with base tiles of side `threshold`.
    pub fn new(padded: usize, threshold: usize, dec: &BilinearDecomposition) -> Self {
        let (n0, l) = (dec.n0, dec.l());
        let mut phases = 0;
        let mut side = padded;
        while side > threshold {
            side /= n0;
            phases += 1;
        }
        let levels = (0..=phases)
            .map(|lv| {
                let sub = l.pow(lv);
                let machines = if lv < phases {
                    2 * sub * n0.pow(2 * (phases - lv - 1))
                } else {
                    sub
                };
                PhaseLevel {
                    side: padded / n0.pow(lv),
                    subproblems: sub,
                    machines,
                }
            })
            .collect();
        let nonzero_gamma = (0..n0 * n0)
            .map(|q| dec.terms.iter().filter(|t| t.gamma[q] != 0).count())
            .max()
            .unwrap_or(0);
        PhaseSchedule {
            n0,
            padded,
            threshold: threshold.min(padded),
            phases,
            levels,
            memory_entries: (n0 * n0).max(2).max(nonzero_gamma) * threshold * threshold,
        }
    }

    pub fn rounds(&self) -> usize {
        2 * self.phases as usize + 1
    }
}

/// `⌊n^{ε/2}⌋` rounded down to a power of `n0`.
pub fn base_threshold(n: usize, eps: f64, n0: usize) -> usize {
    pow_floor(floor_pow(n, eps / 2.0), n0)
}

fn pow_ceil(x: usize, base: usize) -> usize {
    let mut p = 1;
    while p < x {
        p *= base;
    }
    p
}

#[derive(Clone, Debug)]
pub struct MatmulOutcome<T> {
    pub c: Matrix<T>,
    pub report: ResourceReport,
    /// Scalar multiplications performed by the base-case machines.
    pub scalar_mults: u64,
    pub schedule: PhaseSchedule,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 2.0 {
        Ok(())
    } else {
        Err(MrcError::EpsilonOutOfRange { eps, lo: 0.0, hi: 2.0 })
    }
}

/// Square product with threshold `⌊n^{ε/2}⌋` (rounded to a power of `n0`).
pub fn mrc_matmul<T: Ring>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    eps: f64,
    engine: &Engine,
    dec: &BilinearDecomposition,
) -> Result<MatmulOutcome<T>> {
    check_eps(eps)?;
    let t = base_threshold(a.rows(), eps, dec.n0);
    mrc_matmul_with_threshold(a, b, t, engine, dec)
}

/// Square product with an explicit base threshold (a power of `n0`).
pub fn mrc_matmul_with_threshold<T: Ring>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    threshold: usize,
    engine: &Engine,
    dec: &BilinearDecomposition,
) -> Result<MatmulOutcome<T>> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n || b.cols() != n {
        return Err(MrcError::DimensionError(format!(
            "expected two square matrices of the same size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if threshold == 0 || pow_floor(threshold, dec.n0) != threshold {
        return Err(MrcError::DomainError(format!("threshold {threshold} is not a power of {}", dec.n0)));
    }
    let mut s = engine.session();
    s.set_baseline(a.words() + b.words() + (n * n) as u64);
    let side = pow_ceil(n, dec.n0);
    let (c, mults, schedule) = blocked_product(&mut s, a, b, side, threshold, n, 0.0, dec)?;
    Ok(MatmulOutcome {
        c,
        report: s.finish(),
        scalar_mults: mults,
        schedule,
    })
}

/// `A (r x m)` times `B (m x c)`: square subproblems of side `≥ min(m, max(r, c))`
/// run together, then a tree-sum over the inner dimension.
pub fn mrc_matmul_rect<T: Ring>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    eps: f64,
    engine: &Engine,
    dec: &BilinearDecomposition,
) -> Result<MatmulOutcome<T>> {
    check_eps(eps)?;
    if a.cols() != b.rows() {
        return Err(MrcError::DimensionError(format!(
            "inner dimensions differ: {} vs {}",
            a.cols(),
            b.rows()
        )));
    }
    let (r, m, c) = (a.rows(), a.cols(), b.cols());
    let n = r.max(m).max(c);
    let side = pow_ceil(m.min(r.max(c)).max(1), dec.n0);
    let t = base_threshold(n, eps, dec.n0).min(side);
    let mut s = engine.session();
    s.set_baseline(a.words() + b.words() + (r * c) as u64);
    let (out, mults, schedule) = blocked_product(&mut s, a, b, side, t, n, eps, dec)?;
    Ok(MatmulOutcome {
        c: out,
        report: s.finish(),
        scalar_mults: mults,
        schedule,
    })
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn blocked_product<T: Ring>(
    session: &mut Session<'_>,
    a: &Matrix<T>,
    b: &Matrix<T>,
    side: usize,
    threshold: usize,
    n: usize,
    eps: f64,
    dec: &BilinearDecomposition,
) -> Result<(Matrix<T>, u64, PhaseSchedule)> {
    let t = threshold.min(side);
    let schedule = PhaseSchedule::new(side, t, dec);
    if (schedule.memory_entries as u64) > session.budget().memory_words {
        session.note(format!(
            "machine footprint of {} entries exceeds the cap of {} words",
            schedule.memory_entries,
            session.budget().memory_words
        ));
    }
    let (r, m, c) = (a.rows(), a.cols(), b.cols());
    let (bi, bj, bk) = (r.div_ceil(side), c.div_ceil(side), m.div_ceil(side).max(1));
    let pad = T::zero();
    let mut problems = Vec::with_capacity(bi * bj * bk);
    for i in 0..bi {
        for j in 0..bj {
            for k in 0..bk {
                problems.push((
                    a.window(i * side, k * side, side, side, &pad),
                    b.window(k * side, j * side, side, side, &pad),
                ));
            }
        }
    }
    let (grids, mults) = bilinear_batch(session, problems, t, schedule.phases, dec)?;
    let g = grids.first().map_or(1, |gr| gr.grid);

    let sums: Vec<TileGrid<T>> = if bk == 1 {
        grids
    } else {
        // tree-sum of the partial products over the inner blocks, per output tile
        let per = g * g;
        let mut groups: Vec<Vec<Matrix<T>>> = vec![Vec::with_capacity(bk); bi * bj * per];
        for (p, grid) in grids.into_iter().enumerate() {
            let ij = p / bk;
            for (ti, tile) in grid.tiles.into_iter().enumerate() {
                groups[ij * per + ti].push(tile);
            }
        }
        let tile_words = (t * t) as u64 + 1;
        let by_mem = (session.budget().memory_words / tile_words) as usize;
        let fan = by_mem.min(ceil_pow(n, eps)).max(2);
        let folded = tree_fold(session, groups, FoldPlan::fan_in(fan), |x: Matrix<T>, y| {
            x.add(&y).expect("tile shapes agree")
        })?;
        let mut it = folded.into_iter().map(|x| x.expect("non-empty group"));
        (0..bi * bj)
            .map(|_| TileGrid {
                grid: g,
                tiles: it.by_ref().take(per).collect(),
            })
            .collect()
    };

    let blocks: Vec<Matrix<T>> = sums.iter().map(|gr| gr.assemble(t)).collect();
    let full = Matrix::from_fn(bi * side, bj * side, |i, j| {
        blocks[(i / side) * bj + j / side].get(i % side, j % side).clone()
    });
    Ok((crop(&full, r, c)?, mults, schedule))
}
