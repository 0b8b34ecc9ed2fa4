//! Distance products over (min,+).
//!
//! Stage 1 cuts rows, columns and the inner dimension into intervals of length
//! `⌈n^{ε/2}⌉`; one machine per (row block, column block, inner interval) computes the
//! partial minima. Stage 2 reduces the partials of every entry with a tree-min in
//! `⌈(max(x, ε/2) − ε/2)/ε⌉` rounds.

mod bounded;

pub use bounded::{bounded_distance_product, BoundedEncoding, BoundedOutcome};

use std::fmt::Debug;

use crate::engine::{tree_fold, Emitter, Engine, FoldPlan, KeyValue, ResourceReport, Session, Words};
use crate::error::{MrcError, Result};
use crate::key;
use crate::matrix::{Matrix, Semiring, Tropical};
use crate::num::{ceil_pow, ceil_tol, tree_depth};

/// Indices of one concatenation `a_{ik} · b_{kj}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinSite {
    pub i: usize,
    pub k: usize,
    pub j: usize,
}

/// Entry of a distance product. Only the winning candidate of a minimum is built with
/// [`MinPlusEntry::join`]; the others are compared through [`MinPlusEntry::join_order`].
pub trait MinPlusEntry: Clone + Debug + Send + Sync + Words {
    type Order: Ord + Copy + Debug + Send + Sync;
    type Ctx: Sync;
    fn infinity() -> Self;
    fn order(&self) -> Self::Order;
    fn join_order(a: &Self, b: &Self, k: usize) -> Self::Order;
    fn join(ctx: &Self::Ctx, a: &Self, b: &Self, site: JoinSite) -> Self;
}

impl MinPlusEntry for Tropical {
    type Order = Tropical;
    type Ctx = ();
    fn infinity() -> Self {
        Tropical::Inf
    }
    fn order(&self) -> Tropical {
        *self
    }
    fn join_order(a: &Self, b: &Self, _k: usize) -> Tropical {
        a.mul(b)
    }
    fn join(_: &(), a: &Self, b: &Self, _site: JoinSite) -> Self {
        a.mul(b)
    }
}

#[derive(Clone, Debug)]
pub struct MinPlusOutcome<T> {
    pub c: Matrix<T>,
    pub report: ResourceReport,
    /// Side of the stage-1 blocks and length of the inner intervals.
    pub block: usize,
    pub intervals: usize,
    pub stage2_rounds: usize,
}

/// Number of tree-min rounds after the block round; `x = log_n(inner)`.
pub fn stage2_rounds(x: f64, eps: f64) -> usize {
    let r = ceil_tol((x.max(eps / 2.0) - eps / 2.0) / eps);
    r.max(0.0) as usize
}

/// Minimum of every group, `⌈log_fan_in(size)⌉` rounds.
pub fn tree_min_reduce<T>(groups: Vec<Vec<T>>, fan_in: usize, engine: &Engine) -> Result<(Vec<Option<T>>, ResourceReport)>
where
    T: Ord + Clone + Words + Send + Sync,
{
    if fan_in < 2 {
        return Err(MrcError::DomainError(format!("fan-in {fan_in} is below 2")));
    }
    let mut s = engine.session();
    let out = tree_fold(&mut s, groups, FoldPlan::fan_in(fan_in), |a, b| a.min(b))?;
    Ok((out, s.finish()))
}

enum Piece<T> {
    A(usize, usize, Matrix<T>),
    B(usize, usize, Matrix<T>),
}

impl<T: Words> Words for Piece<T> {
    fn words(&self) -> u64 {
        match self {
            Piece::A(_, _, m) | Piece::B(_, _, m) => m.words(),
        }
    }
}

impl<T: Clone> Clone for Piece<T> {
    fn clone(&self) -> Self {
        match self {
            Piece::A(i, k, m) => Piece::A(*i, *k, m.clone()),
            Piece::B(k, j, m) => Piece::B(*k, *j, m.clone()),
        }
    }
}

fn check(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 2.0 {
        Ok(())
    } else {
        Err(MrcError::EpsilonOutOfRange { eps, lo: 0.0, hi: 2.0 })
    }
}

/// Square tropical product.
pub fn distance_product_mrc(
    a: &Matrix<Tropical>,
    b: &Matrix<Tropical>,
    eps: f64,
    engine: &Engine,
) -> Result<MinPlusOutcome<Tropical>> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n || b.cols() != n {
        return Err(MrcError::DimensionError(format!(
            "expected square matrices of one size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    distance_product_rect_mrc(a, b, eps, engine)
}

/// `A (r x m) ⋆ B (m x c)`; `x = log_n m` with `n = max(r, c)`.
pub fn distance_product_rect_mrc(
    a: &Matrix<Tropical>,
    b: &Matrix<Tropical>,
    eps: f64,
    engine: &Engine,
) -> Result<MinPlusOutcome<Tropical>> {
    let mut s = engine.session();
    s.set_baseline(a.words() + b.words() + (a.rows() * b.cols()) as u64);
    let (c, block, intervals, stage2) = distance_product_in(&mut s, a, b, eps, &())?;
    Ok(MinPlusOutcome {
        c,
        report: s.finish(),
        block,
        intervals,
        stage2_rounds: stage2,
    })
}

/// Generic blocked product inside an existing session. Returns
/// `(C, block side, inner intervals, stage-2 rounds)`.
pub fn distance_product_in<T: MinPlusEntry>(
    session: &mut Session<'_>,
    a: &Matrix<T>,
    b: &Matrix<T>,
    eps: f64,
    ctx: &T::Ctx,
) -> Result<(Matrix<T>, usize, usize, usize)> {
    check(eps)?;
    if a.cols() != b.rows() {
        return Err(MrcError::DimensionError(format!(
            "inner dimensions differ: {} vs {}",
            a.cols(),
            b.rows()
        )));
    }
    let (r, m, c) = (a.rows(), a.cols(), b.cols());
    if r == 0 || c == 0 {
        return Ok((Matrix::from_fn(r, c, |_, _| T::infinity()), 1, 0, 0));
    }
    let n = r.max(c).max(2);
    let x = if m <= 1 { 0.0 } else { (m as f64).ln() / (n as f64).ln() };
    let bs = ceil_pow(n, eps / 2.0);
    let (bi, bj, bk) = (r.div_ceil(bs), c.div_ceil(bs), m.div_ceil(bs).max(1));
    let rounds2 = stage2_rounds(x, eps);
    if rounds2 == 0 && bk > 1 {
        return Err(MrcError::DomainError(format!(
            "{bk} inner intervals cannot be reduced in zero rounds"
        )));
    }

    let pad = T::infinity();
    let win = |mat: &Matrix<T>, r0: usize, c0: usize| {
        let h = bs.min(mat.rows() - r0);
        let w = if mat.cols() == 0 { 0 } else { bs.min(mat.cols() - c0) };
        mat.window(r0, c0, h, w, &pad)
    };
    let mut input = Vec::with_capacity(2 * bk * (bi + bj));
    for i in 0..bi {
        for k in 0..bk {
            let blk = if m == 0 { Matrix::from_fn(bs.min(r - i * bs), 0, |_, _| pad.clone()) } else { win(a, i * bs, k * bs) };
            input.push(KeyValue::new(key!("a", i, k), Piece::A(i, k, blk)));
        }
    }
    for k in 0..bk {
        for j in 0..bj {
            let blk = if m == 0 { Matrix::from_fn(0, bs.min(c - j * bs), |_, _| pad.clone()) } else { win(b, k * bs, j * bs) };
            input.push(KeyValue::new(key!("b", k, j), Piece::B(k, j, blk)));
        }
    }

    let parts = session.round(
        input,
        |kv: KeyValue<Piece<T>>, e: &mut Emitter<Piece<T>>| match &kv.value {
            Piece::A(i, k, _) => {
                for j in 0..bj {
                    e.emit(key!("s1", *i, j, *k), kv.value.clone());
                }
            }
            Piece::B(k, j, _) => {
                for i in 0..bi {
                    e.emit(key!("s1", i, *j, *k), kv.value.clone());
                }
            }
        },
        |key, pieces: Vec<Piece<T>>, e: &mut Emitter<Matrix<T>>| {
            let (mut pa, mut pb) = (None, None);
            for p in pieces {
                match p {
                    Piece::A(_, _, m) => pa = Some(m),
                    Piece::B(_, _, m) => pb = Some(m),
                }
            }
            let (pa, pb) = (pa.expect("A block"), pb.expect("B block"));
            let (bi0, bj0, k0) = (key.int(1) as usize * bs, key.int(2) as usize * bs, key.int(3) as usize * bs);
            let part = Matrix::from_fn(pa.rows(), pb.cols(), |i, j| {
                let mut best: Option<(T::Order, usize)> = None;
                for k in 0..pa.cols() {
                    let o = T::join_order(pa.get(i, k), pb.get(k, j), k0 + k);
                    if best.is_none_or(|(bo, _)| o < bo) {
                        best = Some((o, k));
                    }
                }
                match best {
                    Some((_, k)) => T::join(
                        ctx,
                        pa.get(i, k),
                        pb.get(k, j),
                        JoinSite {
                            i: bi0 + i,
                            k: k0 + k,
                            j: bj0 + j,
                        },
                    ),
                    None => T::infinity(),
                }
            });
            e.charge((pa.rows() * pa.cols() * pb.cols()) as u64);
            e.emit(key.clone(), part);
        },
    )?;

    // partials arrive sorted by (I, J, K)
    let mut groups: Vec<Vec<T>> = (0..r * c).map(|_| Vec::with_capacity(bk)).collect();
    let mut item_words = 1;
    for kv in parts {
        let (i0, j0) = (kv.key.int(1) as usize * bs, kv.key.int(2) as usize * bs);
        let blk = kv.value;
        for i in 0..blk.rows() {
            for j in 0..blk.cols() {
                let v = blk.get(i, j).clone();
                item_words = item_words.max(v.words() + 1);
                groups[(i0 + i) * c + j0 + j].push(v);
            }
        }
    }

    let mut fan = 2;
    if rounds2 > 0 {
        fan = (ceil_tol((bk as f64).powf(1.0 / rounds2 as f64)) as usize).max(2);
        while tree_depth(bk, fan) > rounds2 {
            fan += 1;
        }
    }
    let per_machine = ceil_pow(n, eps) as u64;
    let by_mem = session.budget().memory_words / (2 * fan as u64 * item_words);
    let pack = by_mem.min(per_machine / fan as u64).max(1) as usize;
    let plan = FoldPlan {
        fan_in: fan,
        pack,
        rounds: Some(rounds2),
    };
    let mins = tree_fold(session, groups, plan, |p: T, q: T| if q.order() < p.order() { q } else { p })?;
    let out = Matrix::new(r, c, mins.into_iter().map(|v| v.unwrap_or_else(T::infinity)).collect())?;
    Ok((out, bs, bk, rounds2))
}
