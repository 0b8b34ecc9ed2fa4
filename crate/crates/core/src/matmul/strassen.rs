use std::sync::atomic::{AtomicU64, Ordering};

use super::decomposition::BilinearDecomposition;
use crate::engine::{Emitter, KeyValue, Session, Words};
use crate::error::Result;
use crate::key;
use crate::matrix::{Matrix, Ring};

#[derive(Clone)]
pub(crate) enum Piece<T> {
    Operand { side: u8, quad: usize, tile: Matrix<T> },
    Product { term: usize, tile: Matrix<T> },
}

impl<T: Words> Words for Piece<T> {
    fn words(&self) -> u64 {
        match self {
            Piece::Operand { tile, .. } | Piece::Product { tile, .. } => tile.words(),
        }
    }
}

/// Tiles of one product, `grid x grid` tiles of side `tile`, row-major.
pub(crate) struct TileGrid<T> {
    pub grid: usize,
    pub tiles: Vec<Matrix<T>>,
}

impl<T: Ring> TileGrid<T> {
    pub fn assemble(&self, tile: usize) -> Matrix<T> {
        let side = self.grid * tile;
        Matrix::from_fn(side, side, |i, j| {
            self.tiles[(i / tile) * self.grid + j / tile].get(i % tile, j % tile).clone()
        })
    }
}

fn lin_comb<T: Ring>(coef: &[i64], tiles: &[Option<Matrix<T>>], ops: &mut u64) -> Matrix<T> {
    let mut acc: Option<Matrix<T>> = None;
    for (c, t) in coef.iter().zip(tiles) {
        if *c == 0 {
            continue;
        }
        let t = t.as_ref().expect("missing quadrant tile");
        *ops += t.words();
        let scaled = if *c == 1 { t.clone() } else { t.map(|v| v.scale(*c)) };
        acc = Some(match acc {
            None => scaled,
            Some(a) => {
                *ops += a.words();
                a.add(&scaled).expect("tile shapes agree")
            }
        });
    }
    acc.expect("coefficient vector has a non-zero entry")
}

fn naive_tile<T: Ring>(a: &Matrix<T>, b: &Matrix<T>, mults: &mut u64, ops: &mut u64) -> Matrix<T> {
    let n = a.rows();
    let m = b.cols();
    let inner = a.cols();
    Matrix::from_fn(n, m, |i, j| {
        let mut acc = T::zero();
        for k in 0..inner {
            let p = a.get(i, k).mul(b.get(k, j));
            *ops += a.get(i, k).words().max(b.get(k, j).words());
            *mults += 1;
            acc = acc.add(&p);
        }
        acc
    })
}

/// Multiplies every `(A, B)` pair of `side x side` matrices (side = tile·n0^phases)
/// in `2·phases + 1` rounds. Returns the product tiles and the base-case multiplication count.
pub(crate) fn bilinear_batch<T: Ring>(
    session: &mut Session<'_>,
    problems: Vec<(Matrix<T>, Matrix<T>)>,
    tile: usize,
    phases: u32,
    dec: &BilinearDecomposition,
) -> Result<(Vec<TileGrid<T>>, u64)> {
    let n0 = dec.n0;
    let l = dec.l();
    let grid0 = n0.pow(phases);
    let mut data: Vec<KeyValue<Piece<T>>> = Vec::new();
    let pad = T::zero();
    for (p, (a, b)) in problems.iter().enumerate() {
        for (side, m) in [(0u8, a), (1u8, b)] {
            for ti in 0..grid0 {
                for tj in 0..grid0 {
                    let t = m.window(ti * tile, tj * tile, tile, tile, &pad);
                    data.push(KeyValue::new(
                        key!("op", 0u32, p, 0u32, ti, tj, side),
                        Piece::Operand { side, quad: 0, tile: t },
                    ));
                }
            }
        }
    }
    let nprob = problems.len();
    drop(problems);

    // one round per level forms the α/β combinations of every child
    for level in 0..phases {
        let h = n0.pow(phases - level - 1);
        data = session.round(
            data,
            |kv: KeyValue<Piece<T>>, e: &mut Emitter<Piece<T>>| {
                let k = &kv.key;
                let (p, path, ti, tj) = (k.int(2), k.int(3), k.int(4) as usize, k.int(5) as usize);
                if let Piece::Operand { side, tile, .. } = kv.value {
                    let quad = (ti / h) * n0 + tj / h;
                    e.emit(
                        key!("lin", level, p, path, ti % h, tj % h, side),
                        Piece::Operand { side, quad, tile },
                    );
                }
            },
            |k, pieces: Vec<Piece<T>>, e: &mut Emitter<Piece<T>>| {
                let (p, path, ti, tj, side) = (k.int(2), k.int(3), k.int(4), k.int(5), k.int(6) as u8);
                let mut quads: Vec<Option<Matrix<T>>> = vec![None; n0 * n0];
                for pc in pieces {
                    if let Piece::Operand { quad, tile, .. } = pc {
                        quads[quad] = Some(tile);
                    }
                }
                let mut ops = 0;
                for (t, term) in dec.terms.iter().enumerate() {
                    let coef = if side == 0 { &term.alpha } else { &term.beta };
                    let tile = lin_comb(coef, &quads, &mut ops);
                    let child = path * l as i64 + t as i64;
                    e.emit(
                        key!("op", level + 1, p, child, ti, tj, side),
                        Piece::Operand { side, quad: 0, tile },
                    );
                }
                e.charge(ops);
            },
        )?;
    }

    // base products
    let mults = AtomicU64::new(0);
    data = session.round(
        data,
        |kv: KeyValue<Piece<T>>, e: &mut Emitter<Piece<T>>| {
            let k = &kv.key;
            e.emit(key!("mul", k.int(2), k.int(3)), kv.value);
        },
        |k, pieces: Vec<Piece<T>>, e: &mut Emitter<Piece<T>>| {
            let mut ab: [Option<Matrix<T>>; 2] = [None, None];
            for pc in pieces {
                if let Piece::Operand { side, tile, .. } = pc {
                    ab[side as usize] = Some(tile);
                }
            }
            let (a, b) = (ab[0].take().expect("alpha tile"), ab[1].take().expect("beta tile"));
            let (mut m, mut ops) = (0, 0);
            let tile = naive_tile(&a, &b, &mut m, &mut ops);
            mults.fetch_add(m, Ordering::Relaxed);
            e.charge(ops);
            e.emit(key!("prod", phases, k.int(1), k.int(2), 0u32, 0u32), Piece::Product { term: 0, tile });
        },
    )?;

    // one round per level writes the M_t back into the parent's quadrants; each
    // quadrant has its own machine holding only the products it uses
    for level in (0..phases).rev() {
        let h = n0.pow(phases - level - 1);
        data = session.round(
            data,
            |kv: KeyValue<Piece<T>>, e: &mut Emitter<Piece<T>>| {
                let k = &kv.key;
                let (p, child, ti, tj) = (k.int(2), k.int(3), k.int(4), k.int(5));
                if let Piece::Product { tile, .. } = kv.value {
                    let term = (child % l as i64) as usize;
                    for (q, &g) in dec.terms[term].gamma.iter().enumerate() {
                        if g != 0 {
                            e.emit(
                                key!("cmb", level, p, child / l as i64, ti, tj, q),
                                Piece::Product { term, tile: tile.clone() },
                            );
                        }
                    }
                }
            },
            |k, pieces: Vec<Piece<T>>, e: &mut Emitter<Piece<T>>| {
                let (p, path, ti, tj, q) = (
                    k.int(2),
                    k.int(3),
                    k.int(4) as usize,
                    k.int(5) as usize,
                    k.int(6) as usize,
                );
                let mut ms: Vec<Option<Matrix<T>>> = vec![None; l];
                for pc in pieces {
                    if let Piece::Product { term, tile } = pc {
                        ms[term] = Some(tile);
                    }
                }
                let gamma: Vec<i64> = dec.terms.iter().map(|t| t.gamma[q]).collect();
                let mut ops = 0;
                let tile = lin_comb(&gamma, &ms, &mut ops);
                let (qi, qj) = (q / n0, q % n0);
                e.emit(
                    key!("prod", level, p, path, qi * h + ti, qj * h + tj),
                    Piece::Product { term: 0, tile },
                );
                e.charge(ops);
            },
        )?;
    }

    let mut slots: Vec<Vec<Option<Matrix<T>>>> = (0..nprob).map(|_| vec![None; grid0 * grid0]).collect();
    for kv in data {
        if let Piece::Product { tile, .. } = kv.value {
            let k = &kv.key;
            slots[k.int(2) as usize][k.int(4) as usize * grid0 + k.int(5) as usize] = Some(tile);
        }
    }
    let grids = slots
        .into_iter()
        .map(|s| TileGrid {
            grid: grid0,
            tiles: s.into_iter().map(|t| t.expect("every output tile produced")).collect(),
        })
        .collect();
    Ok((grids, mults.into_inner()))
}
