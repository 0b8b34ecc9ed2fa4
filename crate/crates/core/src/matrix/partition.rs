use super::{Matrix, Semiring};
use crate::error::{MrcError, Result};

/// Square-block tiling of a matrix, padded with the additive identity.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPartition<T> {
    pub block: usize,
    pub rows: usize,
    pub cols: usize,
    pub block_rows: usize,
    pub block_cols: usize,
    /// Row-major by block id.
    pub blocks: Vec<Matrix<T>>,
}

impl<T: Semiring> BlockPartition<T> {
    pub fn block_at(&self, bi: usize, bj: usize) -> &Matrix<T> {
        &self.blocks[bi * self.block_cols + bj]
    }

    /// Top-left coordinates of block `id` in the padded matrix.
    pub fn origin(&self, id: usize) -> (usize, usize) {
        ((id / self.block_cols) * self.block, (id % self.block_cols) * self.block)
    }

    pub fn padded_dims(&self) -> (usize, usize) {
        (self.block_rows * self.block, self.block_cols * self.block)
    }

    /// Padded matrix reassembled from the blocks.
    pub fn assemble(&self) -> Matrix<T> {
        let (pr, pc) = self.padded_dims();
        let b = self.block;
        Matrix::from_fn(pr, pc, |i, j| self.block_at(i / b, j / b).get(i % b, j % b).clone())
    }
}

pub fn partition<T: Semiring>(m: &Matrix<T>, block: usize) -> BlockPartition<T> {
    assert!(block >= 1, "block must be positive");
    let block_rows = m.rows().div_ceil(block);
    let block_cols = m.cols().div_ceil(block);
    let pad = T::zero();
    let mut blocks = Vec::with_capacity(block_rows * block_cols);
    for bi in 0..block_rows {
        for bj in 0..block_cols {
            blocks.push(m.window(bi * block, bj * block, block, block, &pad));
        }
    }
    BlockPartition {
        block,
        rows: m.rows(),
        cols: m.cols(),
        block_rows,
        block_cols,
        blocks,
    }
}

/// Top-left `rows x cols` corner; undoes padding.
pub fn crop<T: Clone>(m: &Matrix<T>, rows: usize, cols: usize) -> Result<Matrix<T>> {
    if rows > m.rows() || cols > m.cols() {
        return Err(MrcError::DimensionError(format!(
            "cannot crop {}x{} to {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| m.get(i, j).clone()))
}
