use crate::error::{MrcError, Result};
use crate::matrix::Ring;

/// One product `M_t = α_t · β_t` and where it lands in `C`.
/// Coefficients are indexed by block `r * n0 + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTerm {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub gamma: Vec<i64>,
}

/// A bilinear scheme for `n0 x n0` block products with `l` multiplications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearDecomposition {
    pub n0: usize,
    pub terms: Vec<BilinearTerm>,
}

impl BilinearDecomposition {
    /// Verifies the scheme symbolically before returning it.
    pub fn new(n0: usize, terms: Vec<BilinearTerm>) -> Result<Self> {
        let d = BilinearDecomposition { n0, terms };
        d.verify()?;
        Ok(d)
    }

    pub fn l(&self) -> usize {
        self.terms.len()
    }

    /// Checks `Σ_t α_t[ik] β_t[k'j] γ_t[i'j'] = [k=k'][i=i'][j=j']` for all index choices,
    /// i.e. the scheme reproduces every entry of the product of symbolic matrices.
    pub fn verify(&self) -> Result<()> {
        let n0 = self.n0;
        let sq = n0 * n0;
        if n0 == 0 {
            return Err(MrcError::DecompositionInvalid("n0 = 0".into()));
        }
        for (t, term) in self.terms.iter().enumerate() {
            if term.alpha.len() != sq || term.beta.len() != sq || term.gamma.len() != sq {
                return Err(MrcError::DecompositionInvalid(format!("term {t} has wrong arity")));
            }
        }
        for i in 0..n0 {
            for k in 0..n0 {
                for k2 in 0..n0 {
                    for j in 0..n0 {
                        for i2 in 0..n0 {
                            for j2 in 0..n0 {
                                let got: i64 = self
                                    .terms
                                    .iter()
                                    .map(|t| t.alpha[i * n0 + k] * t.beta[k2 * n0 + j] * t.gamma[i2 * n0 + j2])
                                    .sum();
                                let want = i64::from(k == k2 && i == i2 && j == j2);
                                if got != want {
                                    return Err(MrcError::DecompositionInvalid(format!(
                                        "coefficient of a{i}{k}*b{k2}{j} in c{i2}{j2} is {got}, expected {want}"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the scheme to scalar `n0 x n0` matrices given row-major.
    pub fn apply<T: Ring>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let comb = |coef: &[i64], x: &[T]| {
            coef.iter()
                .zip(x)
                .filter(|(c, _)| **c != 0)
                .fold(T::zero(), |acc, (c, v)| acc.add(&v.scale(*c)))
        };
        let mut out = vec![T::zero(); self.n0 * self.n0];
        for t in &self.terms {
            let m = comb(&t.alpha, a).mul(&comb(&t.beta, b));
            for (q, &g) in t.gamma.iter().enumerate() {
                if g != 0 {
                    out[q] = out[q].add(&m.scale(g));
                }
            }
        }
        out
    }
}

fn term(alpha: [i64; 4], beta: [i64; 4], gamma: [i64; 4]) -> BilinearTerm {
    BilinearTerm {
        alpha: alpha.to_vec(),
        beta: beta.to_vec(),
        gamma: gamma.to_vec(),
    }
}

/// Strassen's rank-7 scheme for 2x2 blocks (11, 12, 21, 22).
pub fn load_strassen() -> Result<BilinearDecomposition> {
    BilinearDecomposition::new(
        2,
        vec![
            term([1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]),
            term([0, 0, 1, 1], [1, 0, 0, 0], [0, 0, 1, -1]),
            term([1, 0, 0, 0], [0, 1, 0, -1], [0, 1, 0, 1]),
            term([0, 0, 0, 1], [-1, 0, 1, 0], [1, 0, 1, 0]),
            term([1, 1, 0, 0], [0, 0, 0, 1], [-1, 1, 0, 0]),
            term([-1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]),
            term([0, 1, 0, -1], [0, 0, 1, 1], [1, 0, 0, 0]),
        ],
    )
}

/// The `n0³`-term schoolbook scheme.
pub fn load_schoolbook(n0: usize) -> Result<BilinearDecomposition> {
    let sq = n0 * n0;
    let mut terms = Vec::new();
    for i in 0..n0 {
        for k in 0..n0 {
            for j in 0..n0 {
                let mut t = BilinearTerm {
                    alpha: vec![0; sq],
                    beta: vec![0; sq],
                    gamma: vec![0; sq],
                };
                t.alpha[i * n0 + k] = 1;
                t.beta[k * n0 + j] = 1;
                t.gamma[i * n0 + j] = 1;
                terms.push(t);
            }
        }
    }
    BilinearDecomposition::new(n0, terms)
}
