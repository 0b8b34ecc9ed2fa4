use crate::engine::Words;
use crate::error::{MrcError, Result};
use crate::matrix::{Matrix, Tropical};

/// Simple weighted digraph; parallel edges keep the smaller weight and
/// nonnegative self-loops are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    out: Vec<Vec<(usize, i64)>>,
}

impl WeightedDigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self> {
        let mut best = std::collections::BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(MrcError::InvalidInput(format!("edge ({u},{v}) outside 0..{n}")));
            }
            if u == v {
                if w < 0 {
                    return Err(MrcError::NegativeCycle(u));
                }
                continue;
            }
            let e = best.entry((u, v)).or_insert(w);
            *e = (*e).min(w);
        }
        let edges: Vec<_> = best.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let mut out = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            out[u].push((v, w));
        }
        Ok(WeightedDigraph { n, edges, out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by `(u, v)`.
    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn out_edges(&self, u: usize) -> &[(usize, i64)] {
        &self.out[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        self.out[u].iter().find(|&&(x, _)| x == v).map(|&(_, w)| w)
    }

    /// Adjacency over (min,+): 0 on the diagonal, ∞ for non-edges.
    pub fn adjacency(&self) -> Matrix<Tropical> {
        let mut m = Matrix::filled(self.n, self.n, Tropical::Inf);
        for i in 0..self.n {
            m.set(i, i, Tropical::Finite(0));
        }
        for &(u, v, w) in &self.edges {
            m.set(u, v, Tropical::Finite(w));
        }
        m
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.edges.iter().map(|e| e.2).min()
    }

    /// `Err(NegativeWeight)` for the first negative edge.
    pub fn require_nonnegative(&self) -> Result<()> {
        match self.edges.iter().find(|e| e.2 < 0) {
            Some(&(u, v, w)) => Err(MrcError::NegativeWeight { u, v, w }),
            None => Ok(()),
        }
    }

    /// Sum of edge weights along `path`, or `None` if some hop is not an edge.
    pub fn path_weight(&self, path: &[usize]) -> Option<i64> {
        path.windows(2).map(|p| self.weight(p[0], p[1])).sum()
    }

    /// Parses `n m` followed by `m` lines `u v w`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<i64>()
                .map_err(|_| MrcError::Parse(format!("bad number {t:?}")))
        });
        let mut next = |what: &str| nums.next().unwrap_or_else(|| Err(MrcError::Parse(format!("missing {what}"))));
        let n = next("n")?;
        let m = next("m")?;
        if n < 0 || m < 0 {
            return Err(MrcError::Parse("negative header".into()));
        }
        let mut edges = Vec::with_capacity(m as usize);
        for _ in 0..m {
            let (u, v, w) = (next("u")?, next("v")?, next("w")?);
            if u < 0 || v < 0 {
                return Err(MrcError::Parse(format!("negative vertex in edge ({u},{v})")));
            }
            edges.push((u as usize, v as usize, w));
        }
        Self::new(n as usize, edges)
    }

    pub fn write(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v, w) in &self.edges {
            s.push_str(&format!("{u} {v} {w}\n"));
        }
        s
    }
}

impl Words for WeightedDigraph {
    fn words(&self) -> u64 {
        3 * self.edges.len() as u64 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_edges_keep_min() {
        let g = WeightedDigraph::new(3, [(0, 1, 5), (0, 1, 2), (1, 1, 4)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 2)]);
        assert_eq!(g.adjacency().get(1, 1), &Tropical::Finite(0));
    }

    #[test]
    fn text_round_trip() {
        let g = WeightedDigraph::new(4, [(0, 1, 1), (2, 3, -1), (3, 0, 7)]).unwrap();
        assert_eq!(WeightedDigraph::parse(&g.write()).unwrap(), g);
        assert!(WeightedDigraph::parse("2 1\n0 5 1\n").is_err());
        assert!(WeightedDigraph::parse("2 2\n0 1 1\n").is_err());
    }

    #[test]
    fn negative_self_loop_rejected() {
        assert!(matches!(WeightedDigraph::new(2, [(1, 1, -1)]), Err(MrcError::NegativeCycle(1))));
    }
}
