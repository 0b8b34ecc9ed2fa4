//! Shortest-path problems built from distance products.

mod digraph;
mod zwick;

pub use digraph::WeightedDigraph;
pub use zwick::{sample_size, zwick_apsp, zwick_iterations, ZwickOutcome, ZwickStep};

use crate::engine::{tree_fold, Engine, FoldPlan, ResourceReport, Session, Words};
use crate::error::{MrcError, Result};
use crate::matrix::{Matrix, Tropical};
use crate::minplus::{distance_product_in, JoinSite, MinPlusEntry};
use crate::num::{ceil_pow, log2_ceil};

#[derive(Clone, Debug)]
pub struct ApspOutcome {
    pub dist: Matrix<Tropical>,
    pub report: ResourceReport,
    pub squarings: u32,
}

/// `A(G)^{⋆n}` by `⌈log₂ n⌉` squarings.
pub fn apsp_mrc(g: &WeightedDigraph, eps: f64, engine: &Engine) -> Result<ApspOutcome> {
    let n = g.n();
    let mut s = engine.session();
    s.set_baseline(g.words() + (n * n) as u64);
    let squarings = log2_ceil(n);
    let dist = square_out(&mut s, g.adjacency(), squarings, eps)?;
    Ok(ApspOutcome {
        dist,
        report: s.finish(),
        squarings,
    })
}

pub(crate) fn square_out(session: &mut Session<'_>, mut m: Matrix<Tropical>, times: u32, eps: f64) -> Result<Matrix<Tropical>> {
    for _ in 0..times {
        m = distance_product_in(session, &m, &m, eps, &())?.0;
        check_diagonal(&m)?;
    }
    Ok(m)
}

fn check_diagonal(m: &Matrix<Tropical>) -> Result<()> {
    for v in 0..m.rows() {
        if let Tropical::Finite(d) = m.get(v, v) {
            if *d < 0 {
                return Err(MrcError::NegativeCycle(v));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DiameterCenter {
    pub diameter: i64,
    pub center: usize,
    /// Eccentricity of the center.
    pub radius: i64,
    pub report: ResourceReport,
}

/// Eccentricities by a tree-max per row, then diameter and center by one more tree fold
/// of `(max eccentricity, (eccentricity, vertex))`.
pub fn diameter_center(dist: &Matrix<Tropical>, eps: f64, engine: &Engine) -> Result<DiameterCenter> {
    let n = dist.rows();
    if n == 0 {
        return Err(MrcError::InvalidInput("empty graph".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            match dist.get(i, j) {
                Tropical::Finite(d) => row.push(*d),
                Tropical::Inf => return Err(MrcError::Disconnected),
            }
        }
        rows.push(row);
    }
    let fan = ceil_pow(n, eps).max(2);
    let mut s = engine.session();
    s.set_baseline((n * n) as u64);
    let ecc = tree_fold(&mut s, rows, FoldPlan::fan_in(fan), i64::max)?;
    let items: Vec<(i64, (i64, usize))> = ecc
        .into_iter()
        .enumerate()
        .map(|(v, e)| {
            let e = e.expect("row is non-empty");
            (e, (e, v))
        })
        .collect();
    let top = tree_fold(&mut s, vec![items], FoldPlan::fan_in(fan), |a, b| (a.0.max(b.0), a.1.min(b.1)))?;
    let (diameter, (radius, center)) = top[0].expect("one vertex at least");
    Ok(DiameterCenter {
        diameter,
        center,
        radius,
        report: s.finish(),
    })
}

/// Product entry that remembers the middle vertex of its best candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Via {
    d: Tropical,
    via: usize,
}

impl Words for Via {
    fn words(&self) -> u64 {
        2
    }
}

impl MinPlusEntry for Via {
    type Order = (Tropical, usize);
    type Ctx = ();
    fn infinity() -> Self {
        Via {
            d: Tropical::Inf,
            via: usize::MAX,
        }
    }
    fn order(&self) -> (Tropical, usize) {
        (self.d, self.via)
    }
    fn join_order(a: &Self, b: &Self, k: usize) -> (Tropical, usize) {
        (crate::matrix::Semiring::mul(&a.d, &b.d), k)
    }
    fn join(_: &(), a: &Self, b: &Self, site: JoinSite) -> Self {
        Via {
            d: crate::matrix::Semiring::mul(&a.d, &b.d),
            via: site.k,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TriangleOutcome {
    pub found: bool,
    /// `(i, j, k)` with `w(i,j) + w(j,k) + w(k,i) < 0`, smallest total first.
    pub witness: Option<(usize, usize, usize)>,
    pub weight: Option<i64>,
    pub report: ResourceReport,
}

/// `min_{i,k} (A⋆A)_{ik} + a_{ki} < 0` with the zero diagonal replaced by ∞.
pub fn negative_triangle(g: &WeightedDigraph, eps: f64, engine: &Engine) -> Result<TriangleOutcome> {
    let n = g.n();
    let mut a = g.adjacency();
    for v in 0..n {
        a.set(v, v, Tropical::Inf);
    }
    let mut s = engine.session();
    s.set_baseline(g.words() + (n * n) as u64);
    let av = a.map(|&d| Via { d, via: usize::MAX });
    let (p, ..) = distance_product_in(&mut s, &av, &av, eps, &())?;
    // one candidate per (i, k): total weight and the triangle
    let mut cands = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let ki = a.get(k, i);
            if let (Tropical::Finite(x), Tropical::Finite(y)) = (p.get(i, k).d, ki) {
                cands.push((x + y, (i, p.get(i, k).via, k)));
            }
        }
    }
    let fan = ceil_pow(n, eps).max(2);
    let best = if cands.is_empty() {
        None
    } else {
        tree_fold(&mut s, vec![cands], FoldPlan::fan_in(fan), std::cmp::min)?[0]
    };
    let hit = best.filter(|b| b.0 < 0);
    Ok(TriangleOutcome {
        found: hit.is_some(),
        witness: hit.map(|b| b.1),
        weight: hit.map(|b| b.0),
        report: s.finish(),
    })
}
