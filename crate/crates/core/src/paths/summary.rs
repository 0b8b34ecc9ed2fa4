use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Engine, ResourceReport, Words};
use crate::error::{MrcError, Result};
use crate::graph::WeightedDigraph;
use crate::matrix::{Matrix, Tropical};
use crate::minplus::{distance_product_in, JoinSite, MinPlusEntry};
use crate::num::{ceil_tol, log2_ceil};

const NO_VIA: u32 = u32::MAX;

/// Sampled shortest path between one pair: distance, hop count, the middle vertex of
/// the last combine, and `(vertex, position)` samples along the witness path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSummary {
    pub dist: Tropical,
    pub hops: u32,
    pub via: u32,
    pub samples: Vec<(u32, u32)>,
}

impl Words for PathSummary {
    // a sample packs vertex and position into one word
    fn words(&self) -> u64 {
        3 + self.samples.len() as u64
    }
}

/// `⌈81·log₂ n⌉`, at least 1.
pub fn default_samples(n: usize) -> usize {
    (ceil_tol(81.0 * (n.max(2) as f64).log2()) as usize).max(1)
}

/// Randomness of one combine, derived from the job seed, the squaring and the site.
#[derive(Clone, Copy, Debug)]
pub struct MergeCtx {
    pub seed: u64,
    pub iteration: u64,
}

fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn site_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let h = parts.iter().fold(mix(seed), |acc, &p| mix(acc ^ p));
    ChaCha8Rng::seed_from_u64(h)
}

impl PathSummary {
    pub fn unreachable() -> Self {
        PathSummary {
            dist: Tropical::Inf,
            hops: 0,
            via: NO_VIA,
            samples: Vec::new(),
        }
    }

    pub fn empty_path(v: usize, samples: usize) -> Self {
        PathSummary {
            dist: Tropical::Finite(0),
            hops: 0,
            via: NO_VIA,
            samples: vec![(v as u32, 0); samples],
        }
    }

    /// A single edge; every sample is one of its endpoints with equal probability.
    pub fn edge(u: usize, v: usize, w: i64, samples: usize, rng: &mut impl Rng) -> Self {
        PathSummary {
            dist: Tropical::Finite(w),
            hops: 1,
            via: NO_VIA,
            samples: (0..samples)
                .map(|_| if rng.gen_bool(0.5) { (u as u32, 0) } else { (v as u32, 1) })
                .collect(),
        }
    }

    pub fn via(&self) -> Option<usize> {
        (self.via != NO_VIA).then_some(self.via as usize)
    }

    /// Concatenation `p1 · p2`: sample `i` comes from `p1` with probability
    /// `l₁/(l₁+l₂)`, positions of `p2` shifted by `l₁`.
    pub fn merge(p1: &Self, p2: &Self, via: usize, rng: &mut impl Rng) -> Self {
        let dist = crate::matrix::Semiring::mul(&p1.dist, &p2.dist);
        if dist.is_inf() {
            return Self::unreachable();
        }
        let (l1, l2) = (p1.hops, p2.hops);
        let samples = p1
            .samples
            .iter()
            .zip(&p2.samples)
            .map(|(&a, &(v, pos))| {
                let take_first = l1 + l2 == 0 || rng.gen_range(0..l1 + l2) < l1;
                if take_first {
                    a
                } else {
                    (v, pos + l1)
                }
            })
            .collect();
        PathSummary {
            dist,
            hops: l1 + l2,
            via: via as u32,
            samples,
        }
    }
}

impl MinPlusEntry for PathSummary {
    type Order = (Tropical, u32, u32);
    type Ctx = MergeCtx;
    fn infinity() -> Self {
        Self::unreachable()
    }
    fn order(&self) -> Self::Order {
        (self.dist, self.hops, self.via)
    }
    fn join_order(a: &Self, b: &Self, k: usize) -> Self::Order {
        let d = crate::matrix::Semiring::mul(&a.dist, &b.dist);
        if d.is_inf() {
            (d, 0, NO_VIA)
        } else {
            (d, a.hops + b.hops, k as u32)
        }
    }
    fn join(ctx: &MergeCtx, a: &Self, b: &Self, site: JoinSite) -> Self {
        let mut rng = site_rng(ctx.seed, &[ctx.iteration, site.i as u64, site.k as u64, site.j as u64]);
        Self::merge(a, b, site.k, &mut rng)
    }
}

#[derive(Clone, Debug)]
pub struct SummaryOutcome {
    pub summaries: Matrix<PathSummary>,
    pub report: ResourceReport,
    pub samples: usize,
}

impl SummaryOutcome {
    pub fn dist(&self) -> Matrix<Tropical> {
        self.summaries.map(|s| s.dist)
    }
}

/// APSP by repeated squaring, carrying a [`PathSummary`] per pair.
pub fn apsp_with_summaries(
    g: &WeightedDigraph,
    eps: f64,
    seed: u64,
    engine: &Engine,
    samples: Option<usize>,
) -> Result<SummaryOutcome> {
    g.require_nonnegative()?;
    let n = g.n();
    let s = samples.unwrap_or_else(|| default_samples(n));
    if s == 0 {
        return Err(MrcError::DomainError("sample count must be positive".into()));
    }
    let mut m = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            PathSummary::empty_path(i, s)
        } else {
            PathSummary::unreachable()
        }
    });
    for &(u, v, w) in g.edges() {
        let mut rng = site_rng(seed, &[0, u as u64, v as u64]);
        m.set(u, v, PathSummary::edge(u, v, w, s, &mut rng));
    }
    let sub = engine.with_budget(engine.budget().scaled(3 + s as u64));
    let mut session = sub.session();
    session.set_baseline(g.words() + (n * n) as u64 * (3 + s as u64));
    for it in 0..log2_ceil(n) {
        let ctx = MergeCtx {
            seed,
            iteration: it as u64 + 1,
        };
        m = distance_product_in(&mut session, &m, &m, eps, &ctx)?.0;
    }
    Ok(SummaryOutcome {
        summaries: m,
        report: session.finish(),
        samples: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_probability_one_third() {
        // l1 = 1, l2 = 2: a sample stays on the first path with probability 1/3
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p1 = PathSummary::edge(0, 1, 1, 3000, &mut rng);
        let mut p2 = PathSummary::edge(5, 6, 1, 3000, &mut rng);
        p2.hops = 2;
        let m = PathSummary::merge(&p1, &p2, 1, &mut rng);
        let from_p1 = m.samples.iter().filter(|&&(v, _)| v <= 1).count();
        let frac = from_p1 as f64 / 3000.0;
        assert!((frac - 1.0 / 3.0).abs() < 0.03, "{frac}");
        assert_eq!(m.hops, 3);
        assert!(m.samples.iter().all(|&(v, p)| if v <= 1 { p == v } else { p == v - 5 + 1 }));
    }

    #[test]
    fn single_edge_samples_are_endpoints() {
        let g = WeightedDigraph::new(2, [(0, 1, 4)]).unwrap();
        let out = apsp_with_summaries(&g, 1.0, 1, &Engine::new(crate::engine::MachineBudget::unlimited()), None).unwrap();
        let s = out.summaries.get(0, 1);
        assert_eq!((s.dist, s.hops), (Tropical::Finite(4), 1));
        assert_eq!(s.samples.len(), 81);
        assert!(s.samples.iter().all(|&(v, p)| (v, p) == (0, 0) || (v, p) == (1, 1)));
    }

    #[test]
    fn negative_weight_rejected() {
        let g = WeightedDigraph::new(2, [(0, 1, -1)]).unwrap();
        let e = Engine::new(crate::engine::MachineBudget::unlimited());
        assert!(matches!(apsp_with_summaries(&g, 1.0, 1, &e, None), Err(MrcError::NegativeWeight { .. })));
    }
}
