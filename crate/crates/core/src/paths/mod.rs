//! Replacement paths and the second simple shortest path through detours in the split
//! graph, with paths rebuilt from sampled summaries.

mod split;
mod summary;

pub use split::{build_split_graph, SplitGraph};
pub use summary::{apsp_with_summaries, default_samples, MergeCtx, PathSummary, SummaryOutcome};

use crate::engine::{tree_fold, Emitter, Engine, FoldPlan, KeyValue, ResourceReport};
use crate::error::{MrcError, Result};
use crate::graph::WeightedDigraph;
use crate::key;
use crate::matrix::{Matrix, Tropical};
use crate::num::{ceil_pow, ceil_tol};

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(MrcError::ReconstructionFailure(msg.into()))
}

enum Seg {
    Open(usize, usize),
    Done(Vec<usize>),
}

/// Rebuilds a `u → v` shortest path from the summaries of `g`, halving at the lower
/// median sample level by level. The result is checked against `g`.
pub fn reconstruct_path(sm: &Matrix<PathSummary>, g: &WeightedDigraph, u: usize, v: usize) -> Result<Vec<usize>> {
    let top = sm.get(u, v);
    let Tropical::Finite(total) = top.dist else {
        return fail(format!("{v} is unreachable from {u}"));
    };
    let n = g.n().max(2);
    let max_depth = ceil_tol((n as f64).ln() / 1.5f64.ln()) as usize + 2;
    let mut segs = vec![Seg::Open(u, v)];
    let mut depth = 0;
    while segs.iter().any(|s| matches!(s, Seg::Open(..))) {
        if depth > max_depth {
            return fail(format!("recursion deeper than {max_depth}"));
        }
        let mut next = Vec::with_capacity(2 * segs.len());
        for seg in segs {
            let (a, b) = match seg {
                Seg::Open(a, b) => (a, b),
                done => {
                    next.push(done);
                    continue;
                }
            };
            let s = sm.get(a, b);
            let Tropical::Finite(d) = s.dist else {
                return fail(format!("segment {a}->{b} unreachable"));
            };
            match s.hops {
                0 if a == b => next.push(Seg::Done(vec![a])),
                0 => return fail(format!("segment {a}->{b} has no hops")),
                1 => next.push(Seg::Done(vec![a, b])),
                2 => {
                    let mid = (0..g.n()).find(|&w| {
                        let (x, y) = (sm.get(a, w), sm.get(w, b));
                        x.hops == 1 && y.hops == 1 && matches!((x.dist, y.dist), (Tropical::Finite(p), Tropical::Finite(q)) if p + q == d)
                    });
                    match mid {
                        Some(w) => next.push(Seg::Done(vec![a, w, b])),
                        None => return fail(format!("no middle vertex for {a}->{b}")),
                    }
                }
                h => {
                    let mut samples = s.samples.clone();
                    samples.sort_unstable_by_key(|&(w, pos)| (pos, w));
                    let Some(&(w, pos)) = samples.get((samples.len().max(1) - 1) / 2) else {
                        return fail("no samples");
                    };
                    let w = w as usize;
                    if pos == 0 || pos >= h {
                        return fail(format!("median of {a}->{b} is an endpoint"));
                    }
                    let (x, y) = (sm.get(a, w), sm.get(w, b));
                    let additive = matches!((x.dist, y.dist), (Tropical::Finite(p), Tropical::Finite(q)) if p + q == d);
                    if !additive || x.hops != pos || y.hops != h - pos {
                        return fail(format!("split of {a}->{b} at {w} is inconsistent"));
                    }
                    next.push(Seg::Open(a, w));
                    next.push(Seg::Open(w, b));
                }
            }
        }
        segs = next;
        depth += 1;
    }
    let mut path = Vec::new();
    for seg in segs {
        if let Seg::Done(vs) = seg {
            let skip = usize::from(!path.is_empty());
            path.extend_from_slice(&vs[skip..]);
        }
    }
    if path.first() != Some(&u) || path.last() != Some(&v) || g.path_weight(&path) != Some(total) {
        return fail(format!("rebuilt {u}->{v} path does not verify"));
    }
    Ok(path)
}

/// Calls `f` with derived seeds until it stops failing reconstruction.
pub fn with_retries<T>(seed: u64, attempts: usize, mut f: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let mut last = None;
    for a in 0..attempts.max(1) as u64 {
        match f(seed.wrapping_add(a.wrapping_mul(0x9e37_79b9_7f4a_7c15))) {
            Err(e @ MrcError::ReconstructionFailure(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Best `(length, j, l)` per path edge `(v_i, v_{i+1})`.
#[derive(Clone, Debug)]
pub struct DetourTable {
    pub path: Vec<usize>,
    pub length: i64,
    pub best: Vec<Option<(i64, usize, usize)>>,
    pub split: SplitGraph,
    pub split_summaries: Matrix<PathSummary>,
    pub report: ResourceReport,
}

impl DetourTable {
    /// `v_0..v_j`, the detour `v_j → v_l` in `G'`, then `v_l..v_k`.
    pub fn assemble(&self, g: &WeightedDigraph, j: usize, l: usize) -> Result<Vec<usize>> {
        let sg = &self.split;
        let detour = reconstruct_path(&self.split_summaries, &sg.graph, sg.out_id(j), sg.in_id(l))?;
        let mut p: Vec<usize> = self.path[..j].to_vec();
        p.extend(detour.into_iter().map(|v| sg.original(v)));
        p.extend_from_slice(&self.path[l + 1..]);
        let mut seen = vec![false; g.n()];
        if p.iter().any(|&v| std::mem::replace(&mut seen[v], true)) {
            return fail("assembled path repeats a vertex");
        }
        Ok(p)
    }
}

/// Shortest path `π(s,t)`, the split graph and the best detour for every path edge,
/// minimized over the triples `j ≤ i < l` in one generation round plus a tree-min.
pub fn detour_table(g: &WeightedDigraph, s: usize, t: usize, eps: f64, seed: u64, engine: &Engine) -> Result<DetourTable> {
    let n = g.n();
    if s >= n || t >= n {
        return Err(MrcError::InvalidInput(format!("endpoints {s},{t} outside 0..{n}")));
    }
    let base = apsp_with_summaries(g, eps, seed, engine, None)?;
    let Tropical::Finite(length) = base.summaries.get(s, t).dist else {
        return Err(MrcError::NoReplacement);
    };
    let path = reconstruct_path(&base.summaries, g, s, t)?;
    let (split, split_rep) = build_split_graph(g, &path, eps, engine)?;
    let detours = apsp_with_summaries(&split.graph, eps, seed ^ 0x5bd1_e995, engine, Some(base.samples))?;

    let mut sess = engine.session();
    sess.absorb(base.report);
    sess.absorb(split_rep);
    sess.absorb(detours.report.clone());
    let k = path.len();
    let fin = |x: Tropical| x.finite();
    let pre: Vec<Option<i64>> = path.iter().map(|&v| fin(base.summaries.get(s, v).dist)).collect();
    let suf: Vec<Option<i64>> = path.iter().map(|&v| fin(base.summaries.get(v, t).dist)).collect();
    let input: Vec<KeyValue<Vec<(usize, i64)>>> = (0..k)
        .map(|j| {
            let row = (j + 1..k)
                .filter_map(|l| {
                    let d = fin(detours.summaries.get(split.out_id(j), split.in_id(l)).dist)?;
                    Some((l, pre[j]? + d + suf[l]?))
                })
                .collect();
            KeyValue::new(key!("row", j), row)
        })
        .collect();
    let cands = sess.round(
        input,
        |kv: KeyValue<Vec<(usize, i64)>>, e: &mut Emitter<Vec<(usize, i64)>>| e.emit(kv.key, kv.value),
        |key, rows: Vec<Vec<(usize, i64)>>, e: &mut Emitter<(i64, usize, usize)>| {
            let j = key.int(1) as usize;
            for row in rows {
                for (l, len) in row {
                    for i in j..l {
                        e.emit(key!("edge", i), (len, j, l));
                    }
                }
            }
        },
    )?;
    let mut groups: Vec<Vec<(i64, usize, usize)>> = vec![Vec::new(); k.saturating_sub(1)];
    for kv in cands {
        groups[kv.key.int(1) as usize].push(kv.value);
    }
    let fan = ceil_pow(n.max(2), eps).max(2);
    let best = tree_fold(&mut sess, groups, FoldPlan::fan_in(fan), std::cmp::min)?;
    sess.set_baseline(3 * g.edges().len() as u64 + n as u64);
    Ok(DetourTable {
        path,
        length,
        best,
        split,
        split_summaries: detours.summaries,
        report: sess.finish(),
    })
}

#[derive(Clone, Debug)]
pub struct PathAnswer {
    pub length: i64,
    pub path: Vec<usize>,
    /// The shortest path the answer deviates from.
    pub shortest: Vec<usize>,
    pub report: ResourceReport,
}

/// Shortest `s → t` path avoiding the edge `e` of `π(s,t)`.
pub fn replacement_path(
    g: &WeightedDigraph,
    s: usize,
    t: usize,
    e: (usize, usize),
    eps: f64,
    seed: u64,
    engine: &Engine,
) -> Result<PathAnswer> {
    let tab = detour_table(g, s, t, eps, seed, engine)?;
    let Some(i) = tab.path.windows(2).position(|w| (w[0], w[1]) == e) else {
        return Err(MrcError::InvalidInput(format!("edge {e:?} is not on the shortest path {:?}", tab.path)));
    };
    let Some((length, j, l)) = tab.best[i] else {
        return Err(MrcError::NoReplacement);
    };
    let path = tab.assemble(g, j, l)?;
    if path.windows(2).any(|w| (w[0], w[1]) == e) || g.path_weight(&path) != Some(length) {
        return fail("replacement path does not verify");
    }
    Ok(PathAnswer {
        length,
        path,
        shortest: tab.path,
        report: tab.report,
    })
}

/// Second simple shortest path: the best replacement over all edges of `π(s,t)`.
pub fn second_shortest_path(g: &WeightedDigraph, s: usize, t: usize, eps: f64, seed: u64, engine: &Engine) -> Result<PathAnswer> {
    if s == t {
        return Err(MrcError::InvalidInput("source equals target".into()));
    }
    let tab = match detour_table(g, s, t, eps, seed, engine) {
        Err(MrcError::NoReplacement) => return Err(MrcError::NoSecondPath),
        other => other?,
    };
    let Some((length, j, l)) = tab.best.iter().flatten().min().copied() else {
        return Err(MrcError::NoSecondPath);
    };
    let path = tab.assemble(g, j, l)?;
    if path == tab.path || g.path_weight(&path) != Some(length) {
        return fail("second path does not verify");
    }
    Ok(PathAnswer {
        length,
        path,
        shortest: tab.path,
        report: tab.report,
    })
}
