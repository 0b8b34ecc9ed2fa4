use crate::engine::{Emitter, Engine, KeyValue, ResourceReport};
use crate::error::{MrcError, Result};
use crate::graph::WeightedDigraph;
use crate::key;
use crate::num::ceil_pow;

/// `G'`: path edges removed, every path vertex `v_i` split into `v_i^in` (keeps the
/// original id and all in-edges) and `v_i^out = n + i` (all out-edges).
#[derive(Clone, Debug)]
pub struct SplitGraph {
    pub graph: WeightedDigraph,
    pub path: Vec<usize>,
    pub n: usize,
}

impl SplitGraph {
    pub fn in_id(&self, i: usize) -> usize {
        self.path[i]
    }

    pub fn out_id(&self, i: usize) -> usize {
        self.n + i
    }

    /// Vertex of `G` that a vertex of `G'` stands for.
    pub fn original(&self, v: usize) -> usize {
        if v >= self.n {
            self.path[v - self.n]
        } else {
            v
        }
    }
}

/// Builds `G'` in one round: edge blocks of size `⌈n^ε⌉` each go to a machine that
/// also holds the path.
pub fn build_split_graph(g: &WeightedDigraph, path: &[usize], eps: f64, engine: &Engine) -> Result<(SplitGraph, ResourceReport)> {
    let n = g.n();
    let mut pos = vec![None; n];
    for (i, &v) in path.iter().enumerate() {
        if v >= n || pos[v].is_some() {
            return Err(MrcError::InvalidInput(format!("path is not simple or leaves the graph at {v}")));
        }
        pos[v] = Some(i);
    }
    let block = ceil_pow(n.max(2), eps);
    let input: Vec<KeyValue<(usize, usize, i64)>> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(idx, &e)| KeyValue::new(key!("e", idx), e))
        .collect();
    let mut s = engine.session();
    let pos = &pos;
    let out = s.round(
        input,
        |kv: KeyValue<(usize, usize, i64)>, e: &mut Emitter<(usize, usize, i64)>| {
            e.emit(key!("blk", kv.key.int(1) as usize / block), kv.value)
        },
        |_, edges: Vec<(usize, usize, i64)>, e: &mut Emitter<(usize, usize, i64)>| {
            // the path itself is broadcast to every block
            e.scratch(pos.iter().filter(|p| p.is_some()).count() as u64);
            for (u, v, w) in edges {
                let on_path = matches!((pos[u], pos[v]), (Some(i), Some(j)) if j == i + 1);
                if on_path {
                    continue;
                }
                let src = pos[u].map_or(u, |i| n + i);
                e.emit(key!("g"), (src, v, w));
            }
        },
    )?;
    let graph = WeightedDigraph::new(n + path.len(), out.into_iter().map(|kv| kv.value))?;
    Ok((
        SplitGraph {
            graph,
            path: path.to_vec(),
            n,
        },
        s.finish(),
    ))
}
