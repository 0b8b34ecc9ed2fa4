//! Orthogonal Vectors in one round and 3-SUM in two rounds.

mod ov;
mod three_sum;

pub use ov::{ov_dimension, ov_mrc, BitVector, OvOutcome, VectorList};
pub use three_sum::{
    nontrivial_subtasks, three_sum_budget, three_sum_mrc, HeadsTails, SortedTriple, ThreeSumOutcome,
};

use crate::error::{MrcError, Result};

/// Lists separated by blank lines, one integer per line.
pub fn parse_int_lists(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut lists = vec![Vec::new()];
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() {
            if !lists.last().unwrap().is_empty() {
                lists.push(Vec::new());
            }
            continue;
        }
        let v = t
            .parse()
            .map_err(|_| MrcError::Parse(format!("bad integer {t:?}")))?;
        lists.last_mut().unwrap().push(v);
    }
    if lists.last().is_some_and(Vec::is_empty) {
        lists.pop();
    }
    Ok(lists)
}

pub fn write_int_lists(lists: &[Vec<i64>]) -> String {
    let blocks: Vec<String> = lists
        .iter()
        .map(|l| l.iter().map(|v| format!("{v}\n")).collect())
        .collect();
    blocks.join("\n")
}

/// Two lists of bitstrings separated by a blank line.
pub fn parse_vector_lists(text: &str) -> Result<(VectorList, VectorList)> {
    let mut lists: Vec<Vec<BitVector>> = vec![Vec::new()];
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() {
            if !lists.last().unwrap().is_empty() {
                lists.push(Vec::new());
            }
            continue;
        }
        lists.last_mut().unwrap().push(BitVector::parse(t)?);
    }
    if lists.last().is_some_and(Vec::is_empty) {
        lists.pop();
    }
    if lists.len() != 2 {
        return Err(MrcError::Parse(format!("expected 2 vector lists, found {}", lists.len())));
    }
    let b = lists.pop().unwrap();
    let a = lists.pop().unwrap();
    Ok((VectorList::new(a)?, VectorList::new(b)?))
}

pub fn write_vector_lists(a: &VectorList, b: &VectorList) -> String {
    let mut out = String::new();
    for v in a.vectors() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out.push('\n');
    for v in b.vectors() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
