//! Exhaustive spanning tree and 2-forest enumeration for small graphs. Used
//! only as an independent check on the Matrix-Tree counts.

use crate::graph::{Vertex, WeightedGraph};
use crate::{BigInt, Error, Result, Scalar};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 10;

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

/// Count acyclic edge subsets of size `target`, optionally requiring `split`
/// to end up in different components.
fn count_forests(
    n: usize,
    edges: &[(usize, usize)],
    target: usize,
    split: Option<(usize, usize)>,
) -> u64 {
    fn go(
        edges: &[(usize, usize)],
        at: usize,
        left: usize,
        parent: &mut Vec<usize>,
        split: Option<(usize, usize)>,
    ) -> u64 {
        if left == 0 {
            return match split {
                Some((a, b)) if find(parent, a) == find(parent, b) => 0,
                _ => 1,
            };
        }
        if edges.len() - at < left {
            return 0;
        }
        let (u, v) = edges[at];
        let (ru, rv) = (find(parent, u), find(parent, v));
        let mut total = 0;
        if ru != rv {
            let joins_split = split.is_some_and(|(a, b)| {
                let (ra, rb) = (find(parent, a), find(parent, b));
                (ra == ru && rb == rv) || (ra == rv && rb == ru)
            });
            if !joins_split {
                parent[ru] = rv;
                total += go(edges, at + 1, left - 1, parent, split);
                parent[ru] = ru;
            }
        }
        total + go(edges, at + 1, left, parent, split)
    }
    let mut parent: Vec<usize> = (0..=n).collect();
    go(edges, 0, target, &mut parent, split)
}

fn prepare<S: Scalar>(g: &WeightedGraph<S>, limit: usize) -> Result<Vec<(usize, usize)>> {
    if g.vertex_count() > limit {
        return Err(Error::TooLarge {
            vertices: g.vertex_count(),
            limit,
        });
    }
    if !g.has_unit_weights() {
        return Err(Error::NonUnitWeights);
    }
    Ok(g.edges().iter().map(|e| (e.u, e.v)).collect())
}

/// Number of spanning trees by trying every edge subset (with cycle pruning).
/// Parallel edges are distinct.
pub fn brute_force_tree_enumeration<S: Scalar>(
    g: &WeightedGraph<S>,
    limit: usize,
) -> Result<BigInt> {
    let edges = prepare(g, limit)?;
    let n = g.vertex_count();
    Ok(BigInt::from(count_forests(n, &edges, n - 1, None)))
}

/// Number of spanning forests with two trees, one holding `i` and the other `j`.
pub fn brute_force_two_forest_enumeration<S: Scalar>(
    g: &WeightedGraph<S>,
    i: Vertex,
    j: Vertex,
    limit: usize,
) -> Result<BigInt> {
    let edges = prepare(g, limit)?;
    let n = g.vertex_count();
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(Error::VertexRange {
                vertex: v,
                count: n,
            });
        }
    }
    if i == j || n < 2 {
        return Ok(BigInt::from(0));
    }
    Ok(BigInt::from(count_forests(n, &edges, n - 2, Some((i, j)))))
}
