//! Non-edge ranking by resistance distance, and top-ℓ link prediction.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{r_closed, StraightParams};
use crate::engine::resistance_det_all;
use crate::graph::{Vertex, WeightedGraph};
use crate::{Error, Rational, Result};

/// Non-edges sharing one exact resistance value.
#[derive(Debug, Clone, PartialEq)]
pub struct TieGroup {
    /// Sorted, each pair with the smaller vertex first.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub value: Rational,
}

/// Tie groups in strictly increasing order of value.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedNonEdges {
    pub vertex_count: usize,
    pub groups: Vec<TieGroup>,
}

impl RankedNonEdges {
    pub fn pair_count(&self) -> usize {
        self.groups.iter().map(|g| g.pairs.len()).sum()
    }

    /// `(group index, pair, value)` in rank order.
    pub fn iter_pairs(&self) -> impl Iterator<Item = (usize, (Vertex, Vertex), &Rational)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(gi, g)| g.pairs.iter().map(move |&p| (gi, p, &g.value)))
    }
}

/// `{3,6} & {4,7}, {2,5} & {5,8}, ...`
impl fmt::Display for RankedNonEdges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (gi, g) in self.groups.iter().enumerate() {
            if gi > 0 {
                f.write_str(", ")?;
            }
            for (pi, (u, v)) in g.pairs.iter().enumerate() {
                if pi > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{{{u},{v}}}")?;
            }
        }
        Ok(())
    }
}

/// Group sorted `(value, pair)` entries by exact equality.
fn group_sorted(mut entries: Vec<(Rational, (Vertex, Vertex))>) -> Vec<TieGroup> {
    entries.sort();
    let mut groups: Vec<TieGroup> = Vec::new();
    for (value, pair) in entries {
        match groups.last_mut() {
            Some(g) if g.value == value => g.pairs.push(pair),
            _ => groups.push(TieGroup {
                pairs: vec![pair],
                value,
            }),
        }
    }
    groups
}

/// Order predicted without comparing values: offsets from 3 upward, and
/// within an offset, centre-out by distance from the reflection axis.
pub fn structural_order(n: usize) -> Vec<Vec<(Vertex, Vertex)>> {
    let mut out = Vec::new();
    for k in 3..n {
        let axis = n - k + 1;
        let mut by_dist: Vec<(usize, usize)> =
            (1..=n - k).map(|j| ((2 * j).abs_diff(axis), j)).collect();
        by_dist.sort();
        for chunk in by_dist.chunk_by(|a, b| a.0 == b.0) {
            out.push(chunk.iter().map(|&(_, j)| (j, j + k)).collect());
        }
    }
    out
}

fn check_n(n: usize) -> Result<()> {
    if n < 5 {
        return Err(Error::Domain(format!("ranking needs n >= 5, got {n}")));
    }
    Ok(())
}

/// Ranking obtained by sorting exact closed-form values.
pub fn rank_by_value(n: usize) -> Result<RankedNonEdges> {
    check_n(n)?;
    let pairs: Vec<(Vertex, Vertex)> = (1..=n)
        .flat_map(|u| (u + 3..=n).map(move |v| (u, v)))
        .collect();
    let entries = pairs
        .into_par_iter()
        .map(|(u, v)| Ok((r_closed(&StraightParams::from_pair(n, u, v)?)?, (u, v))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RankedNonEdges {
        vertex_count: n,
        groups: group_sorted(entries),
    })
}

/// Non-edges of the straight linear 2-tree on `n` vertices, ranked. The
/// structural order and the sorted exact values are both computed and must
/// coincide.
pub fn rank_nonedges(n: usize) -> Result<RankedNonEdges> {
    let ranked = rank_by_value(n)?;
    let structural = structural_order(n);
    let agree = structural.len() == ranked.groups.len()
        && structural
            .iter()
            .zip(&ranked.groups)
            .all(|(s, g)| *s == g.pairs);
    if !agree {
        return Err(Error::Arithmetic(format!(
            "structural and value rankings differ for n={n}"
        )));
    }
    Ok(ranked)
}

/// Ranking for an arbitrary connected graph, from the determinant oracle.
pub fn rank_graph(g: &WeightedGraph<Rational>) -> Result<RankedNonEdges> {
    let non_edges = g.non_edges();
    let rows = (1..=g.vertex_count())
        .into_par_iter()
        .map(|u| resistance_det_all(g, u))
        .collect::<Result<Vec<_>>>()?;
    let entries = non_edges
        .into_iter()
        .map(|(u, v)| (rows[u - 1][v - 1].clone(), (u, v)))
        .collect();
    Ok(RankedNonEdges {
        vertex_count: g.vertex_count(),
        groups: group_sorted(entries),
    })
}

/// How to cut a tie group that straddles the ℓ-th position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Exactly ℓ pairs; inside a group, smaller vertex ids first.
    LowestIndex,
    /// Whole groups only: the boundary group is kept entire, so the result may
    /// hold more than ℓ pairs.
    ReportGroup,
}

pub fn predict_from(
    ranked: &RankedNonEdges,
    count: usize,
    policy: TiePolicy,
) -> Result<Vec<(Vertex, Vertex)>> {
    let total = ranked.pair_count();
    if count > total {
        return Err(Error::Domain(format!(
            "asked for {count} links but only {total} non-edges exist"
        )));
    }
    let mut out = Vec::new();
    for g in &ranked.groups {
        if out.len() >= count {
            break;
        }
        match policy {
            TiePolicy::LowestIndex => {
                let room = count - out.len();
                out.extend(g.pairs.iter().take(room).copied());
            }
            TiePolicy::ReportGroup => out.extend(g.pairs.iter().copied()),
        }
    }
    Ok(out)
}

/// The ℓ non-edges of lowest resistance on the straight linear 2-tree.
pub fn predict_links(n: usize, count: usize, policy: TiePolicy) -> Result<Vec<(Vertex, Vertex)>> {
    predict_from(&rank_nonedges(n)?, count, policy)
}
