//! Series, parallel, Δ–Y, cut-vertex and merge-rename transformations, and
//! the reduction schedule for straight linear 2-trees.
//!
//! Δ–Y labelling: for a triangle `(n1, n2, n3)` the side resistances are
//! `R_A = r(n2, n3)`, `R_B = r(n1, n3)`, `R_C = r(n1, n2)`. The star arm at
//! `n1` is `R_1 = R_B R_C / Σ`, at `n2` is `R_2 = R_A R_C / Σ`, at `n3` is
//! `R_3 = R_A R_B / Σ`. The schedule below always passes a triangle
//! `(k, k+1, k+2)` as `(k+2, k+1, k)`, which makes `R_3` the tail, `R_2` the
//! side and `R_1` the bottom resistance.

use serde::{Deserialize, Serialize};

use super::{Method, ResistanceReport};
use crate::graph::{straight_linear_2tree, Vertex, WeightedGraph};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Series,
    Parallel,
    DeltaY,
    CutVertex,
    MergeRename,
}

/// One transformation, with enough information to replay it.
///
/// Vertex layout per kind:
/// * `Series`: `[end_a, middle, end_b]`, consumed `[r(a,mid), r(mid,b)]`.
/// * `Parallel`: `[a, b]`, consumed the two parallel resistances.
/// * `DeltaY`: `[n1, n2, n3, star]`, consumed `[R_A, R_B, R_C]`, produced
///   `[R_1, R_2, R_3]`.
/// * `CutVertex`: `[cut, removed...]`, consumed the weights of deleted edges.
/// * `MergeRename`: `[from, to]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep<S> {
    pub kind: StepKind,
    pub vertices: Vec<Vertex>,
    pub consumed: Vec<S>,
    pub produced: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace<S> {
    pub initial: WeightedGraph<S>,
    pub steps: Vec<TraceStep<S>>,
}

impl<S: Scalar> ReductionTrace<S> {
    pub fn new(initial: WeightedGraph<S>) -> Self {
        Self {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn delta_y_steps(&self) -> impl Iterator<Item = &TraceStep<S>> {
        self.steps.iter().filter(|s| s.kind == StepKind::DeltaY)
    }

    /// Re-apply every step to a copy of the initial graph, checking that each
    /// consumed resistance matches what the graph holds at that point.
    pub fn replay(&self) -> Result<WeightedGraph<S>> {
        let mut g = self.initial.clone();
        for (idx, step) in self.steps.iter().enumerate() {
            let again = match step.kind {
                StepKind::Series => series_step(&mut g, step.vertices[1])?,
                StepKind::Parallel => parallel_step(&mut g, step.vertices[0], step.vertices[1])?,
                StepKind::DeltaY => {
                    let t = (step.vertices[0], step.vertices[1], step.vertices[2]);
                    delta_y_step(&mut g, t)?.1
                }
                StepKind::CutVertex => {
                    let far = *step.vertices.get(1).ok_or_else(|| {
                        Error::Reduction(format!("step {idx}: cut-vertex step removed nothing"))
                    })?;
                    cut_vertex_step(&mut g, step.vertices[0], far)?
                }
                StepKind::MergeRename => {
                    merge_rename_step(&mut g, step.vertices[0], step.vertices[1])?
                }
            };
            if again != *step {
                return Err(Error::Reduction(format!(
                    "step {idx} does not replay: recorded {step:?}, replayed {again:?}"
                )));
            }
        }
        Ok(g)
    }
}

fn single_edge<S: Scalar>(g: &WeightedGraph<S>, a: Vertex, b: Vertex) -> Result<usize> {
    match g.edge_indices_between(a, b).as_slice() {
        [i] => Ok(*i),
        [] => Err(Error::Reduction(format!("no edge between {a} and {b}"))),
        _ => Err(Error::Reduction(format!(
            "parallel edges between {a} and {b}; reduce them first"
        ))),
    }
}

/// Replace the two edges at a degree-2 vertex by one edge of summed resistance.
pub fn series_step<S: Scalar>(g: &mut WeightedGraph<S>, middle: Vertex) -> Result<TraceStep<S>> {
    let idx: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.touches(middle))
        .map(|(i, _)| i)
        .collect();
    if idx.len() != 2 {
        return Err(Error::Reduction(format!(
            "series at {middle}: degree is {}, expected 2",
            idx.len()
        )));
    }
    let a = g.edges()[idx[0]].other(middle);
    let b = g.edges()[idx[1]].other(middle);
    if a == b {
        return Err(Error::Reduction(format!(
            "series at {middle}: both edges lead to {a}"
        )));
    }
    let rb = g.remove_edge_at(idx[1]).resistance;
    let ra = g.remove_edge_at(idx[0]).resistance;
    let sum = ra.clone() + rb.clone();
    g.add_edge(a, b, sum.clone())?;
    Ok(TraceStep {
        kind: StepKind::Series,
        vertices: vec![a, middle, b],
        consumed: vec![ra, rb],
        produced: vec![sum],
    })
}

/// Merge the first two parallel edges between `a` and `b`.
pub fn parallel_step<S: Scalar>(
    g: &mut WeightedGraph<S>,
    a: Vertex,
    b: Vertex,
) -> Result<TraceStep<S>> {
    let idx = g.edge_indices_between(a, b);
    if idx.len() < 2 {
        return Err(Error::Reduction(format!(
            "parallel on {a}-{b}: found {} edge(s), need at least 2",
            idx.len()
        )));
    }
    let rb = g.remove_edge_at(idx[1]).resistance;
    let ra = g.remove_edge_at(idx[0]).resistance;
    let r = ra.clone() * rb.clone() / (ra.clone() + rb.clone());
    g.add_edge(a, b, r.clone())?;
    Ok(TraceStep {
        kind: StepKind::Parallel,
        vertices: vec![a, b],
        consumed: vec![ra, rb],
        produced: vec![r],
    })
}

/// Replace triangle `(n1, n2, n3)` by a star through a new vertex, returned
/// alongside the trace step.
pub fn delta_y_step<S: Scalar>(
    g: &mut WeightedGraph<S>,
    (n1, n2, n3): (Vertex, Vertex, Vertex),
) -> Result<(Vertex, TraceStep<S>)> {
    if n1 == n2 || n2 == n3 || n1 == n3 {
        return Err(Error::Reduction(format!(
            "Δ–Y on ({n1}, {n2}, {n3}): vertices must be distinct"
        )));
    }
    let ia = single_edge(g, n2, n3)?;
    let ib = single_edge(g, n1, n3)?;
    let ic = single_edge(g, n1, n2)?;
    let ra = g.edges()[ia].resistance.clone();
    let rb = g.edges()[ib].resistance.clone();
    let rc = g.edges()[ic].resistance.clone();
    let mut doomed = [ia, ib, ic];
    doomed.sort_unstable();
    for i in doomed.into_iter().rev() {
        g.remove_edge_at(i);
    }
    let total = ra.clone() + rb.clone() + rc.clone();
    let r1 = rb.clone() * rc.clone() / total.clone();
    let r2 = ra.clone() * rc.clone() / total.clone();
    let r3 = ra.clone() * rb.clone() / total;
    let star = g.add_vertex();
    g.add_edge(n1, star, r1.clone())?;
    g.add_edge(n2, star, r2.clone())?;
    g.add_edge(n3, star, r3.clone())?;
    Ok((
        star,
        TraceStep {
            kind: StepKind::DeltaY,
            vertices: vec![n1, n2, n3, star],
            consumed: vec![ra, rb, rc],
            produced: vec![r1, r2, r3],
        },
    ))
}

/// Delete the component of `g - cut` that contains `far`. `cut` must keep at
/// least one other neighbour, i.e. it really separates `far` from the rest.
pub fn cut_vertex_step<S: Scalar>(
    g: &mut WeightedGraph<S>,
    cut: Vertex,
    far: Vertex,
) -> Result<TraceStep<S>> {
    if cut == far {
        return Err(Error::Reduction(
            "cut vertex and far vertex coincide".into(),
        ));
    }
    // Component of `far` once `cut` is removed.
    let mut side = std::collections::BTreeSet::new();
    let mut stack = vec![far];
    while let Some(x) = stack.pop() {
        if x == cut || !side.insert(x) {
            continue;
        }
        for e in g.edges() {
            if e.touches(x) {
                stack.push(e.other(x));
            }
        }
    }
    let outside = g
        .edges()
        .iter()
        .any(|e| e.touches(cut) && !side.contains(&e.other(cut)));
    if !outside {
        return Err(Error::Reduction(format!(
            "{cut} does not separate {far} from the rest of the graph"
        )));
    }
    let mut consumed = Vec::new();
    g.edges_mut().retain(|e| {
        let gone = side.contains(&e.u) || side.contains(&e.v);
        if gone {
            consumed.push(e.resistance.clone());
        }
        !gone
    });
    let mut vertices = vec![cut, far];
    vertices.extend(side.into_iter().filter(|&v| v != far));
    Ok(TraceStep {
        kind: StepKind::CutVertex,
        vertices,
        consumed,
        produced: Vec::new(),
    })
}

/// Move every edge of `from` onto the isolated vertex `to`.
pub fn merge_rename_step<S: Scalar>(
    g: &mut WeightedGraph<S>,
    from: Vertex,
    to: Vertex,
) -> Result<TraceStep<S>> {
    if to == 0 || to > g.vertex_count() || from == 0 || from > g.vertex_count() {
        return Err(Error::Reduction(format!(
            "rename {from} -> {to}: vertex out of range"
        )));
    }
    if g.degree(to) != 0 {
        return Err(Error::Reduction(format!(
            "rename {from} -> {to}: target still has edges"
        )));
    }
    for e in g.edges_mut() {
        if e.u == from {
            e.u = to;
        }
        if e.v == from {
            e.v = to;
        }
    }
    Ok(TraceStep {
        kind: StepKind::MergeRename,
        vertices: vec![from, to],
        consumed: Vec::new(),
        produced: Vec::new(),
    })
}

struct Reducer<S: Scalar> {
    g: WeightedGraph<S>,
    trace: ReductionTrace<S>,
}

impl<S: Scalar> Reducer<S> {
    fn series(&mut self, middle: Vertex) -> Result<()> {
        let s = series_step(&mut self.g, middle)?;
        self.trace.steps.push(s);
        Ok(())
    }

    fn parallel(&mut self, a: Vertex, b: Vertex) -> Result<()> {
        let s = parallel_step(&mut self.g, a, b)?;
        self.trace.steps.push(s);
        Ok(())
    }

    fn delta_y(&mut self, t: (Vertex, Vertex, Vertex)) -> Result<Vertex> {
        let (star, s) = delta_y_step(&mut self.g, t)?;
        self.trace.steps.push(s);
        Ok(star)
    }

    fn cut(&mut self, cut: Vertex, far: Vertex) -> Result<()> {
        let s = cut_vertex_step(&mut self.g, cut, far)?;
        self.trace.steps.push(s);
        Ok(())
    }

    fn rename(&mut self, from: Vertex, to: Vertex) -> Result<()> {
        let s = merge_rename_step(&mut self.g, from, to)?;
        self.trace.steps.push(s);
        Ok(())
    }

    /// Sweep `count` triangles starting at `first`, stepping by `dir` (+1 left
    /// to right, -1 right to left). All but the last Δ–Y are followed by the
    /// series merge and rename; the last star is returned un-merged.
    fn sweep(&mut self, first: Vertex, dir: isize, count: usize) -> Result<Option<Vertex>> {
        let at = |base: Vertex, off: isize| (base as isize + dir * off) as Vertex;
        let mut last = None;
        for t in 0..count {
            let tail = at(first, t as isize);
            let star = self.delta_y((at(tail, 2), at(tail, 1), tail))?;
            if t + 1 < count {
                self.series(at(tail, 1))?;
                self.rename(star, at(tail, 1))?;
            } else {
                last = Some(star);
            }
        }
        Ok(last)
    }

    /// Inner sweep used between the two terminals: every Δ–Y is merged.
    fn merged_sweep(&mut self, first: Vertex, count: usize) -> Result<()> {
        for t in 0..count {
            let tail = first + t;
            let star = self.delta_y((tail + 2, tail + 1, tail))?;
            self.series(tail + 1)?;
            self.rename(star, tail + 1)?;
        }
        Ok(())
    }
}

fn is_straight_pattern<S: Scalar>(g: &WeightedGraph<S>) -> bool {
    let n = g.vertex_count();
    if n < 3 || g.edge_count() != 2 * n - 3 {
        return false;
    }
    let mut keys: Vec<_> = g.edges().iter().map(|e| e.key()).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len() == 2 * n - 3 && keys.iter().all(|&(u, v)| v - u <= 2)
}

/// Exact resistance between `i` and `j` on the unit straight linear 2-tree
/// with `n` vertices, via the Δ–Y schedule.
pub fn reduce_straight<S: Scalar>(n: usize, i: Vertex, j: Vertex) -> Result<ResistanceReport<S>> {
    reduce_straight_graph(straight_linear_2tree(n)?, i, j)
}

/// Run the Δ–Y schedule on a graph with the straight 2-tree edge pattern
/// (arbitrary positive weights).
///
/// With `a < b` and `n` vertices the schedule is: `a - 1` Δ–Y steps from the
/// left and `n - b - 1` from the right (each merged except the last), removal
/// of both tails by the cut-vertex rule, a series step on each side, `b - a - 1`
/// merged Δ–Y steps between the terminals (one fewer when `b = n`), a final
/// series and parallel step, and a run of series steps along the tail chain.
pub fn reduce_straight_graph<S: Scalar>(
    g: WeightedGraph<S>,
    i: Vertex,
    j: Vertex,
) -> Result<ResistanceReport<S>> {
    if !is_straight_pattern(&g) {
        return Err(Error::Reduction(
            "input is not a straight linear 2-tree".into(),
        ));
    }
    let n = g.vertex_count();
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(Error::VertexRange {
                vertex: v,
                count: n,
            });
        }
    }
    let (a, b) = (i.min(j), i.max(j));
    let mut r = Reducer {
        trace: ReductionTrace::new(g.clone()),
        g,
    };
    if a == b {
        return Ok(ResistanceReport {
            pair: (i, j),
            value: S::zero(),
            method: Method::DeltaY,
            trace: Some(r.trace),
        });
    }
    let k = b - a;

    // Left side: triangles (1,2,3) .. (a-1,a,a+1).
    if let Some(star) = r.sweep(1, 1, a - 1)? {
        r.cut(star, a - 1)?;
        r.series(star)?;
    }
    // Right side, mirrored: triangles (n-2,n-1,n) .. (b,b+1,b+2).
    if b + 1 < n {
        let count = n - b - 1;
        if let Some(star) = r.sweep(n, -1, count)? {
            r.cut(star, n + 1 - count)?;
            r.series(star)?;
        }
    }

    let end = if b == n {
        if k == 1 {
            // The left sweep consumed every triangle.
            None
        } else {
            r.merged_sweep(a, k - 2)?;
            let c = b - 2;
            r.series(b - 1)?;
            r.parallel(c, b)?;
            Some(c)
        }
    } else {
        r.merged_sweep(a, k - 1)?;
        let c = b - 1;
        r.series(b + 1)?;
        r.parallel(c, b)?;
        Some(c)
    };
    if let Some(c) = end {
        for v in a + 1..=c {
            r.series(v)?;
        }
    }

    let value = match r.g.edges() {
        [e] if e.joins(a, b) => e.resistance.clone(),
        other => {
            return Err(Error::Reduction(format!(
                "schedule left {} edge(s) instead of a single {a}-{b} edge",
                other.len()
            )))
        }
    };
    Ok(ResistanceReport {
        pair: (i, j),
        value,
        method: Method::DeltaY,
        trace: Some(r.trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path, straight_linear_2tree};
    use crate::{ratio, Rational};

    type G = WeightedGraph<Rational>;

    fn triangle(ra: Rational, rb: Rational, rc: Rational) -> G {
        // R_A joins 2-3, R_B joins 1-3, R_C joins 1-2
        let mut g = G::new(3).unwrap();
        g.add_edge(2, 3, ra).unwrap();
        g.add_edge(1, 3, rb).unwrap();
        g.add_edge(1, 2, rc).unwrap();
        g
    }

    #[test]
    fn delta_y_unit_triangle() {
        let mut g = triangle(ratio(1, 1), ratio(1, 1), ratio(1, 1));
        let (star, step) = delta_y_step(&mut g, (1, 2, 3)).unwrap();
        assert_eq!(star, 4);
        assert_eq!(step.produced, vec![ratio(1, 3); 3]);
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().iter().all(|e| e.touches(star)));
    }

    #[test]
    fn delta_y_scaled_and_asymmetric() {
        let c = ratio(7, 2);
        let mut g = triangle(c.clone(), c.clone(), c.clone());
        let (_, step) = delta_y_step(&mut g, (1, 2, 3)).unwrap();
        assert_eq!(step.produced, vec![ratio(7, 6); 3]);

        let mut g = triangle(ratio(1, 1), ratio(2, 1), ratio(3, 1));
        let (star, step) = delta_y_step(&mut g, (1, 2, 3)).unwrap();
        assert_eq!(step.produced, vec![ratio(1, 1), ratio(1, 2), ratio(1, 3)]);
        let arm = |v| {
            g.edges()
                .iter()
                .find(|e| e.joins(v, star))
                .unwrap()
                .resistance
                .clone()
        };
        assert_eq!(arm(1), ratio(1, 1));
        assert_eq!(arm(2), ratio(1, 2));
        assert_eq!(arm(3), ratio(1, 3));
    }

    #[test]
    fn delta_y_needs_the_triangle() {
        let mut g: G = path(3).unwrap();
        assert!(delta_y_step(&mut g, (1, 2, 3)).is_err());
        let mut g = triangle(ratio(1, 1), ratio(1, 1), ratio(1, 1));
        g.add_edge(1, 2, ratio(1, 1)).unwrap();
        assert!(delta_y_step(&mut g, (1, 2, 3)).is_err());
    }

    #[test]
    fn series_and_parallel() {
        let mut g: G = path(3).unwrap();
        let s = series_step(&mut g, 2).unwrap();
        assert_eq!(s.produced, vec![ratio(2, 1)]);
        assert!(series_step(&mut g, 2).is_err());

        let mut g = G::new(2).unwrap();
        g.add_edge(1, 2, ratio(1, 1)).unwrap();
        g.add_edge(1, 2, ratio(2, 1)).unwrap();
        let p = parallel_step(&mut g, 1, 2).unwrap();
        assert_eq!(p.produced, vec![ratio(2, 3)]);
        assert!(parallel_step(&mut g, 1, 2).is_err());

        let c = ratio(5, 3);
        let mut g = G::new(2).unwrap();
        g.add_edge(1, 2, c.clone()).unwrap();
        g.add_edge(1, 2, c).unwrap();
        assert_eq!(
            parallel_step(&mut g, 1, 2).unwrap().produced,
            vec![ratio(5, 6)]
        );
    }

    #[test]
    fn series_rejects_bad_middle() {
        let mut g: G = straight_linear_2tree(4).unwrap();
        assert!(series_step(&mut g, 2).is_err());
        let mut g = G::new(2).unwrap();
        g.add_edge(1, 2, ratio(1, 1)).unwrap();
        g.add_edge(1, 2, ratio(1, 1)).unwrap();
        assert!(series_step(&mut g, 2).is_err());
    }

    #[test]
    fn cut_vertex_and_rename_preconditions() {
        let mut g: G = path(4).unwrap();
        let s = cut_vertex_step(&mut g, 2, 1).unwrap();
        assert_eq!(s.vertices, vec![2, 1]);
        assert_eq!(g.edge_count(), 2);
        // vertex 4 is a leaf; 3 does not separate anything else from 4 once 4 is gone
        assert!(cut_vertex_step(&mut g, 4, 3).is_err());
        assert!(merge_rename_step(&mut g, 2, 3).is_err());
        let s = merge_rename_step(&mut g, 2, 1).unwrap();
        assert_eq!(s.vertices, vec![2, 1]);
        assert!(g.has_edge(1, 3));
    }

    #[test]
    fn small_schedules() {
        let v = |n, i, j| reduce_straight::<Rational>(n, i, j).unwrap().value;
        assert_eq!(v(3, 1, 3), ratio(2, 3));
        assert_eq!(v(3, 1, 2), ratio(2, 3));
        assert_eq!(v(3, 2, 3), ratio(2, 3));
        assert_eq!(v(4, 1, 4), ratio(1, 1));
        assert_eq!(v(4, 1, 2), ratio(5, 8));
        assert_eq!(v(4, 3, 4), ratio(5, 8));
        assert_eq!(v(6, 3, 4), ratio(5, 11));
        assert_eq!(v(5, 2, 2), ratio(0, 1));
        assert_eq!(v(4, 4, 1), ratio(1, 1));
    }

    #[test]
    fn schedule_rejects_malformed_input() {
        let g: G = path(5).unwrap();
        assert!(reduce_straight_graph(g, 1, 5).is_err());
        let mut g: G = straight_linear_2tree(5).unwrap();
        g.add_edge(1, 4, ratio(1, 1)).unwrap();
        assert!(reduce_straight_graph(g, 1, 5).is_err());
        assert!(reduce_straight::<Rational>(5, 0, 3).is_err());
        assert!(reduce_straight::<Rational>(5, 1, 6).is_err());
    }

    #[test]
    fn trace_replays_and_satisfies_star_relations() {
        for n in 3..12 {
            for i in 1..=n {
                for j in i + 1..=n {
                    let rep = reduce_straight::<Rational>(n, i, j).unwrap();
                    let trace = rep.trace.unwrap();
                    let end = trace.replay().unwrap();
                    assert_eq!(end.edge_count(), 1);
                    assert_eq!(end.edges()[0].resistance, rep.value);
                    for s in trace.delta_y_steps() {
                        let (ra, rb, rc) = (&s.consumed[0], &s.consumed[1], &s.consumed[2]);
                        let (r1, r2, r3) = (&s.produced[0], &s.produced[1], &s.produced[2]);
                        assert_eq!(r1.clone() * ra, r2.clone() * rb);
                        assert_eq!(r2.clone() * rb, r3.clone() * rc);
                    }
                }
            }
        }
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let rep = reduce_straight::<Rational>(6, 2, 5).unwrap();
        let mut trace = rep.trace.unwrap();
        let idx = trace
            .steps
            .iter()
            .position(|s| s.kind == StepKind::DeltaY)
            .unwrap();
        trace.steps[idx].produced[0] = ratio(9, 1);
        assert!(trace.replay().is_err());
    }

    #[test]
    fn schedule_runs_in_floating_point() {
        let r = reduce_straight::<f64>(10, 1, 10).unwrap().value;
        let exact = reduce_straight::<Rational>(10, 1, 10).unwrap().value;
        assert!((r - exact.to_f64()).abs() < 1e-12);
    }
}
