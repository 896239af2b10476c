//! Weighted undirected multigraphs, their Laplacians, and generators for the
//! linear 2-tree / k-tree / triangular grid families.
//!
//! Vertices are 1-based. Parallel edges are kept as separate entries so the
//! reduction engine can apply the parallel rule explicitly.

use std::collections::BTreeSet;

use crate::{Error, Result, Scalar};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<S> {
    pub u: Vertex,
    pub v: Vertex,
    pub resistance: S,
}

impl<S> Edge<S> {
    pub fn joins(&self, a: Vertex, b: Vertex) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            assert_eq!(self.v, x, "vertex {x} is not on edge {}-{}", self.u, self.v);
            self.u
        }
    }

    /// Endpoints with the smaller id first.
    pub fn key(&self) -> (Vertex, Vertex) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<S> {
    vertex_count: usize,
    edges: Vec<Edge<S>>,
}

impl<S: Scalar> WeightedGraph<S> {
    pub fn new(vertex_count: usize) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Domain("a graph needs at least one vertex".into()));
        }
        Ok(Self {
            vertex_count,
            edges: Vec::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.vertex_count
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v > self.vertex_count {
            return Err(Error::VertexRange {
                vertex: v,
                count: self.vertex_count,
            });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, resistance: S) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidEdge(format!("self-loop at {u}")));
        }
        if resistance <= S::zero() {
            return Err(Error::InvalidEdge(format!(
                "edge {u}-{v} has non-positive resistance {resistance:?}"
            )));
        }
        self.edges.push(Edge { u, v, resistance });
        Ok(())
    }

    pub fn add_unit_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.add_edge(u, v, S::one())
    }

    /// Append an isolated vertex and return its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.vertex_count += 1;
        self.vertex_count
    }

    pub(crate) fn remove_edge_at(&mut self, index: usize) -> Edge<S> {
        self.edges.remove(index)
    }

    pub(crate) fn edges_mut(&mut self) -> &mut Vec<Edge<S>> {
        &mut self.edges
    }

    /// Number of edge ends at `v` (parallel edges counted separately).
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Distinct neighbours of `v`, ascending.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.other(v))
            .collect()
    }

    pub fn edge_indices_between(&self, a: Vertex, b: Vertex) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.joins(a, b))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges.iter().any(|e| e.joins(a, b))
    }

    pub fn has_unit_weights(&self) -> bool {
        self.edges.iter().all(|e| e.resistance == S::one())
    }

    /// Vertices reachable from `start`.
    pub fn component_of(&self, start: Vertex) -> BTreeSet<Vertex> {
        let mut adj = vec![Vec::new(); self.vertex_count + 1];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            stack.extend(adj[x].iter().filter(|y| !seen.contains(y)));
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(1).len() == self.vertex_count
    }

    /// Number of 3-cliques in the underlying simple graph.
    pub fn triangle_count(&self) -> usize {
        let adj: Vec<BTreeSet<Vertex>> = (0..=self.vertex_count)
            .map(|v| {
                if v == 0 {
                    BTreeSet::new()
                } else {
                    self.neighbors(v)
                }
            })
            .collect();
        let mut count = 0;
        for a in 1..=self.vertex_count {
            for &b in adj[a].range(a + 1..) {
                count += adj[b].range(b + 1..).filter(|c| adj[a].contains(c)).count();
            }
        }
        count
    }

    /// Sorted list of distinct unordered vertex pairs that are not adjacent.
    pub fn non_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 1..=self.vertex_count {
            let nb = self.neighbors(u);
            for v in u + 1..=self.vertex_count {
                if !nb.contains(&v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn map_weights<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> WeightedGraph<T> {
        WeightedGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    u: e.u,
                    v: e.v,
                    resistance: f(&e.resistance),
                })
                .collect(),
        }
    }

    /// Copy with every edge's weight converted to `f64`.
    pub fn to_f64(&self) -> WeightedGraph<f64> {
        self.map_weights(|w| w.to_f64())
    }

    /// Edge list sorted by endpoint key, for order-insensitive comparisons.
    pub fn sorted_edges(&self) -> Vec<Edge<S>> {
        let mut e: Vec<Edge<S>> = self
            .edges
            .iter()
            .map(|e| {
                let (u, v) = e.key();
                Edge {
                    u,
                    v,
                    resistance: e.resistance.clone(),
                }
            })
            .collect();
        e.sort_by(|a, b| {
            a.key().cmp(&b.key()).then(
                a.resistance
                    .partial_cmp(&b.resistance)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
        });
        e
    }

    pub fn laplacian(&self) -> LaplacianMatrix<S> {
        laplacian(self)
    }
}

/// Dense symmetric Laplacian, 1-based accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix<S> {
    order: usize,
    entries: Vec<S>,
}

impl<S: Scalar> LaplacianMatrix<S> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: Vertex, j: Vertex) -> &S {
        &self.entries[(i - 1) * self.order + (j - 1)]
    }

    fn add(&mut self, i: Vertex, j: Vertex, value: S) {
        let slot = &mut self.entries[(i - 1) * self.order + (j - 1)];
        *slot = slot.clone() + value;
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.order).all(|i| (i + 1..=self.order).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn row_sum(&self, i: Vertex) -> S {
        (1..=self.order).fold(S::zero(), |acc, j| acc + self.get(i, j).clone())
    }

    /// Rows as owned vectors with the listed vertices deleted from both axes.
    pub fn minor_rows(&self, deleted: &[Vertex]) -> Vec<Vec<S>> {
        let keep: Vec<Vertex> = (1..=self.order).filter(|v| !deleted.contains(v)).collect();
        keep.iter()
            .map(|&i| keep.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect()
    }
}

/// Laplacian with conductance `1/r` per edge; parallel edges add.
pub fn laplacian<S: Scalar>(g: &WeightedGraph<S>) -> LaplacianMatrix<S> {
    let order = g.vertex_count();
    let mut lap = LaplacianMatrix {
        order,
        entries: vec![S::zero(); order * order],
    };
    for e in g.edges() {
        let w = S::one() / e.resistance.clone();
        lap.add(e.u, e.u, w.clone());
        lap.add(e.v, e.v, w.clone());
        lap.add(e.u, e.v, -w.clone());
        lap.add(e.v, e.u, -w);
    }
    lap
}

/// Path on `n` vertices.
pub fn path<S: Scalar>(n: usize) -> Result<WeightedGraph<S>> {
    straight_linear_ktree(n, 1)
}

/// Cycle on `n >= 3` vertices.
pub fn cycle<S: Scalar>(n: usize) -> Result<WeightedGraph<S>> {
    if n < 3 {
        return Err(Error::Domain(format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = path(n)?;
    g.add_unit_edge(n, 1)?;
    Ok(g)
}

/// Edges `{i, j}` with `0 < |i - j| <= 2`, unit resistances.
pub fn straight_linear_2tree<S: Scalar>(n: usize) -> Result<WeightedGraph<S>> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "straight linear 2-tree needs n >= 3, got {n}"
        )));
    }
    straight_linear_ktree(n, 2)
}

/// Edges `{i, j}` with `0 < |i - j| <= k`, unit resistances.
pub fn straight_linear_ktree<S: Scalar>(n: usize, k: usize) -> Result<WeightedGraph<S>> {
    if k == 0 {
        return Err(Error::Domain("k-tree needs k >= 1".into()));
    }
    if n <= k {
        return Err(Error::Domain(format!(
            "straight linear {k}-tree needs n >= {}, got {n}",
            k + 1
        )));
    }
    let mut g = WeightedGraph::new(n)?;
    for i in 1..=n {
        for j in i + 1..=(i + k).min(n) {
            g.add_unit_edge(i, j)?;
        }
    }
    Ok(g)
}

/// Linear 2-tree with a single bend at vertex `bend`, `3 <= bend <= n - 3`.
///
/// Starting from the straight 2-tree, the chord `{bend+1, bend+3}` is dropped
/// and `{bend, bend+3}` is added, so the fan of triangles pivots around
/// `bend` for one step.
pub fn bent_linear_2tree<S: Scalar>(n: usize, bend: usize) -> Result<WeightedGraph<S>> {
    if n < 6 || bend < 3 || bend > n - 3 {
        return Err(Error::Domain(format!(
            "bend position {bend} outside [3, n-3] for n = {n}"
        )));
    }
    let mut g = WeightedGraph::new(n)?;
    for i in 1..=n {
        for j in i + 1..=n {
            let adjacent = match j - i {
                1 => true,
                2 => i != bend + 1,
                3 => i == bend,
                _ => false,
            };
            if adjacent {
                g.add_unit_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone)]
pub struct TriangularGrid<S> {
    pub graph: WeightedGraph<S>,
    /// Number of vertex rows.
    pub rows: usize,
    /// Number of unit triangles, `(rows - 1)^2`.
    pub cells: usize,
    /// Top corner.
    pub apex: Vertex,
    /// Bottom-left corner.
    pub bottom_left: Vertex,
}

/// Id of the vertex in vertex-row `r` (1-based), position `c` in `1..=r`.
pub fn grid_vertex(r: usize, c: usize) -> Vertex {
    r * (r - 1) / 2 + c
}

/// Triangular grid with `rows` rows of vertices (row `r` holds `r` vertices).
pub fn triangular_grid<S: Scalar>(rows: usize) -> Result<TriangularGrid<S>> {
    if rows < 2 {
        return Err(Error::Domain(format!(
            "triangular grid needs rows >= 2, got {rows}"
        )));
    }
    let mut g = WeightedGraph::new(rows * (rows + 1) / 2)?;
    for r in 1..=rows {
        for c in 1..=r {
            let v = grid_vertex(r, c);
            if c < r {
                g.add_unit_edge(v, grid_vertex(r, c + 1))?;
            }
            if r < rows {
                g.add_unit_edge(v, grid_vertex(r + 1, c))?;
                g.add_unit_edge(v, grid_vertex(r + 1, c + 1))?;
            }
        }
    }
    Ok(TriangularGrid {
        graph: g,
        rows,
        cells: (rows - 1) * (rows - 1),
        apex: grid_vertex(1, 1),
        bottom_left: grid_vertex(rows, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ratio, Rational};

    type G = WeightedGraph<Rational>;

    fn keys(g: &G) -> Vec<(usize, usize)> {
        g.sorted_edges().iter().map(|e| e.key()).collect()
    }

    #[test]
    fn straight_small_cases() {
        let g: G = straight_linear_2tree(3).unwrap();
        assert_eq!(keys(&g), vec![(1, 2), (1, 3), (2, 3)]);

        let g: G = straight_linear_2tree(5).unwrap();
        assert_eq!(
            keys(&g),
            vec![(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)]
        );

        let g: G = straight_linear_2tree(9).unwrap();
        assert_eq!(g.edge_count(), 15);
        let deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        assert_eq!(deg, vec![2, 3, 4, 4, 4, 4, 4, 3, 2]);
    }

    #[test]
    fn generator_domain_errors() {
        assert!(straight_linear_2tree::<f64>(2).is_err());
        assert!(straight_linear_ktree::<f64>(3, 3).is_err());
        assert!(straight_linear_ktree::<f64>(3, 0).is_err());
        assert!(bent_linear_2tree::<f64>(7, 2).is_err());
        assert!(bent_linear_2tree::<f64>(7, 5).is_err());
        assert!(bent_linear_2tree::<f64>(5, 3).is_err());
        assert!(triangular_grid::<f64>(1).is_err());
    }

    #[test]
    fn bent_seven_three() {
        let g: G = bent_linear_2tree(7, 3).unwrap();
        assert!(g.has_edge(3, 6));
        assert!(!g.has_edge(4, 6));
        assert!(g.has_edge(3, 5));
        assert_eq!(g.edge_count(), 11);
        assert_eq!(g.triangle_count(), 5);
        let deg2: Vec<_> = g.vertices().filter(|&v| g.degree(v) == 2).collect();
        assert_eq!(deg2, vec![1, 7]);
        // k = n - 3 boundary
        assert!(bent_linear_2tree::<Rational>(6, 3).is_ok());
    }

    #[test]
    fn ktree_cases() {
        let p: G = straight_linear_ktree(5, 1).unwrap();
        assert_eq!(keys(&p), vec![(1, 2), (2, 3), (3, 4), (4, 5)]);
        let a: G = straight_linear_ktree(6, 2).unwrap();
        let b: G = straight_linear_2tree(6).unwrap();
        assert_eq!(a, b);
        let c: G = straight_linear_ktree(5, 3).unwrap();
        assert_eq!(c.edge_count(), 9);
    }

    #[test]
    fn grid_cases() {
        let t = triangular_grid::<Rational>(2).unwrap();
        assert_eq!(t.graph.vertex_count(), 3);
        assert!(t.graph.has_edge(t.apex, t.bottom_left));
        let t = triangular_grid::<Rational>(3).unwrap();
        assert_eq!((t.graph.vertex_count(), t.graph.edge_count()), (6, 9));
        let t = triangular_grid::<Rational>(5).unwrap();
        assert_eq!(t.graph.vertex_count(), 15);
        assert_eq!(t.cells, 16);
        assert_eq!(t.graph.degree(t.apex), 2);
        assert_eq!(t.graph.degree(t.bottom_left), 2);
        assert_eq!(t.graph.triangle_count(), t.cells);
    }

    #[test]
    fn laplacian_entries() {
        let g: G = straight_linear_2tree(3).unwrap();
        let l = g.laplacian();
        for i in 1..=3 {
            assert_eq!(*l.get(i, i), ratio(2, 1));
            for j in 1..=3 {
                if i != j {
                    assert_eq!(*l.get(i, j), ratio(-1, 1));
                }
            }
        }

        let mut h = G::new(2).unwrap();
        h.add_edge(1, 2, ratio(1, 2)).unwrap();
        let l = h.laplacian();
        assert_eq!(*l.get(1, 1), ratio(2, 1));
        assert_eq!(*l.get(1, 2), ratio(-2, 1));

        // parallel edges add conductance
        h.add_edge(1, 2, ratio(1, 1)).unwrap();
        assert_eq!(*h.laplacian().get(2, 2), ratio(3, 1));

        let g: G = straight_linear_2tree(5).unwrap();
        let l = g.laplacian();
        assert!(l.is_symmetric());
        assert!((1..=5).all(|i| l.row_sum(i) == ratio(0, 1)));
    }

    #[test]
    fn edge_validation() {
        let mut g = G::new(3).unwrap();
        assert!(g.add_edge(1, 1, ratio(1, 1)).is_err());
        assert!(g.add_edge(1, 4, ratio(1, 1)).is_err());
        assert!(g.add_edge(0, 2, ratio(1, 1)).is_err());
        assert!(g.add_edge(1, 2, ratio(0, 1)).is_err());
        assert!(g.add_edge(1, 2, ratio(-1, 3)).is_err());
        assert!(G::new(0).is_err());
    }

    #[test]
    fn generators_are_connected_2trees() {
        // the lone triangle has three degree-2 vertices
        let tri: G = straight_linear_2tree(3).unwrap();
        assert_eq!(tri.vertices().filter(|&v| tri.degree(v) == 2).count(), 3);
        for n in 4..20 {
            let g: G = straight_linear_2tree(n).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.triangle_count(), n - 2);
            assert_eq!(g.vertices().filter(|&v| g.degree(v) == 2).count(), 2);
        }
        for n in 6..16 {
            for k in 3..=n - 3 {
                let g: G = bent_linear_2tree(n, k).unwrap();
                assert!(g.is_connected());
                assert_eq!(g.edge_count(), 2 * n - 3);
                assert_eq!(g.triangle_count(), n - 2);
                assert_eq!(g.vertices().filter(|&v| g.degree(v) == 2).count(), 2);
            }
        }
    }
}
