//! Determinant oracle: `r(i, j) = det L[-i,-j] / det L[-i]`, evaluated on the
//! denominator-cleared integer Laplacian with Bareiss elimination.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{Method, ResistanceReport};
use crate::graph::{Vertex, WeightedGraph};
use crate::{BigInt, Error, Rational, Result};

/// Integer ring in which Bareiss elimination runs. The `i128` instance
/// reports overflow so callers can retry in `BigInt`.
trait BareissRing: Clone + Sized {
    fn is_nil(&self) -> bool;
    /// `(a*p - b*c) / d`, exact by construction.
    fn step(a: &Self, p: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn unit() -> Self;
    fn nil() -> Self;
}

impl BareissRing for i128 {
    fn is_nil(&self) -> bool {
        *self == 0
    }

    fn step(a: &Self, p: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        let lhs = a.checked_mul(*p)?;
        let rhs = b.checked_mul(*c)?;
        lhs.checked_sub(rhs)?.checked_div(*d)
    }

    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }

    fn unit() -> Self {
        1
    }

    fn nil() -> Self {
        0
    }
}

impl BareissRing for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }

    fn step(a: &Self, p: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some((a * p - b * c) / d)
    }

    fn neg(&self) -> Option<Self> {
        Some(-self)
    }

    fn unit() -> Self {
        One::one()
    }

    fn nil() -> Self {
        Zero::zero()
    }
}

fn bareiss<T: BareissRing>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::unit());
    }
    let mut negate = false;
    let mut prev = T::unit();
    for k in 0..n - 1 {
        if m[k][k].is_nil() {
            match (k + 1..n).find(|&r| !m[r][k].is_nil()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Some(T::nil()),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let p = &pivot_row[k];
        for row in tail.iter_mut() {
            let b = row[k].clone();
            for j in k + 1..n {
                row[j] = T::step(&row[j], p, &b, &pivot_row[j], &prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        Some(det)
    }
}

/// Determinant of a square integer matrix by fraction-free elimination.
/// Runs in checked `i128` when every entry fits and falls back to `BigInt`
/// on overflow.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(det) = small.and_then(bareiss) {
        return BigInt::from(det);
    }
    bareiss(rows.to_vec()).expect("BigInt elimination cannot overflow")
}

/// Integer matrix `D * L` with `D` the lcm of all Laplacian denominators.
fn cleared_laplacian(g: &WeightedGraph<Rational>) -> (BigInt, Vec<Vec<BigInt>>) {
    let lap = g.laplacian();
    let n = lap.order();
    let mut d = BigInt::one();
    for i in 1..=n {
        for j in 1..=n {
            d = d.lcm(lap.get(i, j).denom());
        }
    }
    let rows = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let x = lap.get(i, j);
                    x.numer() * (&d / x.denom())
                })
                .collect()
        })
        .collect();
    (d, rows)
}

fn minor(rows: &[Vec<BigInt>], deleted: &[Vertex]) -> Vec<Vec<BigInt>> {
    let keep = |idx: &usize| !deleted.contains(&(idx + 1));
    rows.iter()
        .enumerate()
        .filter(|(i, _)| keep(i))
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| keep(j))
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

fn check_vertex(g: &WeightedGraph<Rational>, v: Vertex) -> Result<()> {
    if v == 0 || v > g.vertex_count() {
        return Err(Error::VertexRange {
            vertex: v,
            count: g.vertex_count(),
        });
    }
    Ok(())
}

/// Exact effective resistance from the ratio of two Laplacian minors.
pub fn resistance_det(
    g: &WeightedGraph<Rational>,
    i: Vertex,
    j: Vertex,
) -> Result<ResistanceReport<Rational>> {
    check_vertex(g, i)?;
    check_vertex(g, j)?;
    let report = |value| ResistanceReport {
        pair: (i, j),
        value,
        method: Method::Determinant,
        trace: None,
    };
    if i == j {
        return Ok(report(Rational::zero()));
    }
    let (d, rows) = cleared_laplacian(g);
    let den = bareiss_det(&minor(&rows, &[i]));
    if den.is_zero() {
        return Err(Error::Disconnected);
    }
    let num = bareiss_det(&minor(&rows, &[i, j]));
    Ok(report(Rational::new(d * num, den)))
}

/// `r(i, j)` for every `j`, sharing the denominator minor. Entry `j - 1`
/// holds `r(i, j)`.
pub fn resistance_det_all(g: &WeightedGraph<Rational>, i: Vertex) -> Result<Vec<Rational>> {
    check_vertex(g, i)?;
    let (d, rows) = cleared_laplacian(g);
    let den = bareiss_det(&minor(&rows, &[i]));
    if den.is_zero() {
        return Err(Error::Disconnected);
    }
    Ok((1..=g.vertex_count())
        .into_par_iter()
        .map(|j| {
            if j == i {
                Rational::zero()
            } else {
                let num = bareiss_det(&minor(&rows, &[i, j]));
                Rational::new(&d * num, den.clone())
            }
        })
        .collect())
}

/// Number of spanning trees (Matrix-Tree theorem). Edges must all have unit
/// resistance; parallel edges count as distinct.
pub fn spanning_tree_count(g: &WeightedGraph<Rational>) -> Result<BigInt> {
    if !g.has_unit_weights() {
        return Err(Error::NonUnitWeights);
    }
    let (_, rows) = cleared_laplacian(g);
    Ok(bareiss_det(&minor(&rows, &[1])).abs())
}

/// Spanning 2-forests separating `i` from `j`, as `r(i, j) * tau(G)`.
pub fn two_forest_count(g: &WeightedGraph<Rational>, i: Vertex, j: Vertex) -> Result<BigInt> {
    let tau = spanning_tree_count(g)?;
    let r = resistance_det(g, i, j)?.value;
    let product = r * Rational::from_integer(tau);
    if !product.is_integer() {
        return Err(Error::Arithmetic(format!(
            "2-forest count {product} for ({i}, {j}) is not an integer"
        )));
    }
    Ok(product.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path, straight_linear_2tree};
    use crate::ratio;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(bareiss_det(&[]), BigInt::from(1));
        assert_eq!(bareiss_det(&big(&[&[7]])), BigInt::from(7));
        assert_eq!(bareiss_det(&big(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        // zero leading pivot forces a swap
        assert_eq!(bareiss_det(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            bareiss_det(&big(&[&[0, 2, 1], &[3, 0, 4], &[5, 6, 0]])),
            BigInt::from(58)
        );
        assert_eq!(bareiss_det(&big(&[&[1, 2], &[2, 4]])), BigInt::from(0));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = BigInt::from(10).pow(30);
        let m = vec![
            vec![huge.clone(), BigInt::from(1)],
            vec![BigInt::from(1), huge.clone()],
        ];
        assert_eq!(bareiss_det(&m), &huge * &huge - 1);
    }

    #[test]
    fn oracle_examples() {
        let tri = straight_linear_2tree::<Rational>(3).unwrap();
        assert_eq!(resistance_det(&tri, 1, 3).unwrap().value, ratio(2, 3));
        let p = path::<Rational>(4).unwrap();
        assert_eq!(resistance_det(&p, 1, 4).unwrap().value, ratio(3, 1));
        let g = straight_linear_2tree::<Rational>(6).unwrap();
        assert_eq!(resistance_det(&g, 3, 4).unwrap().value, ratio(5, 11));
        assert_eq!(resistance_det(&g, 4, 4).unwrap().value, ratio(0, 1));
        let all = resistance_det_all(&g, 3).unwrap();
        assert_eq!(all[3], ratio(5, 11));
        assert_eq!(all[2], ratio(0, 1));
    }

    #[test]
    fn weighted_edges_are_conductances() {
        let mut g = WeightedGraph::<Rational>::new(2).unwrap();
        g.add_edge(1, 2, ratio(1, 2)).unwrap();
        g.add_edge(1, 2, ratio(3, 2)).unwrap();
        assert_eq!(resistance_det(&g, 1, 2).unwrap().value, ratio(3, 8));
    }

    #[test]
    fn errors() {
        let mut g = WeightedGraph::<Rational>::new(4).unwrap();
        g.add_unit_edge(1, 2).unwrap();
        g.add_unit_edge(3, 4).unwrap();
        assert!(matches!(resistance_det(&g, 1, 3), Err(Error::Disconnected)));
        assert!(matches!(
            resistance_det(&g, 1, 5),
            Err(Error::VertexRange { .. })
        ));
        let mut w = path::<Rational>(3).unwrap();
        w.add_edge(1, 3, ratio(2, 1)).unwrap();
        assert!(matches!(
            spanning_tree_count(&w),
            Err(Error::NonUnitWeights)
        ));
    }

    #[test]
    fn counts() {
        let tri = straight_linear_2tree::<Rational>(3).unwrap();
        assert_eq!(spanning_tree_count(&tri).unwrap(), BigInt::from(3));
        let g = straight_linear_2tree::<Rational>(6).unwrap();
        assert_eq!(spanning_tree_count(&g).unwrap(), BigInt::from(55));
        assert_eq!(
            spanning_tree_count(&path::<Rational>(7).unwrap()).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            spanning_tree_count(&cycle::<Rational>(4).unwrap()).unwrap(),
            BigInt::from(4)
        );
        assert_eq!(two_forest_count(&tri, 1, 2).unwrap(), BigInt::from(2));
        let g4 = straight_linear_2tree::<Rational>(4).unwrap();
        assert_eq!(two_forest_count(&g4, 1, 2).unwrap(), BigInt::from(5));
        assert_eq!(two_forest_count(&g4, 1, 4).unwrap(), BigInt::from(8));
    }
}
