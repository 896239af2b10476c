//! Fibonacci/Lucas closed forms for resistances and forest counts on straight
//! linear 2-trees, plus the one-bend endpoint formula.
//!
//! Throughout, `m = n - 2` is the number of triangles, `j` the lower vertex
//! of a pair and `k` the offset, so the pair is `(j, j + k)`.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::fibonacci::{fib_raw, lucas_raw};
use crate::graph::Vertex;
use crate::{BigInt, Error, Rational, Result};

/// Largest triangle count accepted, keeping every index below the
/// Fibonacci bound.
pub const MAX_TRIANGLES: usize = 40_000;

fn f(i: i64) -> BigInt {
    fib_raw(i)
}

fn l(i: i64) -> BigInt {
    lucas_raw(i)
}

fn q(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StraightParams {
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub k: usize,
}

impl StraightParams {
    pub fn new(m: usize, j: usize, k: usize) -> Result<Self> {
        if m == 0 || m > MAX_TRIANGLES {
            return Err(Error::Domain(format!(
                "triangle count m={m} outside 1..={MAX_TRIANGLES}"
            )));
        }
        let n = m + 2;
        if j == 0 || k == 0 || j + k > n {
            return Err(Error::Domain(format!(
                "need 1 <= j < j+k <= n; got j={j}, k={k}, n={n}"
            )));
        }
        Ok(Self { n, m, j, k })
    }

    /// Parameters for the unordered pair `{a, b}` on `n` vertices.
    pub fn from_pair(n: usize, a: Vertex, b: Vertex) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("need n >= 3, got {n}")));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        Self::new(n - 2, lo, hi.wrapping_sub(lo))
    }

    fn ints(&self) -> (i64, i64, i64) {
        (self.m as i64, self.j as i64, self.k as i64)
    }
}

fn sum_numerator(p: &StraightParams) -> BigInt {
    let (m, j, k) = p.ints();
    (1..=k)
        .map(|i| {
            (f(i) * f(i + 2 * j - 2) - f(i - 1) * f(i + 2 * j - 3)) * f(2 * m - 2 * i - 2 * j + 5)
        })
        .sum()
}

fn closed_numerator(p: &StraightParams) -> Result<BigInt> {
    let (m, j, k) = p.ints();
    let a = f(m + 1) * f(m + 1);
    let b = {
        let x = f(k) * f(m - 2 * j - k + 3);
        &x * &x
    };
    let inner =
        f(m - k) * (l(k) * k - f(k)) + f(m - k + 1) * (f(k + 1) * (k - 5) + f(k) * (2 * k + 2));
    let (c, rem) = (f(m + 1) * inner).div_rem(&BigInt::from(5));
    if !rem.is_zero() {
        return Err(Error::Arithmetic(format!(
            "fifth-part of the closed form is not integral at {p:?}"
        )));
    }
    Ok(a + b + c)
}

/// Resistance `r(j, j+k)` from the summation form.
pub fn r_sum(p: &StraightParams) -> Rational {
    q(sum_numerator(p), f(2 * p.m as i64 + 2))
}

/// Resistance `r(j, j+k)` from the Fibonacci/Lucas closed form.
pub fn r_closed(p: &StraightParams) -> Result<Rational> {
    Ok(q(closed_numerator(p)?, f(2 * p.m as i64 + 2)))
}

/// Both forms of `r(1, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointForms {
    pub sum_form: Rational,
    pub closed_form: Rational,
}

pub fn r_endpoint_forms(m: usize) -> Result<EndpointForms> {
    if m == 0 || m > MAX_TRIANGLES {
        return Err(Error::Domain(format!(
            "triangle count m={m} outside 1..={MAX_TRIANGLES}"
        )));
    }
    let mi = m as i64;
    let mut sum_form = q(f(mi + 1) * f(mi + 1) * 2, l(mi + 1) * l(mi));
    for i in 1..mi {
        sum_form += q(f(i) * f(i + 1), l(i) * l(i + 1));
    }
    let closed_form = q(BigInt::from(mi + 1), BigInt::from(5)) + q(f(mi + 1) * 4, l(mi + 1) * 5);
    Ok(EndpointForms {
        sum_form,
        closed_form,
    })
}

/// `r(1, n)` with `n = m + 2`; errors if the two forms disagree.
pub fn r_endpoints(m: usize) -> Result<Rational> {
    let forms = r_endpoint_forms(m)?;
    if forms.sum_form != forms.closed_form {
        return Err(Error::Arithmetic(format!(
            "endpoint forms disagree at m={m}: {} vs {}",
            forms.sum_form, forms.closed_form
        )));
    }
    Ok(forms.closed_form)
}

/// Side, bottom and tail resistances after step `i` of a sweep that started
/// with `p` extra unit triangles folded into its first edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Sbt {
    pub s: Rational,
    pub b: Rational,
    pub t: Rational,
}

pub fn sbt(i: usize, p: usize) -> Result<Sbt> {
    if i == 0 || i > MAX_TRIANGLES || p > MAX_TRIANGLES {
        return Err(Error::Domain(format!("sbt needs 1 <= i, got i={i}, p={p}")));
    }
    let (i, p) = (i as i64, p as i64);
    let top = f(2 * i + 2 * p + 2);
    Ok(Sbt {
        s: q(f(i) * f(i + 2 * p), top.clone()),
        b: q(f(i + 1) * f(i + 2 * p + 1), top.clone()),
        t: q(
            f(i) * f(i + 1) * f(i + 2 * p) * f(i + 2 * p + 1),
            f(2 * i + 2 * p) * top,
        ),
    })
}

/// `r(j, j+k+1) - r(j, j+k)`.
pub fn r_diff(p: &StraightParams) -> Result<Rational> {
    if p.j + p.k + 1 > p.n {
        return Err(Error::Domain(format!(
            "difference needs j+k+1 <= n; got j={}, k={}, n={}",
            p.j, p.k, p.n
        )));
    }
    let (m, j, k) = p.ints();
    Ok(q(
        (f(k + 1) * f(2 * j + k - 1) - f(k) * f(2 * j + k - 2)) * f(2 * m - 2 * j - 2 * k + 3),
        f(2 * m + 2),
    ))
}

/// Spanning trees of the straight linear 2-tree with `m` triangles.
pub fn spanning_closed(m: usize) -> Result<BigInt> {
    if m == 0 || m > MAX_TRIANGLES {
        return Err(Error::Domain(format!(
            "triangle count m={m} outside 1..={MAX_TRIANGLES}"
        )));
    }
    Ok(f(2 * m as i64 + 2))
}

/// Spanning 2-forests separating `j` and `j+k`. Both printed forms are
/// evaluated and must agree.
pub fn forest_closed(p: &StraightParams) -> Result<BigInt> {
    let a = sum_numerator(p);
    let b = closed_numerator(p)?;
    if a != b {
        return Err(Error::Arithmetic(format!(
            "forest count forms disagree at {p:?}: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// `r(j, j+k)` for `j = 1..=n-k` at a fixed offset.
pub fn offset_profile(m: usize, k: usize) -> Result<Vec<Rational>> {
    (1..=(m + 2).saturating_sub(k))
        .map(|j| r_closed(&StraightParams::new(m, j, k)?))
        .collect()
}

/// Vertices `j` minimizing `r(j, j+k)`: one centre when `m - k` is odd, two
/// when it is even.
pub fn offset_minimizers(m: usize, k: usize) -> Result<Vec<usize>> {
    StraightParams::new(m, 1, k)?;
    let top = m + 3 - k;
    // m - k odd, written without underflow at k = m + 1
    Ok(if (m + 1 - k).is_multiple_of(2) {
        vec![top / 2]
    } else {
        vec![(top - 1) / 2, top.div_ceil(2)]
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinResistance {
    pub value: Rational,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Smallest resistance over all pairs, attained on the central edge(s).
pub fn min_resistance(n: usize) -> Result<MinResistance> {
    if !(4..=MAX_TRIANGLES + 2).contains(&n) {
        return Err(Error::Domain(format!("minimum needs n >= 4, got {n}")));
    }
    let ni = n as i64;
    let base = q(f(ni - 1), l(ni - 1));
    Ok(if n.is_multiple_of(2) {
        MinResistance {
            value: base,
            edges: vec![(n / 2, n / 2 + 1)],
        }
    } else {
        MinResistance {
            value: base + q(BigInt::one(), f(2 * ni - 2)),
            edges: vec![((n - 1) / 2, n.div_ceil(2)), (n.div_ceil(2), (n + 3) / 2)],
        }
    })
}

/// How the correction term of the bent endpoint formula combines with the
/// Lucas fraction before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BentReading {
    /// `(m+1)/5 + 4F/(5L) + S/F_{2m+2}`
    Additive,
    /// `(m+1)/5 + 4F/(5L) * S/F_{2m+2}`
    Multiplicative,
}

impl BentReading {
    pub const ALL: [BentReading; 2] = [BentReading::Additive, BentReading::Multiplicative];

    pub fn as_str(self) -> &'static str {
        match self {
            BentReading::Additive => "additive",
            BentReading::Multiplicative => "multiplicative",
        }
    }
}

/// Reading confirmed against the determinant oracle on every bent tree with
/// 5 to 15 triangles.
pub const RESOLVED_BENT_READING: BentReading = BentReading::Additive;

/// Numerator of the bent correction, `sum_{j=3}^{k} (-1)^j F_{m-2j+3}
/// (F_{m+2} + F_{j-2} F_{m-j+1})`. Empty (zero) for `k < 3`.
pub fn bent_correction_sum(m: usize, k: usize) -> BigInt {
    let mi = m as i64;
    (3..=k as i64)
        .map(|j| {
            let term = f(mi - 2 * j + 3) * (f(mi + 2) + f(j - 2) * f(mi - j + 1));
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

pub fn r_bent_reading(m: usize, bend: usize, reading: BentReading) -> Result<Rational> {
    let n = m + 2;
    if m > MAX_TRIANGLES || bend < 3 || bend + 3 > n {
        return Err(Error::Domain(format!(
            "bend position {bend} outside 3..=n-3 for n={n}"
        )));
    }
    let mi = m as i64;
    let head = q(BigInt::from(mi + 1), BigInt::from(5));
    let lucas_part = q(f(mi + 1) * 4, l(mi + 1) * 5);
    let correction = q(bent_correction_sum(m, bend), f(2 * mi + 2));
    Ok(match reading {
        BentReading::Additive => head + lucas_part + correction,
        BentReading::Multiplicative => head + lucas_part * correction,
    })
}

/// `r(1, n)` on the bent linear 2-tree with `m` triangles and bend at `bend`.
pub fn r_bent(m: usize, bend: usize) -> Result<Rational> {
    r_bent_reading(m, bend, RESOLVED_BENT_READING)
}

/// `r(j, j+1)` base case, `F_{2j-1} F_{2m-2j+3} / F_{2m+2}`.
pub fn r_adjacent(m: usize, j: usize) -> Result<Rational> {
    let p = StraightParams::new(m, j, 1)?;
    let (m, j, _) = p.ints();
    Ok(q(f(2 * j - 1) * f(2 * m - 2 * j + 3), f(2 * m + 2)))
}

/// Convert an exact value to `f64` without intermediate overflow.
pub fn to_f64(r: &Rational) -> f64 {
    crate::scalar::rational_to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use proptest::prelude::*;

    fn sp(m: usize, j: usize, k: usize) -> StraightParams {
        StraightParams::new(m, j, k).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(StraightParams::new(0, 1, 1).is_err());
        assert!(StraightParams::new(2, 0, 1).is_err());
        assert!(StraightParams::new(2, 1, 0).is_err());
        assert!(StraightParams::new(2, 2, 3).is_err());
        assert_eq!(StraightParams::from_pair(9, 7, 3).unwrap(), sp(7, 3, 4));
        assert!(StraightParams::from_pair(9, 3, 3).is_err());
    }

    #[test]
    fn sum_examples() {
        assert_eq!(r_sum(&sp(2, 1, 1)), ratio(5, 8));
        assert_eq!(r_sum(&sp(1, 1, 2)), ratio(2, 3));
        assert_eq!(r_sum(&sp(4, 3, 1)), ratio(5, 11));
    }

    #[test]
    fn closed_examples() {
        assert_eq!(r_closed(&sp(2, 1, 3)).unwrap(), ratio(1, 1));
        assert_eq!(r_closed(&sp(4, 3, 1)).unwrap(), ratio(5, 11));
    }

    #[test]
    fn adjacent_base_case() {
        for m in 1..20 {
            for j in 1..=m + 1 {
                assert_eq!(r_adjacent(m, j).unwrap(), r_sum(&sp(m, j, 1)));
            }
        }
    }

    #[test]
    fn endpoint_examples() {
        assert_eq!(r_endpoints(1).unwrap(), ratio(2, 3));
        assert_eq!(r_endpoints(2).unwrap(), ratio(1, 1));
        assert_eq!(r_endpoints(5).unwrap(), ratio(6, 5) + ratio(32, 90));
        assert!(r_endpoints(0).is_err());
        for m in 1..40 {
            assert_eq!(r_endpoints(m).unwrap(), r_sum(&sp(m, 1, m + 1)));
        }
    }

    #[test]
    fn sbt_examples() {
        let t = sbt(1, 0).unwrap();
        assert_eq!((t.s, t.b, t.t), (ratio(1, 3), ratio(1, 3), ratio(1, 3)));
        for p in 0..20 {
            let pi = p as i64;
            assert_eq!(sbt(1, p).unwrap().s, q(f(2 * pi + 1), f(2 * pi + 4)));
        }
        assert!(sbt(0, 1).is_err());
    }

    #[test]
    fn diff_examples() {
        for m in 1..15 {
            assert!(r_diff(&sp(m, 1, 1)).unwrap().is_zero());
        }
        assert_eq!(
            r_diff(&sp(4, 2, 1)).unwrap(),
            r_sum(&sp(4, 2, 2)) - r_sum(&sp(4, 2, 1))
        );
        assert!(r_diff(&sp(6, 2, 3)).unwrap() > Rational::zero());
        assert!(r_diff(&sp(4, 2, 4)).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(spanning_closed(1).unwrap(), BigInt::from(3));
        assert_eq!(spanning_closed(4).unwrap(), BigInt::from(55));
        assert_eq!(forest_closed(&sp(2, 1, 1)).unwrap(), BigInt::from(5));
    }

    #[test]
    fn minimum_examples() {
        let m6 = min_resistance(6).unwrap();
        assert_eq!(m6.value, ratio(5, 11));
        assert_eq!(m6.edges, vec![(3, 4)]);
        let m7 = min_resistance(7).unwrap();
        assert_eq!(m7.value, ratio(65, 144));
        assert_eq!(m7.edges, vec![(3, 4), (4, 5)]);
        let m50 = to_f64(&min_resistance(50).unwrap().value);
        assert!((m50 - 5f64.sqrt().recip()).abs() < 1e-8);
        assert!(min_resistance(3).is_err());
    }

    #[test]
    fn minimum_matches_brute_force() {
        for n in 4..30 {
            let mut best: Option<(Rational, Vec<(usize, usize)>)> = None;
            for a in 1..=n {
                for b in a + 1..=n {
                    let v = r_closed(&StraightParams::from_pair(n, a, b).unwrap()).unwrap();
                    match &mut best {
                        Some((bv, e)) if *bv == v => e.push((a, b)),
                        Some((bv, _)) if *bv < v => {}
                        _ => best = Some((v, vec![(a, b)])),
                    }
                }
            }
            let (v, e) = best.unwrap();
            let got = min_resistance(n).unwrap();
            assert_eq!(got.value, v, "n={n}");
            assert_eq!(got.edges, e, "n={n}");
        }
    }

    #[test]
    fn bent_empty_correction_is_straight() {
        for m in 1..30 {
            assert!(bent_correction_sum(m, 2).is_zero());
            let head = ratio(m as i64 + 1, 5) + q(f(m as i64 + 1) * 4, l(m as i64 + 1) * 5);
            assert_eq!(head, r_endpoints(m).unwrap());
        }
        assert!(r_bent(5, 2).is_err());
        assert!(r_bent(5, 5).is_err());
        assert!(r_bent(5, 4).is_ok());
    }

    #[test]
    fn minimizers_match_profile_argmin() {
        for m in 1..=20 {
            for k in 1..=m + 1 {
                let prof = offset_profile(m, k).unwrap();
                let best = prof.iter().min().unwrap();
                let arg: Vec<usize> = (0..prof.len())
                    .filter(|&i| &prof[i] == best)
                    .map(|i| i + 1)
                    .collect();
                assert_eq!(offset_minimizers(m, k).unwrap(), arg, "m={m} k={k}");
            }
        }
    }

    /// Valid `(m, j, k)` with `m < max_m`.
    fn triple(max_m: usize) -> impl Strategy<Value = (usize, usize, usize)> {
        (1..max_m)
            .prop_flat_map(|m| (Just(m), 1..=m + 1))
            .prop_flat_map(|(m, j)| (Just(m), Just(j), 1..=m + 2 - j))
    }

    proptest! {
        #[test]
        fn sum_equals_closed((m, j, k) in triple(30)) {
            let p = sp(m, j, k);
            prop_assert_eq!(r_sum(&p), r_closed(&p).unwrap());
        }

        #[test]
        fn s_plus_b(i in 1usize..60, p in 0usize..60) {
            let t = sbt(i, p).unwrap();
            let (i, p) = (i as i64, p as i64);
            prop_assert_eq!(t.s + t.b, q(f(2 * i + 2 * p + 1), f(2 * i + 2 * p + 2)));
        }

        #[test]
        fn reflection((m, j, k) in triple(40)) {
            let mirror = m + 2 - k - j + 1;
            prop_assert_eq!(r_sum(&sp(m, j, k)), r_sum(&sp(m, mirror, k)));
        }
    }
}
