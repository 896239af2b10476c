//! Registry of the Fibonacci/Lucas identities the resistance formulas rest on,
//! each checked with exact arithmetic over an index range.
//!
//! Every identity has a *primary* index swept over the requested interval; the
//! remaining indices (if any) are enumerated over a domain derived from it,
//! documented on each entry.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::fibonacci::{fib_raw as f, lucas_raw as l};
use crate::{Error, Rational, Result};

/// Largest `|index|` accepted for a primary range. Derived indices stay
/// within a small multiple of this.
pub const MAX_PRIMARY_INDEX: i64 = 5_000;

type Tuples = fn(i64) -> Vec<Vec<i64>>;
type Holds = fn(&[i64]) -> bool;

pub struct Identity {
    pub id: &'static str,
    pub statement: &'static str,
    /// Domain of the secondary indices, in words.
    pub domain: &'static str,
    pub default_range: (i64, i64),
    tuples: Tuples,
    holds: Holds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub statement: String,
    pub range: (i64, i64),
    pub instances: usize,
    pub violations: Vec<Vec<i64>>,
    pub passed: bool,
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn q(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

fn single(n: i64) -> Vec<Vec<i64>> {
    vec![vec![n]]
}

fn with_symmetric_partner(n: i64) -> Vec<Vec<i64>> {
    let a = n.abs();
    (-a..=a).map(|m| vec![n, m]).collect()
}

fn catalan_tuples(n: i64) -> Vec<Vec<i64>> {
    (1..n).map(|r| vec![n, r]).collect()
}

fn s_plus_b_tuples(i: i64) -> Vec<Vec<i64>> {
    (0..=i).map(|p| vec![i, p]).collect()
}

fn level_gap_tuples(m: i64) -> Vec<Vec<i64>> {
    (1..=m).map(|k| vec![m, k]).collect()
}

/// `1 <= j`, `1 <= k`, `j + k <= m + 2`.
fn appendix_triples(m: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for j in 1..=m + 1 {
        for k in 1..=(m + 2 - j) {
            out.push(vec![m, j, k]);
        }
    }
    out
}

fn neg_index(t: &[i64]) -> bool {
    let n = t[0];
    f(-n) == sign(n + 1) * f(n)
}

fn sum_squares(t: &[i64]) -> bool {
    let n = t[0];
    f(n) * f(n) + f(n + 1) * f(n + 1) == f(2 * n + 1)
}

fn double_index(t: &[i64]) -> bool {
    let m = t[0];
    f(2 * m) == l(m) * f(m)
}

fn split_sum(t: &[i64]) -> bool {
    let (m, k) = (t[0], t[1]);
    f(k + m) == f(k + 1) * f(m) + f(k) * f(m - 1)
}

fn split_sum_double(t: &[i64]) -> bool {
    let m = t[0];
    f(2 * m) == f(m + 1) * f(m) + f(m) * f(m - 1)
}

fn split_diff(t: &[i64]) -> bool {
    let (n, m) = (t[0], t[1]);
    f(n + m) == f(n + 1) * f(m + 1) - f(n - 1) * f(m - 1)
}

fn catalan(t: &[i64]) -> bool {
    let (n, r) = (t[0], t[1]);
    f(n) * f(n) - f(n + r) * f(n - r) == sign(n - r) * f(r) * f(r)
}

fn docagne(t: &[i64]) -> bool {
    let (n, m) = (t[0], t[1]);
    f(n) * f(m + 1) - f(m) * f(n + 1) == sign(m) * f(n - m)
}

fn twice_next(t: &[i64]) -> bool {
    let m = t[0];
    f(m + 1) * 2 == f(m) + l(m)
}

fn lucas_neighbors(t: &[i64]) -> bool {
    let m = t[0];
    f(m + 1) + f(m - 1) == l(m)
}

fn lucas_next(t: &[i64]) -> bool {
    let m = t[0];
    l(m + 1) == f(m) * 2 + f(m + 1)
}

fn five_diff(t: &[i64]) -> bool {
    let n = t[0];
    f(n) * f(n) * 5 - l(n) * l(n) == sign(n + 1) * 4
}

fn lucas_fifth(t: &[i64]) -> bool {
    let m = t[0];
    f(m) * 5 == l(m - 1) + l(m + 1)
}

fn even_sum(t: &[i64]) -> bool {
    let n = t[0];
    let mut rhs = f(2 * n) * 2 + BigInt::one();
    for i in 1..n {
        rhs += f(2 * i);
    }
    f(2 * n + 2) == rhs
}

fn s_plus_b(t: &[i64]) -> bool {
    let (i, p) = (t[0], t[1]);
    let s = q(f(i) * f(i + 2 * p), f(2 * i + 2 * p + 2));
    let b = q(f(i + 1) * f(i + 2 * p + 1), f(2 * i + 2 * p + 2));
    s + b == q(f(2 * i + 2 * p + 1), f(2 * i + 2 * p + 2))
}

fn level_gap(t: &[i64]) -> bool {
    let (m, k) = (t[0], t[1]);
    let bracket = f(m - k - 1) * (l(k + 1) * (k + 1) - f(k + 1))
        + f(m - k) * (f(k + 2) * (k - 4) + f(k + 1) * (2 * k + 4))
        - f(m - k) * (l(k) * k - f(k))
        - f(m - k + 1) * (f(k + 1) * (k - 5) + f(k) * (2 * k + 2));
    f(m + 1) * bracket == f(m + 1) * (f(m - k + 1) * f(k + 1) - f(k) * f(m - k)) * 5
}

fn sum_partial_tails(t: &[i64]) -> bool {
    let m = t[0];
    let mut lhs = Rational::zero();
    for i in 1..=m {
        lhs += q(f(i) * f(i + 1), l(i) * l(i + 1));
    }
    lhs == q(l(m + 1) * (m + 1) - f(m + 1), l(m + 1) * 5)
}

fn endpoint_closed(t: &[i64]) -> bool {
    let m = t[0];
    let lhs = q(f(m + 1) * f(m + 1) * 2, l(m) * l(m + 1)) + q(l(m) * m - f(m), l(m) * 5);
    let rhs = q(BigInt::from(m + 1), BigInt::from(5)) + q(f(m + 1) * 4, l(m + 1) * 5);
    lhs == rhs
}

fn simplify_a(t: &[i64]) -> bool {
    let (m, j, k) = (t[0], t[1], t[2]);
    let x = m - 2 * j - k;
    f(k + 1) * f(x + 2) * f(x + 2) + f(m + 1) * f(m - k + 1)
        == f(2 * m - 2 * j - 2 * k + 3) * f(2 * j + k - 1) + f(k) * f(x + 2) * f(x + 3)
}

fn simplify_b(t: &[i64]) -> bool {
    let (m, j, k) = (t[0], t[1], t[2]);
    let x = m - 2 * j - k;
    f(k) * f(x + 3) * f(x + 3) + f(m + 1) * f(m - k)
        == f(2 * j + k - 2) * f(2 * m - 2 * j - 2 * k + 3) + f(k + 1) * f(x + 3) * f(x + 2)
}

static REGISTRY: &[Identity] = &[
    Identity {
        id: "neg-index",
        statement: "F(-n) = (-1)^(n+1) F(n)",
        domain: "n",
        default_range: (-500, 500),
        tuples: single,
        holds: neg_index,
    },
    Identity {
        id: "sum-squares",
        statement: "F(n)^2 + F(n+1)^2 = F(2n+1)",
        domain: "n",
        default_range: (-300, 300),
        tuples: single,
        holds: sum_squares,
    },
    Identity {
        id: "double-index",
        statement: "F(2m) = L(m) F(m)",
        domain: "m",
        default_range: (-300, 300),
        tuples: single,
        holds: double_index,
    },
    Identity {
        id: "split-sum",
        statement: "F(k+m) = F(k+1) F(m) + F(k) F(m-1)",
        domain: "m in range, k in [-|m|, |m|]",
        default_range: (-40, 40),
        tuples: with_symmetric_partner,
        holds: split_sum,
    },
    Identity {
        id: "split-sum-double",
        statement: "F(2m) = F(m+1) F(m) + F(m) F(m-1)",
        domain: "m",
        default_range: (-300, 300),
        tuples: single,
        holds: split_sum_double,
    },
    Identity {
        id: "split-diff",
        statement: "F(n+m) = F(n+1) F(m+1) - F(n-1) F(m-1)",
        domain: "n in range, m in [-|n|, |n|]",
        default_range: (-40, 40),
        tuples: with_symmetric_partner,
        holds: split_diff,
    },
    Identity {
        id: "catalan",
        statement: "F(n)^2 - F(n+r) F(n-r) = (-1)^(n-r) F(r)^2",
        domain: "n in range, r in [1, n-1]",
        default_range: (2, 50),
        tuples: catalan_tuples,
        holds: catalan,
    },
    Identity {
        id: "docagne",
        statement: "F(n) F(m+1) - F(m) F(n+1) = (-1)^m F(n-m)",
        domain: "n in range, m in [-|n|, |n|]",
        default_range: (-40, 40),
        tuples: with_symmetric_partner,
        holds: docagne,
    },
    Identity {
        id: "twice-next",
        statement: "2 F(m+1) = F(m) + L(m)",
        domain: "m",
        default_range: (-300, 300),
        tuples: single,
        holds: twice_next,
    },
    Identity {
        id: "lucas-neighbors",
        statement: "F(m+1) + F(m-1) = L(m)",
        domain: "m",
        default_range: (-300, 300),
        tuples: single,
        holds: lucas_neighbors,
    },
    Identity {
        id: "lucas-next",
        statement: "L(m+1) = 2 F(m) + F(m+1)",
        domain: "m",
        default_range: (-300, 300),
        tuples: single,
        holds: lucas_next,
    },
    Identity {
        id: "five-diff",
        statement: "5 F(n)^2 - L(n)^2 = 4 (-1)^(n+1)",
        domain: "n",
        default_range: (0, 100),
        tuples: single,
        holds: five_diff,
    },
    Identity {
        id: "lucas-fifth",
        statement: "F(m) = (L(m-1) + L(m+1)) / 5",
        domain: "m",
        default_range: (-300, 300),
        tuples: single,
        holds: lucas_fifth,
    },
    Identity {
        id: "even-sum",
        statement: "F(2n+2) = 2 F(2n) + F(2n-2) + ... + F(2) + 1",
        domain: "n >= 1",
        default_range: (1, 150),
        tuples: single,
        holds: even_sum,
    },
    Identity {
        id: "s-plus-b",
        statement: "s(i,p) + b(i,p) = F(2i+2p+1) / F(2i+2p+2)",
        domain: "i in range, p in [0, i]",
        default_range: (1, 60),
        tuples: s_plus_b_tuples,
        holds: s_plus_b,
    },
    Identity {
        id: "level-gap",
        statement: "F(m+1)/5 [F(m-k-1)((k+1)L(k+1) - F(k+1)) + F(m-k)((k-4)F(k+2) + (2k+4)F(k+1)) \
                    - F(m-k)(kL(k) - F(k)) - F(m-k+1)((k-5)F(k+1) + (2k+2)F(k))] \
                    = F(m+1)(F(m-k+1)F(k+1) - F(k)F(m-k))",
        domain: "m in range, k in [1, m]",
        default_range: (1, 60),
        tuples: level_gap_tuples,
        holds: level_gap,
    },
    Identity {
        id: "sum-partial-tails",
        statement: "sum_{i=1}^{m} F(i)F(i+1)/(L(i)L(i+1)) = ((m+1) L(m+1) - F(m+1)) / (5 L(m+1))",
        domain: "m >= 1",
        default_range: (1, 60),
        tuples: single,
        holds: sum_partial_tails,
    },
    Identity {
        id: "endpoint-closed",
        statement:
            "2F(m+1)^2/(L(m)L(m+1)) + (m L(m) - F(m))/(5 L(m)) = (m+1)/5 + 4F(m+1)/(5L(m+1))",
        domain: "m >= 1",
        default_range: (1, 60),
        tuples: single,
        holds: endpoint_closed,
    },
    Identity {
        id: "simplify-a",
        statement: "F(k+1)F(m-2j-k+2)^2 + F(m+1)F(m-k+1) \
                    = F(2m-2j-2k+3)F(2j+k-1) + F(k)F(m-2j-k+2)F(m-2j-k+3)",
        domain: "m in range, 1 <= j, 1 <= k, j + k <= m + 2",
        default_range: (1, 40),
        tuples: appendix_triples,
        holds: simplify_a,
    },
    Identity {
        id: "simplify-b",
        statement: "F(k)F(m-2j-k+3)^2 + F(m+1)F(m-k) \
                    = F(2j+k-2)F(2m-2j-2k+3) + F(k+1)F(m-2j-k+3)F(m-2j-k+2)",
        domain: "m in range, 1 <= j, 1 <= k, j + k <= m + 2",
        default_range: (1, 40),
        tuples: appendix_triples,
        holds: simplify_b,
    },
];

pub fn registry() -> &'static [Identity] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static Identity> {
    REGISTRY
        .iter()
        .find(|i| i.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Evaluate identity `id` at every index tuple generated from `lo..=hi`.
pub fn check_identity(id: &str, lo: i64, hi: i64) -> Result<IdentityReport> {
    let identity = lookup(id)?;
    if lo > hi {
        return Err(Error::EmptyRange(id.to_string()));
    }
    if lo.abs() > MAX_PRIMARY_INDEX || hi.abs() > MAX_PRIMARY_INDEX {
        return Err(Error::IndexBound {
            index: if lo.abs() > hi.abs() { lo } else { hi },
            bound: MAX_PRIMARY_INDEX,
        });
    }
    let mut instances = 0;
    let mut violations = Vec::new();
    for n in lo..=hi {
        for tuple in (identity.tuples)(n) {
            instances += 1;
            if !(identity.holds)(&tuple) {
                violations.push(tuple);
            }
        }
    }
    Ok(IdentityReport {
        identity: identity.id.to_string(),
        statement: identity.statement.to_string(),
        range: (lo, hi),
        instances,
        passed: violations.is_empty(),
        violations,
    })
}

/// Run every registered identity over its default range.
pub fn check_all() -> Vec<IdentityReport> {
    use rayon::prelude::*;
    REGISTRY
        .par_iter()
        .map(|i| {
            let (lo, hi) = i.default_range;
            check_identity(i.id, lo, hi).expect("default ranges are valid")
        })
        .collect()
}
