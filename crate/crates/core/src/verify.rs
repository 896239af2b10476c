//! Self-contained verification suite: cross-method agreement, formula
//! identities, counting, ranking, ordering properties, the bent-tree reading
//! evidence, and conjecture-lab consistency.
//!
//! Every check is deterministic. Independent checks run concurrently and are
//! reported in a fixed order.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{
    forest_closed, min_resistance, offset_minimizers, offset_profile, r_bent_reading, r_closed,
    r_diff, r_endpoint_forms, r_endpoints, r_sum, sbt, spanning_closed, to_f64, BentReading,
    StraightParams, RESOLVED_BENT_READING,
};
use crate::conjecture::{ktree_increments, triangle_grid_growth, LabConfig, LabValue};
use crate::engine::{
    brute_force_tree_enumeration, brute_force_two_forest_enumeration, reduce_straight,
    resistance_det, resistance_det_all, spanning_tree_count, two_forest_count,
    DEFAULT_ENUMERATION_LIMIT,
};
use crate::fibonacci::fib;
use crate::graph::{bent_linear_2tree, straight_linear_2tree};
use crate::identities::{check_all, IdentityReport};
use crate::io::format_rational;
use crate::ranking::rank_nonedges;
use crate::{ratio, Rational, Result};

/// Leading and trailing groups of the `n = 9` ranking, in the serialization
/// used by [`crate::ranking::RankedNonEdges`]'s `Display`.
pub const N9_RANKING_HEAD: &str =
    "{3,6} & {4,7}, {2,5} & {5,8}, {1,4} & {6,9}, {3,7}, {2,6} & {4,8}, {1,5} & {5,9}";
pub const N9_RANKING_TAIL: &str = "{1,8} & {2,9}, {1,9}";

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BentEvidenceRow {
    pub m: usize,
    pub bend: usize,
    pub oracle: String,
    pub additive: String,
    pub multiplicative: String,
    pub additive_matches: bool,
    pub multiplicative_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub bent_reading: &'static str,
    pub bent_evidence: Vec<BentEvidenceRow>,
    pub identities: Vec<IdentityReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Largest `n` in the all-pairs cross-method sweep.
    pub max_n: usize,
    /// Largest triangle count in the ordering property sweep.
    pub max_m: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: 40,
            max_m: 30,
        }
    }
}

/// Collects failures while counting instances.
#[derive(Default)]
struct Tally {
    instances: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.failures.extend(other.failures);
        self
    }

    fn finish(self, name: &'static str) -> CheckResult {
        let shown: Vec<&str> = self
            .failures
            .iter()
            .map(String::as_str)
            .filter(|s| !s.is_empty())
            .collect();
        CheckResult {
            name,
            passed: self.failures.is_empty(),
            instances: self.instances,
            detail: if self.failures.is_empty() {
                "ok".into()
            } else {
                format!("{} failure(s): {}", self.failures.len(), shown.join("; "))
            },
        }
    }
}

fn from_result(name: &'static str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult {
        name,
        passed: false,
        instances: 0,
        detail: format!("error: {e}"),
    })
}

/// Δ–Y schedule, determinant oracle and both closed forms agree on every pair.
pub fn check_cross_method(max_n: usize) -> CheckResult {
    let run = || -> Result<CheckResult> {
        let tallies = (3..=max_n)
            .into_par_iter()
            .map(|n| -> Result<Tally> {
                let mut t = Tally::default();
                let g = straight_linear_2tree::<Rational>(n)?;
                for i in 1..=n {
                    let det_row = resistance_det_all(&g, i)?;
                    for j in i + 1..=n {
                        let dy = reduce_straight::<Rational>(n, i, j)?.value;
                        let p = StraightParams::from_pair(n, i, j)?;
                        let sum = r_sum(&p);
                        let closed = r_closed(&p)?;
                        let det = &det_row[j - 1];
                        t.check(dy == *det && dy == sum && dy == closed, || {
                            format!("n={n} ({i},{j}): dy={dy} det={det} sum={sum} closed={closed}")
                        });
                    }
                }
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(tallies
            .into_iter()
            .fold(Tally::default(), Tally::merge)
            .finish("cross-method"))
    };
    from_result("cross-method", run())
}

/// Per-step audit of traces: replay, star relations, and along the `(1, n)`
/// schedule the side sums and `(s, b, t)` values.
pub fn check_traces(max_n: usize) -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut t = Tally::default();
        for n in 3..=max_n.min(24) {
            for i in 1..=n {
                for j in i + 1..=n {
                    let rep = reduce_straight::<Rational>(n, i, j)?;
                    let trace = rep.trace.expect("schedule records a trace");
                    let replayed = trace.replay()?;
                    t.check(
                        replayed.edge_count() == 1 && replayed.edges()[0].resistance == rep.value,
                        || format!("replay mismatch n={n} ({i},{j})"),
                    );
                    for s in trace.delta_y_steps() {
                        let x = s.produced[0].clone() * &s.consumed[0];
                        let y = s.produced[1].clone() * &s.consumed[1];
                        let z = s.produced[2].clone() * &s.consumed[2];
                        t.check(x == y && y == z, || {
                            format!("star relation n={n} ({i},{j})")
                        });
                    }
                }
            }
            let trace = reduce_straight::<Rational>(n, 1, n)?.trace.expect("trace");
            for (idx, s) in trace.delta_y_steps().enumerate() {
                let k = idx as i64 + 1;
                let total: Rational = s.consumed.iter().cloned().sum();
                let want = Rational::new(fib(2 * k + 2)?, fib(2 * k)?);
                t.check(total == want, || format!("side sum n={n} step {k}"));
                let e = sbt(k as usize, 0)?;
                t.check(
                    s.produced == vec![e.b.clone(), e.s.clone(), e.t.clone()],
                    || format!("s/b/t n={n} step {k}"),
                );
            }
        }
        Ok(t.finish("trace-audit"))
    };
    from_result("trace-audit", run())
}

/// Removing any one edge never lowers `r(1, n)`; deleting a pendant component
/// behind a cut vertex leaves near-side resistances unchanged.
pub fn check_monotone_and_cut() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut t = Tally::default();
        for n in 4..=12 {
            let g = straight_linear_2tree::<Rational>(n)?;
            let base = resistance_det(&g, 1, n)?.value;
            for idx in 0..g.edge_count() {
                let mut h = g.clone();
                h.remove_edge_at(idx);
                if !h.is_connected() {
                    continue;
                }
                let r = resistance_det(&h, 1, n)?.value;
                t.check(r >= base, || format!("deleting an edge lowered r(1,{n})"));
            }
            // Hang a path off vertex n; vertex n becomes a cut vertex.
            let mut hung = g.clone();
            let extra = hung.add_vertex();
            let tip = hung.add_vertex();
            hung.add_edge(n, extra, ratio(1, 1))?;
            hung.add_edge(extra, tip, ratio(2, 1))?;
            for i in 1..=n {
                let before = resistance_det(&g, 1, i)?.value;
                let after = resistance_det(&hung, 1, i)?.value;
                t.check(before == after, || {
                    format!("cut vertex changed r(1,{i}) on n={n}")
                });
            }
        }
        Ok(t.finish("rayleigh-and-cut-vertex"))
    };
    from_result("rayleigh-and-cut-vertex", run())
}

pub fn check_endpoints() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut t = Tally::default();
        for m in 1..=60 {
            let f = r_endpoint_forms(m)?;
            t.check(f.sum_form == f.closed_form, || {
                format!("forms differ at m={m}")
            });
        }
        t.check(r_endpoints(1)? == ratio(2, 3), || {
            "r_endpoints(1) != 2/3".into()
        });
        t.check(r_endpoints(2)? == ratio(1, 1), || {
            "r_endpoints(2) != 1".into()
        });
        Ok(t.finish("endpoint-forms"))
    };
    from_result("endpoint-forms", run())
}

pub fn check_endpoint_increment() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut t = Tally::default();
        let d = r_endpoints(65)? - r_endpoints(64)?;
        let gap = (to_f64(&d) - 0.2).abs();
        t.check(gap < 1e-6, || {
            format!("increment at m=64 is {gap:e} from 1/5")
        });
        Ok(t.finish("endpoint-increment"))
    };
    from_result("endpoint-increment", run())
}

pub fn check_spanning_trees() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut t = Tally::default();
        for m in 1..=20 {
            let g = straight_linear_2tree::<Rational>(m + 2)?;
            let tau = spanning_tree_count(&g)?;
            t.check(tau == fib(2 * m as i64 + 2)?, || {
                format!("matrix-tree count at m={m}")
            });
            t.check(tau == spanning_closed(m)?, || {
                format!("closed count at m={m}")
            });
            if m + 2 <= 8 {
                let brute = brute_force_tree_enumeration(&g, DEFAULT_ENUMERATION_LIMIT)?;
                t.check(brute == tau, || format!("enumeration at m={m}"));
            }
        }
        Ok(t.finish("spanning-trees"))
    };
    from_result("spanning-trees", run())
}

pub fn check_forests() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let tallies = (1..=20usize)
            .into_par_iter()
            .map(|m| -> Result<Tally> {
                let mut t = Tally::default();
                let n = m + 2;
                let g = straight_linear_2tree::<Rational>(n)?;
                let tau = Rational::from_integer(spanning_tree_count(&g)?);
                for j in 1..n {
                    let det_row = resistance_det_all(&g, j)?;
                    for k in 1..=n - j {
                        let p = StraightParams::new(m, j, k)?;
                        let count = forest_closed(&p)?;
                        let product = &det_row[j + k - 1] * &tau;
                        t.check(product == Rational::from_integer(count.clone()), || {
                            format!("forest count m={m} j={j} k={k}")
                        });
                        if n <= 8 {
                            let counted = two_forest_count(&g, j, j + k)?;
                            let brute = brute_force_two_forest_enumeration(
                                &g,
                                j,
                                j + k,
                                DEFAULT_ENUMERATION_LIMIT,
                            )?;
                            t.check(counted == count && brute == count, || {
                                format!("2-forest enumeration m={m} j={j} k={k}")
                            });
                        }
                    }
                }
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(tallies
            .into_iter()
            .fold(Tally::default(), Tally::merge)
            .finish("two-forests"))
    };
    from_result("two-forests", run())
}

pub fn check_golden_ranking() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let mut t = Tally::default();
        let s = rank_nonedges(9)?.to_string();
        t.check(s.starts_with(&format!("{N9_RANKING_HEAD}, ")), || {
            format!("head: {s}")
        });
        t.check(s.ends_with(&format!(", {N9_RANKING_TAIL}")), || {
            format!("tail: {s}")
        });
        for n in 5..=60 {
            let ok = rank_nonedges(n).map(|r| {
                r.groups.last().map(|g| g.pairs.clone()) == Some(vec![(1, n)])
                    && r.groups.iter().all(|g| {
                        g.pairs.len() == 1
                            || (g.pairs.len() == 2 && {
                                let (a, b) = (g.pairs[0], g.pairs[1]);
                                a.0 + b.1 == n + 1 && a.1 + b.0 == n + 1
                            })
                    })
            });
            t.check(matches!(ok, Ok(true)), || format!("ranking shape at n={n}"));
        }
        Ok(t.finish("ranking"))
    };
    from_result("ranking", run())
}

/// Monotonicity in the offset, unimodality and reflection in the base vertex,
/// strict separation of offset levels for `k >= 2`, and the minimum values.
pub fn check_orderings(max_m: usize) -> CheckResult {
    let run = || -> Result<CheckResult> {
        let tallies = (1..=max_m)
            .into_par_iter()
            .map(|m| -> Result<Tally> {
                let mut t = Tally::default();
                let n = m + 2;
                let profiles: Vec<Vec<Rational>> = (1..n)
                    .map(|k| offset_profile(m, k))
                    .collect::<Result<_>>()?;
                // monotone in k: r(j, j+k+1) > r(j, j+k) unless j = k = 1
                for j in 1..n {
                    for k in 1..n - j {
                        let d = r_diff(&StraightParams::new(m, j, k)?)?;
                        let zero_case = j == 1 && k == 1;
                        t.check(
                            if zero_case {
                                d.is_zero()
                            } else {
                                d > Rational::zero()
                            },
                            || format!("monotonicity m={m} j={j} k={k}"),
                        );
                    }
                }
                for k in 1..n {
                    let prof = &profiles[k - 1];
                    let len = prof.len();
                    for j in 1..=len {
                        t.check(prof[j - 1] == prof[len - j], || {
                            format!("reflection m={m} k={k}")
                        });
                    }
                    let mins = offset_minimizers(m, k)?;
                    let (lo, hi) = (mins[0], *mins.last().expect("nonempty"));
                    let strictly = |a: &Rational, b: &Rational| a > b;
                    let down = (1..lo).all(|j| strictly(&prof[j - 1], &prof[j]));
                    let up = (hi..len).all(|j| strictly(&prof[j], &prof[j - 1]));
                    let flat = prof[lo - 1] == prof[hi - 1];
                    t.check(down && up && flat, || format!("unimodality m={m} k={k}"));
                }
                for k in 2..n - 1 {
                    let max_here = profiles[k - 1].iter().max().expect("nonempty");
                    let min_next = profiles[k].iter().min().expect("nonempty");
                    t.check(max_here < min_next, || {
                        format!("level separation m={m} k={k}")
                    });
                }
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = tallies.into_iter().fold(Tally::default(), Tally::merge);
        t.check(min_resistance(6)?.value == ratio(5, 11), || {
            "min at n=6".into()
        });
        let m50 = to_f64(&min_resistance(50)?.value);
        t.check((m50 - 5f64.sqrt().recip()).abs() < 1e-8, || {
            "min at n=50".into()
        });
        Ok(t.finish("orderings"))
    };
    from_result("orderings", run())
}

pub fn check_identities() -> (CheckResult, Vec<IdentityReport>) {
    let reports = check_all();
    let instances = reports.iter().map(|r| r.instances).sum::<usize>();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.identity.as_str())
        .collect();
    let passed = failed.is_empty() && instances >= 10_000;
    let detail = if passed {
        format!("{} identities", reports.len())
    } else if failed.is_empty() {
        format!("only {instances} instances")
    } else {
        format!("failed: {}", failed.join(", "))
    };
    (
        CheckResult {
            name: "identities",
            passed,
            instances,
            detail,
        },
        reports,
    )
}

/// Compare both readings of the bent endpoint formula with the oracle on
/// every bent tree with `m` in `5..=15`.
pub fn bent_evidence() -> Result<Vec<BentEvidenceRow>> {
    let cases: Vec<(usize, usize)> = (5..=15usize)
        .flat_map(|m| (3..m).map(move |k| (m, k)))
        .collect();
    cases
        .into_par_iter()
        .map(|(m, bend)| {
            let g = bent_linear_2tree::<Rational>(m + 2, bend)?;
            let oracle = resistance_det(&g, 1, m + 2)?.value;
            let add = r_bent_reading(m, bend, BentReading::Additive)?;
            let mul = r_bent_reading(m, bend, BentReading::Multiplicative)?;
            Ok(BentEvidenceRow {
                m,
                bend,
                oracle: format_rational(&oracle),
                additive: format_rational(&add),
                multiplicative: format_rational(&mul),
                additive_matches: add == oracle,
                multiplicative_matches: mul == oracle,
            })
        })
        .collect()
}

fn check_bent(evidence: &[BentEvidenceRow]) -> CheckResult {
    let mut t = Tally::default();
    for row in evidence {
        let ok = match RESOLVED_BENT_READING {
            BentReading::Additive => row.additive_matches,
            BentReading::Multiplicative => row.multiplicative_matches,
        };
        t.check(ok, || format!("bent m={} k={}", row.m, row.bend));
    }
    t.check(!evidence.is_empty(), || "no bent cases".into());
    t.finish("bent-formula")
}

pub fn check_conjecture_lab() -> CheckResult {
    let run = || -> Result<CheckResult> {
        let cfg = LabConfig::default();
        let mut t = Tally::default();
        for row in ktree_increments(1, 40, &cfg)? {
            t.check(row.delta_exact == Some(Rational::one()), || {
                format!("path increment at n={}", row.n)
            });
        }
        for row in ktree_increments(2, 70, &cfg)?.iter().filter(|r| r.n >= 64) {
            t.check((row.delta - 0.2).abs() < 1e-6, || {
                format!("2-tree increment n={}", row.n)
            });
        }
        let k3 = ktree_increments(3, 60, &cfg)?;
        t.check(!k3.is_empty(), || "empty 3-tree table".into());
        let grid = triangle_grid_growth(4, &cfg)?;
        t.check(grid[0].resistance == LabValue::Exact(ratio(2, 3)), || {
            "grid rows=2".into()
        });
        Ok(t.finish("conjecture-lab"))
    };
    from_result("conjecture-lab", run())
}

/// Run everything.
pub fn run_verify(opts: VerifyOptions) -> VerifyReport {
    let (evidence, (id_check, identities)) =
        rayon::join(|| bent_evidence().unwrap_or_default(), check_identities);
    let tasks: Vec<Box<dyn Fn() -> CheckResult + Send + Sync>> = vec![
        Box::new(move || check_cross_method(opts.max_n)),
        Box::new(move || check_traces(opts.max_n)),
        Box::new(check_monotone_and_cut),
        Box::new(check_endpoints),
        Box::new(check_endpoint_increment),
        Box::new(check_spanning_trees),
        Box::new(check_forests),
        Box::new(check_golden_ranking),
        Box::new(move || check_orderings(opts.max_m)),
        Box::new(check_conjecture_lab),
    ];
    let mut checks: Vec<CheckResult> = tasks.par_iter().map(|f| f()).collect();
    checks.push(id_check);
    checks.push(check_bent(&evidence));
    VerifyReport {
        checks,
        bent_reading: RESOLVED_BENT_READING.as_str(),
        bent_evidence: evidence,
        identities,
    }
}
