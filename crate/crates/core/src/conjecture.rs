//! Numerical probes of three open growth questions: endpoint increments on
//! straight linear k-trees, corner resistance on triangular grids, and
//! endpoint resistance on bent linear 2-trees. Everything emitted here is
//! labelled conjectural; nothing is asserted as true.

use rayon::prelude::*;

use crate::closed_form::{r_bent, r_endpoints, to_f64};
use crate::engine::{resistance_exact_solve, resistance_float};
use crate::graph::{bent_linear_2tree, straight_linear_ktree, triangular_grid, WeightedGraph};
use crate::{BigInt, Error, Rational, Result};

/// Label attached to every row of a lab table.
pub const LAB_LABEL: &str = "conjectural";

pub const DEFAULT_MAX_EXACT_N: usize = 300;

pub const MAX_EXACT_ENV: &str = "RESIST_MAX_EXACT_N";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabConfig {
    /// Graphs with more vertices than this use the float solver.
    pub max_exact_n: usize,
    /// Residual bound for float solves.
    pub tol: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            max_exact_n: DEFAULT_MAX_EXACT_N,
            tol: 1e-9,
        }
    }
}

impl LabConfig {
    /// Defaults, with the switchover taken from `RESIST_MAX_EXACT_N` if set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(raw) = std::env::var(MAX_EXACT_ENV) {
            cfg.max_exact_n = raw.trim().parse().map_err(|_| {
                Error::Domain(format!(
                    "{MAX_EXACT_ENV} must be a non-negative integer, got `{raw}`"
                ))
            })?;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LabValue {
    Exact(Rational),
    Float { value: f64, residual: f64 },
}

impl LabValue {
    pub fn approx(&self) -> f64 {
        match self {
            LabValue::Exact(r) => to_f64(r),
            LabValue::Float { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            LabValue::Exact(r) => Some(r),
            LabValue::Float { .. } => None,
        }
    }

    pub fn method(&self) -> &'static str {
        match self {
            LabValue::Exact(_) => "exact",
            LabValue::Float { .. } => "float",
        }
    }
}

fn evaluate(g: &WeightedGraph<Rational>, a: usize, b: usize, cfg: &LabConfig) -> Result<LabValue> {
    if g.vertex_count() <= cfg.max_exact_n {
        Ok(LabValue::Exact(resistance_exact_solve(g, a, b)?.value))
    } else {
        let rep = resistance_float(g, a, b, cfg.tol)?;
        Ok(LabValue::Float {
            value: rep.value,
            residual: rep.residual,
        })
    }
}

/// Difference `next - cur`, exact when both sides are.
fn difference(cur: &LabValue, next: &LabValue) -> (f64, Option<Rational>) {
    match (cur.exact(), next.exact()) {
        (Some(a), Some(b)) => {
            let d = b - a;
            (to_f64(&d), Some(d))
        }
        _ => (next.approx() - cur.approx(), None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KtreeRow {
    pub n: usize,
    pub resistance: LabValue,
    /// `r(1, n+1) - r(1, n)`.
    pub delta: f64,
    pub delta_exact: Option<Rational>,
    pub target: Rational,
}

/// Conjectured limiting increment `6 / (k (k+1) (2k+1))`.
pub fn ktree_target(k: usize) -> Rational {
    let k = k as i64;
    Rational::new(BigInt::from(6), BigInt::from(k * (k + 1) * (2 * k + 1)))
}

/// `r(1, n)` and its increment on the straight linear k-tree for
/// `n = k+1 ..= n_max`.
pub fn ktree_increments(k: usize, n_max: usize, cfg: &LabConfig) -> Result<Vec<KtreeRow>> {
    if k == 0 || n_max < k + 3 {
        return Err(Error::Domain(format!(
            "k-tree table needs k >= 1 and n_max >= k+3; got k={k}, n_max={n_max}"
        )));
    }
    let values = (k + 1..=n_max + 1)
        .into_par_iter()
        .map(|n| evaluate(&straight_linear_ktree(n, k)?, 1, n, cfg))
        .collect::<Result<Vec<_>>>()?;
    let target = ktree_target(k);
    Ok(values
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let (delta, delta_exact) = difference(&w[0], &w[1]);
            KtreeRow {
                n: k + 1 + i,
                resistance: w[0].clone(),
                delta,
                delta_exact,
                target: target.clone(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub rows: usize,
    pub vertices: usize,
    pub cells: usize,
    pub resistance: LabValue,
    /// `exp(r_{rows+1}) - exp(r_rows)`, absent on the last row.
    pub exp_diff: Option<f64>,
    /// Whether the resistance grew from the previous row.
    pub grew: Option<bool>,
}

/// `exp(b) - exp(a)` as `exp(a) * expm1(b - a)`, which keeps precision when
/// the two are close.
pub fn exp_difference(a: f64, b: f64) -> f64 {
    a.exp() * (b - a).exp_m1()
}

/// Apex to bottom-left resistance on triangular grids with `2..=rows_max`
/// vertex rows.
pub fn triangle_grid_growth(rows_max: usize, cfg: &LabConfig) -> Result<Vec<GridRow>> {
    if rows_max < 2 {
        return Err(Error::Domain(format!(
            "grid table needs rows_max >= 2, got {rows_max}"
        )));
    }
    let computed = (2..=rows_max)
        .into_par_iter()
        .map(|rows| {
            let grid = triangular_grid::<Rational>(rows)?;
            let value = evaluate(&grid.graph, grid.apex, grid.bottom_left, cfg)?;
            Ok((rows, grid.graph.vertex_count(), grid.cells, value))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<GridRow> = Vec::with_capacity(computed.len());
    for (idx, (rows, vertices, cells, value)) in computed.iter().enumerate() {
        let exp_diff = computed
            .get(idx + 1)
            .map(|next| exp_difference(value.approx(), next.3.approx()));
        let grew = idx.checked_sub(1).map(|p| {
            let prev = &computed[p].3;
            match (prev.exact(), value.exact()) {
                (Some(a), Some(b)) => b > a,
                _ => value.approx() > prev.approx(),
            }
        });
        out.push(GridRow {
            rows: *rows,
            vertices: *vertices,
            cells: *cells,
            resistance: value.clone(),
            exp_diff,
            grew,
        });
    }
    Ok(out)
}

/// Where to put the single bend on an `n`-vertex bent tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BendRule {
    /// `n / 2`, clamped into the valid range.
    Center,
    /// A fixed vertex, clamped into the valid range.
    At(usize),
}

impl BendRule {
    pub fn place(self, n: usize) -> usize {
        let want = match self {
            BendRule::Center => n / 2,
            BendRule::At(k) => k,
        };
        want.clamp(3, n - 3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BentRow {
    pub n: usize,
    pub bend: usize,
    pub straight: Rational,
    pub bent: LabValue,
    /// Endpoint formula for the bent tree, when the triangle count is small
    /// enough to evaluate exactly.
    pub formula: Option<Rational>,
    /// `straight - bent`.
    pub difference: f64,
}

/// Endpoint resistance of bent versus straight linear 2-trees for
/// `n = 6..=n_max`.
pub fn bent_diameter_growth(n_max: usize, rule: BendRule, cfg: &LabConfig) -> Result<Vec<BentRow>> {
    if n_max < 6 {
        return Err(Error::Domain(format!(
            "bent table needs n_max >= 6, got {n_max}"
        )));
    }
    (6..=n_max)
        .into_par_iter()
        .map(|n| {
            let bend = rule.place(n);
            let g = bent_linear_2tree::<Rational>(n, bend)?;
            let bent = evaluate(&g, 1, n, cfg)?;
            let straight = r_endpoints(n - 2)?;
            let formula = r_bent(n - 2, bend).ok();
            let difference = match bent.exact() {
                Some(b) => to_f64(&(&straight - b)),
                None => to_f64(&straight) - bent.approx(),
            };
            Ok(BentRow {
                n,
                bend,
                straight,
                bent,
                formula,
                difference,
            })
        })
        .collect()
}
