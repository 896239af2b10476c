//! Text formats: edge lists, trace JSONL, and the JSON/CSV shapes shared by
//! the command-line tool.
//!
//! Edge list:
//!
//! ```text
//! vertices 4
//! 1 2 1/1
//! 2 3 1/2
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. A weight may be an
//! integer or `num/den`.

use serde_json::{json, Value};

use crate::conjecture::{BentRow, GridRow, KtreeRow, LabValue, LAB_LABEL};
use crate::engine::{ReductionTrace, TraceStep};
use crate::ranking::RankedNonEdges;
use crate::{BigInt, Error, Rational, Result, WeightedGraph};

/// Version stamped into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

/// `num/den`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator `{num}`"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator `{den}`"))?;
    if den == BigInt::from(0) {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

pub fn write_edge_list(g: &WeightedGraph<Rational>) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for e in g.edges() {
        out.push_str(&format!(
            "{} {} {}\n",
            e.u,
            e.v,
            format_rational(&e.resistance)
        ));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph<Rational>> {
    let mut graph: Option<WeightedGraph<Rational>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (&mut graph, fields.as_slice()) {
            (None, ["vertices", n]) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| err(format!("bad vertex count `{n}`")))?;
                graph = Some(WeightedGraph::new(n).map_err(|e| err(e.to_string()))?);
            }
            (None, _) => return Err(err("expected header `vertices N`".into())),
            (Some(g), [u, v, w]) => {
                let u: usize = u.parse().map_err(|_| err(format!("bad vertex `{u}`")))?;
                let v: usize = v.parse().map_err(|_| err(format!("bad vertex `{v}`")))?;
                let w = parse_rational(w).map_err(err)?;
                g.add_edge(u, v, w).map_err(|e| err(e.to_string()))?;
            }
            (Some(_), _) => return Err(err("expected `u v num/den`".into())),
        }
    }
    graph.ok_or(Error::Parse {
        line: 0,
        message: "missing header `vertices N`".into(),
    })
}

/// `{"num": "...", "den": "..."}` plus the shared `value_num`/`value_den`
/// naming when merged into a larger object.
pub fn rational_json(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn step_json(index: usize, step: &TraceStep<Rational>) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "step": index,
        "kind": step.kind,
        "vertices": step.vertices,
        "consumed": step.consumed.iter().map(format_rational).collect::<Vec<_>>(),
        "produced": step.produced.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

/// One JSON object per line, in step order.
pub fn trace_to_jsonl(trace: &ReductionTrace<Rational>) -> String {
    trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| step_json(i, s).to_string() + "\n")
        .collect()
}

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    build(&mut w).map_err(|e| Error::Domain(format!("csv: {e}")))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub const RANKING_HEADER: [&str; 6] = ["rank", "group_id", "u", "v", "value_num", "value_den"];

/// One row per non-edge; `rank` counts pairs from 1, `group_id` counts tie
/// groups from 1.
pub fn ranking_csv(ranked: &RankedNonEdges, limit: Option<usize>) -> Result<String> {
    csv_string(|w| {
        w.write_record(RANKING_HEADER)?;
        for (idx, (gi, (u, v), value)) in ranked.iter_pairs().enumerate() {
            if limit.is_some_and(|l| idx >= l) {
                break;
            }
            w.write_record([
                (idx + 1).to_string(),
                (gi + 1).to_string(),
                u.to_string(),
                v.to_string(),
                value.numer().to_string(),
                value.denom().to_string(),
            ])?;
        }
        Ok(())
    })
}

fn exact_cells(v: Option<&Rational>) -> [String; 2] {
    match v {
        Some(r) => [r.numer().to_string(), r.denom().to_string()],
        None => [String::new(), String::new()],
    }
}

fn lab_cells(v: &LabValue) -> [String; 4] {
    let [num, den] = exact_cells(v.exact());
    let residual = match v {
        LabValue::Float { residual, .. } => format!("{residual:e}"),
        LabValue::Exact(_) => String::new(),
    };
    [num, den, format!("{:.15}", v.approx()), residual]
}

pub fn ktree_csv(rows: &[KtreeRow]) -> Result<String> {
    csv_string(|w| {
        w.write_record([
            "n", "r_num", "r_den", "r", "residual", "delta", "target", "method", "label",
        ])?;
        for row in rows {
            let [num, den, approx, residual] = lab_cells(&row.resistance);
            w.write_record([
                row.n.to_string(),
                num,
                den,
                approx,
                residual,
                format!("{:.15}", row.delta),
                format!("{:.15}", crate::closed_form::to_f64(&row.target)),
                row.resistance.method().to_string(),
                LAB_LABEL.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn grid_csv(rows: &[GridRow]) -> Result<String> {
    csv_string(|w| {
        w.write_record([
            "rows", "vertices", "cells", "r_num", "r_den", "r", "residual", "exp_diff", "grew",
            "method", "label",
        ])?;
        for row in rows {
            let [num, den, approx, residual] = lab_cells(&row.resistance);
            w.write_record([
                row.rows.to_string(),
                row.vertices.to_string(),
                row.cells.to_string(),
                num,
                den,
                approx,
                residual,
                row.exp_diff.map(|d| format!("{d:e}")).unwrap_or_default(),
                row.grew.map(|g| g.to_string()).unwrap_or_default(),
                row.resistance.method().to_string(),
                LAB_LABEL.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn bent_csv(rows: &[BentRow]) -> Result<String> {
    csv_string(|w| {
        w.write_record([
            "n",
            "bend",
            "straight_num",
            "straight_den",
            "bent_num",
            "bent_den",
            "bent",
            "residual",
            "formula_num",
            "formula_den",
            "difference",
            "method",
            "label",
        ])?;
        for row in rows {
            let [s_num, s_den] = exact_cells(Some(&row.straight));
            let [b_num, b_den, approx, residual] = lab_cells(&row.bent);
            let [f_num, f_den] = exact_cells(row.formula.as_ref());
            w.write_record([
                row.n.to_string(),
                row.bend.to_string(),
                s_num,
                s_den,
                b_num,
                b_den,
                approx,
                residual,
                f_num,
                f_den,
                format!("{:.15}", row.difference),
                row.bent.method().to_string(),
                LAB_LABEL.to_string(),
            ])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::reduce_straight;
    use crate::graph::straight_linear_2tree;
    use crate::ranking::rank_nonedges;
    use crate::ratio;

    #[test]
    fn edge_list_round_trip() {
        let mut g = straight_linear_2tree::<Rational>(5).unwrap();
        g.add_edge(1, 2, ratio(3, 7)).unwrap();
        let text = write_edge_list(&g);
        assert!(text.starts_with("vertices 5\n1 2 1/1\n"));
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list("1 2 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list(""),
            Err(Error::Parse { line: 0, .. })
        ));
        let bad = "vertices 3\n# ok\n\n1 4 1\n";
        assert!(matches!(
            parse_edge_list(bad),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_edge_list("vertices 3\n1 2 1/0\n").is_err());
        assert!(parse_edge_list("vertices 3\n1 2 -1\n").is_err());
        assert_eq!(
            parse_edge_list("vertices 2\n1 2 3\n").unwrap().edges()[0].resistance,
            ratio(3, 1)
        );
    }

    #[test]
    fn trace_lines() {
        let rep = reduce_straight::<Rational>(5, 1, 5).unwrap();
        let trace = rep.trace.unwrap();
        let text = trace_to_jsonl(&trace);
        assert_eq!(text.lines().count(), trace.steps.len());
        let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["schema"], 1);
        assert_eq!(first["kind"], "delta-y");
        assert_eq!(first["produced"][0], "1/3");
    }

    #[test]
    fn ranking_rows() {
        let csv = ranking_csv(&rank_nonedges(5).unwrap(), None).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "rank,group_id,u,v,value_num,value_den");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1,1,1,4,"));
        assert!(lines[2].starts_with("2,1,2,5,"));
        assert!(lines[3].starts_with("3,2,1,5,"));
        let top = ranking_csv(&rank_nonedges(9).unwrap(), Some(2)).unwrap();
        assert_eq!(top.lines().count(), 3);
    }
}
