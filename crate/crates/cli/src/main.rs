use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use resist_core::closed_form::{
    forest_closed, min_resistance, r_bent, r_closed, r_diff, r_endpoint_forms, r_sum, sbt,
    spanning_closed, to_f64, StraightParams,
};
use resist_core::conjecture::{
    bent_diameter_growth, ktree_increments, triangle_grid_growth, BendRule, LabConfig,
};
use resist_core::engine::{
    brute_force_tree_enumeration, reduce_straight_graph, resistance_det, resistance_float,
    spanning_tree_count, DEFAULT_ENUMERATION_LIMIT,
};
use resist_core::graph::{
    bent_linear_2tree, cycle, path, straight_linear_2tree, straight_linear_ktree, triangular_grid,
};
use resist_core::io::{
    bent_csv, grid_csv, ktree_csv, parse_edge_list, ranking_csv, trace_to_jsonl, write_edge_list,
    SCHEMA_VERSION,
};
use resist_core::ranking::{predict_from, rank_graph, rank_nonedges, RankedNonEdges, TiePolicy};
use resist_core::verify::{run_verify, VerifyOptions};
use resist_core::{Error, ExactGraph, Rational};

#[derive(Parser)]
#[command(
    name = "resist",
    version,
    about = "Exact effective resistance on linear 2-trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated graph as an edge list.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resistance between two vertices.
    Res {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<usize>,
        #[arg(long, value_enum, default_value = "all")]
        method: ResMethod,
        /// Write the Δ–Y trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Residual bound for the float solver.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Print decimal values instead of num/den.
        #[arg(long)]
        float: bool,
    },
    /// Evaluate a closed-form formula.
    Formula {
        #[arg(long, value_enum)]
        which: Which,
        /// Triangles (n - 2).
        #[arg(long)]
        m: Option<usize>,
        /// Vertices; alternative to --m.
        #[arg(long)]
        n: Option<usize>,
        /// Lower vertex of the pair.
        #[arg(long)]
        j: Option<usize>,
        /// Offset between the pair.
        #[arg(long)]
        k: Option<usize>,
        /// Sweep step for sbt.
        #[arg(long)]
        i: Option<usize>,
        /// Left weight index for sbt.
        #[arg(long, default_value_t = 0)]
        p: usize,
        /// Bend vertex for the bent formula.
        #[arg(long)]
        bend: Option<usize>,
        #[arg(long)]
        float: bool,
    },
    /// Rank non-edges by resistance (CSV).
    Rank {
        #[arg(long)]
        n: Option<usize>,
        /// Rank the non-edges of an edge-list file instead.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Keep only the first L predicted links.
        #[arg(long)]
        top: Option<usize>,
        #[arg(long, value_enum, default_value = "lowest-index")]
        ties: Ties,
        /// Print the tie-group line instead of CSV.
        #[arg(long)]
        text: bool,
    },
    /// Count spanning trees.
    Trees {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also count by exhaustive enumeration (small graphs only).
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the full verification suite.
    Verify {
        /// Largest n in the all-pairs cross-method sweep.
        #[arg(long, default_value_t = 40)]
        max_n: usize,
        /// Largest triangle count in the ordering sweep.
        #[arg(long, default_value_t = 30)]
        max_m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Numerical tables for the open growth questions (CSV).
    Conjecture {
        #[arg(long, value_enum)]
        which: Lab,
        /// k for the k-tree table.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Largest n for the k-tree and bent tables.
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        /// Largest number of vertex rows for the grid table.
        #[arg(long, default_value_t = 12)]
        rows_max: usize,
        /// Bend placement: `center` or a vertex number.
        #[arg(long, default_value = "center")]
        bend_rule: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Triangles (n - 2) for 2-tree families.
    #[arg(long)]
    m: Option<usize>,
    /// Width of a k-tree.
    #[arg(long)]
    k: Option<usize>,
    /// Bend vertex of a bent 2-tree.
    #[arg(long)]
    bend: Option<usize>,
    /// Vertex rows of a triangular grid.
    #[arg(long)]
    rows: Option<usize>,
    /// Read an edge list instead of generating.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Straight,
    Bent,
    Ktree,
    Grid,
    Path,
    Cycle,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ResMethod {
    Dy,
    Det,
    Float,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Sum,
    Closed,
    Endpoints,
    Min,
    Bent,
    Trees,
    Forests,
    Sbt,
    Diff,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    LowestIndex,
    ReportGroup,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lab {
    Ktree,
    Grid,
    Bent,
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::VertexRange { .. }
            | Error::InvalidEdge(_)
            | Error::IndexBound { .. }
            | Error::Parse { .. }
            | Error::UnknownIdentity(_)
            | Error::EmptyRange(_)
            | Error::NonUnitWeights
            | Error::TooLarge { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult = Result<ExitCode, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| usage(format!("missing --{flag}")))
}

impl GraphArgs {
    fn vertex_count(&self) -> Result<usize, Failure> {
        match (self.n, self.m) {
            (Some(n), None) => Ok(n),
            (None, Some(m)) => Ok(m + 2),
            (Some(n), Some(m)) if n == m + 2 => Ok(n),
            (Some(_), Some(_)) => Err(usage("--n and --m disagree (n = m + 2)")),
            (None, None) => Err(usage("missing --n or --m")),
        }
    }

    fn build(&self) -> Result<(ExactGraph, Option<Family>), Failure> {
        if let Some(file) = &self.graph {
            let text = fs::read_to_string(file)?;
            return Ok((parse_edge_list(&text)?, None));
        }
        let family = self
            .family
            .ok_or_else(|| usage("give --family or --graph"))?;
        let g = match family {
            Family::Straight => straight_linear_2tree(self.vertex_count()?)?,
            Family::Bent => bent_linear_2tree(self.vertex_count()?, need(self.bend, "bend")?)?,
            Family::Ktree => straight_linear_ktree(need(self.n, "n")?, need(self.k, "k")?)?,
            Family::Grid => triangular_grid(need(self.rows, "rows")?)?.graph,
            Family::Path => path(need(self.n, "n")?)?,
            Family::Cycle => cycle(need(self.n, "n")?)?,
        };
        Ok((g, Some(family)))
    }
}

fn value_fields(r: &Rational, float: bool) -> Map<String, Value> {
    let mut m = Map::new();
    if float {
        m.insert("value".into(), json!(to_f64(r)));
    } else {
        m.insert("value_num".into(), json!(r.numer().to_string()));
        m.insert("value_den".into(), json!(r.denom().to_string()));
    }
    m
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn cmd_gen(graph: &GraphArgs, out: &Option<PathBuf>) -> CliResult {
    let (g, _) = graph.build()?;
    let text = write_edge_list(&g);
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_res(
    graph: &GraphArgs,
    pair: &[usize],
    method: ResMethod,
    trace_out: &Option<PathBuf>,
    tol: f64,
    float: bool,
) -> CliResult {
    let (g, family) = graph.build()?;
    let (i, j) = (pair[0], pair[1]);
    let mut results = Vec::new();
    let mut exact: Vec<Rational> = Vec::new();
    let want = |m: ResMethod| method == m || method == ResMethod::All;
    let straight_shape = matches!(family, Some(Family::Straight)) || family.is_none();

    if want(ResMethod::Dy) {
        if !straight_shape {
            return Err(usage("--method dy needs a straight linear 2-tree"));
        }
        match reduce_straight_graph(g.clone(), i, j) {
            Ok(rep) => {
                if let (Some(p), Some(t)) = (trace_out, &rep.trace) {
                    fs::write(p, trace_to_jsonl(t))?;
                }
                let mut o = value_fields(&rep.value, float);
                o.insert("method".into(), json!(rep.method.as_str()));
                if let Some(t) = &rep.trace {
                    o.insert("steps".into(), json!(t.steps.len()));
                }
                results.push(Value::Object(o));
                exact.push(rep.value);
            }
            // an edge-list file that is not a straight 2-tree just skips this method
            Err(e) if method == ResMethod::All && family.is_none() => {
                results.push(json!({"method": "delta-y", "skipped": e.to_string()}));
            }
            Err(e) => return Err(e.into()),
        }
    } else if trace_out.is_some() {
        return Err(usage("--trace needs --method dy or all"));
    }
    if want(ResMethod::Det) {
        let rep = resistance_det(&g, i, j)?;
        let mut o = value_fields(&rep.value, float);
        o.insert("method".into(), json!(rep.method.as_str()));
        results.push(Value::Object(o));
        exact.push(rep.value);
    }
    let mut float_value = None;
    if want(ResMethod::Float) {
        let rep = resistance_float(&g, i, j, tol)?;
        float_value = Some(rep.value);
        results.push(json!({
            "method": "float",
            "value": rep.value,
            "residual": rep.residual,
            "solver": rep.solver,
        }));
    }
    let mut agree = exact.windows(2).all(|w| w[0] == w[1]);
    if let (Some(f), Some(e)) = (float_value, exact.first()) {
        agree &= (f - to_f64(e)).abs() <= 1e-9 * to_f64(e).abs().max(1.0);
    }
    print_json(&json!({
        "schema": SCHEMA_VERSION,
        "pair": [i, j],
        "vertices": g.vertex_count(),
        "results": results,
        "agree": agree,
    }));
    Ok(if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_formula(
    which: Which,
    m: Option<usize>,
    n: Option<usize>,
    j: Option<usize>,
    k: Option<usize>,
    i: Option<usize>,
    p: usize,
    bend: Option<usize>,
    float: bool,
) -> CliResult {
    let m = match (m, n) {
        (Some(m), _) => Some(m),
        (None, Some(n)) => Some(n.checked_sub(2).ok_or_else(|| usage("--n must be >= 3"))?),
        (None, None) => None,
    };
    let straight = || -> Result<StraightParams, Failure> {
        Ok(StraightParams::new(
            need(m, "m")?,
            need(j, "j")?,
            need(k, "k")?,
        )?)
    };
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA_VERSION));
    let name = which
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    doc.insert("which".into(), json!(name));
    let rational = |doc: &mut Map<String, Value>, r: &Rational| doc.extend(value_fields(r, float));
    match which {
        Which::Sum | Which::Closed | Which::Diff => {
            let p = straight()?;
            doc.insert("params".into(), json!(p));
            let v = match which {
                Which::Sum => r_sum(&p),
                Which::Closed => r_closed(&p)?,
                _ => r_diff(&p)?,
            };
            rational(&mut doc, &v);
        }
        Which::Endpoints => {
            let m = need(m, "m")?;
            let forms = r_endpoint_forms(m)?;
            if forms.sum_form != forms.closed_form {
                return Err(Failure::Runtime(format!(
                    "endpoint forms disagree at m={m}"
                )));
            }
            doc.insert("params".into(), json!({"m": m, "n": m + 2}));
            rational(&mut doc, &forms.closed_form);
        }
        Which::Min => {
            let n = need(m, "n")? + 2;
            let res = min_resistance(n)?;
            doc.insert("params".into(), json!({"n": n}));
            doc.insert("edges".into(), json!(res.edges));
            rational(&mut doc, &res.value);
        }
        Which::Bent => {
            let m = need(m, "m")?;
            let b = need(bend, "bend")?;
            doc.insert("params".into(), json!({"m": m, "n": m + 2, "bend": b}));
            rational(&mut doc, &r_bent(m, b)?);
        }
        Which::Trees => {
            let m = need(m, "m")?;
            doc.insert("params".into(), json!({"m": m, "n": m + 2}));
            doc.insert("count".into(), json!(spanning_closed(m)?.to_string()));
        }
        Which::Forests => {
            let p = straight()?;
            doc.insert("params".into(), json!(p));
            doc.insert("count".into(), json!(forest_closed(&p)?.to_string()));
        }
        Which::Sbt => {
            let i = need(i, "i")?;
            let t = sbt(i, p)?;
            doc.insert("params".into(), json!({"i": i, "p": p}));
            for (key, v) in [("s", &t.s), ("b", &t.b), ("t", &t.t)] {
                doc.insert(key.into(), Value::Object(value_fields(v, float)));
            }
        }
    }
    print_json(&Value::Object(doc));
    Ok(ExitCode::SUCCESS)
}

fn cmd_rank(
    n: Option<usize>,
    graph: &Option<PathBuf>,
    top: Option<usize>,
    ties: Ties,
    text: bool,
) -> CliResult {
    let ranked = match (n, graph) {
        (Some(n), None) => rank_nonedges(n)?,
        (None, Some(file)) => {
            let g = parse_edge_list(&fs::read_to_string(file)?)?;
            rank_graph(&g)?
        }
        _ => return Err(usage("give exactly one of --n or --graph")),
    };
    let shown = match top {
        Some(l) => {
            let policy = match ties {
                Ties::LowestIndex => TiePolicy::LowestIndex,
                Ties::ReportGroup => TiePolicy::ReportGroup,
            };
            let keep = predict_from(&ranked, l, policy)?;
            restrict(&ranked, &keep)
        }
        None => ranked,
    };
    if text {
        println!("{shown}");
    } else {
        print!("{}", ranking_csv(&shown, None)?);
    }
    Ok(ExitCode::SUCCESS)
}

/// The ranking cut down to `keep`, preserving group structure.
fn restrict(ranked: &RankedNonEdges, keep: &[(usize, usize)]) -> RankedNonEdges {
    let mut out = ranked.clone();
    for g in &mut out.groups {
        g.pairs.retain(|p| keep.contains(p));
    }
    out.groups.retain(|g| !g.pairs.is_empty());
    out
}

fn cmd_trees(graph: &GraphArgs, brute: bool, as_json: bool) -> CliResult {
    let (g, _) = graph.build()?;
    let tau = spanning_tree_count(&g)?;
    let enumerated = if brute {
        Some(brute_force_tree_enumeration(&g, DEFAULT_ENUMERATION_LIMIT)?)
    } else {
        None
    };
    let agree = enumerated.as_ref().is_none_or(|e| *e == tau);
    if as_json {
        let mut doc = json!({
            "schema": SCHEMA_VERSION,
            "vertices": g.vertex_count(),
            "spanning_trees": tau.to_string(),
        });
        if let Some(e) = &enumerated {
            doc["enumerated"] = json!(e.to_string());
        }
        print_json(&doc);
    } else {
        println!("{tau}");
        if let Some(e) = &enumerated {
            println!("enumerated {e}");
        }
    }
    Ok(if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_verify(max_n: usize, max_m: usize, as_json: bool) -> CliResult {
    if max_n < 3 || max_m < 1 {
        return Err(usage("need --max-n >= 3 and --max-m >= 1"));
    }
    let report = run_verify(VerifyOptions { max_n, max_m });
    if as_json {
        let mut doc = serde_json::to_value(&report).map_err(|e| Failure::Runtime(e.to_string()))?;
        doc["schema"] = json!(SCHEMA_VERSION);
        doc["passed"] = json!(report.passed());
        print_json(&doc);
    } else {
        for c in &report.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            println!(
                "{tag} {:<24} {:>8} instances  {}",
                c.name, c.instances, c.detail
            );
        }
        println!();
        println!("bent formula reading: {}", report.bent_reading);
        println!("m,bend,oracle,additive_matches,multiplicative_matches");
        for row in &report.bent_evidence {
            println!(
                "{},{},{},{},{}",
                row.m, row.bend, row.oracle, row.additive_matches, row.multiplicative_matches
            );
        }
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_conjecture(
    which: Lab,
    k: usize,
    n_max: usize,
    rows_max: usize,
    bend_rule: &str,
    tol: f64,
    out: &Option<PathBuf>,
) -> CliResult {
    let mut cfg = LabConfig::from_env()?;
    cfg.tol = tol;
    let csv = match which {
        Lab::Ktree => ktree_csv(&ktree_increments(k, n_max, &cfg)?)?,
        Lab::Grid => grid_csv(&triangle_grid_growth(rows_max, &cfg)?)?,
        Lab::Bent => {
            let rule = match bend_rule {
                "center" => BendRule::Center,
                other => BendRule::At(
                    other
                        .parse()
                        .map_err(|_| usage(format!("bad --bend-rule `{other}`")))?,
                ),
            };
            bent_csv(&bent_diameter_growth(n_max, rule, &cfg)?)?
        }
    };
    match out {
        Some(p) => fs::write(p, csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen { graph, out } => cmd_gen(&graph, &out),
        Command::Res {
            graph,
            pair,
            method,
            trace,
            tol,
            float,
        } => cmd_res(&graph, &pair, method, &trace, tol, float),
        Command::Formula {
            which,
            m,
            n,
            j,
            k,
            i,
            p,
            bend,
            float,
        } => cmd_formula(which, m, n, j, k, i, p, bend, float),
        Command::Rank {
            n,
            graph,
            top,
            ties,
            text,
        } => cmd_rank(n, &graph, top, ties, text),
        Command::Trees { graph, brute, json } => cmd_trees(&graph, brute, json),
        Command::Verify { max_n, max_m, json } => cmd_verify(max_n, max_m, json),
        Command::Conjecture {
            which,
            k,
            n_max,
            rows_max,
            bend_rule,
            tol,
            out,
        } => cmd_conjecture(which, k, n_max, rows_max, &bend_rule, tol, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
