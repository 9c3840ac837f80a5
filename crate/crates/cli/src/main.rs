//! Batch command-line front end: builds forest complexes, verifies
//! shellings, evaluates family formulas, and computes quotient homology
//! through both pipelines, with machine-readable JSON reports.
//!
//! Exit codes: 0 success, 2 input error, 3 guard exceeded or method refusal,
//! 4 failed internal assertion (boundary square, pipeline disagreement,
//! formula mismatch).

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use forest_complexes::quotient::{self, CellLimits};
use forest_complexes::{
    chain_complex_of, complete_double_graph, cycle_independence_complex, delta_cycle_homotopy,
    delta_string_homotopy, double_cycle_graph, double_string_graph, facet_label, forest_complex,
    homology, is_essentially_tree, l_homotopy, parse_graph, path_independence_complex,
    purity_criterion, reduce_essential_tree, shelling_order, string_with_tail,
    verify_shelling_with, ComplexError, DirectedGraph, FamilyError, GradedHomology, GraphError,
    HomologyError, HomotopyType, ShellingError, SimplicialComplex, TreeReduction,
};

use report::{homology_entries, RunReport};

const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_ASSERTION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "forestc",
    version,
    about = "Directed-forest complexes: homology, shellings, and symmetric quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON run report to this path
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Worker threads for the shelling verifier
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build the forest complex of a graph; report face counts, purity, and
    /// reduced integer homology
    DeltaHomology {
        /// Builtin graph: complete:N, cycle:N, string:N, string_tail:N
        #[arg(long, conflicts_with = "file")]
        builtin: Option<String>,
        /// Graph file (first line: vertex count; then "u v" edge lines)
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Shelling order of the forest complex of a graph with a complete
    /// source: order lines, verification verdict, homology facet count
    Shelling {
        /// Shorthand for --builtin complete:N
        #[arg(long, conflicts_with_all = ["builtin", "file"])]
        n: Option<usize>,
        #[arg(long, conflicts_with = "file")]
        builtin: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Facet-count guard for the quadratic verifier
        #[arg(long, default_value_t = 10_000)]
        max_facets: usize,
        /// Suppress the per-facet order lines
        #[arg(long)]
        quiet: bool,
    },
    /// Homology of the quotient of the complete-graph forest complex by the
    /// vertex-permuting action
    Quotient {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = QuotientMode::Both)]
        mode: QuotientMode,
        /// Override the cell guard: allow this many cells (and lift the
        /// default n cap)
        #[arg(long)]
        max_cells: Option<usize>,
        /// Print the cell dump (dim | canonical string)
        #[arg(long)]
        dump_cells: bool,
        /// Print the first-page differential as triplets
        #[arg(long)]
        dump_e1: bool,
    },
    /// Table of admissible forest counts f_{k,n}
    Fkn {
        #[arg(long)]
        n_max: usize,
    },
    /// Closed-form homotopy type of a named family, cross-checked against
    /// direct homology
    Family {
        /// One of: L (double string complex), C (double cycle complex),
        /// indpath (path independence), indcycle (cycle independence)
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: usize,
    },
    /// Homology of an essentially-a-tree graph through the reduction rules,
    /// cross-checked against direct homology
    Reduce {
        #[arg(long, conflicts_with = "file")]
        builtin: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum QuotientMode {
    Direct,
    E1,
    Both,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn guard(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_GUARD,
            message: message.into(),
        }
    }

    fn assertion(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ASSERTION,
            message: message.into(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::PurityGuard { .. } => Failure::guard(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<ShellingError> for Failure {
    fn from(e: ShellingError) -> Self {
        match e {
            ShellingError::TooManyFacets { .. } | ShellingError::SearchBudget { .. } => {
                Failure::guard(e.to_string())
            }
            ShellingError::NotAFacetPermutation | ShellingError::NotPure => {
                Failure::assertion(e.to_string())
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Snf(inner) => Failure::guard(inner.to_string()),
            _ => Failure::assertion(e.to_string()),
        }
    }
}

impl From<quotient::QuotientError> for Failure {
    fn from(e: quotient::QuotientError) -> Self {
        use quotient::QuotientError::*;
        match e {
            SymmetryGuard { .. } | TableGuard { .. } | CellGuard { .. } | CellBudget { .. }
            | DiagonalHypothesis { .. } => Failure::guard(e.to_string()),
            NotAForest | LabelMismatch { .. } | TooSmall { .. } => Failure::input(e.to_string()),
            Homology(inner) => inner.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.max(1);
    let result = match &cli.command {
        Command::DeltaHomology { builtin, file } => cmd_delta_homology(builtin, file),
        Command::Shelling {
            n,
            builtin,
            file,
            max_facets,
            quiet,
        } => cmd_shelling(*n, builtin, file, *max_facets, *quiet, threads),
        Command::Quotient {
            n,
            mode,
            max_cells,
            dump_cells,
            dump_e1,
        } => cmd_quotient(*n, *mode, *max_cells, *dump_cells, *dump_e1),
        Command::Fkn { n_max } => cmd_fkn(*n_max),
        Command::Family { name, n } => cmd_family(name, *n),
        Command::Reduce { builtin, file } => cmd_reduce(builtin, file),
    };
    match result {
        Ok(report) => {
            if let Some(path) = &cli.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Resolve a graph source: builtin spec, file, or an error.
fn resolve_graph(
    builtin: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<(DirectedGraph, String), Failure> {
    match (builtin, file) {
        (Some(spec), None) => {
            let g = builtin_graph(spec)?;
            Ok((g, spec.clone()))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
            Ok((parse_graph(&text)?, path.display().to_string()))
        }
        _ => Err(Failure::input(
            "exactly one of --builtin or --file is required",
        )),
    }
}

fn builtin_graph(spec: &str) -> Result<DirectedGraph, Failure> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Failure::input(format!("builtin spec {spec:?} is not NAME:N")))?;
    let n: usize = arg
        .parse()
        .map_err(|_| Failure::input(format!("builtin spec {spec:?} has a non-numeric size")))?;
    match kind {
        "complete" => Ok(complete_double_graph(n)),
        "cycle" => Ok(double_cycle_graph(n)?),
        "string" => Ok(double_string_graph(n)?),
        "string_tail" => Ok(string_with_tail(n)?),
        _ => Err(Failure::input(format!(
            "unknown builtin {kind:?} (expected complete, cycle, string, string_tail)"
        ))),
    }
}

fn homology_json(name: &str, k: &SimplicialComplex, h: &GradedHomology) -> Value {
    json!({
        "complex": name,
        "cell_counts": k.face_counts(),
        "homology": homology_entries(h, k.dim().map_or(0, |d| d as i64)),
    })
}

fn cmd_delta_homology(
    builtin: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<Value, Failure> {
    let (graph, source) = resolve_graph(builtin, file)?;
    let mut report = RunReport::new("delta-homology", json!({ "graph": source }));
    let k = report.timed("build_complex", || forest_complex(&graph));
    let pure = k.is_pure();
    let criterion = match purity_criterion(&graph) {
        Ok(v) => Some(v),
        Err(ComplexError::PurityGuard { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let h = report.timed("homology", || homology(&chain_complex_of(&k)))?;
    println!("graph: {source} ({} vertices, {} edges)", graph.n_vertices(), graph.edge_count());
    println!("face counts by dimension: {:?}", k.face_counts());
    println!("reduced euler characteristic: {}", k.euler_characteristic());
    match criterion {
        Some(full) => println!("pure: {pure} (pure of full dimension: {full})"),
        None => println!("pure: {pure}"),
    }
    println!("reduced homology: {h}");
    report.add_result(json!({
        "pure": pure,
        "pure_full_dimension": criterion,
        "euler_characteristic": k.euler_characteristic(),
    }));
    report.add_result(homology_json(&format!("delta({source})"), &k, &h));
    Ok(report.finish())
}

fn cmd_shelling(
    n: Option<usize>,
    builtin: &Option<String>,
    file: &Option<PathBuf>,
    max_facets: usize,
    quiet: bool,
    threads: usize,
) -> Result<Value, Failure> {
    let (graph, source) = match n {
        Some(n) => (complete_double_graph(n), format!("complete:{n}")),
        None => resolve_graph(builtin, file)?,
    };
    let mut report = RunReport::new("shelling", json!({ "graph": source }));
    let order = report.timed("shelling_order", || shelling_order(&graph))?;
    let labels: Vec<String> = order
        .iter()
        .map(|f| facet_label(&graph, f).map(|l| l.to_string()))
        .collect::<Result<_, _>>()?;
    if !quiet {
        for (label, facet) in labels.iter().zip(&order) {
            let edges: Vec<String> = facet
                .indices()
                .iter()
                .map(|&e| {
                    let (u, v) = graph.edge(e);
                    format!("{u}->{v}")
                })
                .collect();
            println!("{label} | {}", edges.join(","));
        }
    }
    let k = forest_complex(&graph);
    let faces: Vec<Vec<usize>> = order.iter().map(|f| f.indices().to_vec()).collect();
    let verdict =
        report.timed("verify", || verify_shelling_with(&k, &faces, threads, max_facets))?;
    println!("facets: {}", order.len());
    println!("shelling verified: {}", verdict.is_shelling);
    println!("homology facets (fully covered): {}", verdict.spanning_facets.len());
    report.add_result(json!({
        "facets": order.len(),
        "verified": verdict.is_shelling,
        "homology_facets": verdict.spanning_facets.len(),
        "order": labels,
    }));
    Ok(report.finish())
}

fn cmd_quotient(
    n: usize,
    mode: QuotientMode,
    max_cells: Option<usize>,
    dump_cells: bool,
    dump_e1: bool,
) -> Result<Value, Failure> {
    let limits = match max_cells {
        Some(cap) => CellLimits {
            max_n: n,
            max_cells: cap,
        },
        None => CellLimits::default(),
    };
    let mode_name = match mode {
        QuotientMode::Direct => "direct",
        QuotientMode::E1 => "e1",
        QuotientMode::Both => "both",
    };
    let mut report = RunReport::new("quotient", json!({ "n": n, "mode": mode_name }));
    if dump_cells {
        let basis = quotient::enumerate_cells_with(n, limits)?;
        print!("{}", basis.dump());
    }
    if dump_e1 {
        let page = quotient::d1_page_with(n, limits)?;
        print!("{}", page.dump());
    }
    let direct = if mode != QuotientMode::E1 {
        let h = report.timed("direct", || quotient::quotient_homology_with(n, limits))?;
        println!("direct cell homology: {h}");
        report.add_result(json!({
            "pipeline": "direct",
            "homology": homology_entries(&h, (n as i64) - 2),
        }));
        Some(h)
    } else {
        None
    };
    let spectral = if mode != QuotientMode::Direct {
        let h = report.timed("e1", || quotient::e1_homology_with(n, limits))?;
        println!("spectral sequence homology: {h}");
        report.add_result(json!({
            "pipeline": "e1",
            "homology": homology_entries(&h, (n as i64) - 2),
        }));
        Some(h)
    } else {
        None
    };
    if let (Some(a), Some(b)) = (&direct, &spectral) {
        if a != b {
            return Err(Failure::assertion(format!(
                "pipelines disagree: direct {a}, spectral {b}"
            )));
        }
        println!("pipelines agree");
        report.add_result(json!({ "agreement": true }));
    }
    Ok(report.finish())
}

fn cmd_fkn(n_max: usize) -> Result<Value, Failure> {
    let mut report = RunReport::new("fkn", json!({ "n_max": n_max }));
    let table = report.timed("table", || quotient::admissible_forest_table(n_max))?;
    println!("admissible forest counts f_{{k,n}} (rows k, columns n = 1..{n_max}):");
    for (i, row) in table.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        println!("k={}: {}", i + 1, cells.join(" "));
    }
    report.add_result(json!({ "rows": table.rows() }));
    Ok(report.finish())
}

fn cmd_family(name: &str, n: usize) -> Result<Value, Failure> {
    let mut report = RunReport::new("family", json!({ "name": name, "n": n }));
    let (formula, complex): (HomotopyType, SimplicialComplex) = match name {
        "L" | "string" => {
            if n < 1 {
                return Err(Failure::input("family L needs n >= 1"));
            }
            (
                delta_string_homotopy(n),
                forest_complex(&double_string_graph(n)?),
            )
        }
        "C" | "cycle" => (
            delta_cycle_homotopy(n)?,
            forest_complex(&double_cycle_graph(n)?),
        ),
        "indpath" | "calL" => {
            if n < 1 {
                return Err(Failure::input("family indpath needs n >= 1"));
            }
            (l_homotopy(n).homotopy, path_independence_complex(n))
        }
        "indcycle" | "calC" => {
            use forest_complexes::c_homotopy;
            (c_homotopy(n)?, cycle_independence_complex(n)?)
        }
        _ => {
            return Err(Failure::input(format!(
                "unknown family {name:?} (expected L, C, indpath, indcycle)"
            )))
        }
    };
    let expected = formula.homology();
    let direct = report.timed("homology", || homology(&chain_complex_of(&complex)))?;
    println!("formula: {formula}");
    println!("direct homology: {direct}");
    if expected != direct {
        return Err(Failure::assertion(format!(
            "formula predicts {expected}, direct homology is {direct}"
        )));
    }
    println!("match: true");
    report.add_result(json!({
        "homotopy_type": formula.to_string(),
        "homology": homology_entries(&direct, complex.dim().map_or(0, |d| d as i64)),
        "matches_formula": true,
    }));
    Ok(report.finish())
}

fn cmd_reduce(builtin: &Option<String>, file: &Option<PathBuf>) -> Result<Value, Failure> {
    let (graph, source) = resolve_graph(builtin, file)?;
    let mut report = RunReport::new("reduce", json!({ "graph": source }));
    if !is_essentially_tree(&graph) {
        return Err(Failure::input("graph is not essentially a tree"));
    }
    let outcome = report.timed("reduce", || reduce_essential_tree(&graph))?;
    let k = forest_complex(&graph);
    let direct = report.timed("homology", || homology(&chain_complex_of(&k)))?;
    match outcome {
        TreeReduction::Homology(h) => {
            let reported = h.nonnegative_part();
            println!("reduction homology: {reported}");
            println!("direct homology: {direct}");
            if reported != direct {
                return Err(Failure::assertion(format!(
                    "reduction predicts {reported}, direct homology is {direct}"
                )));
            }
            println!("match: true");
            report.add_result(json!({
                "outcome": "reduced",
                "homology": homology_entries(&reported, k.dim().map_or(0, |d| d as i64)),
                "matches_direct": true,
            }));
        }
        TreeReduction::Irreducible => {
            println!("reduction: irreducible (no rule sequence applies)");
            println!("direct homology: {direct}");
            report.add_result(json!({
                "outcome": "irreducible",
                "homology": homology_entries(&direct, k.dim().map_or(0, |d| d as i64)),
            }));
        }
    }
    Ok(report.finish())
}
