//! The `boolw` binary: graph generation, cut statistics, decomposition
//! search, (σ,ρ) solving, and the experiment suites.
//!
//! Exit codes: 0 success; 2 unreadable/malformed input file; 3 problem
//! proved infeasible; 4 enumeration or class cap exceeded; 5 invalid
//! command-line configuration.

use boolw::cut::{cut_stats, CutStats, DEFAULT_CAP, DEFAULT_VC_LIMIT};
use boolw::graph::Graph;
use boolw::sigma_rho::{solve_sigma_rho_detailed, SigmaRhoProblem, Solution, SolveError};
use boolw::tree::{
    bool_width, build_greedy_tree, build_random_tree, exact_boolw, local_search_improve,
    write_tree, DecompositionTree, DEFAULT_EXACT_N_MAX,
};
use boolw::VertexSet;
use boolw_cli::{
    emit, exit_code, experiments, parse_grid, parse_vertex_list, read_graph_file, read_tree_file,
    CliError,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

#[derive(Parser)]
#[command(name = "boolw", version, about = "Boolean-width toolkit", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphModel {
    Gnp,
    Regular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeMethod {
    Random,
    Greedy,
    Exact,
}

#[derive(Args)]
struct TreeSource {
    /// Decomposition tree file (nested parentheses)
    #[arg(long, conflicts_with_all = ["method"])]
    tree: Option<String>,
    /// Build a tree instead of reading one
    #[arg(long, value_enum, default_value = "greedy")]
    method: TreeMethod,
    /// Local-search budget (move evaluations) applied after building
    #[arg(long, default_value_t = 0)]
    local_search: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and print it in the native format
    Gen {
        /// Random graph model
        #[arg(long, value_enum, default_value = "gnp")]
        model: GraphModel,
        /// Number of vertices
        #[arg(long)]
        n: usize,
        /// Edge probability (gnp)
        #[arg(long)]
        p: Option<f64>,
        /// Vertex degree (regular)
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<String>,
    },
    /// Cut statistics (CSV) for explicit or random cuts of a graph
    Cutstats {
        /// Graph file
        #[arg(long)]
        graph: String,
        /// Explicit cut side as a comma-separated vertex list
        #[arg(long, conflicts_with = "trials")]
        side: Option<String>,
        /// Number of random cuts to sample instead
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Family enumeration cap
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// VC branch-and-bound node budget
        #[arg(long, default_value_t = DEFAULT_VC_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Build a decomposition tree and print it
    Decompose {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value = "greedy")]
        method: TreeMethod,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Local-search budget (move evaluations) applied after building
        #[arg(long, default_value_t = 0)]
        local_search: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Per-cut statistics (CSV) and the width of a decomposition tree
    Width {
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        tree: TreeSource,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_VC_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Solve a (σ,ρ) problem over a decomposition tree
    Solve {
        #[arg(long)]
        graph: String,
        /// Problem: mis, mds, pdom:<p>, pbdeg:<p>, or sigma=..,rho=..,dir=..
        #[arg(long)]
        problem: String,
        #[command(flatten)]
        tree: TreeSource,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Equivalence-class cap per cut
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Expansion of random k_p-sets in G(n,p)
    ExpExpansion {
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Number of sampled sets
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Boolean-width growth of heuristic trees on G(n,p) vs the counting ceiling
    ExpGrowth {
        /// Comma-separated n grid
        #[arg(long, default_value = "16,20,24,28")]
        grid: String,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Lower-bound certificates from balanced cuts of random regular graphs
    ExpRegular {
        #[arg(long, default_value = "20,30,40")]
        grid: String,
        /// Vertex degree
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_VC_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// VC vs cut-bool sandwich slacks on random cuts of G(n,p)
    ExpSandwich {
        #[arg(long, default_value_t = 18)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Number of (graph, cut) trials
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_VC_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; everything else is
            // a configuration error.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => exit_code::CONFIG,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { model, n, p, d, seed, out } => cmd_gen(model, n, p, d, seed, out),
        Command::Cutstats { graph, side, trials, seed, cap, limit, out } => {
            cmd_cutstats(&graph, side, trials, seed, cap, limit, out)
        }
        Command::Decompose { graph, method, seed, local_search, cap, out } => {
            let g = read_graph_file(&graph)?;
            let t = build_tree(&g, method, seed, local_search, cap)?;
            let mut text = write_tree(&t);
            text.push('\n');
            let w = bool_width(&g, &t, cap);
            eprintln!("width: lo={:.6} hi={:.6} exact={}", w.lo, w.hi, w.is_exact());
            emit(out.as_deref(), &text)
        }
        Command::Width { graph, tree, seed, cap, limit, out } => {
            cmd_width(&graph, tree, seed, cap, limit, out)
        }
        Command::Solve { graph, problem, tree, seed, cap, out } => {
            cmd_solve(&graph, &problem, tree, seed, cap, out)
        }
        Command::ExpExpansion { n, p, samples, seed, out } => {
            let r = experiments::expansion_check(n, p, samples, seed)?;
            eprintln!("k_p={} violations={}", r.kp, r.violations);
            emit(out.as_deref(), &r.csv)
        }
        Command::ExpGrowth { grid, p, trials, seed, cap, out } => {
            let grid = parse_grid(&grid)?;
            let r = experiments::gnp_growth(&grid, p, trials, seed, cap)?;
            eprintln!(
                "ceiling_violations={} greedy_not_worse={}/{}",
                r.ceiling_violations, r.greedy_not_worse, r.paired_trials
            );
            emit(out.as_deref(), &r.csv)
        }
        Command::ExpRegular { grid, d, trials, seed, cap, limit, out } => {
            let grid = parse_grid(&grid)?;
            let r = experiments::regular_lower(&grid, d, trials, seed, cap, limit)?;
            for (n, med) in &r.medians {
                eprintln!("median certificate at n={n}: {med:.6}");
            }
            emit(out.as_deref(), &r.csv)
        }
        Command::ExpSandwich { n, p, trials, seed, cap, limit, out } => {
            let r = experiments::sandwich(n, p, trials, seed, cap, limit)?;
            eprintln!("exact_rows={} violations={}", r.exact_rows, r.violations);
            emit(out.as_deref(), &r.csv)
        }
    }
}

fn cmd_gen(
    model: GraphModel,
    n: usize,
    p: Option<f64>,
    d: Option<usize>,
    seed: u64,
    out: Option<String>,
) -> Result<(), CliError> {
    let g = match model {
        GraphModel::Gnp => {
            let p = p.ok_or_else(|| CliError::config("--model gnp requires --p"))?;
            boolw::gen::gen_gnp(n, p, seed).map_err(|e| CliError::config(e.to_string()))?
        }
        GraphModel::Regular => {
            let d = d.ok_or_else(|| CliError::config("--model regular requires --d"))?;
            boolw::gen::gen_random_regular(n, d, seed)
                .map_err(|e| CliError::config(e.to_string()))?
        }
    };
    emit(out.as_deref(), &boolw::io::write_graph(&g))
}

fn cmd_cutstats(
    graph: &str,
    side: Option<String>,
    trials: Option<usize>,
    seed: u64,
    cap: usize,
    limit: usize,
    out: Option<String>,
) -> Result<(), CliError> {
    let g = read_graph_file(graph)?;
    let mut sides = Vec::new();
    match (side, trials) {
        (Some(list), None) => {
            let verts = parse_vertex_list(&list, g.n())?;
            sides.push(VertexSet::from_vertices(g.n(), verts));
        }
        (None, Some(k)) => {
            if k < 1 {
                return Err(CliError::config("--trials must be ≥ 1"));
            }
            for trial in 0..k {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial as u64);
                sides.push(VertexSet::from_vertices(
                    g.n(),
                    (0..g.n()).filter(|_| rng.random_bool(0.5)),
                ));
            }
        }
        _ => return Err(CliError::config("give exactly one of --side or --trials")),
    }
    let mut csv = String::new();
    writeln!(csv, "{}", experiments::SCHEMA_LINE).unwrap();
    writeln!(csv, "{}", CutStats::csv_header()).unwrap();
    for side in &sides {
        let stats = cut_stats(&g, side, cap, limit);
        if let Err(msg) = stats.check_chain(g.max_degree()) {
            panic!("cut-value chain violated on live data: {msg}");
        }
        writeln!(csv, "{}", stats.csv_row()).unwrap();
    }
    emit(out.as_deref(), &csv)
}

fn build_tree(
    g: &Graph,
    method: TreeMethod,
    seed: u64,
    local_search: usize,
    cap: usize,
) -> Result<DecompositionTree, CliError> {
    if g.n() == 0 {
        return Err(CliError::config("the empty graph has no decomposition tree"));
    }
    let t = match method {
        TreeMethod::Random => build_random_tree(g, seed),
        TreeMethod::Greedy => build_greedy_tree(g, seed),
        TreeMethod::Exact => {
            let (_, t) = exact_boolw(g, DEFAULT_EXACT_N_MAX)
                .map_err(|e| CliError::config(e.to_string()))?;
            t
        }
    };
    Ok(if local_search > 0 { local_search_improve(g, &t, local_search, cap) } else { t })
}

fn load_tree(g: &Graph, src: &TreeSource, seed: u64, cap: usize) -> Result<DecompositionTree, CliError> {
    match &src.tree {
        Some(path) => {
            let t = read_tree_file(path, g)?;
            Ok(if src.local_search > 0 {
                local_search_improve(g, &t, src.local_search, cap)
            } else {
                t
            })
        }
        None => build_tree(g, src.method, seed, src.local_search, cap),
    }
}

fn cmd_width(
    graph: &str,
    tree: TreeSource,
    seed: u64,
    cap: usize,
    limit: usize,
    out: Option<String>,
) -> Result<(), CliError> {
    let g = read_graph_file(graph)?;
    let t = load_tree(&g, &tree, seed, cap)?;
    let mut csv = String::new();
    writeln!(csv, "{}", experiments::SCHEMA_LINE).unwrap();
    writeln!(csv, "edge,{}", CutStats::csv_header()).unwrap();
    for cut in t.all_cuts() {
        let stats = cut_stats(&g, &cut.side_a, cap, limit);
        if let Err(msg) = stats.check_chain(g.max_degree()) {
            panic!("cut-value chain violated on live data: {msg}");
        }
        writeln!(csv, "{},{}", cut.edge, stats.csv_row()).unwrap();
    }
    let w = bool_width(&g, &t, cap);
    writeln!(csv, "# width_lo={:.6} width_hi={:.6} exact={}", w.lo, w.hi, w.is_exact()).unwrap();
    emit(out.as_deref(), &csv)
}

fn cmd_solve(
    graph: &str,
    problem: &str,
    tree: TreeSource,
    seed: u64,
    cap: usize,
    out: Option<String>,
) -> Result<(), CliError> {
    let g = read_graph_file(graph)?;
    let prob = SigmaRhoProblem::parse(problem).map_err(|e| CliError::config(e.to_string()))?;
    let t = load_tree(&g, &tree, seed, cap)?;
    let w = bool_width(&g, &t, cap);

    let mut text = String::new();
    writeln!(text, "problem: {problem}").unwrap();
    writeln!(text, "truncation level: {}", prob.d_eff()).unwrap();
    writeln!(text, "tree width: lo={:.6} hi={:.6} exact={}", w.lo, w.hi, w.is_exact()).unwrap();

    match solve_sigma_rho_detailed(&g, &t, &prob, cap) {
        Ok((solution, stats)) => {
            let max_inner = stats.iter().map(|s| s.inner_classes).max().unwrap_or(1);
            let max_outer = stats.iter().map(|s| s.outer_classes).max().unwrap_or(1);
            writeln!(text, "classes: max_inner={max_inner} max_outer={max_outer}").unwrap();
            for (w, s) in stats.iter().enumerate() {
                writeln!(
                    text,
                    "cut at node {w}: below={} inner={} outer={}",
                    s.subtree_size, s.inner_classes, s.outer_classes
                )
                .unwrap();
            }
            match solution {
                Solution::Optimal { size, witness } => {
                    writeln!(text, "optimum: {size}").unwrap();
                    let verts: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
                    writeln!(
                        text,
                        "witness: {}",
                        if verts.is_empty() { "(empty)".to_string() } else { verts.join(" ") }
                    )
                    .unwrap();
                    emit(out.as_deref(), &text)
                }
                Solution::Infeasible => {
                    writeln!(text, "infeasible: no (sigma,rho)-set exists").unwrap();
                    emit(out.as_deref(), &text)?;
                    Err(CliError::infeasible(format!("no feasible set for {problem}")))
                }
            }
        }
        Err(SolveError::CapExceeded { cap, side_size }) => Err(CliError::cap(format!(
            "class cap {cap} exceeded at the cut with a side of {side_size} vertices; \
             raise --cap or provide a narrower tree"
        ))),
    }
}
