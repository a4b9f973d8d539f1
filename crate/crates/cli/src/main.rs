//! `corig`: command-line front end. Every verb prints JSON on stdout.
//!
//! Exit codes: 0 consistent, 1 a proven equivalence failed, 2 usage or
//! input error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coincident_rigidity::checks::{check_graph, conjecture_search, cross_validate, k55_report, XvalConfig};
use coincident_rigidity::constructions::{henneberg_random, one_extension, vertex_split, zero_extension, SplitSpec};
use coincident_rigidity::graph::parse_graph_with_t;
use coincident_rigidity::linalg::{
    generic_rank_with, rigidity_matrix, rigidity_target, CoincidenceSpec, RankMethod, RealizationFile, MERSENNE_61,
};
use coincident_rigidity::matroid::{greedy_rank, mt_rank_cover_min, IndependenceOracle, MtOracle, RtOracle};
use coincident_rigidity::sparsity::{is_s_sparse_with, is_strongly_t_sparse_with, SparsityConfig, DEFAULT_CAP, LY_CAP};
use coincident_rigidity::{fixtures, Edge, Error, Graph, VertexId, VertexSet};

#[derive(Parser)]
#[command(name = "corig", version, about = "Rigidity of frameworks with coincident points")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct Sampling {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleChoice {
    Mt,
    Rt,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    #[value(name = "0ext")]
    ZeroExt,
    #[value(name = "1ext")]
    OneExt,
    Split,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rigidity-matrix rank at sampled T-coincident realizations, or at a
    /// given realization.
    Rank {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertex ids or labels; defaults to the file's T.
        #[arg(long = "T")]
        t: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
        /// Rank over GF(2^61 - 1) instead of the rationals.
        #[arg(long)]
        mod_p: bool,
        #[arg(long)]
        realization: Option<PathBuf>,
    },
    /// S-sparsity (or strong T-sparsity) with a violation witness.
    Sparse {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "T")]
        t: Option<String>,
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Greedy matroid rank with the chosen independence oracle.
    Mrank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "T")]
        t: Option<String>,
        #[arg(long, value_enum, default_value_t = OracleChoice::Both)]
        oracle: OracleChoice,
        /// Add a minimizing cover as a dual certificate.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Random graph generator.
    Gen {
        #[arg(long)]
        henneberg: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Apply a construction move. Arguments: `a,b` for 0ext, `u,v,x` for
    /// 1ext, `z:U1:U2:U3` for split (lists comma-separated, may be empty).
    Transform {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        args: String,
    },
    /// Combinatorial and algebraic verdicts for one graph, or for every
    /// bundled fixture when no graph is given.
    Check {
        #[arg(long, conflicts_with = "fixture")]
        graph: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long = "T")]
        t: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compare the two oracles on random instances.
    Xval {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value = "1,2,3")]
        t_sizes: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Search for disagreements with |T| >= 4.
    Conjecture {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        t_size: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Dump the bundled graphs.
    Fixtures {
        #[arg(long)]
        name: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn load(path: &PathBuf) -> Result<(Graph, Option<VertexSet>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_graph_with_t(&text)?)
}

fn vertex(g: &Graph, tok: &str) -> Result<VertexId, Failure> {
    let tok = tok.trim();
    if let Ok(v) = tok.parse::<usize>() {
        g.check_vertex(v)?;
        return Ok(v);
    }
    g.vertex_by_name(tok).ok_or_else(|| Failure::Usage(format!("unknown vertex {tok:?}")))
}

fn vertex_list(g: &Graph, s: &str) -> Result<Vec<VertexId>, Failure> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| vertex(g, x)).collect()
}

fn pick_t(g: &Graph, flag: &Option<String>, file: Option<VertexSet>) -> Result<Option<VertexSet>, Failure> {
    match flag {
        Some(s) => Ok(Some(vertex_list(g, s)?.into_iter().collect())),
        None => Ok(file),
    }
}

fn need_t(t: Option<VertexSet>) -> Result<VertexSet, Failure> {
    t.filter(|t| !t.is_empty())
        .ok_or_else(|| Failure::Usage("this verb needs --T (or a T field in the graph file)".into()))
}

fn graph_value(g: &Graph, t: Option<&VertexSet>) -> Value {
    serde_json::to_value(g.to_file(t)).expect("graph serializes")
}

fn rank(graph: &PathBuf, t: &Option<String>, s: &Sampling, mod_p: bool, realization: &Option<PathBuf>) -> Outcome {
    let (g, file_t) = load(graph)?;
    let t = pick_t(&g, t, file_t)?;
    if let Some(path) = realization {
        let text =
            fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file: RealizationFile =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad realization: {e}")))?;
        let p = file.into_realization()?;
        let m = rigidity_matrix(&g, &p)?;
        let r = if mod_p { m.rank_modp(MERSENNE_61)? } else { m.rank_exact() };
        let target = rigidity_target(g.n(), p.dim());
        let out = json!({
            "n": g.n(), "edges": g.edge_count(), "d": p.dim(), "rank": r, "target": target,
            "rigid": r == target, "independent": r == g.edge_count(),
            "method": if mod_p { RankMethod::PrimeField } else { RankMethod::ExactRational },
        });
        return Ok((out, true));
    }
    let spec = match &t {
        Some(t) if !t.is_empty() => CoincidenceSpec::new(t.clone())?,
        _ => CoincidenceSpec::trivial(),
    };
    let method = if mod_p { RankMethod::PrimeField } else { RankMethod::auto(g.n()) };
    let report = generic_rank_with(&g, &spec, s.d, s.trials, s.seed, method)?;
    let mut out = serde_json::to_value(&report).expect("report serializes");
    out["n"] = json!(g.n());
    out["d"] = json!(s.d);
    out["T"] = json!(t.as_ref().map(|t| t.iter().map(|v| g.display_name(v)).collect::<Vec<_>>()));
    Ok((out, true))
}

fn sparse(graph: &PathBuf, t: &Option<String>, strong: bool, cap: usize) -> Outcome {
    let (g, file_t) = load(graph)?;
    let t = need_t(pick_t(&g, t, file_t)?)?;
    let cfg = SparsityConfig { cap };
    let v = if strong { is_strongly_t_sparse_with(&g, &t, cfg)? } else { is_s_sparse_with(&g, &t, cfg)? };
    let out = json!({
        "sparse": v.is_none(),
        "strong": strong,
        "violation": v.as_ref().map(|v| v.to_json(&g)),
    });
    Ok((out, true))
}

fn mrank(graph: &PathBuf, t: &Option<String>, oracle: OracleChoice, witness: bool, s: &Sampling) -> Outcome {
    let (g, file_t) = load(graph)?;
    let t = need_t(pick_t(&g, t, file_t)?)?;
    let edges = g.edge_list();
    let mut certs = Vec::new();
    let mut ranks = Vec::new();
    if oracle != OracleChoice::Rt {
        let mut mt = MtOracle::new(&g, &t)?;
        let mut cert = greedy_rank(&mut mt, &edges)?;
        if witness && (2..=LY_CAP).contains(&t.len()) && g.n() <= LY_CAP {
            cert.dual = Some(mt_rank_cover_min(&g, &edges, &t)?.witness);
        }
        ranks.push((cert.rank, mt.conjectural()));
        certs.push(cert.to_json(&g));
    }
    if oracle != OracleChoice::Mt {
        let mut rt = RtOracle::new(&g, &t, s.d, s.trials, s.seed)?;
        let cert = greedy_rank(&mut rt, &edges)?;
        ranks.push((cert.rank, false));
        certs.push(cert.to_json(&g));
    }
    // Only a proven equality can be violated.
    let consistent = !(ranks.len() == 2 && s.d == 2 && !ranks[0].1 && ranks[0].0 != ranks[1].0);
    Ok((
        json!({ "T": t.iter().map(|v| g.display_name(v)).collect::<Vec<_>>(), "certificates": certs, "consistent": consistent }),
        consistent,
    ))
}

fn transform(op: Op, graph: &PathBuf, args: &str) -> Outcome {
    let (g, t) = load(graph)?;
    let out = match op {
        Op::ZeroExt => match vertex_list(&g, args)?.as_slice() {
            [a, b] => zero_extension(&g, *a, *b)?,
            _ => return Err(Failure::Usage("0ext takes --args a,b".into())),
        },
        Op::OneExt => match vertex_list(&g, args)?.as_slice() {
            [u, v, x] => {
                if !g.has_edge(*u, *v) {
                    return Err(Failure::Usage(format!("{} is not an edge", Edge::new(*u, *v))));
                }
                one_extension(&g, Edge::new(*u, *v), *x)?
            }
            _ => return Err(Failure::Usage("1ext takes --args u,v,x".into())),
        },
        Op::Split => {
            let parts: Vec<&str> = args.split(':').collect();
            let [z, u1, u2, u3] = parts.as_slice() else {
                return Err(Failure::Usage("split takes --args z:U1:U2:U3".into()));
            };
            let set = |s: &str| -> Result<VertexSet, Failure> { Ok(vertex_list(&g, s)?.into_iter().collect()) };
            let spec = SplitSpec { z: vertex(&g, z)?, u1: set(u1)?, u2: set(u2)?, u3: set(u3)? };
            vertex_split(&g, &spec)?
        }
    };
    Ok((graph_value(&out, t.as_ref()), true))
}

fn check(graph: &Option<PathBuf>, fixture: &Option<String>, t: &Option<String>, s: &Sampling) -> Outcome {
    let targets: Vec<(String, Graph, Option<VertexSet>, usize)> = match (graph, fixture) {
        (Some(path), _) => {
            let (g, file_t) = load(path)?;
            let t = pick_t(&g, t, file_t)?;
            vec![(path.display().to_string(), g, t, s.d)]
        }
        (None, Some(name)) => {
            let f = fixtures::by_name(name).ok_or_else(|| Failure::Usage(format!("no fixture named {name:?}")))?;
            let t = pick_t(&f.graph, t, f.t.clone())?;
            let d = if f.name == "k55" { 3 } else { s.d };
            vec![(f.name, f.graph, t, d)]
        }
        (None, None) => fixtures::all()
            .into_iter()
            .map(|f| {
                let d = if f.name == "k55" { 3 } else { s.d };
                (f.name, f.graph, f.t, d)
            })
            .collect(),
    };
    let mut results = Vec::new();
    let mut consistent = true;
    for (name, g, t, d) in targets {
        let t = need_t(t)?;
        let v = check_graph(&g, &t, d, s.trials, s.seed)?;
        consistent &= v.consistent();
        let mut j = v.to_json();
        j["name"] = json!(name);
        j["d"] = json!(d);
        results.push(j);
    }
    let mut out = json!({ "results": results, "consistent": consistent });
    if graph.is_none() && fixture.as_deref().is_none_or(|f| f == "k55") {
        let k = k55_report(s.trials, s.seed)?;
        consistent &= k.holds();
        out["k55"] = serde_json::to_value(&k).expect("report serializes");
        out["k55"]["holds"] = json!(k.holds());
        out["consistent"] = json!(consistent);
    }
    Ok((out, consistent))
}

fn xval(n_max: usize, t_sizes: &str, samples: usize, seed: u64, trials: usize) -> Outcome {
    let t_sizes = t_sizes
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("bad --t-sizes entry {x:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let r = cross_validate(&XvalConfig { n_min: 3, n_max, t_sizes, samples, seed, trials })?;
    let passed = r.passed();
    let mut out = serde_json::to_value(&r).expect("report serializes");
    out["passed"] = json!(passed);
    Ok((out, passed))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Rank { graph, t, sampling, mod_p, realization } => rank(graph, t, sampling, *mod_p, realization),
        Cmd::Sparse { graph, t, strong, cap } => sparse(graph, t, *strong, *cap),
        Cmd::Mrank { graph, t, oracle, witness, sampling } => mrank(graph, t, *oracle, *witness, sampling),
        Cmd::Gen { henneberg, seed } => Ok((graph_value(&henneberg_random(*henneberg, *seed)?, None), true)),
        Cmd::Transform { op, graph, args } => transform(*op, graph, args),
        Cmd::Check { graph, fixture, t, sampling } => check(graph, fixture, t, sampling),
        Cmd::Xval { n_max, t_sizes, samples, seed, trials } => xval(*n_max, t_sizes, *samples, *seed, *trials),
        Cmd::Conjecture { n_max, t_size, budget, seed } => {
            let r = conjecture_search(*n_max, *t_size, *budget, *seed)?;
            Ok((serde_json::to_value(&r).expect("report serializes"), true))
        }
        Cmd::Fixtures { name } => {
            let all: Vec<_> =
                fixtures::all().into_iter().filter(|f| name.as_ref().is_none_or(|n| &f.name == n)).collect();
            if all.is_empty() {
                return Err(Failure::Usage(format!("no fixture named {:?}", name.as_deref().unwrap_or(""))));
            }
            let files: Vec<_> = all.iter().map(|f| f.to_file()).collect();
            Ok((serde_json::to_value(files).expect("fixtures serialize"), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => {
            let text = serde_json::to_string_pretty(&value).expect("json prints");
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, format!("{text}\n")) {
                    eprintln!("{}", json!({ "error": format!("cannot write {}: {e}", path.display()) }));
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            let msg = match f {
                Failure::Usage(m) => m,
                Failure::Lib(e) => e.to_string(),
            };
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}
