//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use coincident_rigidity::checks::{
    coincident_rigid_algebraic, coincident_rigid_combinatorial, cross_validate, extension_suite, k55_report,
    random_instance, XvalConfig,
};
use coincident_rigidity::fixtures;
use coincident_rigidity::linalg::{generic_rank, rigidity_matrix, CoincidenceSpec};
use coincident_rigidity::matroid::{greedy_in_order, greedy_rank, mt_rank_cover_min, MtOracle};
use coincident_rigidity::seed::derive_seed;
use coincident_rigidity::sparsity::{ly_rank_bruteforce, pebble_rank_graph};
use coincident_rigidity::{Result, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn instance(i: usize, root: u64, n_max: usize, t_sizes: &[usize]) -> Result<(coincident_rigidity::Graph, VertexSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(root, i as u64));
    let t = t_sizes[i % t_sizes.len()];
    let n = rng.gen_range(t.max(3)..=n_max);
    random_instance(&mut rng, n, t)
}

fn fig3_exact() -> Result<Outcome> {
    let f = fixtures::by_name("fig3-1").expect("fixture exists");
    let p = f.realization.as_ref().expect("printed realization");
    let r = rigidity_matrix(&f.graph, p)?.rank_exact();
    outcome(r == 15 && f.graph.n() == 9, format!("rank {r}, target 15"))
}

fn fig3_generic() -> Result<Outcome> {
    let mut ranks = Vec::new();
    for f in fixtures::fig3() {
        let spec = CoincidenceSpec::new(f.t.clone().unwrap())?;
        ranks.push(generic_rank(&f.graph, &spec, 2, 3, SEED)?.rank);
    }
    outcome(ranks.len() == 7 && ranks.iter().all(|&r| r == 15), format!("ranks {ranks:?}"))
}

fn fig4() -> Result<Outcome> {
    let f = fixtures::fig4();
    let (g, t) = (&f.graph, f.t.clone().unwrap());
    let uv = VertexSet::from([0, 1]);
    let whole = pebble_rank_graph(g);
    let by_t = pebble_rank_graph(&g.contract(&t)?);
    let by_uv = pebble_rank_graph(&g.contract(&uv)?);
    let c = coincident_rigid_combinatorial(g, &t)?;
    let a = coincident_rigid_algebraic(g, &t, 2, 3, SEED)?;
    let alg = a.reports[0].rank;
    let ok = whole == 13
        && by_t == 9
        && by_uv <= 10
        && c.combinatorial == Some(false)
        && c.failing_s == Some(uv)
        && alg == 12
        && a.algebraic == Some(false);
    let failing = c.failing_s.as_ref().map(|s| s.to_string()).unwrap_or_default();
    outcome(ok, format!("G {whole}, G/T {by_t}, G/uv {by_uv}, failing {failing}, algebraic {alg}"))
}

fn xval() -> Result<Outcome> {
    let r = cross_validate(&XvalConfig {
        samples: 500,
        n_max: 7,
        t_sizes: vec![1, 2, 3],
        seed: SEED,
        ..Default::default()
    })?;
    let total: usize = r.groups.iter().map(|g| g.instances).sum();
    outcome(
        r.passed() && total == 500,
        format!("{total} instances, {} queries, {} mismatches", r.queries, r.mismatches.len()),
    )
}

fn duality() -> Result<Outcome> {
    let bad: Vec<usize> = (0..200)
        .into_par_iter()
        .map(|i| {
            let (g, t) = instance(i, derive_seed(SEED, 5), 7, &[2, 3])?;
            let greedy = greedy_rank(&mut MtOracle::new(&g, &t)?, &g.edge_list())?.rank;
            let cover = mt_rank_cover_min(&g, &g.edge_list(), &t)?;
            Ok((greedy != cover.rank || !cover.witness.is_one_thin()).then_some(i))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    outcome(bad.is_empty(), format!("200 instances, disagreements {bad:?}"))
}

fn cover_pebble_generic() -> Result<Outcome> {
    let bad: Vec<usize> = (0..1000)
        .into_par_iter()
        .map(|i| {
            let (g, _) = instance(i, derive_seed(SEED, 6), 7, &[1])?;
            let ly = ly_rank_bruteforce(&g, &g.edge_list())?.rank;
            let pebble = pebble_rank_graph(&g);
            let generic = generic_rank(&g, &CoincidenceSpec::trivial(), 2, 3, derive_seed(SEED, i as u64))?.rank;
            Ok((ly != pebble || pebble != generic).then_some(i))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    outcome(bad.is_empty(), format!("1000 graphs, disagreements {bad:?}"))
}

fn k55() -> Result<Outcome> {
    let r = k55_report(3, SEED)?;
    let ok = r.coincident.rank <= 23 && r.minus_uv.rank == 24 && r.contracted.rank == 21;
    outcome(ok, format!("coincident {}, K55-uv {}, K55/uv {}", r.coincident.rank, r.minus_uv.rank, r.contracted.rank))
}

fn extensions() -> Result<Outcome> {
    let r = extension_suite(100, SEED)?;
    let parts: Vec<String> =
        r.moves.iter().map(|l| format!("{} {}/{} ok", l.name, l.instances - l.failures.len(), l.instances)).collect();
    outcome(r.passed(), parts.join(", "))
}

fn matroid_axioms() -> Result<Outcome> {
    let bad: Vec<usize> = (0..1000)
        .into_par_iter()
        .map(|i| {
            let (g, t) = instance(i, derive_seed(SEED, 9), 7, &[1, 2, 3, 4])?;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED ^ 9, i as u64));
            let mut oracle = MtOracle::new(&g, &t)?;
            let mut order = g.edge_list();
            let first = greedy_in_order(&mut oracle, &order)?.rank;
            for _ in 0..20 {
                order.shuffle(&mut rng);
                if greedy_in_order(&mut oracle, &order)?.rank != first {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    outcome(bad.is_empty(), format!("1000 instances x 20 orders, failures {bad:?}"))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("fig3-1 printed realization has exact rank 15", fig3_exact, Duration::from_secs(1)),
        ("all seven fig3 graphs reach generic rank 15", fig3_generic, Duration::from_secs(5)),
        ("fig4: G and G/T rigid, G/uv flexible, rank 12", fig4, Duration::from_secs(1)),
        ("mt and rt oracles agree on 500 instances", xval, Duration::from_secs(600)),
        ("greedy rank equals cover minimum on 200 instances", duality, Duration::from_secs(600)),
        ("cover, pebble and generic ranks agree on 1000 graphs", cover_pebble_generic, Duration::from_secs(600)),
        ("K55 in 3 dimensions", k55, Duration::from_secs(30)),
        ("extension moves preserve rank", extensions, Duration::from_secs(300)),
        ("greedy base size is order independent", matroid_axioms, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok && took <= *limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} | {name} | {detail} | {:.2}s (limit {}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
