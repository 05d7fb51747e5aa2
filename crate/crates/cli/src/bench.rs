//! Seeded benchmark suites comparing the sweep solvers with exhaustion.

use ameso::arp::{solve_arp, ArpConfig};
use ameso::lattice::{BoxDomain, Domain, IntervalDomain};
use ameso::models::{self, KnapsackInstance, TabulatedObjective};
use ameso::oracle;
use ameso::solver1d::{solve_1d, Solve1DConfig};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{exit, CliError, CliResult};

pub const SUITES: [&str; 3] = ["example5", "knapsack", "random"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub suite: &'static str,
    pub instance: usize,
    pub domain: String,
    pub domain_size: u64,
    #[serde(rename = "minimal_C")]
    pub minimal_c: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub solver_evaluations: u64,
    pub brute_force_evaluations: u64,
    pub min_value: f64,
    pub brute_force_min: f64,
    pub agree: bool,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A valid instance whose box has at most `max_points` points. `units`
/// fixes `W`; otherwise it is drawn as well.
pub fn random_knapsack<R: Rng>(rng: &mut R, units: Option<i64>, max_points: u64) -> KnapsackInstance {
    loop {
        let w1 = rng.gen_range(1..=12i64);
        let w2 = rng.gen_range(w1 + 1..=w1 + 12);
        let w3 = rng.gen_range(w2 + 1..=w2 + 15);
        let big_w = units.unwrap_or_else(|| rng.gen_range(2 * w2..=2 * w2 + 200));
        if big_w < 2 * w2 {
            continue;
        }
        let points = (big_w / (2 * w1) + 1) as u64 * (big_w / (2 * w2) + 1) as u64;
        if points > max_points {
            continue;
        }
        let c1 = rng.gen_range(1..=40i64);
        let c2_hi = (c1 * w2 - 1) / w1;
        if c2_hi <= c1 {
            continue;
        }
        let c2 = rng.gen_range(c1 + 1..=c2_hi);
        let c3_hi = (c2 * w3 - 1) / w2;
        if c3_hi <= c2 {
            continue;
        }
        let c3 = rng.gen_range(c2 + 1..=c3_hi);
        if let Ok(k) = KnapsackInstance::new(big_w, [w1, w2, w3], [c1, c2, c3]) {
            return k;
        }
    }
}

/// Random box table with integer values in `0..=max_value`.
pub fn random_table<R: Rng>(rng: &mut R, dim: usize, max_side: i64, max_value: i64) -> TabulatedObjective {
    let axes = (0..dim)
        .map(|_| {
            let lo = rng.gen_range(-5..=5);
            IntervalDomain::new(lo, lo + rng.gen_range(1..max_side)).expect("non-trivial")
        })
        .collect();
    let d = Domain::Box(BoxDomain::new(axes).expect("non-empty"));
    let values = (0..d.len())
        .map(|_| rng.gen_range(0..=max_value) as f64)
        .collect();
    TabulatedObjective::new(d, values).expect("sizes match")
}

fn example5_rows() -> CliResult<Vec<BenchRow>> {
    let t = models::example5_table();
    let f = t.to_objective();
    let axis = t.domain().as_interval().expect("interval table");
    let truth = oracle::brute_force_min(t.domain(), &f)?;
    let minimal = oracle::minimal_c(t.domain(), &f)?.minimal_c;
    let mut rows = Vec::new();
    for (i, l0) in (axis.lo()..=axis.hi()).enumerate() {
        let r = solve_1d(&axis, &f, &Solve1DConfig::new(7.0).start(l0))?;
        rows.push(BenchRow {
            suite: "example5",
            instance: i,
            domain: t.domain().to_string(),
            domain_size: axis.len(),
            minimal_c: minimal,
            c: 7.0,
            solver_evaluations: r.evaluations,
            brute_force_evaluations: truth.evaluations,
            min_value: r.min_value,
            brute_force_min: truth.min_value,
            agree: r.min_value == truth.min_value,
        });
    }
    Ok(rows)
}

fn arp_row(
    suite: &'static str,
    i: usize,
    d: &BoxDomain,
    f: &ameso::Objective,
    c: f64,
) -> CliResult<BenchRow> {
    let dom = Domain::Box(d.clone());
    let minimal = oracle::minimal_c(&dom, f)?.minimal_c;
    let truth = oracle::brute_force_min(&dom, f)?;
    let r = solve_arp(d, f, &ArpConfig::new(c))?;
    Ok(BenchRow {
        suite,
        instance: i,
        domain: d.to_string(),
        domain_size: d.len(),
        minimal_c: minimal,
        c,
        solver_evaluations: r.total_evaluations,
        brute_force_evaluations: truth.evaluations,
        min_value: r.min_value,
        brute_force_min: truth.min_value,
        agree: r.min_value == truth.min_value,
    })
}

pub fn run_suite(suite: &str, seed: u64, count: Option<usize>) -> CliResult<Vec<BenchRow>> {
    let mut rng = rng(seed);
    match suite {
        "example5" => example5_rows(),
        "knapsack" => (0..count.unwrap_or(20))
            .map(|i| {
                let k = random_knapsack(&mut rng, Some(100), 400);
                arp_row("knapsack", i, &k.domain(), &k.objective(), k.costs()[2] as f64)
            })
            .collect(),
        "random" => (0..count.unwrap_or(20))
            .map(|i| {
                let dim = rng.gen_range(2..=3);
                let t = random_table(&mut rng, dim, 6, 20);
                let f = t.to_objective();
                let c = oracle::minimal_c(t.domain(), &f)?.minimal_c;
                let d = t.domain().as_box().expect("box table");
                arp_row("random", i, &d, &f, c)
            })
            .collect(),
        other => Err(CliError::new(
            exit::USAGE,
            format!("unknown suite '{other}'; expected one of {}", SUITES.join(", ")),
        )),
    }
}

pub fn rows_csv(rows: &[BenchRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::new(exit::FAILURE, e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::new(exit::FAILURE, e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
