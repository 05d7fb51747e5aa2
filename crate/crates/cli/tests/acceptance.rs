//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use ameso::arp::{solve_arp, verify_property5, ArpConfig, ArpReport};
use ameso::lattice::{is_interval, BoxDomain, Domain, ExplicitSet, IntPoint, IntervalDomain};
use ameso::models::{self, TabulatedObjective};
use ameso::objective::{separable_sum, Objective};
use ameso::oracle;
use ameso::solver1d::{solve_1d, Side, Solve1DConfig};
use ameso_cli::bench::{random_knapsack, random_table, rng};
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn interval(lo: i64, hi: i64) -> IntervalDomain {
    IntervalDomain::new(lo, hi).unwrap()
}

fn run_cli(args: &[&str]) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_ameso"))
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success(), "{args:?}");
    serde_json::from_slice(&out.stdout).unwrap()
}

fn example5_run(c: f64, expect_visited: i64) -> Check {
    let t = models::example5_table();
    let f = t.to_objective();
    let axis = t.domain().as_interval().unwrap();
    let cfg = Solve1DConfig::new(c).start(13);
    let t0 = Instant::now();
    let r = solve_1d(&axis, &f, &cfg).map_err(|e| e.to_string())?;
    let took = t0.elapsed();
    ensure!(r.argmin == IntPoint::scalar(17), "argmin {}", r.argmin);
    ensure!(r.min_value == 4.0, "min {}", r.min_value);
    ensure!(
        r.visited == (1..=expect_visited).collect::<Vec<_>>(),
        "visited {:?}",
        r.visited
    );
    ensure!(
        r.evaluations == expect_visited as u64,
        "evaluations {}",
        r.evaluations
    );
    ensure!(
        f.eval_count() == expect_visited as u64,
        "objective counter {}",
        f.eval_count()
    );
    let cli = run_cli(&["solve", "example5", "--C", &c.to_string(), "--start", "13"]);
    ensure!(
        cli == serde_json::to_value(&r).unwrap(),
        "CLI report differs from library report"
    );
    Ok(format!(
        "argmin 17, min 4, visited 1..={expect_visited}, {} evals, solve {took:?}",
        r.evaluations
    ))
}

fn ac1() -> Check {
    let t = models::example5_table();
    let f = t.to_objective();
    let axis = t.domain().as_interval().unwrap();
    // best of several runs, so scheduler noise does not decide the timing
    let best = (0..20)
        .map(|_| {
            let t0 = Instant::now();
            let _ = solve_1d(&axis, &f, &Solve1DConfig::new(7.0).start(13));
            t0.elapsed()
        })
        .min()
        .unwrap();
    within(best, Duration::from_millis(1), "example 5 solve")?;
    example5_run(7.0, 27)
}

fn ac2() -> Check {
    example5_run(8.0, 31)
}

fn ac3() -> Check {
    let t0 = Instant::now();
    let d = Domain::Interval(models::quartic_domain());
    let f = models::quartic_objective();
    let cert = oracle::minimal_c(&d, &f).map_err(|e| e.to_string())?;
    ensure!(cert.minimal_c <= 4.0, "minimal C {}", cert.minimal_c);
    ensure!(cert.pairs_checked == 41 * 42 / 2, "pairs {}", cert.pairs_checked);
    let gap = models::quartic(1) - models::quartic(3);
    ensure!(gap == 4.0, "f(1) - f(3) = {gap}");
    let axis = models::quartic_domain();
    for l0 in axis.lo()..=axis.hi() {
        let r = solve_1d(&axis, &f, &Solve1DConfig::new(4.0).start(l0)).map_err(|e| e.to_string())?;
        ensure!(
            r.argmin == IntPoint::scalar(3) && r.min_value == -3.75,
            "start {l0}: {} {}",
            r.argmin,
            r.min_value
        );
    }
    let took = t0.elapsed();
    within(took, Duration::from_millis(10), "oracle plus 41 solves")?;
    Ok(format!(
        "minimal C {}, f(1)-f(3)=4, argmin 3 min -3.75 from all 41 starts, {took:?}",
        cert.minimal_c
    ))
}

fn top_value(r: &ArpReport, x: i64) -> Option<f64> {
    r.tree
        .report
        .trace
        .iter()
        .find(|t| t.point == Some(x) && t.side != Side::Step4)
        .and_then(|t| t.value)
}

fn ac4() -> Check {
    let t0 = Instant::now();
    let d = models::example6_domain();
    let f = models::example6_objective();
    let r = solve_arp(&d, &f, &ArpConfig::new(1.0).start(1, 80)).map_err(|e| e.to_string())?;
    let truth = oracle::brute_force_min(&Domain::Box(d.clone()), &f).map_err(|e| e.to_string())?;
    ensure!(
        (r.min_value - truth.min_value).abs() <= 1e-9,
        "ARP min {} vs grid min {}",
        r.min_value,
        truth.min_value
    );
    ensure!(
        r.argmin == IntPoint::new(vec![97, 97]).unwrap(),
        "argmin {}",
        r.argmin
    );
    ensure!((r.min_value - 190.0093).abs() < 5e-3, "min {}", r.min_value);
    let f80 = top_value(&r, 80).ok_or("x2 = 80 not evaluated")?;
    let f66 = top_value(&r, 66).ok_or("x2 = 66 not evaluated")?;
    ensure!((f80 - 190.4220).abs() < 5e-3, "f2*(80) = {f80}");
    ensure!((f66 - 191.1640).abs() < 5e-3, "f2*(66) = {f66}");
    let took = t0.elapsed();
    within(took, Duration::from_secs(5), "example 6")?;
    Ok(format!(
        "argmin (97,97), min {:.4}, f2*(80)={f80:.4}, f2*(66)={f66:.4}, grid min matches, {took:?}",
        r.min_value
    ))
}

fn ac5() -> Check {
    let t0 = Instant::now();
    let mut g = rng(5);
    let n = 200;
    let mut largest = 0;
    for i in 0..n {
        let k = random_knapsack(&mut g, None, 400);
        let d = k.domain();
        ensure!(d.len() <= 400, "instance {i}: box of {} points", d.len());
        largest = largest.max(d.len());
        let dom = Domain::Box(d.clone());
        let f = k.objective();
        let c3 = k.costs()[2] as f64;
        let cert = oracle::minimal_c(&dom, &f).map_err(|e| e.to_string())?;
        ensure!(
            cert.minimal_c <= c3,
            "instance {i} {k:?}: minimal C {} > c3 {c3}",
            cert.minimal_c
        );
        let truth = oracle::brute_force_min(&dom, &f).map_err(|e| e.to_string())?;
        let r = solve_arp(&d, &f, &ArpConfig::new(c3)).map_err(|e| e.to_string())?;
        ensure!(
            r.min_value == truth.min_value,
            "instance {i} {k:?}: ARP {} vs {}",
            r.min_value,
            truth.min_value
        );
    }
    let took = t0.elapsed();
    within(took, Duration::from_secs(30), "knapsack suite")?;
    Ok(format!(
        "{n} instances, boxes up to {largest} points, minimal C <= c3 and ARP exact, {took:?}"
    ))
}

fn ac6() -> Check {
    let mut g = rng(6);
    let mut solves = 0u64;
    for i in 0..1000 {
        let len = g.gen_range(2..=100);
        let lo = g.gen_range(-50..=50);
        let axis = interval(lo, lo + len - 1);
        let values = (0..len).map(|_| g.gen_range(0..=20) as f64).collect();
        let t = TabulatedObjective::new(Domain::Interval(axis), values).unwrap();
        let f = t.to_objective();
        let c = oracle::minimal_c(t.domain(), &f)
            .map_err(|e| e.to_string())?
            .minimal_c;
        let truth = oracle::brute_force_min(t.domain(), &f).map_err(|e| e.to_string())?;
        for l0 in axis.lo()..=axis.hi() {
            let r = solve_1d(&axis, &f, &Solve1DConfig::new(c).start(l0)).map_err(|e| e.to_string())?;
            ensure!(
                r.min_value == truth.min_value,
                "1-D table {i}, start {l0}: {} vs {}",
                r.min_value,
                truth.min_value
            );
            solves += 1;
        }
    }
    let mut arp_runs = 0;
    for i in 0..100 {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let t = random_table(&mut g, dim, 12, 20);
        let d = t.domain().as_box().unwrap();
        let f = t.to_objective();
        let c = oracle::minimal_c(t.domain(), &f)
            .map_err(|e| e.to_string())?
            .minimal_c;
        let truth = oracle::brute_force_min(t.domain(), &f).map_err(|e| e.to_string())?;
        let mut configs = vec![ArpConfig::new(c)];
        for _ in 0..3 {
            let mut cfg = ArpConfig::new(c);
            for (a, ax) in d.axes().iter().enumerate() {
                cfg = cfg.start(a, g.gen_range(ax.lo()..=ax.hi()));
            }
            configs.push(cfg);
        }
        for cfg in configs {
            let r = solve_arp(&d, &f, &cfg).map_err(|e| e.to_string())?;
            ensure!(
                r.min_value == truth.min_value,
                "{dim}-D table {i} {d}: {} vs {}",
                r.min_value,
                truth.min_value
            );
            ensure!(
                truth.argmin_set.contains(&r.argmin),
                "{dim}-D table {i}: argmin {} not optimal",
                r.argmin
            );
            arp_runs += 1;
        }
    }
    Ok(format!("1000 1-D tables ({solves} solves over all starts), 100 2-D/3-D boxes ({arp_runs} ARP runs), 0 failures"))
}

fn ac7() -> Check {
    let mut sets = 0u64;
    let mut intervals = 0u64;
    for lo in -20..=9 {
        for mask in 1u32..(1 << 12) {
            let s = ExplicitSet::from_values((0..12).filter(|b| mask >> b & 1 == 1).map(|b| lo + b)).unwrap();
            let a = is_interval(&s).map_err(|e| e.to_string())?;
            let b = oracle::is_ameso_set(&Domain::Set(s.clone())).map_err(|e| e.to_string())?;
            ensure!(a == b, "mismatch on {s}: interval {a}, Ameso {b}");
            sets += 1;
            intervals += a as u64;
        }
    }
    ensure!(sets >= 10_000, "only {sets} sets");
    Ok(format!("{sets} sets ({intervals} intervals), 0 mismatches"))
}

fn ac8() -> Check {
    let mut g = rng(8);
    for _ in 0..100_000 {
        let (a, b) = (g.gen_range(-1e3..=1e3), g.gen_range(-1e3..=1e3));
        ensure!(models::lemma5_checks(a, b), "chain fails at ({a}, {b})");
    }
    let mut pairs = 0;
    for a in -50..=50 {
        for b in -50..=50 {
            ensure!(
                models::lemma5_integer(a, b),
                "integer identity fails at ({a}, {b})"
            );
            ensure!(
                models::lemma5_checks(a as f64, b as f64),
                "chain fails at ({a}, {b})"
            );
            pairs += 1;
        }
    }
    Ok(format!("100000 real pairs, {pairs} integer pairs, 0 failures"))
}

fn table_on(d: &Domain, g: &mut impl Rng) -> Objective {
    let values = (0..d.len()).map(|_| g.gen_range(0..=20) as f64).collect();
    TabulatedObjective::new(d.clone(), values).unwrap().to_objective()
}

fn convex_1d(axis: IntervalDomain, g: &mut impl Rng) -> Objective {
    let mut step = g.gen_range(-30..=0);
    let mut v = g.gen_range(0..=50);
    let mut values = Vec::new();
    for _ in 0..axis.len() {
        values.push(v as f64);
        step += g.gen_range(0..=4);
        v += step;
    }
    TabulatedObjective::new(Domain::Interval(axis), values)
        .unwrap()
        .to_objective()
}

fn naive_midpoint_convex(d: &Domain, f: &Objective) -> bool {
    let pts: Vec<_> = d.iter().collect();
    pts.iter().all(|x| {
        pts.iter().all(|y| {
            let lo = ameso::lattice::midpoint_floor(x, y).unwrap();
            let hi = ameso::lattice::midpoint_ceil(x, y).unwrap();
            f.eval(x).unwrap() + f.eval(y).unwrap() >= f.eval(&lo).unwrap() + f.eval(&hi).unwrap()
        })
    })
}

fn random_small_domain(g: &mut impl Rng) -> Domain {
    let dim = g.gen_range(1..=2);
    let axes: Vec<_> = (0..dim)
        .map(|_| {
            let lo = g.gen_range(-5..=5);
            interval(lo, lo + g.gen_range(1..=7))
        })
        .collect();
    Domain::Box(BoxDomain::new(axes).unwrap()).normalize()
}

fn ac9() -> Check {
    let mut g = rng(9);
    let mut counts = [0u32; 6];
    for i in 0..300 {
        let d = random_small_domain(&mut g);
        let f = table_on(&d, &mut g);
        let c = oracle::minimal_c(&d, &f).map_err(|e| e.to_string())?.minimal_c;
        // plus-minus
        ensure!(
            oracle::plus_minus_check(&d, &f, c, 0.0).unwrap(),
            "case {i}: plus-minus fails on {d} with C={c}"
        );
        counts[0] += 1;
        // C-monotonicity and minimality
        for extra in [0.0, 0.5, 3.0] {
            ensure!(
                oracle::satisfies_ameso(&d, &f, c + extra, 0.0).unwrap(),
                "case {i}: C+{extra} rejected"
            );
        }
        if c > 0.0 {
            ensure!(
                !oracle::satisfies_ameso(&d, &f, c - 0.5, 0.0).unwrap(),
                "case {i}: C-0.5 accepted"
            );
        }
        counts[1] += 1;
        // additivity
        let h = table_on(&d, &mut g);
        let ch = oracle::minimal_c(&d, &h).unwrap().minimal_c;
        let (a, b) = (g.gen_range(0..=3) as f64, g.gen_range(0..=3) as f64);
        let sum = f.combine(a, &h, b).unwrap();
        let cs = oracle::minimal_c(&d, &sum).unwrap().minimal_c;
        ensure!(
            cs <= a * c + b * ch,
            "case {i}: C({a}f+{b}g) = {cs} > {}",
            a * c + b * ch
        );
        counts[2] += 1;
    }
    for i in 0..200 {
        // separable sums of convex functions
        let n = g.gen_range(1..=3);
        let axes: Vec<_> = (0..n)
            .map(|_| {
                let lo = g.gen_range(-4..=4);
                interval(lo, lo + g.gen_range(1..=5))
            })
            .collect();
        let fs: Vec<_> = axes.iter().map(|&ax| convex_1d(ax, &mut g)).collect();
        let ws: Vec<f64> = (0..n).map(|_| g.gen_range(0..=3) as f64).collect();
        let sep = separable_sum(&fs, &ws).unwrap();
        let d = Domain::Box(BoxDomain::new(axes).unwrap());
        let c = oracle::minimal_c(&d, &sep).unwrap().minimal_c;
        ensure!(c == 0.0, "separable case {i}: minimal C {c}");
        counts[3] += 1;
        // midpoint convexity, tested against an independent pair scan
        let one = Domain::Interval(d.as_box().unwrap().axis(0));
        let f = if i % 2 == 0 {
            convex_1d(one.as_interval().unwrap(), &mut g)
        } else {
            table_on(&one, &mut g)
        };
        let mc = naive_midpoint_convex(&one, &f);
        ensure!(
            oracle::is_midpoint_convex(&one, &f, 0.0).unwrap() == mc,
            "midpoint case {i}: classifier disagrees"
        );
        if mc {
            ensure!(
                oracle::minimal_c(&one, &f).unwrap().minimal_c == 0.0,
                "midpoint case {i}: C > 0"
            );
            counts[4] += 1;
        }
    }
    for i in 0..100 {
        let dim = if i % 2 == 0 { 2 } else { 3 };
        let t = random_table(&mut g, dim, 5, 20);
        let d = t.domain().as_box().unwrap();
        let f = t.to_objective();
        for mask in 1u32..(1 << dim) - 1 {
            let kept: Vec<usize> = (0..dim).filter(|a| mask >> a & 1 == 1).collect();
            ensure!(
                verify_property5(&d, &f, &kept).unwrap(),
                "conditional pair case {i}, axes {kept:?}"
            );
            counts[5] += 1;
        }
    }
    ensure!(
        counts[4] >= 50,
        "only {} midpoint-convex cases generated",
        counts[4]
    );
    Ok(format!(
        "plus-minus {}, monotonicity {}, additivity {}, separable-convex {}, midpoint-convex {}, conditional pairs {}; 0 failures",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "Example 5 golden run", ac1),
        ("AC2", "Example 5 full scan with C=8", ac2),
        ("AC3", "Examples 3/4 quartic", ac3),
        ("AC4", "Example 6 recursive procedure", ac4),
        ("AC5", "knapsack Ameso(c3) certificate and ARP", ac5),
        ("AC6", "oracle equivalence of both solvers", ac6),
        ("AC7", "1-D Ameso sets are intervals", ac7),
        ("AC8", "floor/ceiling identities", ac8),
        ("AC9", "Ameso pair properties and conditional pairs", ac9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let t0 = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = t0.elapsed();
        match result {
            Ok(detail) => println!("{id} PASS {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
