//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits non-zero on any FAIL.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use gamecheck::atl::{parse_formula, Phi};
use gamecheck::game::reachable_states;
use gamecheck::global::check_global;
use gamecheck::lcgs::compile;
use gamecheck::local::{check_local, check_local_with, LocalOptions};
use gamecheck::models::{self, Query};
use gamecheck::oracle::{holds_initially, random_formula_with_root, random_game, replay_satisfies, SHAPES};
use gamecheck::strategy::{bidist_expr, ihs_dist, lp_solve, BiDist, LinearConstraints, Strategy};
use gamecheck::edg::{ConfigId, Edge};
use gamecheck::expr::{BinaryOp, Expr};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const WORKERS: [usize; 4] = [1, 2, 4, 8];
const WATCHDOG: Duration = Duration::from_secs(60);
const ORACLE_STATES: usize = 10_000;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// One local run of a suite query.
#[derive(Debug, Clone)]
struct LocalRun {
    verdict: bool,
    explored: usize,
    downward: usize,
    elapsed: Duration,
}

/// Everything measured on one suite query.
struct Measured {
    query: Query,
    states: Option<usize>,
    oracle: Option<bool>,
    global: bool,
    configurations: usize,
    /// `None` when the watchdog fired.
    local: BTreeMap<(Strategy, usize), Option<LocalRun>>,
}

fn with_watchdog<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Option<T> {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(WATCHDOG).ok()
}

fn measure(query: &Query) -> Measured {
    let game = compile(&query.model).unwrap();
    let phi = parse_formula(&query.formula, &game).unwrap();
    let states = reachable_states(&game, ORACLE_STATES + 1).ok().map(|s| s.len());
    let oracle = states.map(|_| holds_initially(&game, &phi).unwrap());
    let global = check_global(&game, &phi).unwrap();
    let mut local = BTreeMap::new();
    for s in Strategy::ALL {
        for w in WORKERS {
            let q = query.clone();
            let run = with_watchdog(move || {
                let game = compile(&q.model).unwrap();
                let phi = parse_formula(&q.formula, &game).unwrap();
                let start = Instant::now();
                let out = check_local(&game, &phi, s, w).unwrap();
                LocalRun {
                    verdict: out.verdict,
                    explored: out.stats.explored,
                    downward: out.stats.downward_transitions,
                    elapsed: start.elapsed(),
                }
            });
            local.insert((s, w), run);
        }
    }
    Measured {
        query: query.clone(),
        states,
        oracle,
        global: global.verdict,
        configurations: global.configurations,
        local,
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let (games, mut checks) = (60, 0);
    for i in 0..games {
        let states = rng.gen_range(2..=6);
        let g = random_game(&mut rng, states, 2, 3, 2);
        for shape in SHAPES {
            let phi = random_formula_with_root(&mut rng, shape, 3, 2, 2);
            let truth = holds_initially(&g, &phi).unwrap();
            let global = check_global(&g, &phi).unwrap().verdict;
            ensure(global == truth, || format!("game {i}: global disagrees on {phi:?}"))?;
            for s in Strategy::ALL {
                for w in [1, 4] {
                    let local = check_local(&g, &phi, s, w).unwrap().verdict;
                    ensure(local == truth, || format!("game {i}: local {s} W={w} disagrees on {phi:?}"))?;
                    checks += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:.1?}"))?;
    Ok(format!("{games} games x {} shapes, {checks} local runs agree with the oracle in {elapsed:.1?}", SHAPES.len()))
}

fn criterion_2() -> Verdict {
    let model = include_str!("../../../models/standoff.lcgs");
    let formula = include_str!("../../../models/billy-can-stay-alive.atl");
    let mut slowest = Duration::ZERO;
    let mut runs = 0;
    let mut timed = |f: &dyn Fn() -> bool, what: String| -> Result<(), String> {
        let start = Instant::now();
        let verdict = f();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        runs += 1;
        ensure(!verdict, || format!("{what} says billy survives"))?;
        ensure(elapsed < Duration::from_secs(5), || format!("{what} took {elapsed:.1?}"))
    };
    timed(
        &|| {
            let g = compile(model).unwrap();
            check_global(&g, &parse_formula(formula, &g).unwrap()).unwrap().verdict
        },
        "global".into(),
    )?;
    for s in Strategy::ALL {
        for w in WORKERS {
            timed(
                &|| {
                    let g = compile(model).unwrap();
                    check_local(&g, &parse_formula(formula, &g).unwrap(), s, w).unwrap().verdict
                },
                format!("local {s} W={w}"),
            )?;
        }
    }
    Ok(format!("false in all {runs} combinations, slowest {slowest:.2?}"))
}

fn criterion_3(suite: &[Measured]) -> Verdict {
    let mut by_oracle = 0;
    for m in suite {
        let name = &m.query.name;
        let truth = m.oracle.unwrap_or(m.global);
        by_oracle += m.oracle.is_some() as usize;
        ensure(m.global == truth, || format!("{name}: global {} vs oracle {truth}", m.global))?;
        for (&(s, w), run) in &m.local {
            let run = run.as_ref().ok_or_else(|| format!("{name}: {s} W={w} timed out"))?;
            ensure(run.verdict == truth, || format!("{name}: {s} W={w} says {}", run.verdict))?;
        }
    }
    let table: Vec<String> = suite
        .iter()
        .map(|m| format!("{}={}", m.query.name, if m.global { "T" } else { "F" }))
        .collect();
    Ok(format!(
        "{} queries, {by_oracle} fixed by the oracle, all engines agree: {}",
        suite.len(),
        table.join(" ")
    ))
}

fn criterion_4() -> Verdict {
    let lc = LinearConstraints::new(vec![vec![-1.0, 1.0], vec![0.5, 1.0]], vec![1.0, 7.0]);
    let sol = lp_solve(&lc, &[7.0, 1.0], &[]).ok_or("no solution")?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-6;
    ensure(
        close(sol.value, 7.0) && close(sol.point[0], 4.0) && close(sol.point[1], 5.0),
        || format!("got {} at {:?}", sol.value, sol.point),
    )?;
    Ok(format!("optimum {} at ({}, {})", sol.value, sol.point[0], sol.point[1]))
}

fn criterion_5() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let n = 100_000;
    for _ in 0..n {
        let mut draw = || -> (i64, i64) {
            // true distances are non-negative, false distances non-positive
            (rng.gen_range(0..1_000_000), -rng.gen_range(0..1_000_000))
        };
        let ((t1, f1), (t2, f2)) = (draw(), draw());
        let (a, b) = (BiDist::new(t1, f1), BiDist::new(t2, f2));
        let meet = a.meet(b);
        let join = a.join(b);
        ensure(meet == BiDist::new(t1 + t2, f1.min(f2)), || format!("{a:?} meet {b:?} = {meet:?}"))?;
        ensure(join == BiDist::new(t1.min(t2), f1 + f2), || format!("{a:?} join {b:?} = {join:?}"))?;
    }
    let x = |op, k| Expr::binary(op, Expr::Var(0), Expr::Const(k));
    let ex1 = bidist_expr(&x(BinaryOp::Lt, 5), &[9]);
    let ex2 = bidist_expr(&x(BinaryOp::Gt, 0), &[2]);
    let ex3 = bidist_expr(&Expr::not(x(BinaryOp::Lt, 5)), &[9]);
    ensure(ex1 == BiDist::new(4, 0), || format!("x<5 at 9 gave {ex1:?}"))?;
    ensure(ex2 == BiDist::new(0, -2), || format!("x>0 at 2 gave {ex2:?}"))?;
    ensure(ex3 == BiDist::new(0, 4), || format!("!(x<5) at 9 gave {ex3:?}"))?;
    let (a, b) = (ConfigId(1), ConfigId(2));
    let dist = |c: ConfigId| if c == a { ex1 } else { ex2 };
    let hyper = Edge::Hyper {
        source: ConfigId(0),
        targets: vec![a, b],
        pmove: None,
    };
    let neg = Edge::Negation {
        source: ConfigId(0),
        target: b,
    };
    ensure(ihs_dist(&hyper, dist) == 4, || "hyper-edge distance".into())?;
    ensure(ihs_dist(&neg, dist) == -2, || "negation edge distance".into())?;
    Ok(format!("{n} random pairs, examples <4,0> <0,-2> <0,4>, edge distances 4 and -2"))
}

fn criterion_6(suite: &[Measured]) -> Verdict {
    let mut runs = 0;
    let mut downward = 0;
    for m in suite {
        for run in m.local.values().flatten() {
            runs += 1;
            downward += run.downward;
        }
    }
    ensure(downward == 0, || format!("{downward} downward transitions"))?;
    Ok(format!("0 downward transitions over {runs} instrumented runs"))
}

fn criterion_7(suite: &[Measured]) -> Verdict {
    let n = 50_000;
    let g = compile(&models::shortcut_line(n)).unwrap();
    let phi = parse_formula(models::SHORTCUT_QUERY, &g).unwrap();
    let global = check_global(&g, &phi).unwrap();
    ensure(global.verdict && global.configurations >= 100_000, || {
        format!("chain has {} configurations", global.configurations)
    })?;
    let local = check_local(&g, &phi, Strategy::Dfs, 1).unwrap();
    ensure(local.verdict, || "dfs does not certify the chain".into())?;
    let share = local.stats.explored as f64 / global.configurations as f64;
    ensure(share < 0.01, || format!("dfs explored {} of {}", local.stats.explored, global.configurations))?;

    let mut early = Vec::new();
    for m in suite.iter().filter(|m| m.global) {
        let run = m.local[&(Strategy::Dfs, 1)].as_ref().ok_or("timed out")?;
        ensure(run.explored < m.configurations, || {
            format!("{}: dfs explored {} of {}", m.query.name, run.explored, m.configurations)
        })?;
        early.push(format!("{} {}/{}", m.query.name, run.explored, m.configurations));
    }
    Ok(format!(
        "chain: dfs explored {} of {} ({:.4}%); satisfied suite queries under dfs: {}",
        local.stats.explored,
        global.configurations,
        share * 100.0,
        early.join(", ")
    ))
}

fn criterion_8(suite: &[Measured]) -> Verdict {
    let mut slowest = Duration::ZERO;
    for m in suite {
        for s in Strategy::ALL {
            let lines: Vec<String> = WORKERS
                .iter()
                .map(|&w| {
                    m.local[&(s, w)]
                        .as_ref()
                        .map(|r| {
                            slowest = slowest.max(r.elapsed);
                            format!("Result: {}", r.verdict)
                        })
                        .ok_or_else(|| format!("{} {s} W={w} hit the {WATCHDOG:?} watchdog", m.query.name))
                })
                .collect::<Result<_, _>>()?;
            ensure(lines.iter().all(|l| *l == lines[0]), || format!("{} {s}: {lines:?}", m.query.name))?;
        }
    }
    Ok(format!("identical Result lines for W in {WORKERS:?}, slowest run {slowest:.2?}"))
}

fn criterion_9(suite: &[Measured]) -> Verdict {
    let mut replayed = 0;
    let mut queries = Vec::new();
    for m in suite {
        let small = m.states.is_some_and(|n| n <= ORACLE_STATES);
        if !m.global || !small {
            continue;
        }
        let g = compile(&m.query.model).unwrap();
        let phi = parse_formula(&m.query.formula, &g).unwrap();
        if !matches!(phi, Phi::EnforceNext(..) | Phi::EnforceUntil(..) | Phi::EnforceEventually(..)) {
            continue;
        }
        queries.push(m.query.name.clone());
        for s in Strategy::ALL {
            for w in [1, 4] {
                let opts = LocalOptions {
                    strategy: s,
                    workers: w,
                    witness: true,
                };
                let out = check_local_with(&g, &phi, &opts).unwrap();
                let witness = out
                    .witness
                    .ok_or("no witness requested")?
                    .map_err(|e| format!("{} {s} W={w}: {e}", m.query.name))?;
                ensure(replay_satisfies(&g, &witness.to_profile(), &phi).unwrap(), || {
                    format!("{} {s} W={w}: witness replay fails", m.query.name)
                })?;
                replayed += 1;
            }
        }
    }
    ensure(replayed > 0, || "no satisfied enforce query to replay".into())?;
    Ok(format!("{replayed} witnesses replayed on {}", queries.join(", ")))
}

fn criterion_10(suite: &[Measured]) -> Verdict {
    let dir = std::env::temp_dir().join(format!("gamecheck-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| -> Result<PathBuf, String> {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(|e| e.to_string())?;
        Ok(p)
    };
    let mut table = vec![format!("  {:<10} {:>8} {}", "query", "|C|", Strategy::ALL.map(|s| format!("{s:>8}")).join(""))];
    for (i, m) in suite.iter().enumerate() {
        let model = write(&format!("q{i}.lcgs"), &m.query.model)?;
        let formula = write(&format!("q{i}.atl"), &m.query.formula)?;
        let mut row = format!("  {:<10} {:>8}", m.query.name, m.configurations);
        for s in Strategy::ALL {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let args = [
                "gamecheck".to_string(),
                "solver".into(),
                "-m".into(),
                model.display().to_string(),
                "-f".into(),
                formula.display().to_string(),
                "--strategy".into(),
                s.to_string(),
                "--stats".into(),
            ];
            let code = gamecheck_cli::run(args, &mut out, &mut err);
            let out = String::from_utf8(out).unwrap();
            ensure(code == 0, || format!("{} {s}: exit {code}: {}", m.query.name, String::from_utf8_lossy(&err)))?;
            let mut lines = out.lines();
            ensure(lines.next() == Some(&format!("Result: {}", m.global)), || format!("{} {s}: {out}", m.query.name))?;
            let stats: BTreeMap<&str, &str> = lines.filter_map(|l| l.split_once('=')).collect();
            for key in ["explored", "edges", "messages", "release_rounds", "downward_transitions", "time_ms"] {
                ensure(stats.contains_key(key), || format!("{} {s}: no {key} in --stats", m.query.name))?;
            }
            row += &format!("{:>8}", stats["explored"]);
        }
        table.push(row);
    }
    let _ = std::fs::remove_dir_all(&dir);
    println!("  explored configurations per strategy (W=1, from --stats):");
    for line in table {
        println!("{line}");
    }
    Ok(format!("--stats report produced for {} queries x {} strategies", suite.len(), Strategy::ALL.len()))
}

fn report(n: usize, title: &str, f: impl FnOnce() -> Verdict, failures: &mut usize) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    match result {
        Ok(detail) => println!("PASS {n:>2} {title}: {detail} [{elapsed:.1?}]"),
        Err(detail) => {
            *failures += 1;
            println!("FAIL {n:>2} {title}: {detail} [{elapsed:.1?}]");
        }
    }
}

fn main() {
    let mut failures = 0;
    println!("acceptance suite");
    report(1, "random games: engines agree with the oracle", criterion_1, &mut failures);
    report(2, "standoff: billy cannot guarantee survival", criterion_2, &mut failures);
    let start = Instant::now();
    let suite: Vec<Measured> = models::suite().iter().map(measure).collect();
    println!("  measured {} suite queries in {:.1?}", suite.len(), start.elapsed());
    report(3, "query families agree across engines", || criterion_3(&suite), &mut failures);
    report(4, "LP distance example", criterion_4, &mut failures);
    report(5, "BiDist algebra", criterion_5, &mut failures);
    report(6, "lattice monotonicity", || criterion_6(&suite), &mut failures);
    report(7, "early termination", || criterion_7(&suite), &mut failures);
    report(8, "determinism across worker counts", || criterion_8(&suite), &mut failures);
    report(9, "witness replay", || criterion_9(&suite), &mut failures);
    report(10, "strategy comparison report", || criterion_10(&suite), &mut failures);
    println!("{} of 10 criteria passed", 10 - failures);
    std::process::exit(if failures == 0 { 0 } else { 1 });
}
